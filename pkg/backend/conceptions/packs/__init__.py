"""
Pacotes embutidos (adição, frações, triângulo) e reprodução das fixtures
declaradas em cada pacote.
"""

# cSpell: words fixtures

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

from ..exceptions import CkcError
from ..learning_graph import build_graph, plan_path
from ..registry import BUILTIN_PREFIX, Registry, load_pack
from ..relations import falsity, more_general, resolve_translation, same_object
from ..solver import Budget, solves
from ..terms import format_term, parse_term
from .egyptian import egypt_decompose, greedy_steps, units_from_term

logger = logging.getLogger(__name__)

BUILTIN = ("addition", "fractions", "triangle")

__all__ = [
    "BUILTIN",
    "PackManifest",
    "builtin_packs",
    "check_fixtures",
    "egypt_decompose",
    "greedy_steps",
    "load_builtin",
    "manifest",
    "units_from_term",
]


@dataclass(frozen=True)
class PackManifest:
    """Resumo de um pacote carregado"""

    id: str
    source: str
    description: str
    languages: tuple[str, ...]
    translations: tuple[str, ...]
    conceptions: tuple[str, ...]
    problems: tuple[str, ...]
    c_mu: str | None
    fixtures: tuple[str, ...] = field(default=())


@lru_cache(maxsize=None)
def load_builtin(name: str) -> Registry:
    """Carrega (uma vez por processo) um pacote embutido pelo nome."""
    return load_pack(f"{BUILTIN_PREFIX}{name}")


def manifest(registry: Registry, source: str) -> PackManifest:
    """Manifesto de um registro de pacote único."""
    pack_id = registry.packs[0]
    return PackManifest(
        id=pack_id,
        source=source,
        description=registry.descriptions.get(pack_id, ""),
        languages=tuple(registry.languages),
        translations=tuple(registry.translations),
        conceptions=tuple(registry.conceptions),
        problems=tuple(registry.problems),
        c_mu=registry.c_mu[0] if registry.c_mu else None,
        fixtures=tuple(sorted(registry.fixtures.get(pack_id, {}))),
    )


def builtin_packs() -> list[PackManifest]:
    return [manifest(load_builtin(name), f"{BUILTIN_PREFIX}{name}") for name in BUILTIN]


# ================================================================================================ #
#                                              FIXTURES                                            #
# ================================================================================================ #
def _fixture_solves(registry: Registry, item: dict, budget: Budget) -> list[str]:
    conceptions = [registry.conception(cid) for cid in item["conceptions"]]
    if "problem" in item:
        label, term = item["problem"], registry.problem(item["problem"]).term
    else:
        label, term = item["term"], parse_term(item["term"])
    result = solves(conceptions, term, budget)
    where = f"solves {','.join(item['conceptions'])} {label}"
    mismatches = []
    if result.status.value != item["status"]:
        mismatches.append(f"{where}: status {result.status.value}, expected {item['status']}")
    if "final" in item and result.final_term is not None:
        if format_term(result.final_term) != format_term(parse_term(item["final"])):
            mismatches.append(f"{where}: final {result.final_term}, expected {item['final']}")
    if "witness_length" in item and len(result.witness) != item["witness_length"]:
        mismatches.append(
            f"{where}: witness of {len(result.witness)}, expected {item['witness_length']}"
        )
    return mismatches


def _fixture_relation(registry: Registry, kind: str, item: dict) -> list[str]:
    if kind == "generality":
        report = more_general(
            registry.conception(item["general"]),
            registry.conception(item["specific"]),
            resolve_translation(registry, item["translation"]),
        )
        where = f"generality {item['general']} > {item['specific']}"
    elif kind == "falsity":
        report = falsity(
            registry.conception(item["conception"]),
            registry.conception(item["other"]),
            resolve_translation(registry, item["translation"]),
        )
        where = f"falsity {item['conception']} from {item['other']}"
    else:
        first, second = item["conceptions"]
        translation, translation_prime = item["translations"]
        report = same_object(
            registry.conception(first),
            registry.conception(second),
            registry.conception(item["reference"]),
            resolve_translation(registry, translation),
            resolve_translation(registry, translation_prime),
        )
        where = f"same-object {first} ~ {second}"
    if report.holds != item["holds"]:
        return [f"{where}: holds={report.holds}, expected {item['holds']}"]
    return []


def _fixture_graph(registry: Registry, fixtures: dict, budget: Budget) -> list[str]:
    graph = build_graph(registry, budget)
    mismatches = []
    for conception_id, problem_id in fixtures.get("graph", {}).get("solves", []):
        if graph.solves_edge(conception_id, problem_id) is None:
            mismatches.append(f"graph: missing solves {conception_id} -> {problem_id}")
    for problem_id, conception_id in fixtures.get("graph", {}).get("destabilizes", []):
        if graph.destabilizes_edge(problem_id, conception_id) is None:
            mismatches.append(f"graph: missing destabilizes {problem_id} -> {conception_id}")
    for item in fixtures.get("paths", []):
        path = plan_path(item["from"], item["to"], graph)
        nodes = list(path.nodes) if path else None
        if nodes != item["path"]:
            where = f"path {item['from']} -> {item['to']}"
            mismatches.append(f"{where}: {nodes}, expected {item['path']}")
    return mismatches


def check_fixtures(registry: Registry, budget: Budget | None = None) -> list[str]:
    """
    Reexecuta as fixtures de todos os pacotes do registro e devolve as
    divergências em texto. Lista vazia significa que o pacote se comporta como
    declarado.
    """
    budget = budget or Budget.from_settings()
    mismatches = []
    for pack_id, fixtures in registry.fixtures.items():
        found = []
        try:
            for item in fixtures.get("solves", []):
                found += _fixture_solves(registry, item, budget)
            for kind in ("generality", "falsity", "same_object"):
                for item in fixtures.get(kind, []):
                    found += _fixture_relation(registry, kind, item)
            if "graph" in fixtures or "paths" in fixtures:
                found += _fixture_graph(registry, fixtures, budget)
        except (CkcError, KeyError, ValueError) as e:
            found.append(f"fixture error: {e}")
        mismatches += [f"{pack_id}: {line}" for line in found]
        logger.info("Fixtures do pacote %s: %d divergência(s)", pack_id, len(found))
    return mismatches
