"""
Módulo das relações entre concepções: generalidade, falsidade, mesmo objeto,
partição em conceitos e validação de conhecimentos ("knowing").

Toda relação é verificada relativamente a traduções declaradas; os relatórios
citam as traduções usadas e trazem evidência que pode ser reproduzida.
"""

# cSpell: words reprodutível

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from networkx.utils import UnionFind

from .conception import Conception, apply_operator, is_accepted, judge, membership
from .exceptions import BudgetError, KnowingError, TranslationError, UnknownIdError
from .languages import check_direction, compose, translate
from .terms import Term, format_position, format_term, parse_position, parse_term
from .utils import RelationKind, Verdict, ckc_setting

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelationReport:
    """Resultado de uma relação; evidence só contém valores serializáveis em JSON"""

    relation: RelationKind
    holds: bool
    conceptions: tuple[str, ...]
    evidence: dict = field(default_factory=dict)
    translations: tuple[str, ...] = ()


@dataclass(frozen=True)
class ConceptClass:
    id: str
    members: tuple[str, ...]
    reference: str | None
    translations: dict = field(default_factory=dict)
    unrelated: bool = False


@dataclass(frozen=True)
class Knowing:
    label: str
    subject: str
    members: tuple[str, ...]
    concept: str


def resolve_translation(registry, translation_id: str):
    """Tradução do registro, identidade implícita ou composição `f>g` de ambas."""
    try:
        return registry.translation(translation_id)
    except UnknownIdError:
        if ">" not in translation_id:
            raise
    parts = [registry.translation(part) for part in translation_id.split(">")]
    composed = parts[0]
    for part in parts[1:]:
        composed = compose(composed, part)
    return composed


# ================================================================================================ #
#                                            GENERALIDADE                                          #
# ================================================================================================ #
def more_general(conception: Conception, other: Conception, translation) -> RelationReport:
    """
    C é mais geral que C' (relativamente a f: L' -> L) quando todo protótipo de
    P' se traduz em um problema de P. Padrões de pertinência de P' não são
    comparados simbolicamente.
    """
    check_direction(translation, other.language, conception.language)

    def report(holds: bool, evidence: dict) -> RelationReport:
        return RelationReport(
            relation=RelationKind.GENERALITY,
            holds=holds,
            conceptions=(conception.id, other.id),
            evidence=evidence,
            translations=(translation.id,),
        )

    checked = []
    for prototype in other.problems.prototypes:
        try:
            image = translate(translation, prototype.term)
        except TranslationError as e:
            return report(
                False,
                {
                    "counterexample": prototype.name,
                    "term": format_term(prototype.term),
                    "reason": f"untranslatable: {e}",
                },
            )
        if not membership(conception.problems, image):
            return report(
                False,
                {
                    "counterexample": prototype.name,
                    "term": format_term(prototype.term),
                    "image": format_term(image),
                    "reason": f"{image} is not a problem of {conception.id}",
                },
            )
        checked.append({"prototype": prototype.name, "image": format_term(image)})
    return report(True, {"checked": checked})


# ================================================================================================ #
#                                              FALSIDADE                                           #
# ================================================================================================ #
def _candidates(conception: Conception, term: Term, depth: int) -> Iterator:
    """Sequências r(p) de 1 até depth operadores, em largura e ordem determinística."""
    queue = deque([((), term)])
    while queue:
        steps, current = queue.popleft()
        if len(steps) == depth:
            continue
        for operator in conception.operators:
            for position, result in apply_operator(operator, current):
                sequence = steps + ((operator.id, position),)
                yield sequence, result
                if judge(conception.controls, result)[0] is not Verdict.INVALID:
                    queue.append((sequence, result))


def falsity(
    conception: Conception,
    other: Conception,
    translation,
    depth: int | None = None,
) -> RelationReport:
    """
    C é falsa do ponto de vista de C' quando existe p em P e r em R com
    σ(r(p)) aceito em Σ e σ'(f(r(p))) = invalid em Σ'. Candidatos que não se
    traduzem são registrados e pulados.
    """
    check_direction(translation, conception.language, other.language)
    depth = ckc_setting("FALSITY_DEPTH") if depth is None else depth
    if depth < 0:
        raise BudgetError(f"falsity depth must be non-negative (depth={depth})")
    skipped, checked = [], 0
    for prototype in conception.problems.prototypes:
        for steps, result in _candidates(conception, prototype.term, depth):
            verdict, sigma = judge(conception.controls, result)
            if not is_accepted(verdict):
                continue
            checked += 1
            try:
                image = translate(translation, result)
            except TranslationError as e:
                logger.debug("falsity: candidato %s sem tradução (%s)", result, e)
                skipped.append({"result": format_term(result), "reason": str(e)})
                continue
            verdict_prime, sigma_prime = judge(other.controls, image)
            if verdict_prime is not Verdict.INVALID:
                continue
            evidence = {
                "prototype": prototype.name,
                "problem": format_term(prototype.term),
                "steps": [
                    {"operator": operator_id, "position": format_position(position)}
                    for operator_id, position in steps
                ],
                "result": format_term(result),
                "sigma": sigma,
                "sigma_verdict": verdict.value,
                "image": format_term(image),
                "sigma_prime": sigma_prime,
                "sigma_prime_verdict": verdict_prime.value,
                "skipped": skipped,
            }
            return RelationReport(
                RelationKind.FALSITY, True, (conception.id, other.id), evidence, (translation.id,)
            )
    return RelationReport(
        RelationKind.FALSITY,
        False,
        (conception.id, other.id),
        {"checked": checked, "depth": depth, "skipped": skipped},
        (translation.id,),
    )


def replay_falsity(report: RelationReport, registry) -> bool:
    """Reexecuta (p, r, σ, σ', f) da evidência e confere os veredictos valid/invalid."""
    if report.relation is not RelationKind.FALSITY or not report.holds:
        return False
    evidence = report.evidence
    conception, other = (registry.conception(cid) for cid in report.conceptions)
    translation = resolve_translation(registry, report.translations[0])
    term = parse_term(evidence["problem"])
    for step in evidence["steps"]:
        produced = dict(apply_operator(conception.operator(step["operator"]), term))
        position = parse_position(step["position"])
        if position not in produced:
            return False
        term = produced[position]
    if format_term(term) != evidence["result"]:
        return False
    if judge(conception.controls, term) != (Verdict(evidence["sigma_verdict"]), evidence["sigma"]):
        return False
    image = translate(translation, term)
    if format_term(image) != evidence["image"]:
        return False
    return judge(other.controls, image) == (Verdict.INVALID, evidence["sigma_prime"])


# ================================================================================================ #
#                                            MESMO OBJETO                                          #
# ================================================================================================ #
def _images(conception: Conception, translation) -> tuple[dict, list]:
    images, failures = {}, []
    for prototype in conception.problems.prototypes:
        try:
            images[translate(translation, prototype.term)] = prototype.name
        except TranslationError as e:
            failures.append(
                {"conception": conception.id, "prototype": prototype.name, "reason": str(e)}
            )
    return images, failures


def same_object(
    conception: Conception,
    other: Conception,
    reference: Conception,
    translation,
    translation_prime,
) -> RelationReport:
    """
    C e C' têm o mesmo objeto relativamente a C_a quando os protótipos
    traduzidos para L_a formam o mesmo conjunto, nos dois sentidos.
    """
    check_direction(translation, conception.language, reference.language)
    check_direction(translation_prime, other.language, reference.language)
    used = (translation.id, translation_prime.id)
    names = (conception.id, other.id, reference.id)

    images, failures = _images(conception, translation)
    images_prime, failures_prime = _images(other, translation_prime)
    if failures or failures_prime:
        evidence = {"untranslatable": failures + failures_prime}
        return RelationReport(RelationKind.SAME_OBJECT, False, names, evidence, used)
    sides = ((conception.id, images, images_prime), (other.id, images_prime, images))
    for side, mine, theirs in sides:
        for image, name in mine.items():
            if image not in theirs:
                evidence = {"unmatched": format_term(image), "prototype": name, "side": side}
                return RelationReport(RelationKind.SAME_OBJECT, False, names, evidence, used)
    evidence = {"object": sorted(format_term(image) for image in images)}
    return RelationReport(RelationKind.SAME_OBJECT, True, names, evidence, used)


# ================================================================================================ #
#                                       CONCEITOS E CONHECIMENTOS                                  #
# ================================================================================================ #
def _anchor(registry, conception: Conception):
    """Primeira referência alcançável por identidade ou tradução declarada."""
    for reference_id in registry.c_mu:
        reference = registry.conception(reference_id)
        translation = registry.translation_between(conception.language, reference.language)
        if translation is not None:
            return reference, translation
    return None, None


def concept_partition(registry, workers: int | None = None) -> list[ConceptClass]:
    """
    Particiona as concepções (exceto as de referência) por union-find sobre
    same_object em relação à sua referência. Concepções sem tradução para
    nenhuma referência ficam isoladas e marcadas como "unrelated".
    """
    members = [cid for cid in registry.conceptions if not registry.is_reference(cid)]
    anchors = {cid: _anchor(registry, registry.conception(cid)) for cid in members}

    pairs = [
        (first, second)
        for first, second in combinations(members, 2)
        if anchors[first][0] is not None
        and anchors[second][0] is not None
        and anchors[first][0].id == anchors[second][0].id
    ]

    def check(pair) -> RelationReport:
        first, second = pair
        reference, translation = anchors[first]
        return same_object(
            registry.conception(first),
            registry.conception(second),
            reference,
            translation,
            anchors[second][1],
        )

    with ThreadPoolExecutor(max_workers=workers or ckc_setting("GRAPH_WORKERS")) as executor:
        reports = list(executor.map(check, pairs))

    classes = UnionFind(members)
    for (first, second), report in zip(pairs, reports):
        if report.holds:
            classes.union(first, second)

    groups = sorted(sorted(group) for group in classes.to_sets())
    result = []
    for index, group in enumerate(groups, start=1):
        reference, _ = anchors[group[0]]
        result.append(
            ConceptClass(
                id=f"K{index}",
                members=tuple(group),
                reference=reference.id if reference else None,
                translations={cid: anchors[cid][1].id for cid in group if anchors[cid][1]},
                unrelated=reference is None,
            )
        )
    logger.debug("Partição em %d conceito(s)", len(result))
    return result


def define_knowing(registry, label: str, subject: str, members) -> Knowing:
    """Um conhecimento é um subconjunto de um único conceito."""
    members = tuple(sorted(set(members)))
    if not members:
        raise KnowingError("a knowing needs at least one conception")
    for member in members:
        registry.conception(member)
        if registry.is_reference(member):
            raise KnowingError(f"{member} is a reference conception, not part of a concept")
    owners = {}
    for concept in concept_partition(registry):
        for member in concept.members:
            owners[member] = concept.id
    straddled = sorted({owners[member] for member in members})
    if len(straddled) > 1:
        raise KnowingError(
            f"knowing straddles {len(straddled)} concept classes: {', '.join(straddled)}"
        )
    return Knowing(label=label, subject=subject, members=members, concept=straddled[0])
