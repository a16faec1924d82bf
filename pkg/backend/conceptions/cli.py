"""
Módulo da linha de comando: `python manage.py ckc <subcomando> [opções]`.

run(argv) executa um subcomando e devolve um CommandResult; só esta camada
converte exceções do motor em códigos de saída.
"""

# cSpell: words subcomando

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from django.core.exceptions import ImproperlyConfigured
from django.core.management.base import CommandError, CommandParser
from django.utils import timezone

from .diagnosis import diagnose, load_trace
from .exceptions import (
    BudgetError,
    CkcError,
    KnowingError,
    LanguageMismatchError,
    PackValidationError,
    TermSyntaxError,
    UnknownIdError,
)
from .learning_graph import build_graph, conflict_problems, plan_path, to_dot, to_json
from .packs import builtin_packs, check_fixtures, manifest
from .registry import load_pack, load_packs, merge_registries
from .relations import (
    concept_partition,
    define_knowing,
    falsity,
    more_general,
    resolve_translation,
    same_object,
)
from .serializers import (
    ConceptClassSerializer,
    DestabilizationSerializer,
    LearningPathSerializer,
    PackManifestSerializer,
    RelationReportSerializer,
    SolveResultSerializer,
)
from .solver import Budget, solves
from .terms import parse_term
from .utils import EXIT_NOT_HOLDS, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, RelationKind

logger = logging.getLogger(__name__)

FORMATS = ("text", "json", "dot")


@dataclass
class CommandResult:
    """Código de saída, relatório legível (stdout), erro (stderr) e relatório estruturado"""

    exit_code: int
    text: str = ""
    error: str = ""
    report: dict | None = field(default=None)


class UsageError(CkcError):
    """Combinação de opções inválida"""


# ================================================================================================ #
#                                               PARSER                                             #
# ================================================================================================ #
def _common(parser) -> None:
    parser.add_argument(
        "--pack", action="append", default=[], help="arquivo .ckc ou builtin:nome (repetível)"
    )
    parser.add_argument("--budget-depth", type=int, default=None)
    parser.add_argument("--budget-states", type=int, default=None)
    parser.add_argument("--out", default=None, help="arquivo para o relatório estruturado")
    parser.add_argument("--format", choices=FORMATS, default="text")
    parser.add_argument("--timestamps", action="store_true")


def build_parser() -> CommandParser:
    """Parser que levanta CommandError em vez de encerrar o processo."""
    parser = CommandParser(prog="ckc", called_from_command_line=False)
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="valida pacotes")
    validate.add_argument("--fixtures", action="store_true", help="reexecuta as fixtures")

    solve = commands.add_parser("solve", help="busca uma solução")
    solve.add_argument("--conceptions", required=True, help="ids separados por vírgula")
    target = solve.add_mutually_exclusive_group(required=True)
    target.add_argument("--problem")
    target.add_argument("--term")

    relate = commands.add_parser("relate", help="verifica uma relação entre concepções")
    relate.add_argument("--kind", required=True, choices=[kind.value for kind in RelationKind])
    relate.add_argument("--from", dest="source", required=True)
    relate.add_argument("--to", dest="target", required=True)
    relate.add_argument("--via", default=None, help="concepção de referência (same-object)")
    relate.add_argument("--translation", default=None)
    relate.add_argument("--translation2", default=None)
    relate.add_argument("--depth", type=int, default=None, help="profundidade da falsidade")

    commands.add_parser("graph", help="exporta o grafo de aprendizagem")

    plan = commands.add_parser("plan", help="planeja um caminho de aprendizagem")
    plan.add_argument("--from", dest="source", required=True)
    plan.add_argument("--to", dest="target", required=True)

    trace = commands.add_parser("diagnose", help="diagnostica um traço")
    trace.add_argument("--trace", required=True)

    commands.add_parser("packs", help="lista os pacotes embutidos")

    concepts = commands.add_parser("concepts", help="partição em conceitos")
    concepts.add_argument("--knowing", default=None, help="ids separados por vírgula")
    concepts.add_argument("--label", default="knowing")
    concepts.add_argument("--subject", default="subject")

    for subparser in commands.choices.values():
        _common(subparser)
    return parser


# ================================================================================================ #
#                                            SUBCOMANDOS                                           #
# ================================================================================================ #
def _split(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _registry(options):
    if not options.pack:
        raise UsageError("at least one --pack is required")
    return load_packs(options.pack)


def _budget(options) -> Budget:
    return Budget.from_settings(options.budget_depth, options.budget_states)


def _validate(options):
    if not options.pack:
        raise UsageError("at least one --pack is required")
    registries = [load_pack(source) for source in options.pack]
    manifests = [manifest(item, source) for item, source in zip(registries, options.pack)]
    registry = merge_registries(registries)
    mismatches = check_fixtures(registry, _budget(options)) if options.fixtures else []
    lines = [
        f"{item.id}: ok ({len(item.languages)} languages, {len(item.translations)} translations, "
        f"{len(item.conceptions)} conceptions, {len(item.problems)} problems)"
        for item in manifests
    ]
    lines += [f"fixture mismatch: {line}" for line in mismatches]
    result = {"packs": PackManifestSerializer(manifests, many=True).data}
    evidence = {"fixtures_checked": options.fixtures, "mismatches": mismatches}
    return (EXIT_NOT_HOLDS if mismatches else EXIT_OK), lines, result, evidence


def _solve(options):
    registry = _registry(options)
    conceptions = [registry.conception(cid) for cid in _split(options.conceptions)]
    if not conceptions:
        raise UsageError("--conceptions needs at least one id")
    term = registry.problem(options.problem).term if options.problem else parse_term(options.term)
    result = solves(conceptions, term, _budget(options))
    lines = [f"status: {result.status.value}"]
    for record in result.steps:
        conception_id, operator_id, _ = record.tag
        lines.append(f"  {conception_id}/{operator_id}: {record.before} -> {record.after}")
    if result.solved:
        lines.append(f"final: {result.final_term} ({result.solved_by}/{result.final_control})")
    lines.append(f"states explored: {result.states_explored}, pruned: {result.pruned}")
    data = SolveResultSerializer(result).data
    evidence = {"witness": data["witness"], "steps": data["steps"]}
    return (EXIT_OK if result.solved else EXIT_NOT_HOLDS), lines, data, evidence


def _translation(registry, translation_id, source, target):
    if translation_id:
        return resolve_translation(registry, translation_id)
    translation = registry.translation_between(source, target)
    if translation is None:
        raise UsageError(f"no translation from {source} to {target}; pass --translation")
    return translation


def _relate(options):
    registry = _registry(options)
    first, second = registry.conception(options.source), registry.conception(options.target)
    kind = RelationKind(options.kind)
    if kind is RelationKind.GENERALITY:
        translation = _translation(registry, options.translation, second.language, first.language)
        report = more_general(first, second, translation)
    elif kind is RelationKind.FALSITY:
        translation = _translation(registry, options.translation, first.language, second.language)
        report = falsity(first, second, translation, options.depth)
    else:
        if not options.via:
            raise UsageError("same-object needs --via <reference conception>")
        reference = registry.conception(options.via)
        report = same_object(
            first,
            second,
            reference,
            _translation(registry, options.translation, first.language, reference.language),
            _translation(registry, options.translation2, second.language, reference.language),
        )
    verdict = "holds" if report.holds else "does not hold"
    lines = [f"{kind.value}({', '.join(report.conceptions)}): {verdict}"]
    lines.append(f"translations: {', '.join(report.translations)}")
    lines += [f"  {key}: {value}" for key, value in sorted(report.evidence.items())]
    data = RelationReportSerializer(report).data
    return (EXIT_OK if report.holds else EXIT_NOT_HOLDS), lines, data, data["evidence"]


def _graph(options):
    registry = _registry(options)
    graph = build_graph(registry, _budget(options))
    exported = to_json(graph)
    if options.format == "dot":
        return EXIT_OK, [to_dot(graph).rstrip("\n")], exported, {}
    lines = [f"{kind.value}: {source} -> {target}" for kind, source, target, _ in graph.edges()]
    result = {"budget": exported["budget"], "nodes": exported["nodes"]}
    return EXIT_OK, lines, result, {"edges": exported["edges"]}


def _plan(options):
    registry = _registry(options)
    graph = build_graph(registry, _budget(options))
    path = plan_path(options.source, options.target, graph)
    if path is None:
        return EXIT_NOT_HOLDS, ["unreachable"], {"path": None}, {"edges": []}
    edges = []
    for index, problem_id in enumerate(path.problems):
        before, after = path.conceptions[index], path.conceptions[index + 1]
        destabilized = graph.destabilizes_edge(problem_id, before)
        solved = graph.solves_edge(after, problem_id)
        edges.append(
            {
                "problem": problem_id,
                "destabilizes": before,
                "destabilization": DestabilizationSerializer(destabilized["evidence"]).data,
                "solved_by": after,
                "solution": SolveResultSerializer(solved["result"]).data,
            }
        )
    source, target = registry.conception(options.source), registry.conception(options.target)
    conflicts = [
        item.problem for item in conflict_problems(source, target, registry, graph.budget)
    ]
    lines = [" -> ".join(path.nodes), f"length: {path.length}"]
    if conflicts:
        lines.append(f"conflict problems: {', '.join(conflicts)}")
    result = {"path": LearningPathSerializer(path).data, "conflicts": conflicts}
    return EXIT_OK, lines, result, {"edges": edges}


def _diagnose(options):
    registry = _registry(options)
    trace = load_trace(options.trace)
    report = diagnose(registry, trace)
    records = report.to_records()
    lines = [f"{row['rank']}. {row['conception']}: {row['coverage']}" for row in records]
    ranking = [
        {key: value for key, value in row.items() if key != "explanations"} for row in records
    ]
    evidence = {row["conception"]: row["explanations"] for row in records}
    return EXIT_OK, lines, {"events": len(trace.events), "ranking": ranking}, evidence


def _packs(_options):
    manifests = builtin_packs()
    lines = [f"{item.source}: {item.description}" for item in manifests]
    return EXIT_OK, lines, {"packs": PackManifestSerializer(manifests, many=True).data}, {}


def _concepts(options):
    registry = _registry(options)
    classes = concept_partition(registry)
    lines = []
    for concept in classes:
        anchor = concept.reference or "unrelated"
        lines.append(f"{concept.id} [{anchor}]: {', '.join(concept.members)}")
    result = {"classes": ConceptClassSerializer(classes, many=True).data}
    evidence = {}
    exit_code = EXIT_OK
    if options.knowing:
        try:
            knowing = define_knowing(
                registry, options.label, options.subject, _split(options.knowing)
            )
        except KnowingError as e:
            exit_code = EXIT_NOT_HOLDS
            lines.append(f"knowing rejected: {e}")
            evidence["knowing"] = {"accepted": False, "reason": str(e)}
        else:
            lines.append(f"knowing {knowing.label} of {knowing.subject} in {knowing.concept}")
            evidence["knowing"] = {
                "accepted": True,
                "label": knowing.label,
                "subject": knowing.subject,
                "members": list(knowing.members),
                "concept": knowing.concept,
            }
    return exit_code, lines, result, evidence


HANDLERS = {
    "validate": _validate,
    "solve": _solve,
    "relate": _relate,
    "graph": _graph,
    "plan": _plan,
    "diagnose": _diagnose,
    "packs": _packs,
    "concepts": _concepts,
}


# ================================================================================================ #
#                                              EXECUÇÃO                                            #
# ================================================================================================ #
def _inputs(options) -> dict:
    return {
        key: value
        for key, value in sorted(vars(options).items())
        if key not in ("command", "out", "format", "timestamps") and value not in (None, [], False)
    }


def _report(options, result, evidence) -> dict:
    report = {
        "command": options.command,
        "inputs": _inputs(options),
        "result": result,
        "evidence": evidence,
    }
    if options.timestamps:
        report["generated_at"] = timezone.now().isoformat()
    return report


def dumps(report: dict) -> str:
    """JSON estável: chaves ordenadas e indentação fixa."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _format_errors(error: PackValidationError) -> str:
    return "\n".join(f"{where}: {reason}" for where, reason in error.errors)


def run(argv: list[str]) -> CommandResult:
    """
    Executa um subcomando.

    Retorna:
    CommandResult: 0 quando a propriedade vale (ou o comando só lista), 1 quando
    não vale, 2 para erro de uso ou id desconhecido, 3 para pacote/traço inválido.
    """
    try:
        options = build_parser().parse_args(argv)
    except CommandError as e:
        return CommandResult(EXIT_USAGE, error=str(e))
    except SystemExit as e:
        # --help
        return CommandResult(EXIT_OK if not e.code else EXIT_USAGE)

    if options.format == "dot" and options.command != "graph":
        return CommandResult(EXIT_USAGE, error="--format dot is only available for graph")

    try:
        exit_code, lines, result, evidence = HANDLERS[options.command](options)
    except PackValidationError as e:
        logger.error("Validação falhou: %d erro(s)", len(e.errors))
        return CommandResult(EXIT_VALIDATION, error=_format_errors(e))
    except (UsageError, UnknownIdError, BudgetError, LanguageMismatchError, TermSyntaxError) as e:
        return CommandResult(EXIT_USAGE, error=str(e))
    except ImproperlyConfigured as e:
        logger.error("Configuração inválida: %s", e)
        return CommandResult(EXIT_USAGE, error=str(e))
    except CkcError as e:
        logger.error("Falha no comando %s: %s", options.command, e)
        return CommandResult(EXIT_VALIDATION, error=str(e))

    report = _report(options, result, evidence)
    if options.format == "json":
        text = dumps(report)
    else:
        text = "\n".join(lines) + "\n"
    if options.out:
        body = text if options.format == "dot" else dumps(report)
        Path(options.out).write_text(body, encoding="utf-8")
    return CommandResult(exit_code, text=text, report=report)

