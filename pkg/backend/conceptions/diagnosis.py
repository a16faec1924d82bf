"""Módulo de diagnóstico: explica traços de comportamento com as concepções do registro"""

# cSpell: words traço

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import pandas as pd

from .conception import Conception, apply_operator, assess
from .exceptions import TraceValidationError
from .languages import conforms
from .serializers import TraceSerializer, flatten_errors
from .solver import SolveResult
from .terms import Position, Term, format_position
from .utils import Scope, Verdict, ckc_setting

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceEvent:
    """Evento observado: estado antes, estado depois e avaliação opcional do meio"""

    before: Term
    after: Term
    assessment: Verdict | None = None


@dataclass(frozen=True)
class Trace:
    events: tuple[TraceEvent, ...]


@dataclass(frozen=True)
class EventExplanation:
    event: int
    operator: str
    position: Position
    control: str | None = None


@dataclass(frozen=True)
class ConceptionScore:
    conception: str
    explained: int
    total: int
    explanations: tuple[EventExplanation, ...] = ()

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.explained, self.total)


@dataclass
class DiagnosisReport:
    """
    Relatório de diagnóstico.

    table: DataFrame com rank, conception, explained, total, coverage ("2/3") e
    coverage_ratio (float), ordenado por cobertura decrescente e depois por id.
    """

    table: pd.DataFrame
    scores: dict[str, ConceptionScore]

    def ranking(self) -> list[str]:
        return self.table["conception"].tolist()

    def coverage(self, conception_id: str) -> Fraction:
        return self.scores[conception_id].coverage

    def to_records(self) -> list[dict]:
        records = []
        for row in self.table.to_dict(orient="records"):
            score = self.scores[row["conception"]]
            records.append(
                {
                    "rank": int(row["rank"]),
                    "conception": row["conception"],
                    "explained": int(row["explained"]),
                    "total": int(row["total"]),
                    "coverage": row["coverage"],
                    "coverage_ratio": float(row["coverage_ratio"]),
                    "explanations": [
                        {
                            "event": item.event,
                            "operator": item.operator,
                            "position": format_position(item.position),
                            "control": item.control,
                        }
                        for item in score.explanations
                    ],
                }
            )
        return records


def explain_step(candidates, before: Term, after: Term) -> list[tuple[str, str, Position]]:
    """Todos os (concepção, operador, posição) cujo apply_operator leva before a after."""
    found = []
    for conception in candidates:
        for operator in conception.operators:
            for position, result in apply_operator(operator, before):
                if result == after:
                    found.append((conception.id, operator.id, position))
    return found


def _score(conception: Conception, trace: Trace) -> ConceptionScore:
    explanations = []
    for index, event in enumerate(trace.events):
        matches = explain_step([conception], event.before, event.after)
        if not matches:
            continue
        control = None
        if event.assessment is not None:
            scope = Scope.SOLUTION if event.assessment is Verdict.SOLVED else Scope.STEP
            verdict, control = assess(conception.controls, event.after, scope)
            if verdict is not event.assessment:
                continue
        _, operator_id, position = matches[0]
        explanations.append(EventExplanation(index, operator_id, position, control))
    return ConceptionScore(
        conception=conception.id,
        explained=len(explanations),
        total=len(trace.events),
        explanations=tuple(explanations),
    )


def _check_languages(registry, trace: Trace) -> None:
    """Todo estado do traço precisa ser um termo de alguma linguagem do registro."""
    languages = list(registry.languages.values())
    errors = [
        (f"events[{index}].{side}", f"{term} does not conform to any registry language")
        for index, event in enumerate(trace.events)
        for side, term in (("before", event.before), ("after", event.after))
        if not any(conforms(language, term) for language in languages)
    ]
    if errors:
        raise TraceValidationError(errors)


def diagnose(registry, trace: Trace, workers: int | None = None) -> DiagnosisReport:
    """
    Pontua todas as concepções do registro contra o traço.

    Parâmetros:
    registry (Registry): registro com as concepções candidatas.
    trace (Trace): traço não vazio.

    Retorna:
    DiagnosisReport: cobertura exata (eventos explicados / total) por concepção.

    Etapas:
    1. Cada evento é explicado por C se algum operador de C produz `after` a partir de `before`.
    2. Havendo avaliação observada, o Σ de C precisa emitir o mesmo veredicto sobre `after`
       (escopo de solução para "solved", escopo de passo para os demais).
    3. Ordena por cobertura decrescente e depois pelo id da concepção.

    Estados que não pertencem a nenhuma linguagem do registro levantam TraceValidationError.
    """
    if not trace.events:
        raise TraceValidationError([("events", "trace is empty")])
    _check_languages(registry, trace)

    conceptions = list(registry.conceptions.values())
    with ThreadPoolExecutor(max_workers=workers or ckc_setting("GRAPH_WORKERS")) as executor:
        scores = list(executor.map(lambda conception: _score(conception, trace), conceptions))

    df = pd.DataFrame(
        {
            "conception": [score.conception for score in scores],
            "explained": [score.explained for score in scores],
            "total": [score.total for score in scores],
            "coverage": [str(score.coverage) for score in scores],
            "coverage_ratio": [float(score.coverage) for score in scores],
        }
    )
    # Mesmo total para todos: ordenar por explicados equivale a ordenar pela cobertura
    df = df.sort_values(by=["explained", "conception"], ascending=[False, True])
    df = df.reset_index(drop=True)
    df.insert(0, "rank", range(1, len(df) + 1))

    logger.debug("Diagnóstico de %d evento(s): %s", len(trace.events), df.conception.tolist())
    return DiagnosisReport(table=df, scores={score.conception: score for score in scores})


# ================================================================================================ #
#                                               TRAÇOS                                             #
# ================================================================================================ #
def trace_from_result(result: SolveResult) -> Trace:
    """Sintetiza o traço que a testemunha de uma busca resolvida produziria."""
    events = []
    for index, step in enumerate(result.steps):
        assessment = None
        if result.solved and index == len(result.steps) - 1:
            assessment = Verdict.SOLVED
        elif step.step_verdicts:
            assessment = step.step_verdicts[0][1]
        events.append(TraceEvent(step.before, step.after, assessment))
    return Trace(tuple(events))


def parse_trace(data) -> Trace:
    """Valida um traço já decodificado (objeto com `events` ou lista de eventos)."""
    serializer = TraceSerializer(data=data)
    if not serializer.is_valid():
        raise TraceValidationError(flatten_errors(serializer.errors))
    events = tuple(
        TraceEvent(
            before=event["before"],
            after=event["after"],
            assessment=Verdict(event["assessment"]) if event["assessment"] else None,
        )
        for event in serializer.validated_data["events"]
    )
    return Trace(events)


def load_trace(path: str | Path) -> Trace:
    """Lê um arquivo de traço JSON."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise TraceValidationError([(str(path), "file not found")]) from e
    except json.JSONDecodeError as e:
        raise TraceValidationError([(f"{path}:{e.lineno}:{e.colno}", e.msg)]) from e
    return parse_trace(data)
