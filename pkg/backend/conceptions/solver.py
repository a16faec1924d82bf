"""
Módulo do predicado "resolve": busca em largura, limitada e determinística, por uma
sequência de operadores de um conjunto de concepções que termine em `solved`.

Também expõe a reprodução de testemunhas e um enumerador exaustivo de sequências,
usado como oráculo independente da busca.
"""

# cSpell: words memoização

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .conception import Conception, apply_operator, assess
from .exceptions import BudgetError, ReplayError, UnknownIdError
from .matching import eval_pred, instantiate, match_pattern
from .terms import Position, Term, format_position, replace_at, subterms
from .utils import Scope, SolveStatus, Verdict, ckc_setting

logger = logging.getLogger(__name__)

# (concepção, operador, posição): um passo r_i da sequência
Step = tuple[str, str, Position]


@dataclass(frozen=True)
class Budget:
    """Limites da busca; ambos positivos"""

    max_depth: int = 12
    max_states: int = 100000

    def __post_init__(self) -> None:
        if self.max_depth <= 0 or self.max_states <= 0:
            raise BudgetError(
                f"budget must be positive (depth={self.max_depth}, states={self.max_states})"
            )

    @classmethod
    def from_settings(cls, max_depth: int | None = None, max_states: int | None = None) -> Budget:
        return cls(
            max_depth=ckc_setting("BUDGET_DEPTH") if max_depth is None else max_depth,
            max_states=ckc_setting("BUDGET_STATES") if max_states is None else max_states,
        )


@dataclass(frozen=True)
class StepRecord:
    before: Term
    after: Term
    tag: Step
    step_verdicts: tuple[tuple[str, Verdict], ...] = ()


@dataclass(frozen=True)
class SolveResult:
    """
    Resultado de solves(). Quando status é solved, reproduzir a testemunha a
    partir de problem leva a final_term, e o Σ de solved_by julga (solved, final_control).
    """

    status: SolveStatus
    problem: Term
    conceptions: tuple[str, ...]
    witness: tuple[Step, ...] = ()
    final_term: Term | None = None
    final_control: str | None = None
    solved_by: str | None = None
    states_explored: int = 0
    steps: tuple[StepRecord, ...] = ()
    pruned: int = field(default=0)

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED

    @property
    def invalid_witnessed(self) -> bool:
        """Falha testemunhada por um veredicto invalid explícito do meio"""
        return not self.solved and self.pruned > 0


def _successors(conceptions: Sequence[Conception], term: Term) -> Iterator:
    # Ordem: concepção, operador, posição
    for conception in conceptions:
        for operator in conception.operators:
            for position, after in apply_operator(operator, term):
                yield conception, operator, position, after


def _solved_verdict(conceptions, actor, term: Term, strict: bool):
    """(concepção, controle) do primeiro Σ que julga term resolvido, ou None."""
    judges = [actor] if strict and actor is not None else conceptions
    for conception in judges:
        verdict, control_id = assess(conception.controls, term, Scope.SOLUTION)
        if verdict is Verdict.SOLVED:
            return conception.id, control_id
    return None


def _path(parents: dict, term: Term) -> tuple[StepRecord, ...]:
    records = []
    while parents[term] is not None:
        record = parents[term]
        records.append(record)
        term = record.before
    return tuple(reversed(records))


def solves(
    conceptions: Sequence[Conception],
    problem: Term,
    budget: Budget | None = None,
    strict_last_actor: bool | None = None,
) -> SolveResult:
    """
    Busca em largura sobre estados (termos). Um sucessor julgado invalid pelo Σ
    de passo da concepção que agiu é podado; um estado julgado solved pelo Σ de
    solução de qualquer concepção listada (ou só da última a agir, no modo
    estrito) encerra a busca com a testemunha mais curta.
    """
    budget = budget or Budget.from_settings()
    strict = ckc_setting("STRICT_LAST_ACTOR") if strict_last_actor is None else strict_last_actor
    conceptions = list(conceptions)
    names = tuple(conception.id for conception in conceptions)

    def finish(status, term=None, records=(), judged=(None, None)) -> SolveResult:
        result = SolveResult(
            status=status,
            problem=problem,
            conceptions=names,
            witness=tuple(record.tag for record in records),
            final_term=term,
            final_control=judged[1],
            solved_by=judged[0],
            states_explored=states,
            steps=records,
            pruned=pruned,
        )
        logger.debug(
            "solves %s %s: %s em %d passo(s), %d estados, %d podados",
            ",".join(names),
            problem,
            status.value,
            len(records),
            states,
            pruned,
        )
        return result

    states, pruned = 1, 0
    judged = _solved_verdict(conceptions, None, problem, strict)
    if judged is not None:
        return finish(SolveStatus.SOLVED, problem, (), judged)

    parents: dict[Term, StepRecord | None] = {problem: None}
    frontier = deque([problem])
    for _ in range(budget.max_depth):
        next_frontier: deque = deque()
        for term in frontier:
            for conception, operator, position, after in _successors(conceptions, term):
                if after in parents:
                    continue
                verdict, control_id = assess(conception.controls, after, Scope.STEP)
                if verdict is Verdict.INVALID:
                    pruned += 1
                    continue
                if states >= budget.max_states:
                    return finish(SolveStatus.EXHAUSTED)
                states += 1
                parents[after] = StepRecord(
                    before=term,
                    after=after,
                    tag=(conception.id, operator.id, position),
                    step_verdicts=((control_id, verdict),) if control_id else (),
                )
                judged = _solved_verdict(conceptions, conception, after, strict)
                if judged is not None:
                    return finish(SolveStatus.SOLVED, after, _path(parents, after), judged)
                next_frontier.append(after)
        frontier = next_frontier
        if not frontier:
            return finish(SolveStatus.PRUNED_ALL)
    return finish(SolveStatus.EXHAUSTED)


# ================================================================================================ #
#                                       REPRODUÇÃO E ORÁCULO                                       #
# ================================================================================================ #
def replay(conceptions: Sequence[Conception], problem: Term, witness: Sequence[Step]) -> Term:
    """Aplica a testemunha passo a passo; levanta ReplayError se um passo não se reproduz."""
    by_id = {conception.id: conception for conception in conceptions}
    term = problem
    for index, (conception_id, operator_id, position) in enumerate(witness):
        try:
            operator = by_id[conception_id].operator(operator_id)
        except KeyError as e:
            raise ReplayError(f"step {index}: unknown {conception_id}/{operator_id}") from e
        produced = dict(apply_operator(operator, term))
        if position not in produced:
            raise ReplayError(
                f"step {index}: {operator_id} does not apply to {term} "
                f"at {format_position(position)}"
            )
        term = produced[position]
    return term


def check_witness(result: SolveResult, conceptions: Sequence[Conception]) -> bool:
    """Confere que a testemunha leva a final_term e que o controle declarado resolve."""
    if not result.solved:
        return False
    try:
        final = replay(conceptions, result.problem, result.witness)
    except ReplayError:
        return False
    judge = next((c for c in conceptions if c.id == result.solved_by), None)
    if final != result.final_term or judge is None:
        return False
    return assess(judge.controls, final, Scope.SOLUTION) == (Verdict.SOLVED, result.final_control)


def _controls_say(conception: Conception, term: Term, scope: Scope) -> Verdict:
    # Primeiro controle do escopo cujo padrão e guarda valem
    for control in conception.controls:
        if control.scope == scope:
            binding = match_pattern(control.pattern, term)
            if binding is not None and eval_pred(control.guard, binding):
                return control.verdict
    return Verdict.UNDECIDED


def enumerate_sequences(
    conceptions: Sequence[Conception], problem: Term, max_depth: int
) -> tuple[SolveStatus, int | None]:
    """
    Oráculo de força bruta: percorre TODAS as sequências de até max_depth passos
    (sem memoização) e devolve (status, menor comprimento resolvido).

    Os sucessores são refeitos a partir de subterms, match_pattern e instantiate,
    sem compartilhar código com a busca.
    """
    conceptions = list(conceptions)
    distance: dict[Term, int] = {problem: 0}

    def solved(term: Term) -> bool:
        return any(_controls_say(c, term, Scope.SOLUTION) is Verdict.SOLVED for c in conceptions)

    def walk(term: Term, depth: int) -> None:
        if depth == max_depth or solved(term):
            return
        for conception in conceptions:
            for operator in conception.operators:
                for position, sub in subterms(term):
                    binding = match_pattern(operator.lhs, sub)
                    if binding is None or not eval_pred(operator.guard, binding):
                        continue
                    after = replace_at(term, position, instantiate(operator.rhs, binding))
                    if _controls_say(conception, after, Scope.STEP) is Verdict.INVALID:
                        continue
                    if distance.get(after, depth + 2) > depth + 1:
                        distance[after] = depth + 1
                    walk(after, depth + 1)

    walk(problem, 0)
    lengths = [d for t, d in distance.items() if solved(t)]
    if lengths:
        return SolveStatus.SOLVED, min(lengths)
    if max(distance.values()) == max_depth:
        return SolveStatus.EXHAUSTED, None
    return SolveStatus.PRUNED_ALL, None


# ================================================================================================ #
#                                 ESPECIFICIDADE E EQUIVALÊNCIA                                    #
# ================================================================================================ #
def _require_member(conception: Conception, context: Sequence[Conception]) -> None:
    if all(member.id != conception.id for member in context):
        raise UnknownIdError(f"conception {conception.id} is not in the context")


def is_specific(
    conception: Conception,
    context: Sequence[Conception],
    problem: Term,
    budget: Budget | None = None,
) -> bool:
    """
    Aproximação finita de "todo conjunto que resolve p contém C": o contexto
    resolve p e o contexto sem C não resolve.
    """
    _require_member(conception, context)
    if not solves(context, problem, budget).solved:
        return False
    rest = [member for member in context if member.id != conception.id]
    return not solves(rest, problem, budget).solved


def equivalent_for(
    first: Conception,
    second: Conception,
    context: Sequence[Conception],
    problem: Term,
    budget: Budget | None = None,
) -> bool:
    """Trocar first por second no contexto não altera o status da busca."""
    _require_member(first, context)
    swapped = [member for member in context if member.id != first.id]
    if all(member.id != second.id for member in swapped):
        swapped.append(second)
    return solves(context, problem, budget).status is solves(swapped, problem, budget).status
