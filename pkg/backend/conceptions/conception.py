"""
Módulo da concepção: o quádruplo (P, R, L, Σ) e sua semântica local.

- P: protótipos nomeados + padrões de pertinência com guarda
- R: operadores (regras de reescrita com guarda), aplicáveis em qualquer posição
- L: identificador da linguagem de representação
- Σ: controles ordenados com escopo (passo ou solução) e veredicto
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .matching import TRUE, eval_pred, instantiate, match_pattern
from .terms import Pattern, Position, Term, replace_at, subterms
from .utils import Scope, Verdict


@dataclass(frozen=True)
class Prototype:
    """Problema protótipo nomeado"""

    name: str
    term: Term


@dataclass(frozen=True)
class MembershipPattern:
    pattern: Pattern
    guard: Pattern = TRUE


@dataclass(frozen=True)
class ProblemSet:
    """
    Conjunto de problemas P: protótipos ("uma janela sobre P") e padrões de
    pertinência. Sem padrões, P é exatamente o conjunto de protótipos.
    """

    prototypes: tuple[Prototype, ...] = ()
    membership: tuple[MembershipPattern, ...] = ()

    @property
    def prototype_terms(self) -> tuple[Term, ...]:
        return tuple(prototype.term for prototype in self.prototypes)


@dataclass(frozen=True)
class Operator:
    """Operador de R: lhs [guarda] -> rhs"""

    id: str
    lhs: Pattern
    rhs: Pattern
    guard: Pattern = TRUE


@dataclass(frozen=True)
class Control:
    """Controle de Σ; controles de passo só emitem valid/invalid"""

    id: str
    scope: Scope
    pattern: Pattern
    verdict: Verdict
    guard: Pattern = TRUE


@dataclass(frozen=True)
class Conception:
    """O quádruplo (P, R, L, Σ)"""

    id: str
    problems: ProblemSet
    operators: tuple[Operator, ...]
    language: str
    controls: tuple[Control, ...]
    description: str = field(default="", compare=False)

    def operator(self, operator_id: str) -> Operator:
        for operator in self.operators:
            if operator.id == operator_id:
                return operator
        raise KeyError(operator_id)

    def control(self, control_id: str) -> Control:
        for control in self.controls:
            if control.id == control_id:
                return control
        raise KeyError(control_id)


def matches_membership(problems: ProblemSet, term: Term) -> bool:
    """True se term casa algum padrão de pertinência com guarda verdadeira."""
    for member in problems.membership:
        binding = match_pattern(member.pattern, term)
        if binding is not None and eval_pred(member.guard, binding):
            return True
    return False


def membership(problems: ProblemSet, term: Term) -> bool:
    """True se term é um protótipo ou casa um padrão de pertinência."""
    return term in problems.prototype_terms or matches_membership(problems, term)


def apply_operator(operator: Operator, term: Term) -> list[tuple[Position, Term]]:
    """
    Aplica o operador em todas as posições onde o lhs casa e a guarda vale,
    na ordem mais à esquerda / mais externa. Lista vazia quando inaplicável.
    """
    results = []
    for position, sub in subterms(term):
        binding = match_pattern(operator.lhs, sub)
        if binding is None or not eval_pred(operator.guard, binding):
            continue
        results.append((position, replace_at(term, position, instantiate(operator.rhs, binding))))
    return results


def assess(controls, term: Term, scope: Scope) -> tuple[Verdict, str | None]:
    """Primeiro controle do escopo (ordem de declaração) que casa decide o veredicto."""
    for control in controls:
        if control.scope != scope:
            continue
        binding = match_pattern(control.pattern, term)
        if binding is not None and eval_pred(control.guard, binding):
            return control.verdict, control.id
    return Verdict.UNDECIDED, None


def judge(controls, term: Term) -> tuple[Verdict, str | None]:
    """Avaliação de passo; quando o passo é silencioso, recorre ao escopo de solução."""
    verdict, control_id = assess(controls, term, Scope.STEP)
    if verdict is Verdict.UNDECIDED:
        return assess(controls, term, Scope.SOLUTION)
    return verdict, control_id


def is_accepted(verdict: Verdict) -> bool:
    """O "true" de σ(r(p)) = true: passo válido ou solução."""
    return verdict in (Verdict.VALID, Verdict.SOLVED)
