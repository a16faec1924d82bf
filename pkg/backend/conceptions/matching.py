"""
Casamento de padrões, avaliação de guardas e instanciação de modelos.

Toda a aritmética é exata (Fraction); não existe ponto flutuante no motor.
"""

# cSpell: words subterm

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Mapping

from .exceptions import SortMismatchError, UnboundVariableError, ZeroDivisionEvalError
from .terms import (
    Compound,
    EvalCall,
    IntAtom,
    Pattern,
    RatAtom,
    Symbol,
    Term,
    Var,
    is_number,
    make_number,
    number_value,
    parse_template,
    subterms,
    variables,
)

Binding = Mapping[str, Term]

TRUE = Symbol("true")


# ================================================================================================ #
#                                             MATCHING                                             #
# ================================================================================================ #
def _match(pattern: Pattern, term: Term, binding: dict) -> bool:
    if isinstance(pattern, Var):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = term
            return True
        # Padrões não lineares exigem termos iguais
        return bound == term
    if isinstance(pattern, Compound):
        if not isinstance(term, Compound) or term.head != pattern.head:
            return False
        if len(term.args) != len(pattern.args):
            return False
        return all(_match(p, t, binding) for p, t in zip(pattern.args, term.args))
    return pattern == term


def match_pattern(pattern: Pattern, term: Term) -> dict[str, Term] | None:
    """
    Casa um padrão (unilateral) contra um termo.

    Retorna o binding mais direto ou None quando não casa.
    """
    binding: dict[str, Term] = {}
    if _match(pattern, term, binding):
        return binding
    return None


# ================================================================================================ #
#                                            ARITMÉTICA                                            #
# ================================================================================================ #
def _numbers(op: str, values: list) -> list[Fraction]:
    result = []
    for value in values:
        if isinstance(value, bool) or not isinstance(value, Fraction):
            raise SortMismatchError(f"{op} expects numbers, got {_describe(value)}")
        result.append(value)
    return result


def _divide(op: str, left: Fraction, right: Fraction) -> Fraction:
    if right == 0:
        raise ZeroDivisionEvalError(f"{op}: division by zero")
    return left / right


def _integer(op: str, value: Fraction) -> int:
    if value.denominator != 1:
        raise SortMismatchError(f"{op} expects an integer, got {value}")
    return value.numerator


def _digit_count(values: list) -> Fraction:
    (value,) = _numbers("digit-count", values)
    return Fraction(len(str(abs(_integer("digit-count", value)))))


def _fold(op: str, fn: Callable[[Fraction, Fraction], Fraction]):
    def apply(values: list) -> Fraction:
        numbers = _numbers(op, values)
        result = numbers[0]
        for number in numbers[1:]:
            result = fn(result, number)
        return result

    return apply


def _binary(op: str, fn: Callable[[Fraction, Fraction], Fraction]):
    def apply(values: list) -> Fraction:
        left, right = _numbers(op, values)
        return fn(left, right)

    return apply


def _unary(op: str, fn: Callable[[Fraction], Fraction]):
    def apply(values: list) -> Fraction:
        (value,) = _numbers(op, values)
        return fn(value)

    return apply


# Operações aritméticas e suas aridades (None = variádica, mínimo 1)
ARITHMETIC: dict[str, tuple[int | None, Callable[[list], Fraction]]] = {
    "add": (None, _fold("add", lambda a, b: a + b)),
    "mul": (None, _fold("mul", lambda a, b: a * b)),
    "sub": (2, _binary("sub", lambda a, b: a - b)),
    "div": (2, _binary("div", lambda a, b: _divide("div", a, b))),
    "ceil-div": (
        2,
        _binary("ceil-div", lambda a, b: Fraction(math.ceil(_divide("ceil-div", a, b)))),
    ),
    "min": (None, _fold("min", min)),
    "max": (None, _fold("max", max)),
    "numerator": (1, _unary("numerator", lambda v: Fraction(v.numerator))),
    "denominator": (1, _unary("denominator", lambda v: Fraction(v.denominator))),
    "digit-count": (1, _digit_count),
}

COMPARISONS = {
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
}

PREDICATES = {
    "is-int": lambda t: isinstance(t, IntAtom),
    "is-rat": lambda t: isinstance(t, RatAtom),
    "is-num": is_number,
    "is-sym": lambda t: isinstance(t, Symbol),
}

LOGICAL = ("and", "or", "not")
EQUALITY = ("eq", "ne")

GUARD_HEADS = set(ARITHMETIC) | set(COMPARISONS) | set(PREDICATES) | set(LOGICAL) | set(EQUALITY)


def _describe(value) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, Fraction):
        return "number"
    return f"term {value}"


def _to_value(term):
    """Átomo numérico vira Fraction; demais termos seguem como termos."""
    if is_number(term):
        return number_value(term)
    return term


def _to_term(value):
    if isinstance(value, bool):
        return Symbol("true" if value else "false")
    if isinstance(value, Fraction):
        return make_number(value)
    return value


# ================================================================================================ #
#                                              GUARDAS                                             #
# ================================================================================================ #
def _evaluate(expr, binding: Binding):
    if isinstance(expr, Var):
        if expr.name not in binding:
            raise UnboundVariableError(expr.name)
        return _to_value(binding[expr.name])
    if isinstance(expr, Symbol):
        if expr.name == "true":
            return True
        if expr.name == "false":
            return False
        return expr
    if is_number(expr):
        return number_value(expr)
    if isinstance(expr, (Compound, EvalCall)):
        head = expr.head if isinstance(expr, Compound) else expr.op
        return _evaluate_call(head, expr.args, binding)
    raise SortMismatchError(f"cannot evaluate {expr}")


def _boolean(head: str, value) -> bool:
    if not isinstance(value, bool):
        raise SortMismatchError(f"{head} expects booleans, got {_describe(value)}")
    return value


def _evaluate_call(head: str, args: tuple, binding: Binding):
    # and/or avaliam com curto-circuito: (and (is-int ?a) (le ?a 9)) é seguro
    if head == "and":
        return all(_boolean(head, _evaluate(arg, binding)) for arg in args)
    if head == "or":
        return any(_boolean(head, _evaluate(arg, binding)) for arg in args)
    values = [_evaluate(arg, binding) for arg in args]
    if head == "not":
        (value,) = values
        return not _boolean(head, value)
    if head in EQUALITY:
        left, right = (_to_term(value) for value in values)
        return (left == right) == (head == "eq")
    if head in COMPARISONS:
        left, right = _numbers(head, values)
        return COMPARISONS[head](left, right)
    if head in PREDICATES:
        (value,) = values
        return PREDICATES[head](_to_term(value))
    if head in ARITHMETIC:
        return ARITHMETIC[head][1](values)
    raise SortMismatchError(f"unknown guard operator {head}")


def eval_pred(expr, binding: Binding) -> bool:
    """Avalia um guarda sob um binding completo; o resultado é sempre booleano."""
    value = _evaluate(expr, binding)
    if not isinstance(value, bool):
        raise SortMismatchError(f"guard must be boolean, got {_describe(value)}")
    return value


def guard_problems(expr) -> list[str]:
    """Erros estáticos de um guarda (operadores desconhecidos, aridades)."""
    problems = []
    for _, sub in subterms(expr):
        if not isinstance(sub, (Compound, EvalCall)):
            continue
        head = sub.head if isinstance(sub, Compound) else sub.op
        if head not in GUARD_HEADS:
            problems.append(f"unknown guard operator {head}")
            continue
        arity = _expected_arity(head)
        if arity is not None and len(sub.args) != arity:
            problems.append(f"{head} expects {arity} argument(s), got {len(sub.args)}")
        elif arity is None and not sub.args:
            problems.append(f"{head} expects at least one argument")
    return problems


def _expected_arity(head: str) -> int | None:
    if head in ARITHMETIC:
        return ARITHMETIC[head][0]
    if head in COMPARISONS or head in EQUALITY:
        return 2
    if head in PREDICATES or head == "not":
        return 1
    return None


def parse_guard(text: str | None):
    """Lê um guarda; ausência equivale a `true`."""
    if text is None or not text.strip():
        return TRUE
    return parse_template(text)


# ================================================================================================ #
#                                           INSTANCIAÇÃO                                           #
# ================================================================================================ #
def instantiate(template: Pattern, binding: Binding) -> Term:
    """
    Substitui as variáveis e avalia as chamadas @op(...) de baixo para cima.

    O resultado nunca contém variáveis nem chamadas residuais.
    """
    if isinstance(template, Var):
        if template.name not in binding:
            raise UnboundVariableError(template.name)
        return binding[template.name]
    if isinstance(template, Compound):
        return Compound(template.head, tuple(instantiate(arg, binding) for arg in template.args))
    if isinstance(template, EvalCall):
        if template.op not in ARITHMETIC:
            raise SortMismatchError(f"unknown eval operator {template.op}")
        values = []
        for arg in template.args:
            term = instantiate(arg, binding)
            if not is_number(term):
                raise SortMismatchError(f"@{template.op} expects numbers, got term {term}")
            values.append(number_value(term))
        return make_number(ARITHMETIC[template.op][1](values))
    return template


def template_problems(template: Pattern) -> list[str]:
    """Erros estáticos das chamadas @op(...) de um modelo."""
    problems = []
    for _, sub in subterms(template):
        if isinstance(sub, EvalCall):
            if sub.op not in ARITHMETIC:
                problems.append(f"unknown eval operator {sub.op}")
                continue
            arity = ARITHMETIC[sub.op][0]
            if arity is not None and len(sub.args) != arity:
                problems.append(f"@{sub.op} expects {arity} argument(s), got {len(sub.args)}")
    return problems


def unbound_variables(lhs: Pattern, *others) -> list[str]:
    """Variáveis usadas em modelos/guardas e não ligadas pelo lado esquerdo."""
    bound = set(variables(lhs))
    missing: dict[str, None] = {}
    for other in others:
        for name in variables(other):
            if name not in bound:
                missing.setdefault(name, None)
    return list(missing)
