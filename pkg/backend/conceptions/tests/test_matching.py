"""Testes de casamento, guardas e instanciação"""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conceptions.exceptions import (
    SortMismatchError,
    UnboundVariableError,
    ZeroDivisionEvalError,
)
from conceptions.matching import (
    eval_pred,
    guard_problems,
    instantiate,
    match_pattern,
    parse_guard,
    template_problems,
    unbound_variables,
)
from conceptions.terms import (
    IntAtom,
    RatAtom,
    Symbol,
    make_number,
    parse_pattern,
    parse_template,
    parse_term,
)


def test_match_binds_variables():
    binding = match_pattern(parse_pattern("(add ?a ?b)"), parse_term("(add 16 23)"))
    assert binding == {"a": IntAtom(16), "b": IntAtom(23)}
    assert match_pattern(parse_pattern("(add ?a ?b)"), parse_term("(num 39)")) is None


def test_non_linear_patterns_require_equal_subterms():
    pattern = parse_pattern("(times ?k (parts ?k))")
    assert match_pattern(pattern, parse_term("(times 5 (parts 5))")) == {"k": IntAtom(5)}
    assert match_pattern(pattern, parse_term("(times 10 (parts 5))")) is None


def test_guards_are_exact_and_short_circuit():
    binding = {"a": IntAtom(3), "b": Symbol("nat")}
    assert eval_pred(parse_guard("(and (is-int ?b) (gt ?b 0))"), binding) is False
    assert eval_pred(parse_guard("(or (is-sym ?b) (gt ?b 0))"), binding) is True
    assert eval_pred(parse_guard("(eq (mul (ceil-div 10 2) 2) 10)"), {}) is True
    assert eval_pred(parse_guard("(eq (div 1 3) 1/3)"), {}) is True
    assert eval_pred(parse_guard("(le (digit-count 99999999) 8)"), {}) is True
    assert eval_pred(parse_guard("(ne ?b same)"), binding) is True
    assert eval_pred(parse_guard(None), {}) is True


def test_guard_errors_are_never_silent_false():
    with pytest.raises(SortMismatchError):
        eval_pred(parse_guard("(lt ?b 1)"), {"b": Symbol("nat")})
    with pytest.raises(ZeroDivisionEvalError):
        eval_pred(parse_guard("(gt (div 1 0) 0)"), {})
    with pytest.raises(UnboundVariableError):
        eval_pred(parse_guard("(gt ?z 0)"), {})
    with pytest.raises(SortMismatchError):
        eval_pred(parse_guard("(add 1 2)"), {})


def test_instantiate_evaluates_calls():
    template = parse_template("(join (count @add(?a 1)) (count @sub(?b 1)))")
    result = instantiate(template, {"a": IntAtom(5), "b": IntAtom(4)})
    assert str(result) == "(join (count 6) (count 3))"
    unit = instantiate(parse_template("@div(1 @ceil-div(4093 4055))"), {})
    assert unit == RatAtom(Fraction(1, 2))
    assert instantiate(parse_template("@mul(10 1/5)"), {}) == IntAtom(2)


def test_static_checks():
    assert guard_problems(parse_guard("(frob ?a)")) == ["unknown guard operator frob"]
    assert guard_problems(parse_guard("(lt ?a)")) == ["lt expects 2 argument(s), got 1"]
    assert template_problems(parse_template("@pow(?a 2)")) == ["unknown eval operator pow"]
    lhs = parse_pattern("(add ?a ?b)")
    assert unbound_variables(lhs, parse_template("(num @add(?a ?c))")) == ["c"]


operands = st.fractions(min_value=-50, max_value=50, max_denominator=12)
expressions = st.recursive(
    operands,
    lambda children: st.tuples(st.sampled_from(("add", "sub", "mul", "div")), children, children),
    max_leaves=8,
)


def _render(expr) -> str:
    if isinstance(expr, Fraction):
        return str(make_number(expr))
    op, left, right = expr
    return f"@{op}({_render(left)} {_render(right)})"


def _reduced(expr) -> tuple[int, int] | None:
    """Par (numerador, denominador) reduzido por mdc; None se houver divisão por zero."""
    if isinstance(expr, Fraction):
        return expr.numerator, expr.denominator
    op, left, right = expr
    a, b = _reduced(left), _reduced(right)
    if a is None or b is None:
        return None
    (an, ad), (bn, bd) = a, b
    if op == "add":
        num, den = an * bd + bn * ad, ad * bd
    elif op == "sub":
        num, den = an * bd - bn * ad, ad * bd
    elif op == "mul":
        num, den = an * bn, ad * bd
    else:
        if bn == 0:
            return None
        num, den = an * bd, ad * bn
    if den < 0:
        num, den = -num, -den
    divisor = math.gcd(num, den)
    return num // divisor, den // divisor


@given(expressions)
def test_arithmetic_results_are_canonical(expr):
    template = parse_template(_render(expr))
    expected = _reduced(expr)
    if expected is None:
        with pytest.raises(ZeroDivisionEvalError):
            instantiate(template, {})
        return
    num, den = expected
    result = instantiate(template, {})
    if den == 1:
        assert result == IntAtom(num)
        literal = str(num)
    else:
        assert isinstance(result, RatAtom)
        assert (result.value.numerator, result.value.denominator) == (num, den)
        literal = f"{num}/{den}"
    assert eval_pred(parse_guard(f"(eq {_render(expr)} {literal})"), {}) is True
