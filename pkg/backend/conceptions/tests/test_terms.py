"""Testes do módulo de termos"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conceptions.exceptions import TermSyntaxError
from conceptions.terms import (
    Compound,
    EvalCall,
    IntAtom,
    RatAtom,
    Symbol,
    Var,
    format_position,
    format_term,
    is_ground,
    make_number,
    parse_pattern,
    parse_position,
    parse_template,
    parse_term,
    replace_at,
    subterm_at,
    subterms,
    variables,
)

names = st.from_regex(r"[a-z][a-z0-9_-]{0,6}", fullmatch=True)
numbers = st.fractions(max_denominator=10**6).map(make_number)
atoms = st.one_of(names.map(Symbol), numbers)
terms = st.recursive(
    atoms,
    lambda children: st.builds(
        Compound, names, st.lists(children, max_size=3).map(tuple)
    ),
    max_leaves=12,
)


@given(terms)
def test_format_then_parse_is_identity(term):
    assert parse_term(format_term(term)) == term


@given(st.fractions())
def test_numbers_are_canonical(value):
    number = make_number(value)
    if value.denominator == 1:
        assert isinstance(number, IntAtom)
    else:
        assert isinstance(number, RatAtom)
        assert number.value == value


def test_parse_compound_and_rationals():
    term = parse_term("(times 10 2/10)")
    assert term == Compound("times", (IntAtom(10), RatAtom(Fraction(1, 5))))
    assert format_term(term) == "(times 10 1/5)"
    assert parse_term("4/2") == IntAtom(2)
    assert parse_term("-3/6") == RatAtom(Fraction(-1, 2))
    assert parse_term("(units)") == Compound("units", ())


def test_whitespace_is_normalized():
    assert format_term(parse_term("  ( add\n 16\t23 )  ")) == "(add 16 23)"


@pytest.mark.parametrize(
    "text, offset, reason",
    [
        ("", 0, "empty input"),
        ("(add 1", 0, "unbalanced parenthesis"),
        (")", 0, "unbalanced parenthesis"),
        ("(add 1) x", 8, "trailing input"),
        ("(add ?x 1)", 5, "variables are only legal in patterns and templates"),
        ("1/0", 0, "zero denominator"),
        ("12ab", 2, "invalid token"),
    ],
)
def test_syntax_errors_carry_byte_offset(text, offset, reason):
    with pytest.raises(TermSyntaxError) as error:
        parse_term(text)
    assert error.value.offset == offset
    assert error.value.reason == reason


def test_offset_counts_bytes_not_characters():
    with pytest.raises(TermSyntaxError) as error:
        parse_term("(ação 1)")
    assert error.value.offset == 2
    with pytest.raises(TermSyntaxError) as error:
        parse_term("(add 1)\u00a0x")
    assert error.value.reason == "trailing input"
    assert error.value.offset == 9


def test_patterns_and_templates():
    pattern = parse_pattern("(join (count ?a) (count ?b))")
    assert variables(pattern) == ["a", "b"]
    assert not is_ground(pattern)
    template = parse_template("(count @add(?a 1))")
    assert template.args[0] == EvalCall("add", (Var("a"), IntAtom(1)))
    with pytest.raises(TermSyntaxError):
        parse_pattern("@add(?a 1)")


def test_positions():
    term = parse_term("(join (count 5) (count 4))")
    listed = [format_position(position) for position, _ in subterms(term)]
    assert listed == ["root", "0", "0.0", "1", "1.0"]
    assert subterm_at(term, parse_position("1.0")) == IntAtom(4)
    replaced = replace_at(term, (1, 0), IntAtom(3))
    assert format_term(replaced) == "(join (count 5) (count 3))"
    assert parse_position("root") == ()
