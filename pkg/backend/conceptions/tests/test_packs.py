"""Testes dos pacotes embutidos, das fixtures e da decomposição egípcia"""

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conceptions.packs import (
    BUILTIN,
    builtin_packs,
    check_fixtures,
    egypt_decompose,
    greedy_steps,
    load_builtin,
    units_from_term,
)
from conceptions.registry import PACKS_DIR, load_pack_data
from conceptions.solver import solves
from conceptions.terms import parse_term

EGYPT_4055 = [
    Fraction(1, 2),
    Fraction(1, 3),
    Fraction(1, 7),
    Fraction(1, 69),
    Fraction(1, 30650),
    Fraction(1, 10098761225),
]


def test_egypt_decompose():
    units = egypt_decompose(Fraction(4055, 4093))
    assert units == EGYPT_4055
    assert sum(units) == Fraction(4055, 4093)
    assert egypt_decompose(1) == [Fraction(1)]
    assert egypt_decompose("2/3") == [Fraction(1, 2), Fraction(1, 6)]


@pytest.mark.parametrize("value", [0, Fraction(3, 2), -1])
def test_egypt_decompose_range(value):
    with pytest.raises(ValueError):
        greedy_steps(value)


@given(st.fractions(min_value=Fraction(1, 40), max_value=1, max_denominator=40))
def test_greedy_steps(q):
    steps = greedy_steps(q)
    units = [unit for unit, _ in steps]
    assert sum(units) == q
    assert all(unit.numerator == 1 for unit in units)
    assert units == sorted(set(units), reverse=True)
    assert steps[-1][1] == 0
    remainders = [q] + [remainder for _, remainder in steps]
    assert all(after < before for before, after in zip(remainders, remainders[1:]))
    numerators = [remainder.numerator for remainder in remainders]
    assert all(after < before for before, after in zip(numerators, numerators[1:]))


def test_search_agrees_with_decomposition(fractions_pack):
    problem = fractions_pack.problem("p_egypt-4055")
    result = solves([fractions_pack.conception("C_rat-mult")], problem.term)
    assert result.solved
    assert result.final_control == "rat-decomposed"
    assert units_from_term(result.final_term) == EGYPT_4055
    with pytest.raises(ValueError):
        units_from_term(parse_term("(decompose 1/2)"))


def test_builtin_manifests():
    manifests = builtin_packs()
    assert [item.id for item in manifests] == list(BUILTIN)
    assert [item.c_mu for item in manifests] == ["C_mu", "C_mu-rat", "T_mu"]
    assert manifests[0].source == "builtin:addition"
    assert manifests[0].conceptions == ("C1", "C2", "C3", "C4", "C_mu")
    assert manifests[0].fixtures == (
        "falsity",
        "generality",
        "graph",
        "paths",
        "same_object",
        "solves",
    )
    assert manifests[2].translations == ("f_N2E",)
    assert load_builtin("addition") is load_builtin("addition")


@pytest.mark.parametrize("name", BUILTIN)
def test_builtin_fixtures(name):
    assert check_fixtures(load_builtin(name)) == []


def test_fixtures_hold_on_merged_registry(all_packs):
    assert check_fixtures(all_packs) == []


def test_fixture_mismatches_are_reported():
    data = json.loads((PACKS_DIR / "addition.ckc").read_text(encoding="utf-8"))
    data["fixtures"] = {
        "solves": [
            {"conceptions": ["C1"], "problem": "p_5+4", "status": "pruned-all"},
            {"conceptions": ["C3"], "problem": "p_16+23", "status": "solved", "final": "(num 40)"},
        ],
        "generality": [
            {"general": "C2", "specific": "C3", "translation": "f_dec2count", "holds": True}
        ],
        "paths": [{"from": "C3", "to": "C2", "path": ["C3", "p_16+23", "C2"]}],
    }
    assert check_fixtures(load_pack_data(data)) == [
        "addition: solves C1 p_5+4: status solved, expected pruned-all",
        "addition: solves C3 p_16+23: final (num 39), expected (num 40)",
        "addition: generality C2 > C3: holds=False, expected True",
        "addition: path C3 -> C2: None, expected ['C3', 'p_16+23', 'C2']",
    ]


def test_fixture_errors_are_reported():
    data = json.loads((PACKS_DIR / "triangle.ckc").read_text(encoding="utf-8"))
    data["fixtures"] = {"falsity": [{"conception": "N", "other": "X", "translation": "f_N2E"}]}
    [line] = check_fixtures(load_pack_data(data))
    assert line.startswith("triangle: fixture error:")
