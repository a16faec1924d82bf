"""Testes do predicado resolve, da reprodução de testemunhas e do oráculo"""

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conceptions import solver
from conceptions.exceptions import BudgetError, ReplayError, UnknownIdError
from conceptions.packs import BUILTIN, load_builtin
from conceptions.registry import load_pack_data, merge_registries
from conceptions.solver import (
    Budget,
    check_witness,
    enumerate_sequences,
    equivalent_for,
    is_specific,
    replay,
    solves,
)
from conceptions.terms import format_term, parse_term
from conceptions.utils import SolveStatus


def _solve(registry, conception_ids, problem_id, budget=None, **kwargs):
    conceptions = [registry.conception(cid) for cid in conception_ids]
    return solves(conceptions, registry.problem(problem_id).term, budget, **kwargs)


@pytest.mark.parametrize(
    "conceptions, problem, status, final, length",
    [
        (["C1"], "p_5+4", SolveStatus.SOLVED, "(count 9)", 5),
        (["C2"], "p_16+4", SolveStatus.SOLVED, "(count 20)", 6),
        (["C2"], "p_16+23", SolveStatus.PRUNED_ALL, None, 0),
        (["C3"], "p_16+23", SolveStatus.SOLVED, "(num 39)", 1),
        (["C4"], "p_16+23", SolveStatus.SOLVED, "(screen 39)", 2),
        (["C4"], "p_overflow", SolveStatus.PRUNED_ALL, None, 0),
        (["C2", "C3"], "p_16+23", SolveStatus.SOLVED, "(num 39)", 1),
        (["C2"], "p_overflow", SolveStatus.SOLVED, "(count 100000000)", 3),
    ],
)
def test_addition_suite(addition, conceptions, problem, status, final, length):
    result = _solve(addition, conceptions, problem)
    assert result.status is status
    assert len(result.witness) == length
    if final is None:
        assert result.final_term is None
    else:
        assert format_term(result.final_term) == final
        assert check_witness(result, [addition.conception(cid) for cid in conceptions])


def test_witness_tags_and_controls(addition):
    result = _solve(addition, ["C2"], "p_16+4")
    operators = [operator for _, operator, _ in result.witness]
    assert operators == ["c2-start"] + ["count-on-step"] * 4 + ["c2-finish"]
    assert result.solved_by == "C2"
    assert result.final_control == "c2-done"
    assert result.steps[0].step_verdicts[0][0] == "c2-counting"


def test_failures_witnessed_by_invalid(addition):
    c2_fails = _solve(addition, ["C2"], "p_16+23")
    assert c2_fails.pruned == 1
    assert c2_fails.invalid_witnessed
    c1_idle = _solve(addition, ["C1"], "p_16+23")
    assert c1_idle.status is SolveStatus.PRUNED_ALL
    assert not c1_idle.invalid_witnessed


def test_egyptian_decomposition_search(fractions_pack):
    result = _solve(fractions_pack, ["C_rat-mult"], "p_egypt-4055")
    assert result.solved
    assert len(result.witness) == 7
    assert result.final_control == "rat-decomposed"
    eg = _solve(fractions_pack, ["C_eg-mult"], "p_10-fifths")
    assert format_term(eg.final_term) == "(whole 2)"
    assert len(eg.witness) == 3


def test_budgets(addition):
    with pytest.raises(BudgetError):
        Budget(max_depth=0)
    with pytest.raises(BudgetError):
        Budget(max_states=-1)
    shallow = _solve(addition, ["C2"], "p_16+4", Budget(max_depth=5))
    assert shallow.status is SolveStatus.EXHAUSTED
    states = _solve(addition, ["C2"], "p_16+4", Budget(max_depth=12, max_states=3))
    assert states.status is SolveStatus.EXHAUSTED
    assert states.states_explored == 3


def test_already_solved_problem(addition):
    c3 = addition.conception("C3")
    result = solves([c3], parse_term("(num 39)"))
    assert result.solved
    assert result.witness == ()
    assert result.final_control == "c3-done"


def test_strict_last_actor():
    pack = {
        "id": "relay",
        "languages": [{"id": "L_r", "signature": {"start": 0, "mid": 0, "end": 0}}],
        "conceptions": [
            {
                "id": "A",
                "language": "L_r",
                "problems": {"prototypes": [{"name": "start", "term": "(start)"}]},
                "operators": [{"id": "a-go", "lhs": "(start)", "rhs": "(mid)"}],
                "controls": [
                    {"id": "a-end", "scope": "solution", "pattern": "(end)", "verdict": "solved"}
                ],
            },
            {
                "id": "B",
                "language": "L_r",
                "problems": {"prototypes": [{"name": "mid", "term": "(mid)"}]},
                "operators": [{"id": "b-go", "lhs": "(mid)", "rhs": "(end)"}],
                "controls": [
                    {"id": "b-mid", "scope": "solution", "pattern": "(mid)", "verdict": "solved"},
                    {"id": "b-end", "scope": "solution", "pattern": "(end)", "verdict": "solved"},
                ],
            },
        ],
    }
    registry = load_pack_data(pack)
    both = [registry.conception("A"), registry.conception("B")]
    loose = solves(both, parse_term("(start)"), strict_last_actor=False)
    assert (len(loose.witness), loose.solved_by, loose.final_control) == (1, "B", "b-mid")
    strict = solves(both, parse_term("(start)"), strict_last_actor=True)
    assert (len(strict.witness), strict.solved_by, strict.final_control) == (2, "B", "b-end")


def test_replay_errors(addition):
    c3 = addition.conception("C3")
    problem = addition.problem("p_16+23").term
    assert format_term(replay([c3], problem, [("C3", "column-add", ())])) == "(num 39)"
    with pytest.raises(ReplayError):
        replay([c3], problem, [("C3", "column-add", (0,))])
    with pytest.raises(ReplayError):
        replay([c3], problem, [("C3", "key-in", ())])


def test_specificity_and_equivalence(addition):
    c1, c2, c3, c4 = (addition.conception(cid) for cid in ("C1", "C2", "C3", "C4"))
    problem = addition.problem("p_16+23").term
    assert is_specific(c3, [c2, c3], problem)
    assert not is_specific(c2, [c2, c3], problem)
    assert equivalent_for(c3, c4, [c2, c3], problem)
    assert not equivalent_for(c3, c1, [c3], problem)
    with pytest.raises(UnknownIdError):
        is_specific(c1, [c2, c3], problem)


# ================================================================================================ #
#                                 ORÁCULO E PROPRIEDADES                                           #
# ================================================================================================ #
def _cases():
    registry = merge_registries([load_builtin(name) for name in BUILTIN])
    sets = [(cid,) for cid in registry.conceptions]
    sets += [("C2", "C3"), ("C1", "C2"), ("C3", "C4"), ("N", "E"), ("C_eg-mult", "C_rat-mult")]
    return registry, [(ids, problem_id) for ids in sets for problem_id in registry.problems]


REGISTRY, CASES = _cases()


@pytest.mark.parametrize("conception_ids, problem_id", CASES)
def test_search_agrees_with_exhaustive_enumeration(conception_ids, problem_id):
    conceptions = [REGISTRY.conception(cid) for cid in conception_ids]
    term = REGISTRY.problem(problem_id).term
    result = solves(conceptions, term, Budget(max_depth=6))
    status, shortest = enumerate_sequences(conceptions, term, 6)
    assert result.status is status
    if status is SolveStatus.SOLVED:
        assert len(result.witness) == shortest


def test_enumeration_does_not_reuse_the_search(monkeypatch):
    def forbidden(*args, **kwargs):
        raise AssertionError("enumeration must rebuild its own successors")

    for name in ("_successors", "_solved_verdict", "apply_operator", "assess"):
        monkeypatch.setattr(solver, name, forbidden)
    c3 = REGISTRY.conception("C3")
    assert enumerate_sequences([c3], REGISTRY.problem("p_16+23").term, 4) == (
        SolveStatus.SOLVED,
        1,
    )


@settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(CASES), st.integers(min_value=1, max_value=12))
def test_every_solved_witness_replays(case, depth):
    conception_ids, problem_id = case
    conceptions = [REGISTRY.conception(cid) for cid in conception_ids]
    result = solves(conceptions, REGISTRY.problem(problem_id).term, Budget(max_depth=depth))
    if result.solved:
        assert check_witness(result, conceptions)
        assert len(result.witness) <= depth


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CASES), st.integers(min_value=1, max_value=11))
def test_more_depth_never_loses_a_solution(case, depth):
    conception_ids, problem_id = case
    conceptions = [REGISTRY.conception(cid) for cid in conception_ids]
    term = REGISTRY.problem(problem_id).term
    shallow = solves(conceptions, term, Budget(max_depth=depth))
    deeper = solves(conceptions, term, Budget(max_depth=depth + 1))
    if shallow.solved:
        assert deeper.solved
        assert len(deeper.witness) == len(shallow.witness)
