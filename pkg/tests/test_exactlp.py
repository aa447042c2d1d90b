"""Exact LP: golden examples, a brute-force vertex oracle, and invariants."""

from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from process_duality.errors import DimensionMismatch
from process_duality.exactlp import (
    LinearSystem,
    LpStatus,
    lp_solve,
    strict_feasible,
    verify_outcome,
)


def solve_square(rows, rhs):
    """Tiny exact Gaussian solver for the oracle; returns None if singular."""
    n = len(rhs)
    a = [list(map(F, rows[i])) + [F(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def brute_force_optimum(objective, system, sense):
    """Enumerate all basic points (n-subsets of tight rows) of a bounded
    full-dimensional system and scan the objective.  Independent of the
    simplex path."""
    n = system.dim
    rows = [(normal, rhs) for normal, rhs in system.le + system.eq]
    best = None
    for subset in combinations(range(len(rows)), n):
        sol = solve_square([rows[i][0] for i in subset], [rows[i][1] for i in subset])
        if sol is None:
            continue
        ok = all(
            sum(a * x for a, x in zip(normal, sol)) <= rhs
            for normal, rhs in system.le
        ) and all(
            sum(a * x for a, x in zip(normal, sol)) == rhs
            for normal, rhs in system.eq
        )
        if not ok:
            continue
        val = sum(c * x for c, x in zip(objective, sol))
        if best is None or (sense == "min" and val < best) or (
            sense == "max" and val > best
        ):
            best = val
    return best


def test_min_x_nonnegative_identity():
    s = LinearSystem(1, le=[((-1,), 0)])
    out = lp_solve((1,), s, "min")
    assert out.status is LpStatus.OPTIMAL
    assert out.primal_point == (F(0),)
    assert out.objective_value == F(0)


def test_box_max_matches_vertex_enumeration():
    s = LinearSystem(
        2, le=[((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((0, -1), 0)]
    )
    out = lp_solve((1, 1), s, "max")
    assert out.status is LpStatus.OPTIMAL
    assert out.primal_point == (F(1), F(1))
    # Oracle: enumerate all 4 box vertices.
    assert out.objective_value == brute_force_optimum((F(1), F(1)), s, "max") == F(2)


def test_infeasible_interval():
    s = LinearSystem(1, le=[((-1,), -1), ((1,), 0)])
    assert lp_solve((1,), s).status is LpStatus.INFEASIBLE


def test_unbounded():
    assert lp_solve((1,), LinearSystem(1)).status is LpStatus.UNBOUNDED


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        LinearSystem(2, le=[((1,), 0)])
    with pytest.raises(DimensionMismatch):
        lp_solve((1,), LinearSystem(2))


def test_strict_open_interval():
    s = LinearSystem(1, strict=[((1,), 0), ((-1,), 1)])
    res = strict_feasible(s)
    assert res.feasible
    (w,) = res.witness
    assert -1 < w < 0


def test_strict_contradiction():
    s = LinearSystem(1, le=[((1,), 0)], strict=[((-1,), 0)])
    assert not strict_feasible(s).feasible


def test_strict_halfplane_minus_open_cone_is_empty():
    # M = {v in R^2 : v2 >= 0} meets (0,0) - Int(R x R_+) nowhere.
    s = LinearSystem(2, le=[((0, -1), 0)], strict=[((0, 1), 0)])
    assert not strict_feasible(s).feasible


def test_strict_witness_has_positive_margin():
    s = LinearSystem(
        2,
        le=[((1, 0), 3)],
        strict=[((1, 1), 2), ((-1, 0), 0), ((0, -1), 0)],
    )
    res = strict_feasible(s)
    assert res.feasible
    x = res.witness
    for normal, rhs in s.strict:
        assert sum(a * v for a, v in zip(normal, x)) < rhs


def test_equality_rows_and_duals():
    s = LinearSystem(2, le=[((-1, 0), -1)], eq=[((1, 1), 3)])
    out = lp_solve((1, 0), s)
    assert out.status is LpStatus.OPTIMAL
    assert out.primal_point == (F(1), F(2))
    assert out.objective_value == F(1)
    verify_outcome((1, 0), s, "min", out)


def test_determinism():
    s = LinearSystem(
        3,
        le=[
            ((1, 1, 1), 5),
            ((1, -1, 0), 2),
            ((-1, 0, 0), 0),
            ((0, -1, 0), 0),
            ((0, 0, -1), 0),
            ((2, 1, -1), 4),
        ],
    )
    a = lp_solve((-1, -2, 1), s)
    b = lp_solve((-1, -2, 1), s)
    assert a == b


coeff = st.integers(min_value=-4, max_value=4)


@st.composite
def bounded_lp(draw):
    """A box plus up to three random cuts: bounded, usually full-dimensional."""
    n = draw(st.integers(min_value=1, max_value=3))
    le = []
    for j in range(n):
        hi = draw(st.integers(min_value=0, max_value=4))
        lo = draw(st.integers(min_value=-4, max_value=hi))
        row_hi = tuple(1 if k == j else 0 for k in range(n))
        row_lo = tuple(-1 if k == j else 0 for k in range(n))
        le.append((row_hi, hi))
        le.append((row_lo, -lo))
    ncuts = draw(st.integers(min_value=0, max_value=3))
    for _ in range(ncuts):
        normal = tuple(draw(coeff) for _ in range(n))
        rhs = draw(st.integers(min_value=-6, max_value=12))
        le.append((normal, rhs))
    objective = tuple(draw(coeff) for _ in range(n))
    sense = draw(st.sampled_from(["min", "max"]))
    return objective, LinearSystem(n, le=tuple(le)), sense


@settings(max_examples=120, deadline=None)
@given(bounded_lp())
def test_random_bounded_lp_matches_brute_force(case):
    objective, system, sense = case
    out = lp_solve(objective, system, sense)
    oracle = brute_force_optimum([F(c) for c in objective], system, sense)
    if oracle is None:
        # No basic feasible point of a bounded system means empty.
        assert out.status is LpStatus.INFEASIBLE
    else:
        assert out.status is LpStatus.OPTIMAL
        assert out.objective_value == oracle


@settings(max_examples=60, deadline=None)
@given(bounded_lp(), st.lists(st.tuples(st.lists(coeff, min_size=1, max_size=3), coeff), max_size=2))
def test_strict_feasible_monotone_under_added_rows(case, extra):
    objective, system, sense = case
    base = LinearSystem(
        system.dim,
        le=system.le[: len(system.le) // 2],
        strict=system.le[len(system.le) // 2 :],
    )
    before = strict_feasible(base).feasible
    rows = [
        ((tuple(normal) + (0,) * system.dim)[: system.dim], rhs)
        for normal, rhs in extra
    ]
    after = strict_feasible(base.extended(strict=rows)).feasible
    if not before:
        assert not after
