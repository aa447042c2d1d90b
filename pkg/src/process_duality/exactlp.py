"""Exact rational linear programming.

Two-phase primal simplex with Bland's anti-cycling rule over arbitrary
precision rationals.  Every optimal solve returns a basic point together with
dual multipliers, and the full optimality certificate (row feasibility, dual
signs, stationarity, complementary slackness, strong duality) is re-checked
exactly before the outcome is returned.

Strict-inequality feasibility is decided by maximizing a shared slack added to
every strict row: the system has a strictly feasible point iff the optimal
slack is positive.  No epsilons, no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from . import _kernel
from .errors import DimensionMismatch, InternalConsistencyError
from .rational import ONE, ZERO, Vec, dot, vec

Row = tuple[Vec, Fraction]


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _rows(dim: int, rows) -> tuple[Row, ...]:
    out = []
    for normal, rhs in rows:
        normal = vec(normal)
        if len(normal) != dim:
            raise DimensionMismatch(
                f"row width {len(normal)} does not match dimension {dim}"
            )
        out.append((normal, Fraction(rhs)))
    return tuple(out)


@dataclass(frozen=True)
class LinearSystem:
    """A·x <= b, E·x = d, C·x < s over a common ambient dimension."""

    dim: int
    le: tuple[Row, ...] = ()
    eq: tuple[Row, ...] = ()
    strict: tuple[Row, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "le", _rows(self.dim, self.le))
        object.__setattr__(self, "eq", _rows(self.dim, self.eq))
        object.__setattr__(self, "strict", _rows(self.dim, self.strict))

    def extended(self, le=(), eq=(), strict=()) -> "LinearSystem":
        return LinearSystem(
            self.dim,
            self.le + _rows(self.dim, le),
            self.eq + _rows(self.dim, eq),
            self.strict + _rows(self.dim, strict),
        )


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    primal_point: Optional[Vec] = None
    objective_value: Optional[Fraction] = None
    dual_le: Optional[Vec] = None
    dual_eq: Optional[Vec] = None

    @property
    def dual_multipliers(self) -> Optional[Vec]:
        if self.dual_le is None:
            return None
        return self.dual_le + self.dual_eq


@dataclass(frozen=True)
class StrictFeasibility:
    feasible: bool
    witness: Optional[Vec] = None

    def __bool__(self) -> bool:
        return self.feasible


def _simplex(nums, dens, basis, m, allowed, width, rhs_c) -> str:
    while True:
        e = _kernel.bland_entering(nums[m], allowed, width)
        if e < 0:
            return "optimal"
        l = _kernel.bland_leaving(nums, dens, basis, e, m, rhs_c)
        if l < 0:
            return "unbounded"
        _kernel.pivot(nums, dens, l, e)
        basis[l] = e


def _set_cell(nums, dens, i, j, value: Fraction):
    nums[i][j] = value.numerator
    dens[i][j] = value.denominator


def _get_cell(nums, dens, i, j) -> Fraction:
    return Fraction(nums[i][j], dens[i][j])


def _solve_square(matrix, rhs) -> list[Fraction]:
    """Exact Gaussian elimination; `matrix` must be invertible."""
    m = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    perm = list(range(m))
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            raise InternalConsistencyError("singular basis matrix")
        a[col], a[piv] = a[piv], a[col]
        perm[col], perm[piv] = perm[piv], perm[col]
        pval = a[col][col]
        a[col] = [x / pval for x in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][m] for i in range(m)]


def lp_solve(objective, system: LinearSystem, sense: str = "min") -> LpOutcome:
    """Exact optimum of a linear objective over an LE/EQ system.

    On OPTIMAL the returned point is basic (a vertex or a point on a minimal
    face) and the dual multipliers certify optimality exactly:
    dual_le >= 0, A^T.dual_le + E^T.dual_eq = -c (min) / +c (max), exact
    complementary slackness, and equal primal and dual objective values.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"unknown sense {sense!r}")
    if system.strict:
        raise ValueError("lp_solve does not accept strict rows")
    c = vec(objective)
    n = system.dim
    if len(c) != n:
        raise DimensionMismatch(f"objective width {len(c)} != dimension {n}")
    cmin = c if sense == "min" else tuple(-x for x in c)

    rows = [(normal, rhs, "le") for normal, rhs in system.le]
    rows += [(normal, rhs, "eq") for normal, rhs in system.eq]
    m = len(rows)
    n_le = len(system.le)

    flipped = [False] * m
    norm_rows: list[tuple[Vec, Fraction]] = []
    for i, (normal, rhs, kind) in enumerate(rows):
        if rhs < 0:
            flipped[i] = True
            norm_rows.append((tuple(-x for x in normal), -rhs))
        else:
            norm_rows.append((normal, rhs))

    # Columns: x+ (n), x- (n), one slack per LE row, artificials as needed.
    slack_col = {}
    for i in range(n_le):
        slack_col[i] = 2 * n + i
    art_start = 2 * n + n_le
    art_col = {}
    for i, (_, _, kind) in enumerate(rows):
        needs_art = kind == "eq" or flipped[i]
        if needs_art:
            art_col[i] = art_start + len(art_col)
    width = art_start + len(art_col)
    rhs_c = width

    # Standard-form matrix kept for dual extraction (Fractions, cold path).
    std = []
    for i, (normal, rhs) in enumerate(norm_rows):
        line = [ZERO] * width
        for j in range(n):
            line[j] = normal[j]
            line[n + j] = -normal[j]
        if rows[i][2] == "le":
            line[slack_col[i]] = -ONE if flipped[i] else ONE
        if i in art_col:
            line[art_col[i]] = ONE
        std.append((line, rhs))

    nums = [[f.numerator for f in line] + [rhs.numerator] for line, rhs in std]
    dens = [[f.denominator for f in line] + [rhs.denominator] for line, rhs in std]

    basis = []
    for i in range(m):
        if i in art_col:
            basis.append(art_col[i])
        else:
            basis.append(slack_col[i])

    # Phase 1: minimize the sum of artificials.
    obj = [ZERO] * (width + 1)
    for i in art_col:
        line, rhs = std[i]
        for j in range(width):
            obj[j] -= line[j]
        obj[width] -= rhs
    for i in art_col:
        obj[art_col[i]] += ONE  # cost of the artificial itself
    nums.append([f.numerator for f in obj])
    dens.append([f.denominator for f in obj])
    allowed = [1] * width
    outcome = _simplex(nums, dens, basis, m, allowed, width, rhs_c)
    if outcome != "optimal":
        raise InternalConsistencyError("phase 1 cannot be unbounded")
    phase1 = -_get_cell(nums, dens, m, rhs_c)
    if phase1 != 0:
        return LpOutcome(LpStatus.INFEASIBLE)

    # Drive artificials out of the basis; drop rows that became redundant.
    drop = []
    for i in range(m):
        if basis[i] >= art_start:
            piv_j = next(
                (j for j in range(art_start) if nums[i][j] != 0), None
            )
            if piv_j is None:
                drop.append(i)
            else:
                _kernel.pivot(nums, dens, i, piv_j)
                basis[i] = piv_j
    kept = [i for i in range(m) if i not in drop]
    if drop:
        nums = [nums[i] for i in kept] + [nums[m]]
        dens = [dens[i] for i in kept] + [dens[m]]
        basis = [basis[i] for i in kept]
    m_eff = len(kept)

    # Phase 2 objective over the current basis.
    cost = [ZERO] * width
    for j in range(n):
        cost[j] = cmin[j]
        cost[n + j] = -cmin[j]
    obj = list(cost) + [ZERO]
    for i in range(m_eff):
        cb = cost[basis[i]]
        if cb != 0:
            for j in range(width + 1):
                obj[j] -= cb * _get_cell(nums, dens, i, j)
    nums[m_eff] = [f.numerator for f in obj]
    dens[m_eff] = [f.denominator for f in obj]
    allowed = [1 if j < art_start else 0 for j in range(width)]
    outcome = _simplex(nums, dens, basis, m_eff, allowed, width, rhs_c)
    if outcome == "unbounded":
        return LpOutcome(LpStatus.UNBOUNDED)

    xplus = [ZERO] * n
    xminus = [ZERO] * n
    for i in range(m_eff):
        b = _get_cell(nums, dens, i, rhs_c)
        if basis[i] < n:
            xplus[basis[i]] = b
        elif basis[i] < 2 * n:
            xminus[basis[i] - n] = b
    point = tuple(p - q for p, q in zip(xplus, xminus))
    value_min = dot(cmin, point)
    value = value_min if sense == "min" else -value_min

    # Simplex multipliers: solve B^T.pi = cost_B on the kept rows.
    bt = [[std[kept[i]][0][basis[k]] for i in range(m_eff)] for k in range(m_eff)]
    cb = [cost[basis[k]] for k in range(m_eff)]
    pi_kept = _solve_square(bt, cb) if m_eff else []
    pi = [ZERO] * m
    for idx, i in enumerate(kept):
        pi[i] = pi_kept[idx]
    for i in range(m):
        if flipped[i]:
            pi[i] = -pi[i]
    dual_le = tuple(-pi[i] for i in range(n_le))
    dual_eq = tuple(-pi[n_le + i] for i in range(m - n_le))

    result = LpOutcome(LpStatus.OPTIMAL, point, value, dual_le, dual_eq)
    verify_outcome(c, system, sense, result)
    return result


def verify_outcome(objective, system: LinearSystem, sense: str, out: LpOutcome):
    """Exact optimality certificate; raises on any violated identity."""
    if out.status is not LpStatus.OPTIMAL:
        return
    c = vec(objective)
    x = out.primal_point
    for normal, rhs in system.le:
        if dot(normal, x) > rhs:
            raise InternalConsistencyError("primal point violates an LE row")
    for normal, rhs in system.eq:
        if dot(normal, x) != rhs:
            raise InternalConsistencyError("primal point violates an EQ row")
    y = out.dual_le
    mu = out.dual_eq
    if any(v < 0 for v in y):
        raise InternalConsistencyError("negative dual on an LE row")
    sign = -1 if sense == "min" else 1
    for j in range(system.dim):
        lhs = sum((y[i] * system.le[i][0][j] for i in range(len(y))), ZERO)
        lhs += sum((mu[i] * system.eq[i][0][j] for i in range(len(mu))), ZERO)
        if lhs != sign * c[j]:
            raise InternalConsistencyError("dual stationarity fails")
    for i, (normal, rhs) in enumerate(system.le):
        if y[i] != 0 and dot(normal, x) != rhs:
            raise InternalConsistencyError("complementary slackness fails")
    dual_val = sum((y[i] * system.le[i][1] for i in range(len(y))), ZERO)
    dual_val += sum((mu[i] * system.eq[i][1] for i in range(len(mu))), ZERO)
    # sense == "min": c.x == -(b.y + d.mu); sense == "max": c.x == b.y + d.mu
    expected = -dual_val if sense == "min" else dual_val
    if dot(c, x) != expected:
        raise InternalConsistencyError("strong duality fails")
    if dot(c, x) != out.objective_value:
        raise InternalConsistencyError("objective value mismatch")


def strict_feasible(system: LinearSystem) -> StrictFeasibility:
    """True iff some point satisfies all LE, EQ, and strict rows, the strict
    ones with a literally positive margin.  Decided by maximizing a shared
    slack t added to every strict row (capped at 1); feasible iff t* > 0."""
    n = system.dim
    le = [(tuple(normal) + (ZERO,), rhs) for normal, rhs in system.le]
    for normal, rhs in system.strict:
        le.append((tuple(normal) + (ONE,), rhs))
    le.append(((ZERO,) * n + (ONE,), ONE))
    eq = [(tuple(normal) + (ZERO,), rhs) for normal, rhs in system.eq]
    ext = LinearSystem(n + 1, tuple(le), tuple(eq))
    objective = (ZERO,) * n + (ONE,)
    out = lp_solve(objective, ext, "max")
    if out.status is LpStatus.INFEASIBLE:
        return StrictFeasibility(False)
    if out.status is not LpStatus.OPTIMAL:
        raise InternalConsistencyError("slack maximization cannot be unbounded")
    if out.objective_value > 0:
        return StrictFeasibility(True, out.primal_point[:n])
    return StrictFeasibility(False)


def feasible_point(system: LinearSystem) -> Optional[Vec]:
    """A basic feasible point of the non-strict part, or None."""
    out = lp_solve((ZERO,) * system.dim, LinearSystem(system.dim, system.le, system.eq), "min")
    if out.status is LpStatus.OPTIMAL:
        return out.primal_point
    return None
