"""Polyhedra, polyhedral cones, and boundary-restricted sets.

Every `Polyhedron` carries both canonical representations: a minimal
H-representation (facet inequalities plus affine-hull equalities) and a
minimal V-representation (vertices, extreme rays, lineality basis).  The
canonical form scales each inequality row and each ray so that the first
nonzero coefficient is +-1 (positive leading sign where the sign is free)
and sorts everything lexicographically, which makes golden tests and report
output reproducible.

`BoundaryRestrictedPolyhedron` represents a closed polyhedron minus some of
its facets, each replaced by a retained closed sub-polyhedron.  Such sets are
handled exactly throughout via a decomposition into relatively open cells,
each an affine image of a linear system with strict rows, so membership and
emptiness reduce to strict-feasibility LPs and no not-necessarily-closed
projection is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from ._dd import cone_dd, reduce_mod_lines, rref, scale_primitive
from .errors import DimensionMismatch, InternalConsistencyError
from .exactlp import LinearSystem, LpStatus, lp_solve, strict_feasible
from .rational import (
    ONE,
    ZERO,
    Mat,
    Vec,
    dot,
    is_zero_vec,
    matvec,
    vadd,
    vec,
    zeros,
)

LE = "le"
EQ = "eq"


@dataclass(frozen=True, order=True)
class HRow:
    normal: Vec
    offset: Fraction
    rel: str = LE

    def scaled_canonical(self) -> "HRow":
        lead = next((x for x in self.normal if x != 0), None)
        if lead is None:
            raise InternalConsistencyError("zero normal in canonical row")
        c = abs(lead) if self.rel == LE else lead
        return HRow(
            tuple(x / c for x in self.normal), self.offset / c, self.rel
        )


def _canon_ray(r: Vec) -> Vec:
    lead = next(x for x in r if x != 0)
    c = abs(lead)
    return tuple(x / c for x in r)


def _canon_line(l: Vec) -> Vec:
    lead = next(x for x in l if x != 0)
    return tuple(x / lead for x in l)


@dataclass(frozen=True)
class VRep:
    vertices: tuple[Vec, ...] = ()
    rays: tuple[Vec, ...] = ()
    lines: tuple[Vec, ...] = ()


class Polyhedron:
    """Closed convex polyhedron with both canonical representations.

    Representations are computed lazily: constructing from rows defers the
    facet recomputation until `.hrep` is first read, and vice versa.  The
    canonical forms are unique per set, so equality and hashing compare the
    canonical H-representation.
    """

    __slots__ = ("dim", "_raw_hrep", "_raw_vrep", "_hrep", "_vrep")

    def __init__(self, dim, raw_hrep=None, raw_vrep=None, hrep=None, vrep=None):
        self.dim = dim
        self._raw_hrep = raw_hrep
        self._raw_vrep = raw_vrep
        self._hrep = hrep
        self._vrep = vrep

    # -- construction ----------------------------------------------------

    @staticmethod
    def empty(dim: int) -> "Polyhedron":
        row = HRow(zeros(dim), Fraction(-1), LE)
        return Polyhedron(dim, hrep=(row,), vrep=VRep())

    @staticmethod
    def from_hrep(dim: int, rows: Iterable) -> "Polyhedron":
        return Polyhedron(dim, raw_hrep=_coerce_rows(dim, rows))

    @staticmethod
    def from_vrep(dim, vertices=(), rays=(), lines=()) -> "Polyhedron":
        vertices = tuple(_coerce_point(dim, v) for v in vertices)
        rays = tuple(
            _coerce_point(dim, r) for r in rays if not is_zero_vec(vec(r))
        )
        lines = tuple(
            _coerce_point(dim, l) for l in lines if not is_zero_vec(vec(l))
        )
        if not vertices:
            if rays or lines:
                raise InternalConsistencyError(
                    "a nonempty V-representation needs at least one vertex"
                )
            return Polyhedron.empty(dim)
        return Polyhedron(dim, raw_vrep=VRep(vertices, rays, lines))

    @staticmethod
    def full_space(dim: int) -> "Polyhedron":
        return Polyhedron.from_hrep(dim, ())

    # -- lazy canonical representations -----------------------------------

    @property
    def vrep(self) -> VRep:
        if self._vrep is None:
            if self._hrep is not None:
                self._vrep = _hrep_to_vrep(self.dim, self._hrep)
            elif self._raw_hrep is not None:
                self._vrep = _hrep_to_vrep(self.dim, self._raw_hrep)
            else:
                # canonical rows first, then the minimal generators
                self._vrep = _hrep_to_vrep(self.dim, self.hrep)
        return self._vrep

    @property
    def hrep(self) -> tuple[HRow, ...]:
        if self._hrep is None:
            if self._raw_vrep is not None:
                self._hrep = _vrep_to_hrep(self.dim, self._raw_vrep)
            else:
                v = self.vrep
                if not v.vertices:
                    self._hrep = Polyhedron.empty(self.dim).hrep
                else:
                    self._hrep = _vrep_to_hrep(self.dim, v)
        return self._hrep

    def _any_hrep(self):
        """Some valid row list for this set (canonical if already computed)."""
        if self._hrep is not None:
            return self._hrep
        if self._raw_hrep is not None:
            return self._raw_hrep
        return self.hrep

    def _any_vrep(self) -> VRep:
        if self._vrep is not None:
            return self._vrep
        if self._raw_vrep is not None:
            return self._raw_vrep
        return self.vrep

    # -- basic queries ---------------------------------------------------

    @property
    def is_empty(self) -> bool:
        if self._raw_vrep is not None or self._vrep is not None:
            return not self._any_vrep().vertices
        return not self.vrep.vertices

    def inequalities(self) -> tuple[HRow, ...]:
        return tuple(r for r in self.hrep if r.rel == LE)

    def equalities(self) -> tuple[HRow, ...]:
        return tuple(r for r in self.hrep if r.rel == EQ)

    def system(self) -> LinearSystem:
        rows = self._any_hrep()
        return LinearSystem(
            self.dim,
            le=tuple((r.normal, r.offset) for r in rows if r.rel == LE),
            eq=tuple((r.normal, r.offset) for r in rows if r.rel == EQ),
        )

    def member(self, x) -> bool:
        x = _coerce_point(self.dim, x)
        if self._raw_vrep is not None and self._hrep is None:
            self.hrep  # force facets once; membership is then arithmetic
        for row in self._any_hrep():
            v = dot(row.normal, x)
            if row.rel == LE and v > row.offset:
                return False
            if row.rel == EQ and v != row.offset:
                return False
        return True

    def ray_member(self, r) -> bool:
        """Is r in the recession cone?"""
        r = _coerce_point(self.dim, r)
        if self._raw_vrep is not None and self._hrep is None:
            self.hrep
        for row in self._any_hrep():
            v = dot(row.normal, r)
            if row.rel == LE and v > 0:
                return False
            if row.rel == EQ and v != 0:
                return False
        return True

    def contains_poly(self, other: "Polyhedron") -> bool:
        if other.is_empty:
            return True
        v = other._any_vrep()
        return (
            all(self.member(x) for x in v.vertices)
            and all(self.ray_member(r) for r in v.rays)
            and all(
                self.ray_member(l) and self.ray_member(vec(-x for x in l))
                for l in v.lines
            )
        )

    def same_set(self, other: "Polyhedron") -> bool:
        return self == other

    def check_consistency(self):
        """Mutual containment of the two representations (test hook)."""
        probe = Polyhedron.from_hrep(self.dim, self.hrep)
        v = self.vrep
        if not (
            probe.contains_poly(self)
            and all(probe.member(x) for x in v.vertices)
            and all(probe.ray_member(r) for r in v.rays)
        ):
            raise InternalConsistencyError("representations disagree")
        w = probe.vrep
        if (w.vertices, w.rays, w.lines) != (v.vertices, v.rays, v.lines):
            raise InternalConsistencyError("representations disagree")
        return self

    def __eq__(self, other):
        return (
            isinstance(other, Polyhedron)
            and self.dim == other.dim
            and self.hrep == other.hrep
        )

    def __hash__(self):
        return hash((self.dim, self.hrep))

    def __repr__(self):
        if self.is_empty:
            return f"Polyhedron.empty({self.dim})"
        return f"Polyhedron(dim={self.dim})"

    # -- geometry --------------------------------------------------------

    def intersect(self, *others: "Polyhedron") -> "Polyhedron":
        rows = list(self._any_hrep())
        for o in others:
            if o.dim != self.dim:
                raise DimensionMismatch("intersection of different dimensions")
            rows += list(o._any_hrep())
        return Polyhedron.from_hrep(self.dim, rows)

    def with_rows(self, rows) -> "Polyhedron":
        return Polyhedron.from_hrep(self.dim, tuple(self._any_hrep()) + _coerce_rows(self.dim, rows))

    def translate(self, t) -> "Polyhedron":
        t = _coerce_point(self.dim, t)
        if self.is_empty:
            return self
        v = self._any_vrep()
        return Polyhedron.from_vrep(
            self.dim,
            [vadd(x, t) for x in v.vertices],
            v.rays,
            v.lines,
        )

    def affine_image(self, matrix: Mat, offset=None, out_dim: Optional[int] = None) -> "Polyhedron":
        """Exact image under x -> M.x + o, computed on generators."""
        matrix = tuple(vec(row) for row in matrix)
        out_dim = len(matrix) if out_dim is None else out_dim
        offset = zeros(out_dim) if offset is None else _coerce_point(out_dim, offset)
        if self.is_empty:
            return Polyhedron.empty(out_dim)
        src_v = self._any_vrep()
        verts = [vadd(matvec(matrix, v), offset) for v in src_v.vertices]
        rays = [matvec(matrix, r) for r in src_v.rays]
        lines = [matvec(matrix, l) for l in src_v.lines]
        return Polyhedron.from_vrep(out_dim, verts, rays, lines)

    def minkowski_sum(self, other: "Polyhedron") -> "Polyhedron":
        if self.dim != other.dim:
            raise DimensionMismatch("Minkowski sum of different dimensions")
        if self.is_empty or other.is_empty:
            return Polyhedron.empty(self.dim)
        va, vb = self._any_vrep(), other._any_vrep()
        verts = [vadd(a, b) for a in va.vertices for b in vb.vertices]
        return Polyhedron.from_vrep(
            self.dim,
            verts,
            va.rays + vb.rays,
            va.lines + vb.lines,
        )


class PolyhedralCone(Polyhedron):
    """Polyhedron with zero offsets; the only vertex is the origin."""

    @staticmethod
    def from_generators(dim, rays=(), lines=()) -> "PolyhedralCone":
        p = Polyhedron.from_vrep(dim, [zeros(dim)], rays, lines)
        return PolyhedralCone(dim, raw_hrep=p._raw_hrep, raw_vrep=p._raw_vrep, hrep=p._hrep, vrep=p._vrep)

    @staticmethod
    def from_normals(dim, ineq_normals=(), eq_normals=()) -> "PolyhedralCone":
        rows = [HRow(vec(n), ZERO, LE) for n in ineq_normals]
        rows += [HRow(vec(n), ZERO, EQ) for n in eq_normals]
        p = Polyhedron.from_hrep(dim, rows)
        return PolyhedralCone(dim, raw_hrep=p._raw_hrep, raw_vrep=p._raw_vrep, hrep=p._hrep, vrep=p._vrep)

    @staticmethod
    def from_polyhedron(p: Polyhedron) -> "PolyhedralCone":
        if any(r.offset != 0 for r in p.hrep) or p.vrep.vertices != (zeros(p.dim),):
            raise InternalConsistencyError("not a cone")
        return PolyhedralCone(p.dim, raw_hrep=p._raw_hrep, raw_vrep=p._raw_vrep, hrep=p._hrep, vrep=p._vrep)

    @property
    def generators(self) -> tuple[Vec, ...]:
        return self.vrep.rays

    @property
    def lineality(self) -> tuple[Vec, ...]:
        return self.vrep.lines


# -- representation conversion helpers -----------------------------------


def _coerce_point(dim, x) -> Vec:
    x = vec(x)
    if len(x) != dim:
        raise DimensionMismatch(f"point of length {len(x)} in dimension {dim}")
    return x


def _coerce_rows(dim, rows) -> tuple[HRow, ...]:
    out = []
    for row in rows:
        if isinstance(row, HRow):
            r = row
        else:
            normal, offset, rel = row
            r = HRow(vec(normal), Fraction(offset), rel)
        if len(r.normal) != dim:
            raise DimensionMismatch("row width does not match dimension")
        if r.rel not in (LE, EQ):
            raise ValueError(f"unknown relation {r.rel!r}")
        out.append(r)
    return tuple(out)


def _hrep_to_vrep(dim: int, rows: tuple[HRow, ...]) -> VRep:
    """Homogenize, run double description, split by the t coordinate."""
    ineq = []
    eq = []
    for row in rows:
        lifted = row.normal + (-row.offset,)
        (ineq if row.rel == LE else eq).append(lifted)
    ineq.append(zeros(dim) + (-ONE,))  # t >= 0
    lines, rays = cone_dd(dim + 1, ineq, eq)
    vertices = []
    rec_rays = []
    rec_lines = []
    for l in lines:
        if l[dim] != 0:
            raise InternalConsistencyError("homogenization line with t != 0")
        rec_lines.append(l[:dim])
    for r in rays:
        t = r[dim]
        if t > 0:
            vertices.append(tuple(x / t for x in r[:dim]))
        else:
            rec_rays.append(r[:dim])
    if not vertices:
        return VRep()
    lines_c, pivots = rref(rec_lines, dim)
    lines_c = [_canon_line(scale_primitive(l)) for l in lines_c]
    rays_c = sorted(
        {
            _canon_ray(scale_primitive(rr))
            for r in rec_rays
            if not is_zero_vec(rr := reduce_mod_lines(r, lines_c, pivots))
        }
    )
    verts_c = sorted({_reduce_vertex(v, lines_c, pivots) for v in vertices})
    return VRep(tuple(verts_c), tuple(rays_c), tuple(sorted(lines_c)))


def _reduce_vertex(v: Vec, lines, pivots) -> Vec:
    return reduce_mod_lines(v, lines, pivots)


def _vrep_to_hrep(dim: int, vrep: VRep) -> tuple[HRow, ...]:
    """Facets via the polar of the homogenization cone."""
    ineq = [v + (ONE,) for v in vrep.vertices]
    ineq += [r + (ZERO,) for r in vrep.rays]
    eq = [l + (ZERO,) for l in vrep.lines]
    # Polar of cone{(v,1),(r,0),(l,0)}: {(a,b) : a.v + b <= 0, a.r <= 0, a.l = 0}
    lines, rays = cone_dd(dim + 1, [tuple(g) for g in ineq], [tuple(g) for g in eq])
    rows = []
    for r in rays:
        a, b = r[:dim], r[dim]
        if is_zero_vec(a):
            continue  # 0.x <= -b with b <= 0: trivial
        rows.append(HRow(a, -b, LE).scaled_canonical())
    for l in lines:
        a, b = l[:dim], l[dim]
        if is_zero_vec(a):
            raise InternalConsistencyError("trivial equality in polar")
        rows.append(HRow(a, -b, EQ).scaled_canonical())
    return tuple(sorted(set(rows)))


# -- spec surface operations ----------------------------------------------


def dd_convert(p: Polyhedron, direction: str) -> Polyhedron:
    """Recompute both canonical representations from the named source."""
    if direction == "HtoV":
        return Polyhedron.from_hrep(p.dim, p.hrep)
    if direction == "VtoH":
        return Polyhedron.from_vrep(
            p.dim, p.vrep.vertices, p.vrep.rays, p.vrep.lines
        )
    raise ValueError(f"unknown direction {direction!r}")


def polar_cone(k: PolyhedralCone, sign: str = "negative") -> PolyhedralCone:
    """Negative polar {e : <e,g> <= 0 for all generators}, or its negation."""
    if sign not in ("negative", "positive"):
        raise ValueError(f"unknown polar sign {sign!r}")
    lines, rays = cone_dd(k.dim, list(k.generators), list(k.lineality))
    if sign == "positive":
        rays = [tuple(-x for x in r) for r in rays]
    return PolyhedralCone.from_generators(k.dim, rays, lines)


def project(p: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Exact orthogonal projection onto the kept coordinates."""
    keep = tuple(keep)
    if any(j < 0 or j >= p.dim for j in keep):
        raise DimensionMismatch("projection indices out of range")
    if p.is_empty:
        return Polyhedron.empty(len(keep))
    pick = lambda x: tuple(x[j] for j in keep)
    return Polyhedron.from_vrep(
        len(keep),
        [pick(v) for v in p.vrep.vertices],
        [pick(r) for r in p.vrep.rays],
        [pick(l) for l in p.vrep.lines],
    )


@dataclass(frozen=True)
class ConeStructure:
    lineality_dim: int
    is_pointed: bool
    has_bounded_base: bool
    base: Optional[Polyhedron]
    functional: Optional[Vec]


def cone_structure(k: PolyhedralCone) -> ConeStructure:
    """Pointedness and (for polyhedral cones) the bounded-base test.

    A pointed polyhedral cone always admits a bounded base: the convex hull
    of its generators normalized against a strictly positive functional from
    the interior of the positive polar.  The zero cone is reported pointed
    with no base.
    """
    ldim = len(k.lineality)
    pointed = ldim == 0
    if not pointed:
        return ConeStructure(ldim, False, False, None, None)
    rays = k.generators
    if not rays:
        return ConeStructure(0, True, True, None, None)
    h = _positive_functional(k.dim, rays)
    if h is None:
        raise InternalConsistencyError("pointed cone without positive functional")
    base = Polyhedron.from_vrep(k.dim, [tuple(x / dot(h, r) for x in r) for r in rays])
    return ConeStructure(0, True, True, base, h)


def _positive_functional(dim, rays) -> Optional[Vec]:
    """Deterministic h with <h, r> >= 1 on every ray (L1-minimal), or None."""
    width = 2 * dim  # h split into h+ - h-
    le = []
    for r in rays:
        row = tuple(-x for x in r) + tuple(r)
        le.append((row, -ONE))
    for j in range(width):
        le.append((tuple(-ONE if i == j else ZERO for i in range(width)), ZERO))
    out = lp_solve((ONE,) * width, LinearSystem(width, le=tuple(le)), "min")
    if out.status is not LpStatus.OPTIMAL:
        return None
    x = out.primal_point
    return tuple(x[j] - x[dim + j] for j in range(dim))


# -- boundary-restricted polyhedra ----------------------------------------


@dataclass(frozen=True)
class BoundaryRestriction:
    """Restriction on the boundary slice {x : normal.x = offset} of a closure.

    The row normal.x <= offset must be valid for the closure; the represented
    set keeps only `retained` out of that slice.
    """

    normal: Vec
    offset: Fraction
    retained: Polyhedron

    def canonical(self) -> "BoundaryRestriction":
        row = HRow(vec(self.normal), Fraction(self.offset), LE).scaled_canonical()
        return BoundaryRestriction(row.normal, row.offset, self.retained)


class BoundaryRestrictedPolyhedron:
    """closure minus each restricted boundary slice, plus its retained part.

    A point on a restricted hyperplane is a member iff it lies in the
    retained sub-polyhedron (for every restricted hyperplane through it).
    Restrictions are keyed by the hyperplane row rather than a facet index so
    that exact intersection with further rows stays representable.
    """

    __slots__ = ("closure", "restrictions")

    def __init__(self, closure: Polyhedron, restrictions: Sequence[BoundaryRestriction]):
        if closure.is_empty and restrictions:
            raise InternalConsistencyError("restrictions on an empty closure")
        canon = []
        for fr in restrictions:
            fr = fr.canonical()
            if fr.retained.dim != closure.dim:
                raise DimensionMismatch("retained set in wrong dimension")
            valid = all(
                dot(fr.normal, v) <= fr.offset for v in closure.vrep.vertices
            ) and all(
                dot(fr.normal, r) <= 0 for r in closure.vrep.rays
            ) and all(dot(fr.normal, l) == 0 for l in closure.vrep.lines)
            if not valid:
                raise InternalConsistencyError(
                    "restricted row is not valid for the closure"
                )
            if not fr.retained.is_empty:
                hyper = Polyhedron.from_hrep(
                    closure.dim,
                    tuple(closure.hrep) + (HRow(fr.normal, fr.offset, EQ),),
                )
                if not hyper.contains_poly(fr.retained):
                    raise InternalConsistencyError(
                        "retained set leaves its restricted slice"
                    )
            off = strict_feasible(
                closure.system().extended(strict=[(fr.normal, fr.offset)])
            )
            if not off.feasible:
                raise InternalConsistencyError(
                    "restricted row is an implicit equality of the closure"
                )
            canon.append(fr)
        self.closure = closure
        self.restrictions = tuple(canon)

    @staticmethod
    def from_facet_indices(closure: Polyhedron, pairs) -> "BoundaryRestrictedPolyhedron":
        """pairs: (index into closure.inequalities(), retained Polyhedron)."""
        facets = closure.inequalities()
        restrictions = []
        for idx, retained in pairs:
            if not 0 <= idx < len(facets):
                raise InternalConsistencyError("facet index out of range")
            row = facets[idx]
            restrictions.append(BoundaryRestriction(row.normal, row.offset, retained))
        return BoundaryRestrictedPolyhedron(closure, restrictions)

    def facet_restrictions(self) -> tuple[tuple[Optional[int], BoundaryRestriction], ...]:
        """Restrictions resolved to canonical facet indices where possible."""
        facets = self.closure.inequalities()
        out = []
        for fr in self.restrictions:
            key = HRow(fr.normal, fr.offset, LE)
            idx = next((i for i, row in enumerate(facets) if row == key), None)
            out.append((idx, fr))
        return tuple(out)

    @property
    def dim(self) -> int:
        return self.closure.dim

    @property
    def is_empty(self) -> bool:
        return not any(c.is_feasible() for c in as_cells(self))

    def member(self, x) -> bool:
        x = _coerce_point(self.dim, x)
        if not self.closure.member(x):
            return False
        for fr in self.restrictions:
            if dot(fr.normal, x) == fr.offset and not fr.retained.member(x):
                return False
        return True

    def __repr__(self):
        return (
            f"BoundaryRestrictedPolyhedron({self.closure!r}, "
            f"{len(self.restrictions)} restricted slice(s))"
        )


def member(p, x) -> bool:
    """Exact membership for Polyhedron or BoundaryRestrictedPolyhedron."""
    return p.member(x)


# -- cells: relatively open pieces behind an affine map --------------------


@dataclass(frozen=True)
class Cell:
    """Affine image of a linear system that may carry strict rows.

    The represented subset of the target space is
    {M.u + o : u satisfies system (strict rows strictly)}.
    Every exact set query on boundary-restricted data is pulled back
    through cells, so nothing non-closed is ever projected.
    """

    system: LinearSystem
    matrix: Mat
    offset: Vec

    @property
    def target_dim(self) -> int:
        return len(self.offset)

    @property
    def lift_dim(self) -> int:
        return self.system.dim

    @property
    def is_identity(self) -> bool:
        n = self.target_dim
        if self.lift_dim != n or any(x != 0 for x in self.offset):
            return False
        return all(
            self.matrix[i][j] == (1 if i == j else 0)
            for i in range(n)
            for j in range(n)
        )

    def with_target_rows(self, le=(), eq=(), strict=()) -> "Cell":
        pull = lambda rows: tuple(
            (_pullback(self.matrix, c), Fraction(r) - dot(vec(c), self.offset))
            for c, r in rows
        )
        return Cell(
            self.system.extended(
                le=pull(le), eq=pull(eq), strict=pull(strict)
            ),
            self.matrix,
            self.offset,
        )

    def is_feasible(self) -> bool:
        return strict_feasible(self.system).feasible

    def feasible_witness(self) -> Optional[Vec]:
        res = strict_feasible(self.system)
        if not res.feasible:
            return None
        return vadd(matvec(self.matrix, res.witness), self.offset)

    def closure_image(self) -> Polyhedron:
        """Closed polyhedron: image of the lift with strict rows relaxed."""
        lift = Polyhedron.from_hrep(
            self.lift_dim,
            [(n, r, LE) for n, r in self.system.le]
            + [(n, r, LE) for n, r in self.system.strict]
            + [(n, r, EQ) for n, r in self.system.eq],
        )
        return lift.affine_image(self.matrix, self.offset, self.target_dim)

    def compose(self, matrix: Mat, offset: Vec) -> "Cell":
        """Cell for y = matrix.(M.u + o) + offset."""
        matrix = tuple(vec(r) for r in matrix)
        new_m = tuple(_pullback(self.matrix, row) for row in matrix)
        new_o = vadd(matvec(matrix, self.offset), vec(offset))
        return Cell(self.system, new_m, new_o)


def _transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def _pullback(matrix: Mat, coeffs) -> Vec:
    """Row vector c -> c.M (coefficients over the lift variables)."""
    coeffs = vec(coeffs)
    if len(coeffs) != len(matrix):
        raise DimensionMismatch("pullback coefficient length mismatch")
    width = len(matrix[0]) if matrix else 0
    return tuple(
        sum((coeffs[i] * matrix[i][j] for i in range(len(matrix))), ZERO)
        for j in range(width)
    )


def _identity(dim) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim))


def cell_of_polyhedron(p: Polyhedron) -> Cell:
    return Cell(p.system(), _identity(p.dim), zeros(p.dim))


def as_cells(obj) -> tuple[Cell, ...]:
    """Decompose Polyhedron | BRP | iterable of cells into exact cells."""
    if isinstance(obj, Polyhedron):
        if obj.is_empty:
            return ()
        return (cell_of_polyhedron(obj),)
    if isinstance(obj, BoundaryRestrictedPolyhedron):
        frs = obj.restrictions
        cells = []
        for k in range(len(frs) + 1):
            for on in combinations(range(len(frs)), k):
                sys_ = obj.closure.system()
                ok = True
                for i, fr in enumerate(frs):
                    if i in on:
                        if fr.retained.is_empty:
                            ok = False
                            break
                        sys_ = sys_.extended(eq=[(fr.normal, fr.offset)])
                        sys_ = sys_.extended(
                            le=[(r.normal, r.offset) for r in fr.retained.inequalities()],
                            eq=[(r.normal, r.offset) for r in fr.retained.equalities()],
                        )
                    else:
                        sys_ = sys_.extended(strict=[(fr.normal, fr.offset)])
                if ok:
                    cells.append(Cell(sys_, _identity(obj.dim), zeros(obj.dim)))
        return tuple(cells)
    if isinstance(obj, Cell):
        return (obj,)
    return tuple(c for piece in obj for c in as_cells(piece))


@dataclass(frozen=True)
class Emptiness:
    empty: bool
    witness: Optional[Vec] = None

    def __bool__(self):
        return self.empty


def intersect_empty(parts, strict_halfspaces=()) -> Emptiness:
    """Exact emptiness of the intersection of parts and open half-spaces.

    Parts may be Polyhedron, BoundaryRestrictedPolyhedron, or cells; every
    combination of cells is tested with one strict-feasibility LP on the
    joint lifted system.
    """
    groups = [as_cells(p) for p in parts]
    if any(not g for g in groups):
        return Emptiness(True)
    dims = {g[0].target_dim for g in groups}
    if len(dims) != 1:
        raise DimensionMismatch("intersection parts in different dimensions")
    target = dims.pop()
    strict_rows = [(vec(n), Fraction(r)) for n, r in strict_halfspaces]
    for combo in product(*groups):
        # identity cells constrain the shared target variables directly
        offset_of = []
        pos = target
        for c in combo:
            if c.is_identity:
                offset_of.append(0)
            else:
                offset_of.append(pos)
                pos += c.lift_dim
        width = pos
        le, eq, strict = [], [], []

        def emb(coeffs, at):
            row = [ZERO] * width
            for j, v in enumerate(coeffs):
                row[at + j] = v
            return tuple(row)

        for c, at in zip(combo, offset_of):
            for n, r in c.system.le:
                le.append((emb(n, at), r))
            for n, r in c.system.eq:
                eq.append((emb(n, at), r))
            for n, r in c.system.strict:
                strict.append((emb(n, at), r))
            if c.is_identity:
                continue
            # y = M.u + o, one equality per target coordinate
            for i in range(target):
                row = [ZERO] * width
                row[i] = ONE
                for j in range(c.lift_dim):
                    row[at + j] = -c.matrix[i][j]
                eq.append((tuple(row), c.offset[i]))
        for n, r in strict_rows:
            strict.append((emb(n, 0), r))
        res = strict_feasible(LinearSystem(width, tuple(le), tuple(eq), tuple(strict)))
        if res.feasible:
            return Emptiness(False, res.witness[:target])
    return Emptiness(True)


def set_member(obj, x) -> bool:
    """Membership that also works for cell collections."""
    if isinstance(obj, (Polyhedron, BoundaryRestrictedPolyhedron)):
        return obj.member(x)
    cells = as_cells(obj)
    if not cells:
        return False
    x = _coerce_point(cells[0].target_dim, x)
    eye = _identity(len(x))
    eqs = [(eye[i], x[i]) for i in range(len(x))]
    for c in cells:
        probe = c.with_target_rows(eq=eqs)
        if probe.is_feasible():
            return True
    return False


def closure_generators(obj):
    """Vertices/rays/lines of the closure of a cell-decomposable set."""
    verts, rays, lines = [], [], []
    for c in as_cells(obj):
        p = c.closure_image()
        if p.is_empty:
            continue
        verts += list(p.vrep.vertices)
        rays += list(p.vrep.rays)
        lines += list(p.vrep.lines)
    return verts, rays, lines


def closure_hull(obj, dim: int) -> Polyhedron:
    """Closed convex hull of the union of the cells' closures."""
    verts, rays, lines = closure_generators(obj)
    if not verts:
        return Polyhedron.empty(dim)
    return Polyhedron.from_vrep(dim, verts, rays, lines)
