"""Vector program data model: order cones, programs, feasible maps, graphs.

Supports affine continuous programs over a (possibly boundary-restricted)
convex Omega, finite discrete programs (sampled convex problems), and finite
set-valued programs whose constraint uses the intersection rule
G(x) meets (z - Z_+).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import (
    DimensionMismatch,
    EmptyProgramError,
    InternalConsistencyError,
    ProcessDualityError,
)
from .exactlp import LinearSystem, strict_feasible
from .polyhedra import (
    EQ,
    LE,
    BoundaryRestrictedPolyhedron,
    BoundaryRestriction,
    Cell,
    Polyhedron,
    PolyhedralCone,
    as_cells,
    cell_of_polyhedron,
    set_member,
)
from .rational import Mat, Vec, ZERO, dot, matvec, vadd, vec, vsub, zeros

OmegaLike = Union[Polyhedron, BoundaryRestrictedPolyhedron]


class OrderCone:
    """Full-dimensional polyhedral order cone with a cached interior witness.

    The cone must have nonempty interior (a standing structural requirement,
    validated once here via a strict LP) and must be a proper subset of its
    space, otherwise minimality would be vacuous.
    """

    __slots__ = ("cone", "ambient_dim", "interior_witness")

    def __init__(self, cone: PolyhedralCone):
        if not cone.hrep:
            raise InternalConsistencyError(
                "order cone equal to the whole space is not allowed"
            )
        if cone.equalities():
            raise InternalConsistencyError("order cone has empty interior")
        res = strict_feasible(
            LinearSystem(
                cone.dim,
                strict=tuple((r.normal, r.offset) for r in cone.inequalities()),
            )
        )
        if not res.feasible:
            raise InternalConsistencyError("order cone has empty interior")
        self.cone = cone
        self.ambient_dim = cone.dim
        self.interior_witness = res.witness

    @staticmethod
    def from_generators(dim: int, rays) -> "OrderCone":
        return OrderCone(PolyhedralCone.from_generators(dim, rays))

    @property
    def generators(self) -> tuple[Vec, ...]:
        return self.cone.generators

    @property
    def lineality(self) -> tuple[Vec, ...]:
        return self.cone.lineality

    @property
    def is_pointed(self) -> bool:
        return not self.cone.lineality

    def facet_normals(self) -> tuple[Vec, ...]:
        return tuple(r.normal for r in self.cone.inequalities())

    def contains(self, w) -> bool:
        return self.cone.member(w)

    def strictly_contains(self, w) -> bool:
        w = vec(w)
        if len(w) != self.ambient_dim:
            raise DimensionMismatch("interior test in wrong dimension")
        return all(dot(n, w) < 0 for n in self.facet_normals())

    def leq(self, a, b) -> bool:
        """a <= b in this cone order."""
        return self.contains(vsub(vec(b), vec(a)))

    def lt(self, a, b) -> bool:
        """a < b: difference in the interior."""
        return self.strictly_contains(vsub(vec(b), vec(a)))


@dataclass(frozen=True)
class AffineMap:
    matrix: Mat
    offset: Vec

    def __call__(self, x) -> Vec:
        return vadd(matvec(self.matrix, x), self.offset)

    @property
    def out_dim(self) -> int:
        return len(self.offset)

    @property
    def in_dim(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def linear_part(self, x) -> Vec:
        return matvec(self.matrix, x)


def affine_map(matrix, offset) -> AffineMap:
    matrix = tuple(vec(r) for r in matrix)
    offset = vec(offset)
    if len(matrix) != len(offset):
        raise DimensionMismatch("affine map rows do not match offset length")
    return AffineMap(matrix, offset)


class AffineVectorProgram:
    """Min f(x) over x in Omega with g(x) <= z in the Z_+ order."""

    kind = "affine"

    def __init__(self, omega: OmegaLike, f: AffineMap, g: AffineMap,
                 y_plus: OrderCone, z_plus: OrderCone):
        dim = omega.dim
        if f.in_dim != dim or g.in_dim != dim:
            raise DimensionMismatch("map input width does not match Omega")
        if f.out_dim != y_plus.ambient_dim:
            raise DimensionMismatch("f output width does not match Y_+")
        if g.out_dim != z_plus.ambient_dim:
            raise DimensionMismatch("g output width does not match Z_+")
        if not any(c.is_feasible() for c in as_cells(omega)):
            raise EmptyProgramError("Omega is empty")
        self.omega = omega
        self.f = f
        self.g = g
        self.y_plus = y_plus
        self.z_plus = z_plus

    @property
    def x_dim(self):
        return self.omega.dim

    @property
    def y_dim(self):
        return self.y_plus.ambient_dim

    @property
    def z_dim(self):
        return self.z_plus.ambient_dim


@dataclass(frozen=True)
class DiscretePoint:
    point_id: str
    f_value: Vec
    g_value: Vec


class DiscreteVectorProgram:
    """Finite sample of a convex program: explicit (f, g) value pairs."""

    kind = "discrete"

    def __init__(self, points: Sequence[DiscretePoint],
                 y_plus: OrderCone, z_plus: OrderCone):
        points = tuple(points)
        if not points:
            raise EmptyProgramError("no points")
        ids = [p.point_id for p in points]
        if len(set(ids)) != len(ids):
            raise ProcessDualityError("duplicate point ids")
        for p in points:
            if len(p.f_value) != y_plus.ambient_dim:
                raise DimensionMismatch("f value width")
            if len(p.g_value) != z_plus.ambient_dim:
                raise DimensionMismatch("g value width")
        self.points = points
        self.y_plus = y_plus
        self.z_plus = z_plus

    @property
    def y_dim(self):
        return self.y_plus.ambient_dim

    @property
    def z_dim(self):
        return self.z_plus.ambient_dim


@dataclass(frozen=True)
class SetValuedPoint:
    point_id: str
    f_values: tuple[Vec, ...]
    g_values: tuple[Vec, ...]


class SetValuedProgram:
    """Finite set-valued program; feasibility is G(x) meets (z - Z_+)."""

    kind = "setvalued"

    def __init__(self, points: Sequence[SetValuedPoint],
                 y_plus: OrderCone, z_plus: OrderCone):
        points = tuple(points)
        if not points:
            raise EmptyProgramError("no points")
        ids = [p.point_id for p in points]
        if len(set(ids)) != len(ids):
            raise ProcessDualityError("duplicate point ids")
        for p in points:
            if not p.f_values or not p.g_values:
                raise ProcessDualityError(f"point {p.point_id} has empty value set")
            for fv in p.f_values:
                if len(fv) != y_plus.ambient_dim:
                    raise DimensionMismatch("F value width")
            for gv in p.g_values:
                if len(gv) != z_plus.ambient_dim:
                    raise DimensionMismatch("G value width")
        self.points = points
        self.y_plus = y_plus
        self.z_plus = z_plus

    @property
    def y_dim(self):
        return self.y_plus.ambient_dim

    @property
    def z_dim(self):
        return self.z_plus.ambient_dim


Program = Union[AffineVectorProgram, DiscreteVectorProgram, SetValuedProgram]


# -- feasible map ----------------------------------------------------------


def _order_rows_for_g(p: AffineVectorProgram, z: Vec):
    """Rows over x expressing z - g(x) in Z_+."""
    rows = []
    for n in p.z_plus.facet_normals():
        normal = tuple(-dot(n, col) for col in zip(*p.g.matrix))
        rhs = dot(n, p.g.offset) - dot(n, z)
        rows.append((normal, rhs, LE))
    return rows


def feasible_region(p: Program, z):
    """The feasible set at level z.

    Affine programs return a Polyhedron or BoundaryRestrictedPolyhedron in
    x-space; finite programs return the tuple of feasible point ids.
    """
    if isinstance(p, AffineVectorProgram):
        z = _coerce(p.z_dim, z)
        rows = _order_rows_for_g(p, z)
        if isinstance(p.omega, Polyhedron):
            return p.omega.with_rows(rows)
        return restrict_brp(p.omega, rows)
    z = _coerce(p.z_dim, z)
    if isinstance(p, DiscreteVectorProgram):
        return tuple(
            pt.point_id for pt in p.points if p.z_plus.contains(vsub(z, pt.g_value))
        )
    return tuple(
        pt.point_id
        for pt in p.points
        if any(p.z_plus.contains(vsub(z, gv)) for gv in pt.g_values)
    )


def restrict_brp(brp: BoundaryRestrictedPolyhedron, rows):
    """Exact intersection of a boundary-restricted set with closed rows."""
    closure = brp.closure.with_rows(rows)
    pending = [
        (r.normal, r.offset, r.retained.with_rows(rows)) for r in brp.restrictions
    ]
    while True:
        if closure.is_empty:
            return closure
        keep = []
        restart = False
        for normal, offset, retained in pending:
            on_hyper = all(
                dot(normal, v) == offset for v in closure.vrep.vertices
            ) and all(
                dot(normal, r) == 0 for r in closure.vrep.rays
            ) and all(dot(normal, l) == 0 for l in closure.vrep.lines)
            if on_hyper:
                # Whole set lies on the restricted hyperplane: collapse.
                closure = closure.intersect(retained)
                pending = [x for x in pending if x[0] != normal or x[1] != offset]
                restart = True
                break
            touch = strict_feasible(
                closure.system().extended(eq=[(normal, offset)])
            ).feasible
            if touch:
                keep.append((normal, offset, retained))
        if restart:
            continue
        if not keep:
            return closure
        return BoundaryRestrictedPolyhedron(
            closure,
            [BoundaryRestriction(n, o, ret) for n, o, ret in keep],
        )


def _coerce(dim, z) -> Vec:
    z = vec(z)
    if len(z) != dim:
        raise DimensionMismatch(f"vector of length {len(z)}, expected {dim}")
    return z


# -- the graph of the upper image -------------------------------------------


def _product_cone_gens(p: Program):
    zdim, ydim = p.z_dim, p.y_dim
    rays = [tuple(g) + zeros(ydim) for g in p.z_plus.generators]
    rays += [zeros(zdim) + tuple(g) for g in p.y_plus.generators]
    lines = [tuple(l) + zeros(ydim) for l in p.z_plus.lineality]
    lines += [zeros(zdim) + tuple(l) for l in p.y_plus.lineality]
    return rays, lines


def _graph_map(p: AffineVectorProgram) -> AffineMap:
    matrix = tuple(p.g.matrix) + tuple(p.f.matrix)
    offset = tuple(p.g.offset) + tuple(p.f.offset)
    return AffineMap(matrix, offset)


def upper_image_graph(p: Program):
    """Exact graph of z -> W(z) + Y_+ in Z x Y.

    Affine programs over a plain Omega and finite programs yield a closed
    Polyhedron; a boundary-restricted Omega yields the exact boundary-
    restricted graph (restrictions are computed per facet from the reachable
    cell traces).
    """
    zdim, ydim = p.z_dim, p.y_dim
    dim = zdim + ydim
    krays, klines = _product_cone_gens(p)

    if isinstance(p, DiscreteVectorProgram):
        verts = [tuple(pt.g_value) + tuple(pt.f_value) for pt in p.points]
        return Polyhedron.from_vrep(dim, verts, krays, klines)
    if isinstance(p, SetValuedProgram):
        verts = [
            tuple(gv) + tuple(fv)
            for pt in p.points
            for gv in pt.g_values
            for fv in pt.f_values
        ]
        return Polyhedron.from_vrep(dim, verts, krays, klines)

    phi = _graph_map(p)
    closure_omega = (
        p.omega if isinstance(p.omega, Polyhedron) else p.omega.closure
    )
    verts = [phi(v) for v in closure_omega.vrep.vertices]
    rays = [phi.linear_part(r) for r in closure_omega.vrep.rays] + krays
    lines = [phi.linear_part(l) for l in closure_omega.vrep.lines] + klines
    g_cl = Polyhedron.from_vrep(dim, verts, rays, lines)
    if isinstance(p.omega, Polyhedron):
        return g_cl

    restrictions = []
    cells = as_cells(p.omega)
    for row in g_cl.inequalities():
        traces = []
        for cell in cells:
            trace = _facet_trace(cell, phi, krays, klines, row.normal, row.offset)
            if trace is not None and not trace.is_empty:
                traces.append(trace)
        facet = Polyhedron.from_hrep(
            dim, tuple(g_cl.hrep) + ((row.normal, row.offset, EQ),)
        )
        if not traces:
            retained = Polyhedron.empty(dim)
        else:
            vs, rs, ls = [], [], []
            for t in traces:
                vs += list(t.vrep.vertices)
                rs += list(t.vrep.rays)
                ls += list(t.vrep.lines)
            retained = Polyhedron.from_vrep(dim, vs, rs, ls)
        if retained != facet:
            restrictions.append(BoundaryRestriction(row.normal, row.offset, retained))
    if not restrictions:
        return g_cl
    return BoundaryRestrictedPolyhedron(g_cl, restrictions)


def _facet_trace(cell: Cell, phi: AffineMap, krays, klines, normal, offset):
    """(phi(cell) + K) on the hyperplane normal.w = offset, or None.

    Lift variables: (x, lambda for K rays >= 0, mu for K lines free).
    Reachability honours the cell's strict rows exactly; the returned trace
    is the closed image of the lift (relative-boundary overcount is the
    documented one-level NNC limit).
    """
    xdim = cell.lift_dim
    nk = len(krays)
    nl = len(klines)
    width = xdim + nk + nl
    out_dim = len(normal)

    def lift_row(coeffs_x, rhs):
        return (tuple(coeffs_x) + zeros(nk + nl), rhs)

    le = [lift_row(n, r) for n, r in cell.system.le]
    eq = [lift_row(n, r) for n, r in cell.system.eq]
    strict = [lift_row(n, r) for n, r in cell.system.strict]
    for i in range(nk):
        le.append((zeros(xdim) + tuple(-Fraction(int(i == j)) for j in range(nk)) + zeros(nl), ZERO))
    # w(x, lam, mu) = phi_matrix.(M x + o) ... cell map composes with phi.
    comp = cell.compose(phi.matrix, phi.offset)
    # w_i as a row over (x, lam, mu)
    w_rows = []
    for i in range(out_dim):
        row = list(comp.matrix[i]) + [krays[j][i] for j in range(nk)]
        row += [klines[j][i] for j in range(nl)]
        w_rows.append((tuple(row), comp.offset[i]))
    target = tuple(
        sum((normal[i] * w_rows[i][0][j] for i in range(out_dim)), ZERO)
        for j in range(width)
    )
    shift = sum((normal[i] * w_rows[i][1] for i in range(out_dim)), ZERO)
    eq.append((target, Fraction(offset) - shift))
    system = LinearSystem(width, tuple(le), tuple(eq), tuple(strict))
    if not strict_feasible(system).feasible:
        return None
    closed = Polyhedron.from_hrep(
        width,
        [(n, r, LE) for n, r in system.le]
        + [(n, r, LE) for n, r in system.strict]
        + [(n, r, EQ) for n, r in system.eq],
    )
    matrix = tuple(r for r, _ in w_rows)
    off = tuple(r for _, r in w_rows)
    return closed.affine_image(matrix, off, out_dim)


# -- Slater points -----------------------------------------------------------


def slater_point(p: Program):
    """A point with g strictly interior-negative, or None when none exists."""
    if isinstance(p, AffineVectorProgram):
        strict_rows = []
        for n in p.z_plus.facet_normals():
            normal = tuple(-dot(n, col) for col in zip(*p.g.matrix))
            strict_rows.append((normal, dot(n, p.g.offset)))
        for cell in as_cells(p.omega):
            probe = Cell(
                cell.system.extended(strict=strict_rows), cell.matrix, cell.offset
            )
            res = strict_feasible(probe.system)
            if res.feasible:
                return res.witness
        return None
    if isinstance(p, DiscreteVectorProgram):
        for pt in p.points:
            if p.z_plus.strictly_contains(tuple(-v for v in pt.g_value)):
                return pt.point_id
        return None
    for pt in p.points:
        if any(
            p.z_plus.strictly_contains(tuple(-v for v in gv)) for gv in pt.g_values
        ):
            return pt.point_id
    return None


# -- image cells of W(0) and membership --------------------------------------


def w0_cells(p: Program) -> tuple[Cell, ...]:
    """Exact cell decomposition of W(0) = f(feasible set at z = 0) in Y."""
    if isinstance(p, AffineVectorProgram):
        lam0 = feasible_region(p, zeros(p.z_dim))
        return tuple(
            c.compose(p.f.matrix, p.f.offset) for c in as_cells(lam0)
        )
    feas = set(feasible_region(p, zeros(p.z_dim)))
    cells = []
    for pt in p.points:
        if pt.point_id not in feas:
            continue
        values = (
            (pt.f_value,) if isinstance(p, DiscreteVectorProgram) else pt.f_values
        )
        for fv in values:
            cells.append(cell_of_polyhedron(Polyhedron.from_vrep(p.y_dim, [fv])))
    return tuple(cells)


def w0_image_points(p: Program) -> tuple[Vec, ...]:
    """Finite programs: the exact image point set of W(0), deduplicated."""
    feas = set(feasible_region(p, zeros(p.z_dim)))
    out = []
    for pt in p.points:
        if pt.point_id not in feas:
            continue
        values = (
            (pt.f_value,) if isinstance(p, DiscreteVectorProgram) else pt.f_values
        )
        for fv in values:
            if fv not in out:
                out.append(fv)
    return tuple(out)


def w0_member(p: Program, y0) -> bool:
    return set_member(w0_cells(p), y0)


# -- convex relaxation for finite programs -----------------------------------


def simplex_relaxation(p: Program) -> AffineVectorProgram:
    """Embed a finite program as an affine program over the standard simplex.

    Columns are the sampled (f, g) value pairs; the upper-image graph of the
    relaxation is exactly the convex hull used by the finite-program graph.
    """
    if isinstance(p, AffineVectorProgram):
        return p
    if isinstance(p, DiscreteVectorProgram):
        pairs = [(pt.f_value, pt.g_value) for pt in p.points]
    else:
        pairs = [
            (fv, gv)
            for pt in p.points
            for fv in pt.f_values
            for gv in pt.g_values
        ]
    k = len(pairs)
    rows = [(tuple(-Fraction(int(i == j)) for i in range(k)), 0, LE) for j in range(k)]
    rows.append(((Fraction(1),) * k, 1, EQ))
    omega = Polyhedron.from_hrep(k, rows)
    f = affine_map([[pairs[j][0][i] for j in range(k)] for i in range(p.y_dim)],
                   zeros(p.y_dim))
    g = affine_map([[pairs[j][1][i] for j in range(k)] for i in range(p.z_dim)],
                   zeros(p.z_dim))
    return AffineVectorProgram(omega, f, g, p.y_plus, p.z_plus)
