"""Minimality tests, proper-efficiency classification, dual image, and the
theorem harness.

All decisions are exact.  Weak minimality and minimality reduce to
strict-feasibility LPs over the cell decomposition of the set under test, so
boundary-restricted and finite-union sets are handled without approximation.
The proper-efficiency notions are decided on closures, which is equivalent
for these notions because they only involve closed conic hulls and open
dilations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    EmptyFeasibleError,
    InternalConsistencyError,
    NotInW0Error,
    NotMemberError,
    NotPointedError,
)
from .exactlp import LinearSystem, LpStatus, lp_solve
from .model import (
    AffineVectorProgram,
    DiscreteVectorProgram,
    OrderCone,
    Program,
    simplex_relaxation,
    slater_point,
    upper_image_graph,
    w0_cells,
    w0_image_points,
    w0_member,
)
from .polyhedra import (
    LE,
    BoundaryRestrictedPolyhedron,
    Polyhedron,
    PolyhedralCone,
    closure_generators,
    cone_structure,
    intersect_empty,
    set_member,
)
from .process import (
    LagrangeProcess,
    Separator,
    SeparatorCone,
    check_nonvertical,
    lagrange_process,
    process_eval,
    separator_cone,
)
from .rational import ONE, ZERO, Vec, dot, inf_norm, vadd, vec, vsub, zeros

SetLike = Union[Polyhedron, BoundaryRestrictedPolyhedron, tuple, list]


# -- minimality ---------------------------------------------------------------


def _require_member(a: SetLike, y0: Vec):
    if not set_member(a, y0):
        raise NotMemberError(f"{y0} is not a member of the set under test")


def _shifted_cone(y0: Vec, yplus: OrderCone, sign: int) -> Polyhedron:
    """y0 + sign*Y_+ as a polyhedron."""
    gens = [tuple(sign * x for x in g) for g in yplus.generators]
    return Polyhedron.from_vrep(
        yplus.ambient_dim, [y0], gens, yplus.lineality
    )


def is_weak_minimal(a: SetLike, y0, yplus: OrderCone) -> bool:
    """A meets (y0 - Int Y_+) nowhere."""
    y0 = vec(y0)
    _require_member(a, y0)
    strict = [
        (tuple(-x for x in n), -dot(n, y0)) for n in yplus.facet_normals()
    ]
    return intersect_empty([a], strict).empty


def is_minimal(a: SetLike, y0, yplus: OrderCone) -> bool:
    """A cap (y0 - Y_+) lies inside y0 + Y_+ (one strict LP per facet)."""
    y0 = vec(y0)
    _require_member(a, y0)
    down = _shifted_cone(y0, yplus, -1)
    for n in yplus.facet_normals():
        # region {y in A cap (y0 - Y_+) : n.(y - y0) > 0} must be empty
        strict = [(tuple(-x for x in n), -dot(n, y0))]
        if not intersect_empty([a, down], strict).empty:
            return False
    return True


# -- proper efficiency --------------------------------------------------------


@dataclass(frozen=True)
class EfficiencyStatus:
    minimal: bool
    weak_minimal: bool
    pos: Optional[bool] = None
    ghe: Optional[bool] = None
    he: Optional[bool] = None
    se: Optional[bool] = None
    witnesses: dict = field(default_factory=dict, compare=False)

    def validate(self):
        if self.minimal and not self.weak_minimal:
            raise InternalConsistencyError(
                f"minimal point is not weak minimal: {self}"
            )
        if self.pos:
            if self.ghe is False:
                raise InternalConsistencyError(f"Pos holds but GHe fails: {self}")
            if not self.minimal:
                raise InternalConsistencyError(
                    f"Pos holds at a non-minimal point: {self}"
                )
        if self.se and not (self.minimal and self.ghe and self.he):
            raise InternalConsistencyError(
                f"SE must imply Min, GHe, and He: {self}"
            )
        return self


def _pos_functional(dim, yplus: OrderCone, verts, rays, lines, y0):
    """Deterministic y* in Y_+^{+i} supporting A at y0, or None (LP)."""
    width = 2 * dim
    le = []

    def row(coeffs, rhs):
        c = vec(coeffs)
        le.append((tuple(-x for x in c) + tuple(c), -Fraction(rhs)))

    for g in yplus.generators:
        row(g, ONE)  # <y*, g> >= 1
    for v in verts:
        row(vsub(v, y0), ZERO)
    for r in rays:
        row(r, ZERO)
    eq = []
    for l in lines:
        eq.append((tuple(l) + tuple(-x for x in l), ZERO))
    for j in range(width):
        le.append((tuple(-ONE if i == j else ZERO for i in range(width)), ZERO))
    out = lp_solve((ONE,) * width, LinearSystem(width, tuple(le), tuple(eq)), "min")
    if out.status is not LpStatus.OPTIMAL:
        return None
    x = out.primal_point
    return tuple(x[j] - x[dim + j] for j in range(dim))


def _cone_is_zero(k: Polyhedron) -> bool:
    return not k.vrep.rays and not k.vrep.lines


def _neg_cone_rows(yplus: OrderCone):
    return [(tuple(-x for x in n), ZERO, LE) for n in yplus.facet_normals()]


def _henig_dilation(yplus: OrderCone, eta: Fraction) -> PolyhedralCone:
    """cone(base of Y_+ + eta * infinity-ball), as a generated cone."""
    cs = cone_structure(yplus.cone)
    if cs.base is None:
        raise NotPointedError("Henig dilation needs a pointed cone with a base")
    dim = yplus.ambient_dim
    corners = [()]
    for _ in range(dim):
        corners = [c + (s,) for c in corners for s in (eta, -eta)]
    gens = [vadd(v, c) for v in cs.base.vrep.vertices for c in corners]
    return PolyhedralCone.from_generators(dim, gens)


def classify_proper(a: SetLike, y0, yplus: OrderCone,
                    with_witnesses: bool = True) -> EfficiencyStatus:
    """Full efficiency status of y0 in A under the Y_+ order.

    Minimality and weak minimality are exact on the (possibly non-closed)
    set; the proper notions are decided on the closed conic hull
    C = cl cone(A - y0): Pos by LP, He by the polyhedral reduction
    C cap (-Y_+) = {0} with an explicit dilation witness, SE by boundedness
    of C cap (ball - Y_+), GHe via the Pos or He certificates.  Non-pointed
    order cones report the proper notions as not applicable (None).

    `with_witnesses=False` skips the dilation witness search (the booleans
    are unchanged: for polyhedral data the reduction implies a pointed
    dilation exists).
    """
    y0 = vec(y0)
    minimal = is_minimal(a, y0, yplus)
    weak = is_weak_minimal(a, y0, yplus)
    if not yplus.is_pointed:
        return EfficiencyStatus(minimal, weak).validate()

    dim = yplus.ambient_dim
    verts, rays, lines = closure_generators(a)
    witnesses: dict = {}

    y_star = _pos_functional(dim, yplus, verts, rays, lines, y0)
    pos = y_star is not None
    if pos:
        witnesses["pos"] = y_star

    cone_a = PolyhedralCone.from_generators(
        dim,
        rays=[vsub(v, y0) for v in verts if vsub(v, y0) != zeros(dim)] + list(rays),
        lines=list(lines),
    )
    meet = cone_a.with_rows(_neg_cone_rows(yplus))
    he = _cone_is_zero(meet)

    ghe = pos or he
    if he and with_witnesses:
        eta = ONE
        k_eta = None
        for _ in range(64):
            k = _henig_dilation(yplus, eta)
            if not k.lineality and _cone_is_zero(
                cone_a.with_rows([(tuple(-x for x in r.normal), ZERO, LE)
                                  for r in k.inequalities()])
            ):
                k_eta = k
                break
            eta /= 2
        if k_eta is None:
            raise InternalConsistencyError(
                "dilation witness not found although the reduction holds"
            )
        witnesses["he_eta"] = eta
    if ghe:
        witnesses["ghe_via"] = "he" if he else "pos"

    ball_minus_cone = Polyhedron.from_vrep(
        dim,
        vertices=_box_corners(dim),
        rays=[tuple(-x for x in g) for g in yplus.generators],
        lines=yplus.lineality,
    )
    bounded_part = cone_a.intersect(ball_minus_cone)
    se = not bounded_part.vrep.rays and not bounded_part.vrep.lines
    if se:
        rho = max(
            (inf_norm(v) for v in bounded_part.vrep.vertices), default=ZERO
        )
        witnesses["se_rho"] = rho
    if se != he:
        raise InternalConsistencyError(
            "SE and He must coincide for pointed polyhedral order cones"
        )
    return EfficiencyStatus(minimal, weak, pos, ghe, he, se, witnesses).validate()


def _box_corners(dim):
    corners = [()]
    for _ in range(dim):
        corners = [c + (s,) for c in corners for s in (ONE, -ONE)]
    return corners


# -- dual image ---------------------------------------------------------------


def dual_image(p: Program, L: LagrangeProcess):
    """M = {f(x) + L(g(x)) : x in Omega}.

    Affine programs: a single closed polyhedron (the closure of Omega is
    used; the inclusion W(0) subset-of M is spot-verified on W(0) generator
    points).  Finite programs: the exact finite union of fiber translates,
    returned as a tuple of polyhedra.
    """
    if isinstance(p, AffineVectorProgram):
        return _dual_image_affine(p, L)
    pieces = []
    for pt in p.points:
        pairs = (
            ((pt.f_value, pt.g_value),)
            if isinstance(p, DiscreteVectorProgram)
            else tuple((fv, gv) for fv in pt.f_values for gv in pt.g_values)
        )
        for fv, gv in pairs:
            fiber = process_eval(L, gv)
            if not fiber.is_empty:
                pieces.append(fiber.translate(fv))
    return tuple(pieces)


def _dual_image_affine(p: AffineVectorProgram, L: LagrangeProcess) -> Polyhedron:
    xdim, ydim, zdim = p.x_dim, p.y_dim, p.z_dim
    closure = p.omega if isinstance(p.omega, Polyhedron) else p.omega.closure
    rows = []
    for r in closure.hrep:
        rows.append((tuple(r.normal) + zeros(ydim), r.offset, r.rel))
    for r in L.graph.hrep:
        nz, ny = r.normal[:zdim], r.normal[zdim:]
        x_part = tuple(
            sum((nz[i] * p.g.matrix[i][j] for i in range(zdim)), ZERO)
            for j in range(xdim)
        )
        rows.append((x_part + tuple(ny), r.offset - dot(nz, p.g.offset), r.rel))
    lifted = Polyhedron.from_hrep(xdim + ydim, rows)
    matrix = [
        tuple(p.f.matrix[i]) + tuple(ONE if j == i else ZERO for j in range(ydim))
        for i in range(ydim)
    ]
    m = lifted.affine_image(matrix, p.f.offset, ydim)
    _verify_w0_inclusion(p, m)
    return m


def _verify_w0_inclusion(p: AffineVectorProgram, m: Polyhedron):
    """Guaranteed inclusion W(0) subset-of M, checked on generator points of
    W(0) cell closures that are themselves members of W(0)."""
    cells = w0_cells(p)
    for c in cells:
        poly = c.closure_image()
        for v in poly.vrep.vertices:
            if set_member(cells, v) and not m.member(v):
                raise InternalConsistencyError(
                    "W(0) point escapes the dual image"
                )


# -- brute-force oracle -------------------------------------------------------


def brute_force_status(p: Program, y0) -> EfficiencyStatus:
    """Exhaustive pairwise Min/WMin over the finite image point set, plus a
    points-only Pos LP.  Independent of the polyhedral pipeline."""
    if isinstance(p, AffineVectorProgram):
        raise NotMemberError("brute force needs a finite program")
    y0 = vec(y0)
    points = w0_image_points(p)
    if y0 not in points:
        raise NotMemberError(f"{y0} is not an attained image point")
    yplus = p.y_plus
    minimal = all(
        yplus.contains(vsub(q, y0))
        for q in points
        if yplus.contains(vsub(y0, q))
    )
    weak = not any(yplus.strictly_contains(vsub(y0, q)) for q in points)
    pos = None
    if yplus.is_pointed:
        pos = (
            _pos_functional(p.y_dim, yplus, list(points), [], [], y0) is not None
        )
    return EfficiencyStatus(minimal, weak, pos)


# -- the certificate ----------------------------------------------------------


VERIFIED = "verified"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"
UNVERIFIED = "unverified-precondition"


@dataclass(frozen=True)
class Clause:
    clause_id: str
    applicable: bool
    verified: Optional[bool]
    note: str = ""

    @property
    def verdict(self) -> str:
        if not self.applicable:
            return NOT_APPLICABLE
        if self.verified is None:
            return UNVERIFIED
        return VERIFIED if self.verified else VIOLATED


@dataclass(frozen=True)
class Certificate:
    y0: Vec
    separators: SeparatorCone
    process: LagrangeProcess
    graph_structure: object
    dual_image: object
    status_P0: EfficiencyStatus
    status_D: EfficiencyStatus
    clauses: tuple[Clause, ...]
    slater_witness: object
    nonvertical_ok: Optional[bool]
    convex_relaxation: bool
    recovered_multiplier: Optional[tuple[Vec, ...]]

    @property
    def has_violation(self) -> bool:
        return any(c.verdict == VIOLATED for c in self.clauses)


def _is_scalar_halfline(yplus: OrderCone) -> bool:
    """Y = R with Y_+ = R_+ or -R_+: the only polyhedral case in which
    Y_+ minus the origin is open."""
    return yplus.ambient_dim == 1 and yplus.is_pointed


def _c5_functional(s: SeparatorCone, yplus: OrderCone):
    """h0 in S with <y*_h0, r> >= 1 on every extreme ray of Y_+, by LP over
    the generator coefficients; None when no such h0 exists."""
    if not s.generators or not yplus.is_pointed:
        return None
    k = len(s.generators)
    le = []
    for r in yplus.generators:
        row = tuple(-dot(h.y_star, r) for h in s.generators)
        le.append((row, -ONE))
    for j in range(k):
        le.append((tuple(-ONE if i == j else ZERO for i in range(k)), ZERO))
    out = lp_solve((ONE,) * k, LinearSystem(k, tuple(le)), "min")
    if out.status is not LpStatus.OPTIMAL:
        return None
    lam = out.primal_point
    z_star = zeros(s.z_dim)
    y_star = zeros(s.y_dim)
    for c, h in zip(lam, s.generators):
        z_star = vadd(z_star, tuple(c * v for v in h.z_star))
        y_star = vadd(y_star, tuple(c * v for v in h.y_star))
    return Separator(z_star, y_star)


def _internal_graph_checks(p: AffineVectorProgram, graph_w, y0, L: LagrangeProcess):
    """Facts the construction guarantees, asserted on generators."""
    for g in p.z_plus.generators:
        if not L.graph.member(tuple(-x for x in g) + zeros(p.y_dim)):
            raise InternalConsistencyError("(-z_+, 0) escapes the process graph")
    closure = (
        graph_w.closure
        if isinstance(graph_w, BoundaryRestrictedPolyhedron)
        else graph_w
    )
    zdim = p.z_dim
    for v in closure.vrep.vertices:
        w = tuple(-x for x in v[:zdim]) + tuple(vsub(v[zdim:], y0))
        if not L.graph.member(w):
            raise InternalConsistencyError("graph shift inclusion fails on a vertex")
    for r in closure.vrep.rays:
        w = tuple(-x for x in r[:zdim]) + tuple(r[zdim:])
        if not L.graph.member(w):
            raise InternalConsistencyError("graph shift inclusion fails on a ray")
    for l in closure.vrep.lines:
        w = tuple(-x for x in l[:zdim]) + tuple(l[zdim:])
        neg = tuple(-x for x in w)
        if not (L.graph.member(w) and L.graph.member(neg)):
            raise InternalConsistencyError("graph shift inclusion fails on a line")


def certify_multiplier(p: Program, y0, with_witnesses: bool = True) -> Certificate:
    """Build S, L, and M at y0 and check every transfer clause.

    Finite programs are certified through their simplex-embedding convex
    relaxation (the transfer theorems require convex data); the certificate is
    flagged accordingly.  Exact point-set statuses for finite programs are
    available through classify_proper / brute_force_status instead.
    """
    relaxed = not isinstance(p, AffineVectorProgram)
    prog = simplex_relaxation(p) if relaxed else p
    y0 = vec(y0)
    if not w0_member(prog, y0):
        raise NotInW0Error(f"{y0} is not attained by a feasible point")

    graph_w = upper_image_graph(prog)
    s = separator_cone(graph_w, y0)
    slater = slater_point(prog)
    nonvertical = None
    if slater is not None:
        nonvertical = check_nonvertical(s, slater).ok
    L = lagrange_process(s)
    structure = cone_structure(L.graph)
    _internal_graph_checks(prog, graph_w, y0, L)
    m = dual_image(prog, L)
    if not m.member(y0):
        raise InternalConsistencyError("y0 escapes the dual image")

    yplus = prog.y_plus
    status_p = classify_proper(w0_cells(prog), y0, yplus, with_witnesses)
    status_d = classify_proper(m, y0, yplus, with_witnesses)

    slater_ok = slater is not None
    clauses = []

    def add(cid, applicable, holds, note="", needs_slater=True):
        if applicable and needs_slater and not slater_ok:
            clauses.append(Clause(cid, True, None, "Slater point missing"))
        else:
            clauses.append(Clause(cid, applicable, holds if applicable else None, note))

    add("C0", status_p.minimal, not s.empty_flag,
        "separator cone nonempty at a minimal point", needs_slater=False)
    add("C1", True, (not status_p.minimal) or status_d.weak_minimal,
        "minimal(P0) implies weak minimal(D)")
    add("C2", True,
        ((not status_d.minimal) or status_p.minimal)
        and ((not status_d.weak_minimal) or status_p.weak_minimal),
        "minimality transfers from D back to P0", needs_slater=False)
    add("C3", _is_scalar_halfline(yplus),
        status_p.minimal == status_d.minimal,
        "scalar case: Y_+ minus origin open")
    add("C4", structure.has_bounded_base,
        status_p.minimal == status_d.minimal,
        "process graph has a bounded base")
    h0 = _c5_functional(s, yplus) if slater_ok else None
    add("C5", h0 is not None,
        status_p.minimal == status_d.minimal,
        "separator strictly positive on the order cone boundary")
    add("C6", yplus.is_pointed,
        status_p.pos == status_d.pos
        and status_p.ghe == status_d.ghe
        and status_p.he == status_d.he,
        "proper-efficiency transfer (Pos/GHe/He)")
    add("C7", yplus.is_pointed,
        status_p.se == status_d.se,
        "super-efficiency transfer (bounded base of Y_+)")

    multiplier = None
    if prog.y_dim == 1 and s.generators:
        normalized = []
        for h in s.generators:
            if h.y_star[0] > 0:
                normalized.append(tuple(z / h.y_star[0] for z in h.z_star))
        if normalized:
            multiplier = tuple(sorted(set(normalized)))

    return Certificate(
        y0=y0,
        separators=s,
        process=L,
        graph_structure=structure,
        dual_image=m,
        status_P0=status_p,
        status_D=status_d,
        clauses=tuple(clauses),
        slater_witness=slater,
        nonvertical_ok=nonvertical,
        convex_relaxation=relaxed,
        recovered_multiplier=multiplier,
    )


# -- frontier -----------------------------------------------------------------


@dataclass(frozen=True)
class FrontierPoint:
    point: Vec
    status: EfficiencyStatus


@dataclass(frozen=True)
class Frontier:
    points: tuple[FrontierPoint, ...]
    truncated: bool = False


def minimal_frontier_points(p: Program, limit: int = 10000):
    """Minimal vertices of the closed upper image at z = 0 (no classification)."""
    cells = w0_cells(p)
    feasible = any(c.is_feasible() for c in cells)
    if not feasible:
        raise EmptyFeasibleError("no feasible point at z = 0")
    verts, rays, lines = closure_generators(cells)
    ydim = p.y_dim
    upper = Polyhedron.from_vrep(
        ydim,
        verts,
        list(rays) + list(p.y_plus.generators),
        list(lines) + list(p.y_plus.lineality),
    )
    candidates = upper.vrep.vertices
    truncated = len(candidates) > limit
    points = []
    for v in candidates[:limit]:
        if not set_member(cells, v):
            continue
        if is_minimal(cells, v, p.y_plus):
            points.append(v)
    return cells, tuple(points), truncated


def minimal_frontier(p: Program, limit: int = 10000) -> Frontier:
    """Vertices of the closed upper image at z = 0, filtered by the exact
    minimality test against W(0).  Candidate supply for y0, not a complete
    enumeration of Min (non-closed corner points need an explicit y0)."""
    cells, points, truncated = minimal_frontier_points(p, limit)
    out = [
        FrontierPoint(v, classify_proper(cells, v, p.y_plus)) for v in points
    ]
    return Frontier(tuple(out), truncated)


def dual_frontier(p: Program, L: LagrangeProcess, limit: int = 10000) -> Frontier:
    """Same vertex filter applied to the dual image M."""
    m = dual_image(p, L)
    pieces = [m] if isinstance(m, Polyhedron) else list(m)
    verts, rays, lines = closure_generators(pieces)
    if not verts:
        return Frontier((), False)
    hull = Polyhedron.from_vrep(p.y_dim, verts, rays, lines)
    candidates = hull.vrep.vertices
    truncated = len(candidates) > limit
    out = []
    for v in candidates[:limit]:
        if not set_member(pieces, v):
            continue
        if is_minimal(pieces, v, p.y_plus):
            out.append(FrontierPoint(v, classify_proper(pieces, v, p.y_plus)))
    return Frontier(tuple(out), truncated)
