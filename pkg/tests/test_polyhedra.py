"""Geometry kernel: golden conversions, polars, projection, structure, cells."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from process_duality.errors import DimensionMismatch
from process_duality.exactlp import LpStatus, lp_solve
from process_duality.polyhedra import (
    EQ,
    LE,
    BoundaryRestrictedPolyhedron,
    Polyhedron,
    PolyhedralCone,
    cone_structure,
    dd_convert,
    intersect_empty,
    member,
    polar_cone,
    project,
)


def orthant(n):
    rows = [(tuple(-1 if j == i else 0 for j in range(n)), 0, LE) for i in range(n)]
    return Polyhedron.from_hrep(n, rows)


def D_set():
    closure = Polyhedron.from_hrep(2, [((0, -1), 0, LE)])
    origin = Polyhedron.from_vrep(2, [(0, 0)])
    return BoundaryRestrictedPolyhedron.from_facet_indices(closure, [(0, origin)])


class TestDdConvert:
    def test_halfline(self):
        p = Polyhedron.from_hrep(1, [((-1,), 0, LE)])
        assert p.vrep.vertices == ((F(0),),)
        assert p.vrep.rays == ((F(1),),)
        assert p.vrep.lines == ()

    def test_orthant_generators(self):
        p = orthant(2)
        assert p.vrep.vertices == ((F(0), F(0)),)
        assert set(p.vrep.rays) == {(F(1), F(0)), (F(0), F(1))}

    def test_halfspace_cone_in_3d(self):
        # {(z,y1,y2): -y2 <= 0} = R x R x R+
        p = Polyhedron.from_hrep(3, [((0, 0, -1), 0, LE)])
        assert set(p.vrep.lines) == {(F(1), F(0), F(0)), (F(0), F(1), F(0))}
        assert p.vrep.rays == ((F(0), F(0), F(1)),)

    def test_empty_signaled_by_empty_vrep(self):
        p = Polyhedron.from_hrep(1, [((1,), 0, LE), ((-1,), -1, LE)])
        assert p.is_empty
        assert p.vrep.vertices == ()

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            dd_convert(orthant(1), "sideways")


class TestPolar:
    def test_orthant_self_dual(self):
        k = PolyhedralCone.from_generators(2, rays=[(1, 0), (0, 1)])
        assert polar_cone(k, "positive") == k

    def test_halfspace_cone_positive_polar_is_single_ray(self):
        k = PolyhedralCone.from_normals(3, ineq_normals=[(0, 0, -1)])
        p = polar_cone(k, "positive")
        assert p.generators == ((F(0), F(0), F(1)),)
        assert p.lineality == ()

    def test_diagonal_halfplane_polar(self):
        # positive polar of {(z,u): z+u >= 0} is the ray through (1,1)
        k = PolyhedralCone.from_normals(2, ineq_normals=[(-1, -1)])
        p = polar_cone(k, "positive")
        assert p.generators == ((F(1), F(1)),)
        # oracle: brute-force sign check on a small generator grid
        for a in range(-3, 4):
            for b in range(-3, 4):
                w = (F(a), F(b))
                in_polar = all(
                    a * g[0] + b * g[1] >= 0 for g in k.generators
                ) and all(a * l[0] + b * l[1] == 0 for l in k.lineality)
                assert in_polar == p.member(w)


class TestProject:
    def test_identity_graph(self):
        p = Polyhedron.from_hrep(
            2, [((1, -1), 0, EQ), ((-1, 0), 0, LE), ((1, 0), 1, LE)]
        )
        q = project(p, (0,))
        assert q.vrep.vertices == ((F(0),), (F(1),))

    def test_scalar_instance_lift(self):
        # {(x,v): v >= 1} projected to v is [1, inf); hand LP-duality oracle
        p = Polyhedron.from_hrep(2, [((0, -1), -1, LE)])
        q = project(p, (1,))
        assert q.vrep.vertices == ((F(1),),)
        assert q.vrep.rays == ((F(1),),)

    def test_planar_image(self):
        # {(x1,x2,v1,v2): (v-x) cone row, x >= 0} onto v is {v1+v2 >= 1}
        rows = [
            ((1, 1, -1, -1), -1, LE),  # 1 - x1 - x2 - (v1-x1) - (v2-x2) <= 0
            ((-1, 0, 0, 0), 0, LE),
            ((0, -1, 0, 0), 0, LE),
        ]
        p = Polyhedron.from_hrep(4, rows)
        q = project(p, (2, 3))
        expect = Polyhedron.from_hrep(2, [((-1, -1), -1, LE)])
        assert q == expect
        # brute-force oracle over a rational grid
        for a in range(-2, 4):
            for b in range(-2, 4):
                v = (F(a), F(b))
                lifted = p.system().extended(
                    eq=[((0, 0, 1, 0), v[0]), ((0, 0, 0, 1), v[1])]
                )
                has_lift = (
                    lp_solve((0, 0, 0, 0), lifted, "min").status is LpStatus.OPTIMAL
                )
                assert has_lift == q.member(v)

    def test_out_of_range(self):
        with pytest.raises(DimensionMismatch):
            project(orthant(2), (5,))


class TestConeStructure:
    def test_orthant(self):
        cs = cone_structure(PolyhedralCone.from_generators(2, rays=[(1, 0), (0, 1)]))
        assert cs.is_pointed and cs.has_bounded_base
        assert cs.functional == (F(1), F(1))
        assert set(cs.base.vrep.vertices) == {(F(1), F(0)), (F(0), F(1))}

    def test_graph_cone_of_worked_example(self):
        k = PolyhedralCone.from_normals(3, ineq_normals=[(0, 0, -1)])
        cs = cone_structure(k)
        assert cs.lineality_dim == 2
        assert not cs.is_pointed
        assert not cs.has_bounded_base
        assert cs.base is None

    def test_halfspace_graph(self):
        # {(z,y1,y2): z <= y1+y2}: lineality = plane z = y1+y2, dim 2
        k = PolyhedralCone.from_normals(3, ineq_normals=[(1, -1, -1)])
        cs = cone_structure(k)
        assert cs.lineality_dim == 2
        assert not cs.has_bounded_base

    def test_base_normalization_property(self):
        k = PolyhedralCone.from_generators(3, rays=[(2, 0, 1), (0, 3, 1), (1, 1, 5)])
        cs = cone_structure(k)
        assert cs.has_bounded_base
        h = cs.functional
        for g in k.generators:
            lam = F(1) / sum(h[i] * g[i] for i in range(3))
            assert cs.base.member(tuple(lam * x for x in g))
            # unique positive scaling: <h, t*g> = 1 has exactly one solution
        assert not cs.base.member((0, 0, 0))


class TestMembership:
    def test_open_halfplane_with_retained_origin(self):
        D = D_set()
        assert member(D, (0, 0))
        assert not member(D, (1, 0))
        assert member(D, (1, 1))
        assert not member(D, (0, -1))

    def test_orthant_member(self):
        assert member(orthant(2), (1, 1))

    def test_member_dimension(self):
        with pytest.raises(DimensionMismatch):
            member(orthant(2), (1, 1, 1))


class TestIntersectEmpty:
    def test_minimality_core_of_worked_example(self):
        D = D_set()
        negorth = Polyhedron.from_hrep(2, [((1, 0), 0, LE), ((0, 1), 0, LE)])
        r = intersect_empty([D, negorth])
        assert not r.empty
        assert r.witness == (F(0), F(0))
        # the only point: excluding either x2 sign strictly empties it
        assert intersect_empty([D, negorth], [((0, 1), 0)]).empty
        assert intersect_empty([D, negorth], [((0, -1), 0)]).empty

    def test_halfplane_strict(self):
        H = Polyhedron.from_hrep(2, [((0, -1), 0, LE)])
        assert intersect_empty([H], [((0, 1), 0)]).empty

    def test_box_strict_subcase(self):
        A = Polyhedron.from_hrep(2, [((-1, -1), -1, LE)])
        B = Polyhedron.from_hrep(2, [((1, 0), F(1, 2), LE), ((0, 1), F(1, 2), LE)])
        assert intersect_empty([A, B], [((1, 0), F(1, 2))]).empty

    def test_member_agrees_with_singleton_intersection(self):
        p = orthant(2)
        for x in [(1, 1), (0, 0), (-1, 2), (F(1, 3), F(2, 7))]:
            single = Polyhedron.from_vrep(2, [x])
            assert p.member(x) == (not intersect_empty([p, single]).empty)


coord = st.integers(min_value=-3, max_value=3)


@st.composite
def random_cone_hrep(draw):
    dim = draw(st.integers(min_value=1, max_value=4))
    nrows = draw(st.integers(min_value=1, max_value=5))
    rows = []
    for _ in range(nrows):
        normal = tuple(draw(coord) for _ in range(dim))
        rows.append((normal, 0, LE))
    return dim, rows


@settings(max_examples=80, deadline=None)
@given(random_cone_hrep())
def test_dd_roundtrip_is_canonical_involution(data):
    dim, rows = data
    p = Polyhedron.from_hrep(dim, rows)
    q = dd_convert(dd_convert(p, "HtoV"), "VtoH")
    assert p == q
    p.check_consistency()


@settings(max_examples=80, deadline=None)
@given(random_cone_hrep())
def test_polar_involution(data):
    dim, rows = data
    base = Polyhedron.from_hrep(dim, rows)
    k = PolyhedralCone.from_polyhedron(base)
    kk = polar_cone(polar_cone(k, "negative"), "negative")
    assert kk == k


@settings(max_examples=60, deadline=None)
@given(random_cone_hrep())
def test_pointed_base_scaling_unique(data):
    dim, rows = data
    k = PolyhedralCone.from_polyhedron(Polyhedron.from_hrep(dim, rows))
    cs = cone_structure(k)
    assert cs.is_pointed == (cs.lineality_dim == 0)
    if cs.base is not None:
        h = cs.functional
        for g in k.generators:
            val = sum(h[i] * g[i] for i in range(dim))
            assert val > 0
            assert cs.base.member(tuple(x / val for x in g))


@settings(max_examples=50, deadline=None)
@given(random_cone_hrep(), st.data())
def test_project_commutes_with_membership(data, draws):
    dim, rows = data
    p = Polyhedron.from_hrep(dim, rows)
    keep = tuple(
        sorted(
            draws.draw(
                st.sets(
                    st.integers(min_value=0, max_value=dim - 1), min_size=1, max_size=dim
                )
            )
        )
    )
    q = project(p, keep)
    x = tuple(F(draws.draw(coord)) for _ in keep)
    # x in projection iff a lift exists (decided by LP, not by q's rows)
    lifted = p.system().extended(
        eq=[(tuple(1 if j == k else 0 for j in range(dim)), x[i]) for i, k in enumerate(keep)]
    )
    has_lift = lp_solve((0,) * dim, lifted, "min").status is LpStatus.OPTIMAL
    assert has_lift == q.member(x)
