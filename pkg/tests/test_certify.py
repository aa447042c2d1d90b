"""Certification layer: minimality, proper efficiency, clause transfer."""

import random
from fractions import Fraction as F

import pytest

from process_duality.certify import (
    brute_force_status,
    certify_multiplier,
    classify_proper,
    dual_frontier,
    dual_image,
    is_minimal,
    is_weak_minimal,
    minimal_frontier,
)
from process_duality.errors import EmptyFeasibleError, NotInW0Error, NotMemberError
from process_duality.model import (
    DiscretePoint,
    DiscreteVectorProgram,
    OrderCone,
    upper_image_graph,
    w0_cells,
)
from process_duality.polyhedra import LE, Polyhedron
from process_duality.process import lagrange_process, separator_cone


def halfplane():
    return Polyhedron.from_hrep(2, [((0, -1), 0, LE)])


class TestWeakMinimal:
    def test_dual_image_of_example(self, orthant2):
        assert is_weak_minimal(halfplane(), (0, 0), orthant2)

    def test_full_plane(self, orthant2):
        assert not is_weak_minimal(Polyhedron.full_space(2), (0, 0), orthant2)

    def test_scalar_ray(self, r_plus):
        m = Polyhedron.from_hrep(1, [((-1,), -1, LE)])
        assert is_weak_minimal(m, (1,), r_plus)

    def test_requires_membership(self, orthant2):
        with pytest.raises(NotMemberError):
            is_weak_minimal(halfplane(), (0, -1), orthant2)


class TestMinimal:
    def test_worked_example_w0_minimal_at_origin(self, worked_example, orthant2):
        assert is_minimal(w0_cells(worked_example), (0, 0), orthant2)

    def test_halfplane_not_minimal(self, orthant2):
        assert not is_minimal(halfplane(), (0, 0), orthant2)

    def test_planar_dual_image(self, orthant2):
        m = Polyhedron.from_hrep(2, [((-1, -1), -1, LE)])
        assert is_minimal(m, (F(1, 2), F(1, 2)), orthant2)


class TestDualImage:
    def test_worked_example(self, worked_example):
        g = upper_image_graph(worked_example)
        L = lagrange_process(separator_cone(g, (0, 0)))
        m = dual_image(worked_example, L)
        assert m == halfplane()

    def test_scalar(self, scalar_i2):
        g = upper_image_graph(scalar_i2)
        L = lagrange_process(separator_cone(g, (1,)))
        m = dual_image(scalar_i2, L)
        assert m == Polyhedron.from_hrep(1, [((-1,), -1, LE)])

    def test_planar(self, planar_i3):
        g = upper_image_graph(planar_i3)
        L = lagrange_process(separator_cone(g, (F(1, 2), F(1, 2))))
        m = dual_image(planar_i3, L)
        assert m == Polyhedron.from_hrep(2, [((-1, -1), -1, LE)])

    def test_finite_union(self, three_point_discrete):
        g = upper_image_graph(three_point_discrete)
        L = lagrange_process(separator_cone(g, (0, 0)))
        pieces = dual_image(three_point_discrete, L)
        assert isinstance(pieces, tuple)
        assert len(pieces) == 3


class TestClassifyProper:
    def test_planar_dual_point(self, orthant2):
        m = Polyhedron.from_hrep(2, [((-1, -1), -1, LE)])
        st = classify_proper(m, (F(1, 2), F(1, 2)), orthant2)
        assert st.pos and st.he and st.se and st.ghe
        assert st.witnesses["pos"] == (F(1), F(1))
        assert st.witnesses["se_rho"] == F(1)

    def test_orthant_vertex(self, orthant2):
        st = classify_proper(
            Polyhedron.from_hrep(2, [((-1, 0), 0, LE), ((0, -1), 0, LE)]),
            (0, 0),
            orthant2,
        )
        assert st.minimal and st.pos and st.se
        assert st.witnesses["pos"] == (F(1), F(1))

    def test_halfplane_origin(self, orthant2):
        st = classify_proper(halfplane(), (0, 0), orthant2)
        assert not st.minimal
        assert not st.pos
        assert not st.he and not st.se and not st.ghe

    def test_nonpointed_cone_marks_not_applicable(self):
        nonpointed = OrderCone.from_generators(2, [(1, 0), (-1, 0), (0, 1)])
        st = classify_proper(halfplane(), (0, 0), nonpointed)
        assert st.pos is None and st.ghe is None and st.he is None and st.se is None


class TestCertify:
    def test_worked_example_certificate(self, worked_example):
        cert = certify_multiplier(worked_example, (0, 0))
        assert [h.vector for h in cert.separators.generators] == [(F(0), F(0), F(1))]
        assert cert.status_P0.minimal
        assert cert.status_D.weak_minimal
        assert not cert.status_D.minimal
        verdicts = {c.clause_id: c.verdict for c in cert.clauses}
        assert verdicts["C0"] == "verified"
        assert verdicts["C1"] == "verified"
        assert verdicts["C2"] == "verified"
        assert verdicts["C3"] == "not-applicable"
        assert verdicts["C4"] == "not-applicable"
        assert verdicts["C5"] == "not-applicable"
        assert verdicts["C6"] == "verified"
        assert verdicts["C7"] == "verified"
        assert not cert.has_violation
        assert not cert.graph_structure.has_bounded_base

    def test_scalar_certificate_recovers_multiplier(self, scalar_i2):
        cert = certify_multiplier(scalar_i2, (1,))
        verdicts = {c.clause_id: c.verdict for c in cert.clauses}
        assert verdicts["C3"] == "verified"
        assert cert.recovered_multiplier == ((F(1),),)

    def test_planar_certificate(self, planar_i3):
        cert = certify_multiplier(planar_i3, (F(1, 2), F(1, 2)))
        verdicts = {c.clause_id: c.verdict for c in cert.clauses}
        assert verdicts["C1"] == "verified"
        assert verdicts["C2"] == "verified"
        assert verdicts["C4"] == "not-applicable"
        assert verdicts["C5"] == "verified"
        assert verdicts["C6"] == "verified"
        assert verdicts["C7"] == "verified"
        assert not cert.has_violation

    def test_not_in_w0(self, planar_i3):
        with pytest.raises(NotInW0Error):
            certify_multiplier(planar_i3, (0, 0))

    def test_missing_slater_downgrades(self, r_plus):
        from process_duality.model import AffineVectorProgram, affine_map

        p = AffineVectorProgram(
            Polyhedron.from_hrep(1, [((-1,), 0, LE)]),
            affine_map([[1]], [0]),
            affine_map([[0]], [0]),  # g == 0: no Slater point
            r_plus,
            OrderCone.from_generators(1, [(1,)]),
        )
        cert = certify_multiplier(p, (0,))
        verdicts = {c.clause_id: c.verdict for c in cert.clauses}
        assert verdicts["C1"] == "unverified-precondition"
        assert verdicts["C2"] == "verified"
        assert not cert.has_violation

    def test_finite_program_certified_through_relaxation(self, three_point_discrete):
        cert = certify_multiplier(three_point_discrete, (0, 0))
        assert cert.convex_relaxation
        assert not cert.has_violation

    def test_kinked_value_function_gives_pointed_graph_and_c4(self, r_plus):
        # Omega = [0,1], f = x, g = -x: the value function kinks at z = 0,
        # the separator cone has two generators, and Graph(L) is pointed.
        from process_duality.model import AffineVectorProgram, affine_map

        omega = Polyhedron.from_hrep(1, [((-1,), 0, LE), ((1,), 1, LE)])
        p = AffineVectorProgram(
            omega,
            affine_map([[1]], [0]),
            affine_map([[-1]], [0]),
            r_plus,
            OrderCone.from_generators(1, [(1,)]),
        )
        cert = certify_multiplier(p, (0,))
        gens = sorted(h.vector for h in cert.separators.generators)
        assert gens == [(F(0), F(1)), (F(1), F(1))]
        assert cert.graph_structure.is_pointed
        assert cert.graph_structure.has_bounded_base
        verdicts = {c.clause_id: c.verdict for c in cert.clauses}
        assert verdicts["C4"] == "verified"
        assert verdicts["C3"] == "verified"
        assert not cert.has_violation
        # dual image is the half-line [0, inf) with 0 minimal on both sides
        assert cert.dual_image == Polyhedron.from_hrep(1, [((-1,), 0, LE)])
        assert cert.status_P0.minimal and cert.status_D.minimal


class TestBruteForce:
    def test_three_points(self, three_point_discrete):
        st = brute_force_status(three_point_discrete, (0, 0))
        assert st.minimal and st.weak_minimal and st.pos

    def test_single_point(self, orthant2, r_plus):
        p = DiscreteVectorProgram(
            [DiscretePoint("a", (F(0), F(0)), (F(0),))], orthant2, r_plus
        )
        assert brute_force_status(p, (0, 0)).minimal

    def test_dominated(self, orthant2, r_plus):
        p = DiscreteVectorProgram(
            [
                DiscretePoint("a", (F(0), F(0)), (F(0),)),
                DiscretePoint("b", (F(0), F(-1)), (F(0),)),
            ],
            orthant2,
            r_plus,
        )
        assert not brute_force_status(p, (0, 0)).minimal

    def test_requires_attained_point(self, three_point_discrete):
        with pytest.raises(NotMemberError):
            brute_force_status(three_point_discrete, (9, 9))


class TestFrontier:
    def test_planar(self, planar_i3):
        fr = minimal_frontier(planar_i3)
        pts = sorted(p.point for p in fr.points)
        assert pts == [(F(0), F(1)), (F(1), F(0))]
        assert all(p.status.minimal for p in fr.points)
        assert not fr.truncated

    def test_scalar(self, scalar_i2):
        fr = minimal_frontier(scalar_i2)
        assert [p.point for p in fr.points] == [(F(1),)]

    def test_infeasible(self, r_plus):
        from process_duality.model import AffineVectorProgram, affine_map

        p = AffineVectorProgram(
            Polyhedron.from_hrep(1, [((-1,), 0, LE)]),
            affine_map([[1]], [0]),
            affine_map([[1]], [1]),  # g = x + 1 >= 1 on Omega: infeasible
            r_plus,
            OrderCone.from_generators(1, [(1,)]),
        )
        with pytest.raises(EmptyFeasibleError):
            minimal_frontier(p)

    def test_worked_example_dual_min_empty(self, worked_example):
        g = upper_image_graph(worked_example)
        L = lagrange_process(separator_cone(g, (0, 0)))
        fr = dual_frontier(worked_example, L)
        assert fr.points == ()


class TestOracleEquivalence:
    def test_random_discrete_pipeline_matches_brute_force(self, orthant2, r_plus):
        rng = random.Random(41)
        checked = 0
        for _ in range(40):
            pts = [
                DiscretePoint(
                    f"p{i}",
                    (F(rng.randint(-3, 3)), F(rng.randint(-3, 3))),
                    (F(rng.randint(-2, 2)),),
                )
                for i in range(rng.randint(1, 6))
            ]
            p = DiscreteVectorProgram(pts, orthant2, r_plus)
            from process_duality.model import w0_image_points

            for y0 in w0_image_points(p):
                bf = brute_force_status(p, y0)
                st = classify_proper(w0_cells(p), y0, p.y_plus)
                assert st.minimal == bf.minimal
                assert st.weak_minimal == bf.weak_minimal
                assert st.pos == bf.pos
                checked += 1
        assert checked > 30
