"""Shared reference instances: the bundled worked example and two derived ones."""

from fractions import Fraction as F

import pytest

from process_duality.model import (
    AffineVectorProgram,
    DiscreteVectorProgram,
    DiscretePoint,
    OrderCone,
    affine_map,
)
from process_duality.polyhedra import (
    LE,
    BoundaryRestrictedPolyhedron,
    Polyhedron,
)


@pytest.fixture
def r_plus():
    return OrderCone.from_generators(1, [(1,)])


@pytest.fixture
def orthant2():
    return OrderCone.from_generators(2, [(1, 0), (0, 1)])


@pytest.fixture
def worked_example(orthant2, r_plus):
    """Omega = {x2 > 0} union {(0,0)}, f = id, g = x2 - 1."""
    closure = Polyhedron.from_hrep(2, [((0, -1), 0, LE)])
    origin = Polyhedron.from_vrep(2, [(0, 0)])
    omega = BoundaryRestrictedPolyhedron.from_facet_indices(closure, [(0, origin)])
    return AffineVectorProgram(
        omega,
        affine_map([[1, 0], [0, 1]], [0, 0]),
        affine_map([[0, 1]], [-1]),
        orthant2,
        r_plus,
    )


@pytest.fixture
def scalar_i2(r_plus):
    """min x with 1 - x <= 0 over the whole line; optimum 1, multiplier 1."""
    return AffineVectorProgram(
        Polyhedron.full_space(1),
        affine_map([[1]], [0]),
        affine_map([[-1]], [1]),
        r_plus,
        OrderCone.from_generators(1, [(1,)]),
    )


@pytest.fixture
def planar_i3(orthant2, r_plus):
    """min (x1, x2) with 1 - x1 - x2 <= 0 over the nonnegative quadrant."""
    omega = Polyhedron.from_hrep(2, [((-1, 0), 0, LE), ((0, -1), 0, LE)])
    return AffineVectorProgram(
        omega,
        affine_map([[1, 0], [0, 1]], [0, 0]),
        affine_map([[-1, -1]], [1]),
        orthant2,
        r_plus,
    )


@pytest.fixture
def three_point_discrete(orthant2, r_plus):
    points = [
        DiscretePoint("a", (F(0), F(0)), (F(0),)),
        DiscretePoint("b", (F(1), F(1)), (F(0),)),
        DiscretePoint("c", (F(-1), F(2)), (F(0),)),
    ]
    return DiscreteVectorProgram(points, orthant2, r_plus)
