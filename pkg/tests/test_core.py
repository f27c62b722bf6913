import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullcycles.core import (AffineMap, DimensionMismatch, GeometryError, Hyperplane, Simplex, chart_map,
                             exact_det, exact_rank, independent, parse_scalar, project_map, scalar_from_json,
                             scalar_to_json, simplex_degenerate)

from oracles import independent_by_minors

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
vec3 = st.tuples(small, small, small)


def test_project_map_coordinate_plane():
    pi = project_map(Hyperplane((0, 0, 1)))
    assert pi((F(1), F(2), F(3))) == (1, 2, 0)


def test_project_map_fixes_points_of_plane():
    P = Hyperplane((1, 2, -1), F(3))
    x = (F(3), F(0), F(0))
    assert P.contains(x)
    assert project_map(P)(x) == x


def test_project_map_tilted_normal():
    # unit normal (1,1,0)/sqrt2 stored unnormalized
    pi = project_map(Hyperplane((1, 1, 0)))
    assert pi((F(1), F(0), F(0))) == (F(1, 2), F(-1, 2), 0)


@given(vec3.filter(lambda v: any(v)), small, vec3)
def test_project_map_idempotent_and_lands_on_plane(n, level, x):
    P = Hyperplane(n, level)
    pi = project_map(P)
    y = pi(x)
    assert pi(y) == y
    assert P.height(y) == 0


def test_project_map_float_lands_on_plane():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = rng.normal(size=4)
        P = Hyperplane(tuple(n / np.linalg.norm(n)), float(rng.normal()))
        y = project_map(P)(tuple(rng.normal(size=4)))
        assert abs(np.dot(y, P.unit) - P.offset) < 1e-9


def test_chart_map_drops_largest_normal_coordinate():
    G = chart_map(Hyperplane((0, 0, 1)))
    assert G.d_out == 2
    assert G((F(1), F(2), F(3))) == (1, 2)


def test_independent_basic():
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert independent([e1, e2, e3])
    assert not independent([e1, e2, (1, 1, 0)])
    assert not independent([e1, e2, e3, (1, 2, 3)])
    with pytest.raises(DimensionMismatch):
        independent([e1, (0, 1)])


def test_independent_float_flavor():
    assert independent([(1.0, 0.0), (0.0, 1.0)])
    assert not independent([(1.0, 1.0), (2.0, 2.0 + 1e-14)])


def test_independent_agrees_with_minor_oracle():
    pool = [(F(1), F(2), F(0)), (F(0), F(1), F(-1)), (F(1), F(3), F(-1)),
            (F(2), F(0), F(5)), (F(1, 2), F(1), F(0)), (F(0), F(0), F(3))]
    for k in (1, 2, 3):
        for subset in itertools.combinations(pool, k):
            assert independent(list(subset)) == independent_by_minors(subset)


@given(st.lists(vec3, min_size=1, max_size=4))
def test_exact_rank_matches_minors(vs):
    assert (exact_rank(vs) == len(vs)) == independent_by_minors(vs)


def test_exact_det_known():
    assert exact_det([[2, 0, 0], [0, 3, 0], [0, 0, F(1, 6)]]) == 1
    assert exact_det([[1, 2], [2, 4]]) == 0


def test_simplex_degenerate():
    assert simplex_degenerate(Simplex(((F(1), F(1)), (F(1), F(1))), 1))
    assert not simplex_degenerate(Simplex(((0, 0), (1, 0), (0, 1)), 1))
    assert simplex_degenerate(Simplex(((0, 0), (1, 1), (2, 2)), 1))
    assert simplex_degenerate(Simplex(((0.0, 0.0), (1.0, 1.0), (2.0, 2.0 + 1e-13)), 1))


def test_simplex_rejects_zero_multiplicity_and_mixed_lengths():
    with pytest.raises(GeometryError):
        Simplex(((0, 0), (1, 0)), 0)
    with pytest.raises(GeometryError):
        Simplex(((0, 0), (1, 0, 0)), 1)


def test_hyperplane_parse_and_json():
    P = Hyperplane.parse("1/3,2/3,2/3:1/2")
    assert P.exact and P.normal == (F(1, 3), F(2, 3), F(2, 3)) and P.level == F(1, 2)
    assert Hyperplane.from_json(P.to_json()) == P
    Q = Hyperplane.parse("0.6,0.8")
    assert not Q.exact and math.isclose(Q.offset, 0.0)
    with pytest.raises(GeometryError):
        Hyperplane((0, 0))


def test_scalars_round_trip():
    assert parse_scalar("-7/21") == F(-1, 3)
    assert parse_scalar("4") == F(4)
    assert parse_scalar("0.1") == 0.1
    for x in (F(-5, 9), F(0), 0.1, -2.5):
        y = scalar_from_json(scalar_to_json(x))
        assert y == x and type(y) is type(x)


def test_affine_compose():
    A = AffineMap(((1, 0), (0, 2)), (1, 0))
    B = AffineMap(((0, 1), (1, 0)), (0, 0))
    x = (F(3), F(5))
    assert A.compose(B)(x) == A(B(x))
