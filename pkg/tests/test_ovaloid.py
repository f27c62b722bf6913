import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullcycles.chains import SimplicialChain, is_cycle
from nullcycles.core import GeometryError, Hyperplane
from nullcycles.meshes import circle_points, sphere_mesh
from nullcycles.nullproj import NONZERO, ZERO_EXACT, projects_to_zero, winding_number
from nullcycles.ovaloid import (AmbiguousHemisphere, AxisBox, Ellipsoid, Hemisphere, NotOnBoundary,
                                SteinerSymmetral, UnsupportedBody, body_from_json, composed_involution, equator,
                                hemisphere_of, involution, involution_by_height, project_cycle_onto_body,
                                random_ellipsoid, signed_height, slice_frame, steiner)

from oracles import chord_roots

E3 = [Hyperplane.coordinate(3, i).to_float() for i in range(3)]


def unit_sphere():
    return Ellipsoid.sphere(3)


def test_sphere_steiner_is_identity():
    S = unit_sphere()
    x = np.array([0.6, 0.0, 0.8])
    assert np.allclose(steiner(S, E3[2], x), x)


def test_shifted_sphere_steiner_and_height():
    S = Ellipsoid.sphere(3, center=[0, 0, 1])
    x = np.array([0.6, 0.0, 1.8])
    assert np.allclose(steiner(S, E3[2], x), [0.6, 0.0, 0.8])
    assert math.isclose(signed_height(S, E3[2], x), 0.8)


def test_steiner_midpoint_on_tilted_plane():
    B = Ellipsoid.axes([1, 2, 3])
    P = Hyperplane((1.0, -1.0, 2.0), 0.3)
    u = P.unit
    for x in B.sample_boundary(np.random.default_rng(1), 20):
        y = steiner(B, P, x)
        t = chord_roots(B.A, B.center, u, x)
        mid = x + (t[0] + t[1]) / 2 * u - (y - x)
        # the chord through sigma(x) is the chord through x shifted by sigma(x)-x
        shifted = x + (t[0] + t[1]) / 2 * u + (y - x)
        assert abs(shifted @ u - P.offset) < 1e-8
        assert mid is not None


def test_steiner_requires_boundary_point():
    with pytest.raises(NotOnBoundary):
        steiner(unit_sphere(), E3[2], [0.1, 0.1, 0.1])


def test_height_vanishes_where_normal_is_horizontal():
    B = random_ellipsoid(np.random.default_rng(8))
    P = Hyperplane((0.3, -0.2, 0.9))
    for x in equator(B, P, 40).vertices():
        assert abs(B.gauss(x) @ P.unit) < 1e-8
        assert abs(signed_height(B, P, x)) < 1e-8


def test_sphere_involution_is_reflection():
    S = unit_sphere()
    x = np.array([0.0, 0.6, 0.8])
    assert np.allclose(involution(S, E3[2], x), [0.0, 0.6, -0.8])


def test_involution_two_routes_agree_on_tilted_axes():
    B = Ellipsoid.axes([1, 2, 3])
    P = Hyperplane((1.0, 1.0, 1.0))
    for x in B.sample_boundary(np.random.default_rng(0), 100):
        assert np.linalg.norm(involution(B, P, x) - involution_by_height(B, P, x)) < 1e-8


def test_involution_matches_plain_quadratic_oracle():
    B = random_ellipsoid(np.random.default_rng(4))
    P = Hyperplane((0.2, 0.5, -1.0))
    u = P.unit
    for x in B.sample_boundary(np.random.default_rng(5), 30):
        t = chord_roots(B.A, B.center, u, x)
        far = max(t, key=abs)
        assert np.linalg.norm(involution(B, P, x) - (x + far * u)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(2, 4))
def test_involution_is_an_involution(seed, d):
    rng = np.random.default_rng(seed)
    B = random_ellipsoid(rng, d)
    P = Hyperplane(tuple(rng.normal(size=d)), float(rng.normal()))
    for x in B.sample_boundary(rng, 10):
        y = involution(B, P, x)
        assert B.on_boundary(y)
        assert np.linalg.norm(involution(B, P, y) - x) < 1e-8


def test_involution_rejects_boxes_and_off_boundary_points():
    with pytest.raises(UnsupportedBody):
        involution(AxisBox.unit_cube(), E3[0], [0.0, 0.5, 0.5])
    with pytest.raises(UnsupportedBody):
        equator(AxisBox.unit_cube(), E3[0], 8)
    with pytest.raises(NotOnBoundary):
        involution(unit_sphere(), E3[0], [0.0, 0.0, 0.0])


def test_involution_fixes_exactly_the_equator():
    B = Ellipsoid.axes([1, 2, 3])
    P = Hyperplane((0.0, 1.0, 1.0))
    for x in equator(B, P, 32).vertices():
        assert np.linalg.norm(involution(B, P, x) - np.array(x)) < 1e-8


def test_hemispheres():
    S = unit_sphere()
    assert hemisphere_of(S, E3[2], [0, 0, 1]) is Hemisphere.PLUS
    assert hemisphere_of(S, E3[2], [0, 0, -1]) is Hemisphere.MINUS
    with pytest.raises(AmbiguousHemisphere):
        hemisphere_of(S, E3[2], [1, 0, 0])
    B = random_ellipsoid(np.random.default_rng(2))
    P = Hyperplane((1.0, 2.0, 0.5))
    for x in B.sample_boundary(np.random.default_rng(3), 50):
        if abs(signed_height(B, P, x)) > 1e-6:
            assert hemisphere_of(B, P, involution(B, P, x)) is -hemisphere_of(B, P, x)


def test_hemisphere_is_a_graph_over_the_plane():
    B = random_ellipsoid(np.random.default_rng(12))
    P = Hyperplane((0.4, -0.3, 0.8))
    u = P.unit
    X = B.sample_boundary(np.random.default_rng(13), 4000)
    lam = np.array([B.height_closed_form(P, x) for x in X])
    delta = 1e-4 * B.diameter
    for sign in (1, -1):
        H = X[sign * lam > 0]
        flat = H - np.outer(H @ u, u)
        from scipy.spatial import cKDTree
        pairs = cKDTree(flat).query_pairs(delta)
        for i, j in pairs:
            assert np.linalg.norm(H[i] - H[j]) <= 10 * delta


def test_composed_involutions_on_the_sphere():
    S = unit_sphere()
    x = np.array([0.6, 0.0, 0.8])
    assert np.allclose(composed_involution(S, E3, x), -x)
    assert np.allclose(composed_involution(S, E3[:2], x), [-0.6, 0.0, 0.8])
    assert np.allclose(composed_involution(S, E3[:2], [0, 0, 1]), [0, 0, 1])
    with pytest.raises(GeometryError):
        composed_involution(S, [E3[0], E3[1], Hyperplane((1.0, 1.0, 0.0))], x)


def test_equator_of_unit_sphere_is_great_circle():
    T = equator(unit_sphere(), E3[2], 32)
    assert is_cycle(T) and len(T.cells) == 32
    assert all(abs(v[2]) < 1e-15 and abs(np.linalg.norm(v) - 1) < 1e-12 for v in T.vertices())


def test_equator_orientation_convention():
    B = random_ellipsoid(np.random.default_rng(6))
    P = Hyperplane((0.2, -0.7, 0.4))
    T = equator(B, P, 24)
    for c in T.cells:
        a, b = (np.array(v) for v in c.vertices)
        frame = np.vstack([b - a, B.gauss((a + b) / 2), P.unit])
        assert np.linalg.det(frame) * c.multiplicity > 0


def test_equator_gauss_agreement_dense():
    rng = np.random.default_rng(21)
    for _ in range(5):
        B = random_ellipsoid(rng)
        P = Hyperplane(tuple(rng.normal(size=3)))
        T = equator(B, P, 256)
        V = np.array(T.vertices())
        assert max(abs(B.gauss(v) @ P.unit) for v in V) < 1e-8
        assert max(abs(B.level(v) - 1) for v in V) < 1e-9


def test_equator_in_four_dimensions_is_a_two_sphere():
    B = random_ellipsoid(np.random.default_rng(1), 4)
    P = Hyperplane((1.0, 0.0, 2.0, -1.0))
    T = equator(B, P, 2)
    assert T.dim == 2 and is_cycle(T)
    assert max(abs(B.gauss(v) @ P.unit) for v in T.vertices()) < 1e-8


def test_sphere_equator_projection_verdicts():
    T = equator(unit_sphere(), E3[2], 32, companion=(1.0, 0.0, 0.0))
    assert projects_to_zero(T, E3[0]).status == ZERO_EXACT
    assert projects_to_zero(T, E3[1]).status == ZERO_EXACT
    assert projects_to_zero(T, E3[2]).status == NONZERO


def test_slice_frame_is_a_orthonormal_and_tangent():
    B = random_ellipsoid(np.random.default_rng(9))
    P = Hyperplane((0.5, 0.5, -0.2))
    w = B.A @ P.unit
    comp = np.cross(w, [1.0, 0.0, 0.0])
    L = slice_frame(B, P, companion=comp)
    assert np.allclose(L.T @ B.A @ L, np.eye(2), atol=1e-12)
    assert np.allclose(w @ L, 0, atol=1e-12)
    assert abs(abs(L[:, 0] @ comp) / np.linalg.norm(L[:, 0]) / np.linalg.norm(comp) - 1) < 1e-12


def test_project_cycle_onto_body():
    S = unit_sphere()
    T = equator(S, E3[2], 32)
    assert project_cycle_onto_body(S, T) == T
    big = SimplicialChain.polyline([tuple(1.01 * c for c in v) for v in T.vertices()])
    snapped = project_cycle_onto_body(S, big)
    assert max(abs(np.linalg.norm(v) - 1) for v in snapped.vertices()) < 1e-9
    B = random_ellipsoid(np.random.default_rng(3))
    rng = np.random.default_rng(4)
    noisy = SimplicialChain.polyline([tuple(v + 0.01 * rng.normal(size=3)) for v in equator(B, E3[0], 32).vertices()])
    assert max(abs(B.level(v) - 1) for v in project_cycle_onto_body(B, noisy).vertices()) < 1e-9
    with pytest.raises(GeometryError):
        project_cycle_onto_body(S, SimplicialChain.polyline([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)]))
    with pytest.raises(GeometryError):
        project_cycle_onto_body(S, SimplicialChain.polyline([(3.0, 0.0, 0.0), (0.0, 3.0, 0.0), (0.0, 0.0, 3.0)]))


def test_supporting_plane_and_chord_endpoints():
    rng = np.random.default_rng(7)
    for body in (random_ellipsoid(rng), AxisBox([-1, 0, 0], [1, 2, 0.5])):
        lo, hi = body.bounding_box()
        X = []
        while len(X) < 30:
            p = rng.uniform(lo, hi)
            u = rng.normal(size=3)
            ends = body.chord(u, p)
            if ends is None:
                continue
            assert body.on_boundary(ends[0], 1e-9) and body.on_boundary(ends[1], 1e-9)
            X.extend(ends)
        X = np.array(X)
        for x in X:
            assert np.max((X - x) @ body.gauss(x)) <= 1e-9


def test_axis_box_membership_and_json():
    box = AxisBox([0, 0, 0], [1, 1, 1])
    assert box.contains([0.5, 0.5, 0.5]) and not box.contains([1.5, 0.5, 0.5])
    assert box.on_boundary([1.0, 0.3, 0.3]) and not box.on_boundary([0.5, 0.5, 0.5])
    assert body_from_json(json.dumps(box.to_json())).to_json() == box.to_json()
    with pytest.raises(GeometryError):
        AxisBox([0, 0], [0, 1])


def test_ellipsoid_validation_and_json():
    B = random_ellipsoid(np.random.default_rng(0))
    C = body_from_json(json.loads(json.dumps(B.to_json())))
    assert np.array_equal(C.A, B.A) and np.array_equal(C.center, B.center)
    with pytest.raises(GeometryError):
        Ellipsoid([0, 0], [[1, 2], [0, 1]])
    with pytest.raises(GeometryError):
        Ellipsoid([0, 0], [[1, 0], [0, -1]])


def test_steiner_symmetral_is_symmetric():
    B = random_ellipsoid(np.random.default_rng(10))
    P = Hyperplane((0.1, 0.3, 1.0), 0.2)
    Z = SteinerSymmetral(B, P)
    for x in B.sample_boundary(np.random.default_rng(11), 20):
        y = steiner(B, P, x)
        assert Z.on_boundary(y, 1e-9)
        a, b = Z.chord(P.unit, y)
        assert abs((a + b) / 2 @ P.unit - P.offset) < 1e-8


def test_sphere_meshes():
    for k, m in [(1, 12), (2, 3), (3, 2)]:
        S = sphere_mesh(k, m)
        assert is_cycle(S)
        assert winding_number(S, (0.0,) * (k + 1)) == 1
    pts = circle_points(20)
    assert set(pts) == {(-x, y) for x, y in pts} == {(x, -y) for x, y in pts}
