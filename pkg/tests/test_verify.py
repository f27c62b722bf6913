import json

import numpy as np
import pytest

from nullcycles import examples as ex
from nullcycles.core import GeometryError, Hyperplane
from nullcycles.ovaloid import Ellipsoid, equator, random_ellipsoid
from nullcycles.verify import (PreconditionFailed, degree_estimate, height_chain, involution_map,
                               prop_or_battery, prop_or_check, random_independent_planes, random_sphere_cycle,
                               run_experiment, sphere_like_filters, thm_main_search,
                               thm_tech_fixed_point_experiment)

from oracles import reflection_degree

E3 = [Hyperplane.coordinate(3, i).to_float() for i in range(3)]


def test_prop_or_on_sphere_equator():
    S = Ellipsoid.sphere(3)
    T = equator(S, E3[2], 32, companion=(1.0, 0.0, 0.0))
    r = prop_or_check(S, E3[0], T)
    assert r.passed and r.summary["orientation_reversed"]


def test_prop_or_precondition():
    S = Ellipsoid.sphere(3)
    T = equator(S, E3[2], 32)
    with pytest.raises(PreconditionFailed):
        prop_or_check(S, E3[2], T)


def test_prop_or_battery_passes():
    rep = prop_or_battery()
    assert rep.passed, rep.failures
    assert len(rep.summary) == 5


def test_fixed_points_antipodal_sphere():
    r = thm_tech_fixed_point_experiment(Ellipsoid.sphere(3), E3, samples=2000)
    assert abs(r.summary["min_displacement"] - 2) < 1e-9 and r.passed


def test_two_plane_control_has_fixed_points():
    r = thm_tech_fixed_point_experiment(Ellipsoid.sphere(3), E3[:2], samples=2000)
    assert r.summary["min_displacement"] < 1e-3


def test_fixed_point_experiment_rejects_dependent_planes():
    with pytest.raises(GeometryError):
        thm_tech_fixed_point_experiment(Ellipsoid.sphere(3), [E3[0], E3[0], E3[1]], samples=10)


def test_height_chain_on_sphere():
    hs = height_chain(Ellipsoid.sphere(3), E3, [0.6, 0.0, 0.8])
    assert np.allclose(hs, [0.6, 0.0, 0.8])


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_degree_of_reflection_compositions(k):
    B = Ellipsoid.sphere(3)
    assert degree_estimate(B, involution_map(B, E3[:k]), level=3) == reflection_degree(k)


def test_degree_is_multiplicative():
    rng = np.random.default_rng(5)
    B = random_ellipsoid(rng)
    planes = random_independent_planes(rng, 3)
    d1 = degree_estimate(B, involution_map(B, planes[:1]), level=3)
    d2 = degree_estimate(B, involution_map(B, planes[1:]), level=3)
    assert degree_estimate(B, involution_map(B, planes), level=3) == d1 * d2 == -1


def test_degree_in_the_plane():
    B = Ellipsoid.axes([1.0, 3.0])
    P = [Hyperplane((1.0, 0.0)), Hyperplane((1.0, 1.0))]
    assert degree_estimate(B, involution_map(B, P)) == 1
    assert degree_estimate(B, involution_map(B, P[:1])) == -1


def test_random_sphere_cycle_passes_filters():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        B = random_ellipsoid(rng, n + 1)
        T = random_sphere_cycle(B, rng, n, resolution=32)
        assert all(sphere_like_filters(T).values()), n
        assert max(abs(B.level(v) - 1) for v in T.vertices()) < 1e-9


def test_filters_exclude_controls():
    for b in (ex.latitude_pair(16), ex.doubled_arc_loop(16), ex.clifford_torus(8), ex.doubling_points(2, 2)):
        assert not all(sphere_like_filters(b.chain).values()), b.name


def test_thm_main_small_run_is_deterministic(tmp_path):
    a = thm_main_search(seed=3, trials=8, out_dir=tmp_path)
    b = thm_main_search(seed=3, trials=8)
    assert a.dumps(include_runtime=False) == b.dumps(include_runtime=False)
    assert a.passed
    assert all(c["excluded"] and c["all_zero"] for c in a.summary["controls"])
    assert not list(tmp_path.iterdir())


def test_thm_main_one_dimensional():
    rep = thm_main_search(seed=1, trials=10, n=1)
    assert rep.passed, rep.failures


def test_run_experiment_dispatch():
    rep = run_experiment("thm_tech", seed=2, trials=2, samples=500)
    assert rep.trials == 2 and len(rep.summary["ratios"]) == 2
    json.loads(rep.dumps())
    with pytest.raises(KeyError):
        run_experiment("nope", 0)
