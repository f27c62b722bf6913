"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the terminal summary
lists all twelve verdicts.
"""
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from nullcycles import examples as ex
from nullcycles.chains import (SimplicialChain, boundary, is_connected, is_embedded_curve, negate, pushforward,
                               reduce, union)
from nullcycles.core import Hyperplane, Simplex, project_map
from nullcycles.nullproj import (NONZERO, ZERO_EXACT, OnSupportError, hull_reduce, null_directions_sweep,
                                 project_to_chart, projects_to_zero, winding_number)
from nullcycles.ovaloid import (Ellipsoid, SteinerSymmetral, equator, involution, random_ellipsoid, steiner)
from nullcycles.verify import (degree_estimate, involution_map, prop_or_battery, thm_main_search,
                               thm_tech_battery, thm_tech_fixed_point_experiment)

from oracles import chord_roots, winding_by_angles


def coordinate_planes(d):
    return [Hyperplane.coordinate(d, i) for i in range(d)]


def test_criterion_01_horizontal_circle(criterion):
    T = ex.horizontal_circle(32).chain
    e1, e2, e3 = coordinate_planes(3)
    v1 = projects_to_zero(T, e1, exact=True)
    v2 = projects_to_zero(T, e2, exact=True)
    v3 = projects_to_zero(T, e3, exact=True)
    w = v3.witness.get("winding") if v3.witness else None
    ok = v1.status == ZERO_EXACT and v2.status == ZERO_EXACT and v3.status == NONZERO and w in (1, -1)
    assert criterion(1, ok, f"e1={v1.status} e2={v2.status} e3={v3.status} winding={w}")


def test_criterion_02_figure_eight_vanishes(criterion):
    b = ex.figure8_loop()
    e3 = Hyperplane.coordinate(3, 2)
    surviving = len(reduce(project_to_chart(b.chain, e3)).cells)
    v = projects_to_zero(b.chain, e3, exact=True)
    ok = v.status == ZERO_EXACT and surviving >= 8
    assert criterion(2, ok, f"{v.status} via {v.method}, {surviving} segments survive reduce")


def test_criterion_03_doubling(criterion):
    details, ok = [], True
    for N, d in [(3, 3), (5, 2)]:
        b = ex.doubling_points(N, d)
        statuses = [projects_to_zero(b.chain, P, exact=True).status for P, _ in b.claims]
        cells = len(b.chain.cells)
        good = len(statuses) == N and all(s == ZERO_EXACT for s in statuses) and cells == 2 ** N
        ok &= good
        details.append(f"N={N} R^{d}: {cells} cells, {statuses.count(ZERO_EXACT)}/{N} ZERO_EXACT")
    assert criterion(3, ok, "; ".join(details))


def test_criterion_04_disconnected_and_non_embedded_controls(criterion):
    planes = coordinate_planes(3)
    pair = ex.latitude_pair(32).chain
    arc = ex.doubled_arc_loop(32).chain
    pair_ok = all(projects_to_zero(pair, P).is_zero for P in planes)
    arc_ok = all(projects_to_zero(arc, P).is_zero for P in planes)
    conn, emb = is_connected(arc), is_embedded_curve(arc)
    ok = pair_ok and arc_ok and conn and not emb
    assert criterion(4, ok, f"latitude_pair zero={pair_ok} doubled_arc zero={arc_ok} connected={conn} embedded={emb}")


def test_criterion_05_clifford_torus(criterion):
    T = ex.clifford_torus(16).chain
    statuses = [projects_to_zero(T, P, exact=True).status for P in coordinate_planes(4)]
    empty = reduce(boundary(T)).is_empty()
    err = max(abs(math.sqrt(sum(float(c) ** 2 for c in v)) - math.sqrt(2)) for v in T.vertices())
    ok = all(s == ZERO_EXACT for s in statuses) and empty and err < 1e-12
    assert criterion(5, ok, f"{statuses.count(ZERO_EXACT)}/4 ZERO_EXACT, boundary empty={empty}, norm error={err:.1e}")


def test_criterion_06_sphere_equators(criterion):
    details, ok = [], True
    for n, m in [(2, 32), (3, 3)]:
        T = ex.sphere_equator(n, m).chain
        planes = coordinate_planes(n + 1)
        sweep = null_directions_sweep(T, planes, exact=True)
        axis = sweep.entries[-1][1].status
        good = sweep.max_independent_zero == n and axis == NONZERO
        ok &= good
        details.append(f"n={n}: {sweep.max_independent_zero} independent zero normals, axis {axis}")
    assert criterion(6, ok, "; ".join(details))


def test_criterion_07_cube_loop(criterion):
    loops = ex.cube_loops(2)
    good = [b for b in loops
            if is_embedded_curve(b.chain)
            and all(projects_to_zero(b.chain, P, exact=True).status == ZERO_EXACT for P in coordinate_planes(3))]
    lengths = sorted(len(b.chain.cells) for b in good)
    assert criterion(7, len(good) >= 1, f"{len(good)} embedded null loop class(es), lengths {lengths}")


def test_criterion_08_involution_geometry(criterion):
    rng = np.random.default_rng(2024)
    worst_rr = worst_nu = worst_mid = worst_sigma = tangent_rr = 0.0
    mismatches = 0
    checked = 0
    for _ in range(20):
        B = random_ellipsoid(rng, 3)
        u = rng.normal(size=3)
        P = Hyperplane(tuple(u / np.linalg.norm(u)), float(rng.normal(scale=0.3)))
        u = P.unit
        eq = np.array(equator(B, P, 64).vertices(), float)
        worst_nu = max(worst_nu, max(abs(B.gauss(v) @ u) for v in eq))
        X = np.vstack([B.sample_boundary(rng, 50), eq])
        Z = SteinerSymmetral(B, P)
        for k, x in enumerate(X):
            y = involution(B, P, x)
            err = float(np.linalg.norm(involution(B, P, y) - x))
            # equator vertices are tangent points, where the chord root is
            # square-root conditioned; they only feed the band check
            if k < 50:
                worst_rr = max(worst_rr, err)
            else:
                tangent_rr = max(tangent_rr, err)
            lam = B.height_closed_form(P, x)
            if (np.linalg.norm(y - x) < 1e-6) != (abs(lam) < 1e-6):
                mismatches += 1
            checked += 1
            if k >= 50:
                continue
            # Steiner image against the plain quadratic formula
            t1, t2 = chord_roots(B.A, B.center, u, x)
            mid = x + (t1 + t2) / 2 * u
            expected = x - (mid @ u - P.offset) * u
            s = steiner(B, P, x)
            worst_sigma = max(worst_sigma, float(np.linalg.norm(s - expected)))
            a, b = Z.chord(u, s)
            worst_mid = max(worst_mid, abs((a + b) / 2 @ u - P.offset))
    ok = worst_rr < 1e-8 and mismatches == 0 and worst_nu < 1e-8 and worst_mid < 1e-8 and worst_sigma < 1e-8
    assert criterion(8, ok, f"rho^2 err {worst_rr:.1e} ({tangent_rr:.1e} at tangent points), "
                            f"band mismatches {mismatches}/{checked}, |nu.u| {worst_nu:.1e}, midpoint {worst_mid:.1e}, steiner {worst_sigma:.1e}")


def test_criterion_09_involution_reverses_null_cycles(criterion):
    rep = prop_or_battery(seed=0, ellipsoids=3)
    names = sorted(rep.summary)
    ok = rep.passed and len(names) == 5 and all(
        r["set_preserved"] and r["orientation_reversed"] for r in rep.summary.values())
    assert criterion(9, ok, f"{len(names) - len(rep.failures)}/{len(names)} cases pass")


def test_criterion_10_composed_involutions_move_every_point(criterion):
    S = Ellipsoid.sphere(3)
    planes = coordinate_planes(3)
    planes = [P.to_float() for P in planes]
    anti = thm_tech_fixed_point_experiment(S, planes, samples=10_000, seed=0)
    disp = anti.summary["min_displacement"]
    deg = degree_estimate(S, involution_map(S, planes))
    battery = thm_tech_battery(seed=0, configs=20, samples=10_000)
    control = thm_tech_fixed_point_experiment(S, planes[:2], samples=10_000, seed=0)
    pole = abs(abs(control.summary["argmin"][2]) - 1)
    ok = (abs(disp - 2) <= 1e-9 and deg == -1 and battery.passed
          and control.summary["min_displacement"] < 1e-3 and pole < 1e-3)
    assert criterion(10, ok, f"antipodal min {disp:.12f} degree {deg}; battery min ratio "
                             f"{battery.summary['min_ratio']:.3g}; control {control.summary['min_displacement']:.1e} "
                             f"at pole")


def test_criterion_11_random_spheres_never_vanish(criterion):
    rep = thm_main_search(seed=7, trials=200, n=2)
    controls = rep.summary["controls"]
    ctl_ok = len(controls) == 2 and all(c["excluded"] and c["all_zero"] for c in controls)
    ok = not rep.failures and ctl_ok
    assert criterion(11, ok, f"{len(rep.failures)} failures in 200 trials ({rep.summary['excluded']} excluded), "
                             f"controls excluded and all zero={ctl_ok}")


def _random_rational_chain(rnd, k, d, cells):
    pool = [tuple(F(rnd.randint(-12, 12), 4) for _ in range(d)) for _ in range(7)]
    out = []
    for _ in range(cells):
        idx = rnd.sample(range(len(pool)), k + 1)
        out.append(Simplex(tuple(pool[i] for i in idx), rnd.choice([-2, -1, 1, 2])))
    return SimplicialChain(d, k, tuple(out))


def test_criterion_12_structural(criterion):
    rnd = random.Random(12)
    dd = sum(reduce(boundary(boundary(_random_rational_chain(rnd, 2, 3, rnd.randint(1, 10))))).is_empty()
             for _ in range(100))
    literal = current = 0
    for _ in range(100):
        T = _random_rational_chain(rnd, 2, 3, rnd.randint(1, 8))
        n = (0, 0, 0)
        while not any(n):
            n = tuple(F(rnd.randint(-4, 4), rnd.randint(1, 3)) for _ in range(3))
        G = project_map(Hyperplane(n, F(rnd.randint(-3, 3), 2)))
        lhs, rhs = boundary(pushforward(T, G)), pushforward(boundary(T), G)
        literal += reduce(lhs) == reduce(rhs)
        current += hull_reduce(union(lhs, negate(rhs))).is_empty()
    agree = 0
    pairs = 0
    while pairs < 1000:
        pts = list({(F(rnd.randint(-12, 12), 4), F(rnd.randint(-12, 12), 4)) for _ in range(rnd.randint(3, 8))})
        if len(pts) < 3:
            continue
        T = SimplicialChain.polyline(pts)
        p = (F(rnd.randint(-100, 100), 29), F(rnd.randint(-100, 100), 31))
        try:
            ws = {winding_number(T, p, rng_seed=s) for s in (rnd.randrange(10 ** 9) for _ in range(3))}
        except OnSupportError:
            continue
        pairs += 1
        segs = [((c.vertices[0], c.vertices[1]), c.multiplicity) for c in T.cells]
        agree += len(ws) == 1 and ws.pop() == winding_by_angles(segs, p)
    ok = dd == 100 and current == 100 and agree == 1000
    assert criterion(12, ok, f"dd=0 {dd}/100; commutation {current}/100 as currents ({literal} literal); "
                             f"ray invariance {agree}/1000")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
