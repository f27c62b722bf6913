"""Seeded experiments probing involutions, fixed points and null projections.

Every harness returns an :class:`ExperimentReport`.  Trial seeds are spawned
from one :class:`numpy.random.SeedSequence`, so a report is a pure function of
its arguments apart from the recorded runtime.
"""
from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from . import examples as ex
from .chains import (SimplicialChain, euler_characteristic, is_connected, is_cycle, is_embedded_curve,
                     is_embedded_surface, map_cells, negate, reduce)
from .core import GeometryError, Hyperplane, independent
from .meshes import sphere_mesh
from .nullproj import NONZERO, OnSupportError, null_directions_sweep, projects_to_zero, winding_number
from .ovaloid import Ellipsoid, UnsupportedBody, equator, involution, random_ellipsoid, slice_frame


class PreconditionFailed(GeometryError):
    pass


@dataclass
class ExperimentReport:
    experiment: str
    seed: int
    trials: int
    passed: bool = True
    failures: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_json(self, include_runtime: bool = True) -> dict:
        out = {
            "experiment": self.experiment,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "failures": self.failures,
            "summary": self.summary,
        }
        if include_runtime:
            out["runtime"] = self.runtime
        return out

    def dumps(self, include_runtime: bool = True) -> str:
        return json.dumps(_jsonable(self.to_json(include_runtime)), indent=2, sort_keys=True)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def _trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def _int_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 31 - 1))


# ------------------------------------------------------------ orientation

def prop_or_check(B: Ellipsoid, P: Hyperplane, T: SimplicialChain, budget: int = 256,
                  seed: int = 0) -> ExperimentReport:
    """Check that the P-involution maps a null-projecting cycle onto itself reversed."""
    t0 = time.perf_counter()
    verdict = projects_to_zero(T, P, budget=budget, rng_seed=seed)
    if not verdict.is_zero:
        raise PreconditionFailed(f"cycle does not project to zero on {P}: {verdict.status}")
    verts = [tuple(float(c) for c in v) for v in T.vertices()]
    V = np.array(verts)
    h = max(float(np.linalg.norm(np.subtract(a, b)))
            for c in T.cells for i, a in enumerate(c.vertices) for b in c.vertices[i + 1:]) if T.dim else 0.0
    delta = 2 * h
    images = np.array([involution(B, P, v) for v in V])
    dist, nearest = cKDTree(V).query(images)
    set_ok = bool(np.all(dist <= delta))
    snap = {v: verts[j] for v, j in zip(verts, nearest)}
    image = map_cells(T.to_float(), lambda v: snap[tuple(float(c) for c in v)], T.ambient_dim)
    reversed_ok = reduce(image) == reduce(negate(T.to_float()))
    fixed = int(np.sum(np.linalg.norm(images - V, axis=1) <= 1e-8))
    rep = ExperimentReport("prop_or", seed, len(verts), passed=set_ok and reversed_ok)
    rep.summary = {
        "precondition": verdict.status,
        "set_preserved": set_ok,
        "max_snap_distance": float(dist.max()) if len(dist) else 0.0,
        "delta": delta,
        "orientation_reversed": reversed_ok,
        "fixed_vertices": fixed,
        "vertices": len(verts),
    }
    if not rep.passed:
        rep.failures.append({"body": B.to_json(), "plane": P.to_json(), "chain": T.to_json()})
    rep.runtime = time.perf_counter() - t0
    return rep


# ------------------------------------------------------------ fixed points

def _compose_batch(B: Ellipsoid, planes: Sequence[Hyperplane], X: np.ndarray) -> np.ndarray:
    Y = X
    for P in planes:
        Y = B.involution_batch(P.unit, Y)
    return Y


def height_chain(B: Ellipsoid, planes: Sequence[Hyperplane], y) -> list[float]:
    """Heights ``lambda_i`` evaluated along the orbit ``y, rho_1 y, rho_2 rho_1 y, ...``."""
    out = []
    cur = np.asarray(y, float)
    for P in planes:
        out.append(B.height_closed_form(P, cur))
        cur = B.involution_batch(P.unit, cur)[0]
    return out


def thm_tech_fixed_point_experiment(B: Ellipsoid, planes: Sequence[Hyperplane], samples: int = 10_000,
                                    seed: int = 0, refine: bool = True) -> ExperimentReport:
    """Smallest displacement of the composed involution over boundary samples."""
    t0 = time.perf_counter()
    if not isinstance(B, Ellipsoid):
        raise UnsupportedBody("fixed-point experiments need an ellipsoid")
    if not independent([P.unit.tolist() for P in planes]):
        raise GeometryError("planes are dependent; the experiment would be vacuous")
    rng = np.random.default_rng(seed)
    X = B.sample_boundary(rng, samples)
    disp = np.linalg.norm(_compose_batch(B, planes, X) - X, axis=1)
    k = int(np.argmin(disp))
    best_x, best = X[k], float(disp[k])
    sampled = best
    if refine:
        inv_root = np.linalg.inv(B.root)

        def f(s):
            x = B.boundary_point(s)
            return float(np.linalg.norm(_compose_batch(B, planes, x[None, :])[0] - x))

        res = minimize(f, inv_root @ (best_x - B.center), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        if res.fun < best:
            best, best_x = float(res.fun), B.boundary_point(res.x)
    rep = ExperimentReport("thm_tech", seed, samples)
    rep.summary = {
        "planes": [P.to_json() for P in planes],
        "full_rank": len(planes) == B.dim,
        "diameter": B.diameter,
        "min_sampled_displacement": sampled,
        "min_displacement": best,
        "ratio_to_diameter": best / B.diameter,
        "argmin": best_x.tolist(),
        "height_chain": height_chain(B, planes, best_x),
    }
    rep.passed = best > 1e-3 * B.diameter if len(planes) == B.dim else True
    rep.runtime = time.perf_counter() - t0
    return rep


def degree_estimate(B: Ellipsoid, psi: Callable[[np.ndarray], np.ndarray], level: int = 4,
                    seed: int = 0, tries: int = 8) -> int:
    """Degree of a self-map of the boundary via the winding of the image mesh.

    The outward mesh of the boundary winds once around the center; the image
    of that mesh under ``psi`` winds ``deg psi`` times.
    """
    d = B.dim
    mesh = sphere_mesh(d - 1, 8 * level if d == 2 else level)
    image = map_cells(mesh, lambda s: tuple(float(c) for c in psi(B.boundary_point(s))), d)
    rng = random.Random(seed)
    scale = 1e-3 * B.diameter
    for _ in range(tries):
        p = tuple(B.center + np.array([rng.uniform(-scale, scale) for _ in range(d)]))
        try:
            return winding_number(image, p, rng_seed=rng.randrange(2 ** 31), check=False)
        except (OnSupportError, ArithmeticError):
            continue
    raise ArithmeticError("no regular sample point found")


def involution_map(B: Ellipsoid, planes: Sequence[Hyperplane]) -> Callable[[np.ndarray], np.ndarray]:
    def psi(x):
        return _compose_batch(B, planes, np.asarray(x, float)[None, :])[0]
    return psi


# ------------------------------------------------------------ null search

def random_independent_planes(rng: np.random.Generator, d: int, lo: int = -3, hi: int = 3) -> list[Hyperplane]:
    while True:
        M = rng.integers(lo, hi + 1, size=(d, d))
        if round(abs(np.linalg.det(M))) != 0:
            return [Hyperplane(tuple(int(c) for c in row)) for row in M]


def random_sphere_cycle(B: Ellipsoid, rng: np.random.Generator, n: int, resolution: int = 48,
                        amplitude: float = 0.5) -> SimplicialChain:
    """Embedded (n-1)-sphere on the ellipsoid: a bumpy graph over a random equator.

    Points ``c + L z + h(z) b`` with ``L`` an A-orthonormal frame of a random
    equator slice and ``b`` the A-unit vector across it, then snapped radially
    onto the surface.  Distinct ``z`` give distinct rays from the center, so
    the snapped mesh stays embedded.
    """
    d = n + 1
    u = rng.normal(size=d)
    u /= np.linalg.norm(u)
    P = Hyperplane(tuple(float(c) for c in u))
    L = slice_frame(B, P)
    b = u / math.sqrt(float(u @ B.A @ u))
    g1, g2 = rng.normal(size=(2, n))
    M = rng.normal(size=(n, n))
    coef = rng.uniform(-1, 1, size=3)

    def h(z):
        return coef[0] * (g1 @ z) + coef[1] * (z @ M @ z) + coef[2] * (g2 @ z) ** 3

    mesh = sphere_mesh(n - 1, resolution if n == 2 else max(2, resolution // 16))
    zs = [np.array(v, float) for v in mesh.vertices()]
    top = max(abs(h(z)) for z in zs) or 1.0
    scale = amplitude * rng.uniform(0.2, 1.0) / top

    def lift(z):
        z = np.asarray(z, float)
        y = L @ z + scale * h(z) * b
        s = math.sqrt(float(y @ B.A @ y))
        return tuple(float(c) for c in B.center + y / s)

    return map_cells(mesh, lift, d)


def sphere_like_filters(T: SimplicialChain) -> dict:
    """Connected / embedded / sphere-topology checks for an (n-1)-cycle."""
    k = T.dim
    if k == 0:
        R = reduce(T)
        mults = sorted(c.multiplicity for c in R.cells)
        ok = mults == [-1, 1] and len(T.cells) == 2
        return {"connected": True, "embedded": ok, "sphere": ok}
    connected = is_connected(T)
    if k == 1:
        emb = is_embedded_curve(T)
        return {"connected": connected, "embedded": emb, "sphere": connected and emb}
    emb = is_embedded_surface(T)
    sphere = connected and emb and euler_characteristic(T) == (2 if k % 2 == 0 else 0)
    return {"connected": connected, "embedded": emb, "sphere": sphere}


def _controls(n: int) -> list[ex.ExampleBundle]:
    if n == 1:
        return [ex.doubling_points(2, 2)]
    if n == 2:
        return [ex.latitude_pair(32), ex.doubled_arc_loop(32)]
    return [ex.clifford_torus(8)]


def thm_main_search(seed: int = 7, trials: int = 200, n: int = 2, budget: int = 256,
                    resolution: int = 48, out_dir: str | Path | None = None) -> ExperimentReport:
    """Random embedded spheres on random ellipsoids against n+1 random independent planes.

    A failure is a trial where every plane gives a zero verdict.  Trials with
    at least ``n`` zero verdicts are re-checked at ten times the budget.
    """
    if n not in (1, 2, 3):
        raise GeometryError("n must be 1, 2 or 3")
    t0 = time.perf_counter()
    d = n + 1
    rep = ExperimentReport("thm_main", seed, trials)
    zero_hist = [0] * (d + 1)
    status_counts: dict = {}
    excluded = escalated = 0
    for i, rng in enumerate(_trial_rngs(seed, trials)):
        B = random_ellipsoid(rng, d)
        T = random_sphere_cycle(B, rng, n, resolution)
        planes = random_independent_planes(rng, d)
        filt = sphere_like_filters(T)
        if not all(filt.values()):
            excluded += 1
            continue
        sseed = _int_seed(rng)
        sweep = null_directions_sweep(T, planes, budget, sseed)
        verdicts = [v for _, v in sweep.entries]
        if sum(v.is_zero for v in verdicts) >= n:
            escalated += 1
            verdicts = [v if not v.is_zero else projects_to_zero(T, P, 10 * budget, sseed + 1000 + j)
                        for j, (P, v) in enumerate(zip(planes, verdicts))]
        zeros = sum(v.is_zero for v in verdicts)
        zero_hist[zeros] += 1
        for v in verdicts:
            status_counts[v.status] = status_counts.get(v.status, 0) + 1
        if zeros == d:
            record = {"trial": i, "body": B.to_json(), "planes": [P.to_json() for P in planes],
                      "chain": T.to_json(), "verdicts": [v.to_json() for v in verdicts]}
            rep.failures.append(record)
            if out_dir is not None:
                path = Path(out_dir)
                path.mkdir(parents=True, exist_ok=True)
                (path / f"thm_main_failure_{seed}_{i}.json").write_text(json.dumps(_jsonable(record)))
    controls = []
    for bundle in _controls(n):
        filt = sphere_like_filters(bundle.chain)
        checks = ex.check_bundle(bundle, budget=budget)
        controls.append({
            "name": bundle.name,
            "filters": filt,
            "excluded": not all(filt.values()),
            "all_zero": all(v.is_zero for _, _, v, _ in checks),
        })
    rep.summary = {
        "n": n,
        "excluded": excluded,
        "escalated": escalated,
        "zero_count_histogram": zero_hist,
        "verdict_counts": dict(sorted(status_counts.items())),
        "failures": len(rep.failures),
        "controls": controls,
    }
    rep.passed = not rep.failures and all(c["excluded"] and c["all_zero"] for c in controls)
    rep.runtime = time.perf_counter() - t0
    return rep


# ------------------------------------------------------------ batteries

def thm_tech_battery(seed: int = 0, configs: int = 20, samples: int = 10_000, n: int = 2) -> ExperimentReport:
    """Fixed-point experiment over random ellipsoids and random independent planes."""
    t0 = time.perf_counter()
    rep = ExperimentReport("thm_tech_battery", seed, configs)
    ratios = []
    for i, rng in enumerate(_trial_rngs(seed, configs)):
        B = random_ellipsoid(rng, n + 1)
        planes = random_independent_planes(rng, n + 1)
        r = thm_tech_fixed_point_experiment(B, planes, samples, _int_seed(rng), refine=False)
        ratios.append(r.summary["ratio_to_diameter"])
        if not r.passed:
            rep.failures.append({"trial": i, "body": B.to_json(), **r.summary})
    rep.summary = {"min_ratio": min(ratios), "ratios": ratios}
    rep.passed = not rep.failures
    rep.runtime = time.perf_counter() - t0
    return rep


def prop_or_battery(seed: int = 0, ellipsoids: int = 3, resolution: int = 32) -> ExperimentReport:
    """Involution-reversal checks on the round sphere and random ellipsoids."""
    t0 = time.perf_counter()
    cases = []
    S = Ellipsoid.sphere(3)
    eq = equator(S, Hyperplane((0.0, 0.0, 1.0)), resolution, companion=(1.0, 0.0, 0.0))
    cases.append(("sphere_equator", S, Hyperplane((1.0, 0.0, 0.0)), eq))
    cases.append(("sphere_doubled_arc", S, Hyperplane((0.0, 0.0, 1.0)), ex.doubled_arc_loop(resolution).chain))
    for i, rng in enumerate(_trial_rngs(seed, ellipsoids)):
        B = random_ellipsoid(rng, 3)
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        Au = B.A @ u
        w = np.cross(Au, rng.normal(size=3))
        w /= np.linalg.norm(w)
        T = equator(B, Hyperplane(tuple(u)), resolution, companion=w)
        cases.append((f"ellipsoid_{i}_equator", B, Hyperplane(tuple(w)), T))
    rep = ExperimentReport("prop_or_battery", seed, len(cases))
    rows = {}
    for name, B, P, T in cases:
        r = prop_or_check(B, P, T, seed=seed)
        rows[name] = r.summary
        if not r.passed:
            rep.failures.append({"case": name, **r.summary})
    rep.summary = rows
    rep.passed = not rep.failures
    rep.runtime = time.perf_counter() - t0
    return rep


EXPERIMENTS = {
    "thm_main": thm_main_search,
    "thm_tech": thm_tech_battery,
    "prop_or": prop_or_battery,
}


def run_experiment(name: str, seed: int, trials: int | None = None, **kw) -> ExperimentReport:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    if trials is not None:
        key = {"thm_main": "trials", "thm_tech": "configs", "prop_or": "ellipsoids"}[name]
        kw[key] = trials
    return EXPERIMENTS[name](seed=seed, **kw)
