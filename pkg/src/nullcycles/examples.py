"""Generators for cycles with known projection verdicts.

Each generator returns an :class:`ExampleBundle`: a chain, an optional carrier
body, and a list of claimed verdicts that :func:`check_bundle` re-derives
from scratch.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .chains import (SimplicialChain, is_connected, is_embedded_curve, negate, reduce, translate, union)
from .core import GeometryError, Hyperplane, Simplex, Vec, basis
from .meshes import circle_points
from .nullproj import ZERO_EXACT, ZERO_PROBABLE, NONZERO, ZeroVerdict, projects_to_zero
from .ovaloid import AxisBox, ConvexBody, Ellipsoid, equator

ZERO = "ZERO"  # claim accepted by either zero status


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass
class ExampleBundle:
    name: str
    chain: SimplicialChain
    carrier: ConvexBody | None = None
    claims: list = field(default_factory=list)  # (Hyperplane, status)
    provenance: str = ""
    notes: dict = field(default_factory=dict)

    def claims_json(self) -> list:
        return [{"plane": P.to_json(), "expect": s} for P, s in self.claims]

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "provenance": self.provenance,
            "chain": self.chain.to_json(),
            "claims": self.claims_json(),
            "notes": self.notes,
        }
        if self.carrier is not None:
            out["carrier"] = self.carrier.to_json()
        return out


def status_matches(expected: str, verdict: ZeroVerdict) -> bool:
    if expected == ZERO:
        return verdict.is_zero
    return verdict.status == expected


def check_bundle(bundle: ExampleBundle, budget: int = 256, seed: int = 1) -> list[tuple[Hyperplane, str, ZeroVerdict, bool]]:
    """Re-verify every claim; exact claims use the exact pipeline."""
    out = []
    for i, (P, expected) in enumerate(bundle.claims):
        v = projects_to_zero(bundle.chain, P, budget=budget, rng_seed=seed + i, exact=True)
        out.append((P, expected, v, status_matches(expected, v)))
    return out


def carrier_consistent(bundle: ExampleBundle, tol: float = 1e-9) -> bool:
    if bundle.carrier is None:
        return True
    return all(bundle.carrier.on_boundary([float(c) for c in v], tol) for v in bundle.chain.vertices())


def coordinate_planes(d: int) -> list[Hyperplane]:
    return [Hyperplane.coordinate(d, i) for i in range(d)]


# ------------------------------------------------------------- doubling

# pairwise non-parallel rational unit vectors in the plane
PLANAR_UNIT_NORMALS = [
    (Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(1)),
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(4, 5), Fraction(-3, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(-12, 13), Fraction(5, 13)),
    (Fraction(8, 17), Fraction(15, 17)),
]


def doubling(seed: SimplicialChain, normals: Sequence[Vec], margin: float = 2.0,
             stages: list | None = None) -> SimplicialChain:
    """Repeatedly add a reversed copy translated along each normal.

    The shift is a rational bound ``ceil(margin * diam) + 1`` so the copies are
    disjoint and exact seeds stay exact.  Intermediate chains are appended to
    ``stages`` when a list is passed.
    """
    if seed.is_empty():
        raise GeometryError("doubling needs a nonempty seed")
    T = seed
    for nu in normals:
        nu = tuple(nu)
        if len(nu) != T.ambient_dim:
            raise GeometryError("normal has the wrong dimension")
        c = Fraction(math.ceil(margin * T.diameter()) + 1)
        shift = tuple(c * x if isinstance(x, Fraction) else float(c) * x for x in nu)
        T = union(T, translate(negate(T), shift), reduced=False)
        if stages is not None:
            stages.append(T)
    return T


def doubling_points(N: int, d: int) -> ExampleBundle:
    """``2^N`` signed points in R^d projecting to zero along ``N`` normals."""
    if d == 2:
        if N > len(PLANAR_UNIT_NORMALS):
            raise GeometryError(f"at most {len(PLANAR_UNIT_NORMALS)} planar normals are tabulated")
        normals = PLANAR_UNIT_NORMALS[:N]
    else:
        pool = [basis(d, i) for i in range(d)]
        pool += [tuple(Fraction(1) if j in (i, (i + 1) % d) else Fraction(0) for j in range(d)) for i in range(d)]
        if N > len(pool):
            raise GeometryError("not enough tabulated normals")
        normals = pool[:N]
    seed = SimplicialChain.point(tuple(Fraction(0) for _ in range(d)))
    T = doubling(seed, normals)
    claims = [(Hyperplane(tuple(nu)), ZERO_EXACT) for nu in normals]
    return ExampleBundle(f"doubling_{N}_in_R{d}", T, None, claims,
                         "signed point set built by repeated reversed translated copies",
                         {"cells": len(T.cells)})


# ------------------------------------------------------------- sphere loops

def _latitude(m: int, z: float, radius: float, reverse: bool = False) -> list[tuple]:
    pts = [(radius * c, radius * s, z) for c, s in circle_points(m)]
    return pts[::-1] if reverse else pts


def latitude_pair(m: int = 32) -> ExampleBundle:
    """Two oppositely oriented circles at heights +-1/2 on the unit sphere."""
    if m < 3:
        raise GeometryError("need m >= 3")
    r = math.sqrt(3) / 2
    lower = SimplicialChain.polyline(_latitude(m, -0.5, r))
    upper = SimplicialChain.polyline(_latitude(m, 0.5, r, reverse=True))
    T = union(lower, upper, reduced=False)
    claims = [(P, ZERO_EXACT) for P in coordinate_planes(3)]
    return ExampleBundle("latitude_pair", T, Ellipsoid.sphere(3), claims,
                         "oppositely oriented latitude circles on the round sphere",
                         {"components": 2})


def _meridian_arc(steps: int, r: float) -> list[tuple]:
    # symmetric in z by construction: point k mirrors point steps-k
    half = math.pi / 6
    pts = []
    for k in range(steps + 1):
        t = -half + 2 * half * k / steps
        pts.append((math.cos(t), 0.0, math.sin(t)))
    pts[0] = (r, 0.0, -0.5)
    pts[-1] = (r, 0.0, 0.5)
    for k in range(steps // 2 + 1, steps + 1):
        x, y, z = pts[steps - k]
        pts[k] = (x, y, -z)
    if steps % 2 == 0:
        pts[steps // 2] = (1.0, 0.0, 0.0)
    return pts


def doubled_arc_loop(m: int = 32) -> ExampleBundle:
    """One closed loop: lower circle, up along a meridian, upper circle reversed, back down.

    The chain is kept unreduced so it is a single connected loop; the two arc
    passes use identical vertices and cancel under ``reduce``.
    """
    if m < 8:
        raise GeometryError("need m >= 8")
    r = math.sqrt(3) / 2
    lower = _latitude(m, -0.5, r)            # starts at (r, 0, -1/2)
    upper = _latitude(m, 0.5, r, reverse=True)
    upper = [upper[-1]] + upper[:-1]         # start at (r, 0, 1/2)
    arc = _meridian_arc(max(2, m // 8), r)
    loop = lower + arc[:-1] + upper + arc[::-1][:-1]
    T = SimplicialChain.polyline(loop)
    claims = [(P, ZERO_EXACT) for P in coordinate_planes(3)]
    return ExampleBundle("doubled_arc_loop", T, Ellipsoid.sphere(3), claims,
                         "latitude pair joined by a meridian arc traversed both ways",
                         {"arc_cells": len(arc) - 1})


def clifford_torus(m: int = 16) -> ExampleBundle:
    """Flat torus ``(cos a, sin a, cos b, sin b)`` on the sphere of radius sqrt 2 in R^4.

    Each grid quad is split through its center into four triangles so that
    the triangulation is invariant under every coordinate reflection.
    """
    if m < 4 or m % 2:
        raise GeometryError("clifford_torus needs an even m >= 4")
    ring = circle_points(2 * m)

    def X(i, j):
        a, b = ring[i % (2 * m)], ring[j % (2 * m)]
        return (a[0], a[1], b[0], b[1])

    cells = []
    for i in range(0, 2 * m, 2):
        for j in range(0, 2 * m, 2):
            c = X(i + 1, j + 1)
            corners = [X(i, j), X(i + 2, j), X(i + 2, j + 2), X(i, j + 2)]
            for k in range(4):
                cells.append(Simplex((corners[k], corners[(k + 1) % 4], c), 1))
    T = SimplicialChain(4, 2, tuple(cells))
    claims = [(P, ZERO_EXACT) for P in coordinate_planes(4)]
    return ExampleBundle("clifford_torus", T, Ellipsoid.sphere(4, math.sqrt(2)), claims,
                         "flat torus in R^4, doubled cylinders in every coordinate projection")


def sphere_equator(n: int = 2, m: int = 32) -> ExampleBundle:
    """The equator ``x_(n+1) = 0`` of the unit n-sphere.

    ``m`` is the polygon size for ``n = 2`` and the facet subdivision level
    for ``n >= 3``.
    """
    if n < 1:
        raise GeometryError("need n >= 1")
    d = n + 1
    B = Ellipsoid.sphere(d)
    T = equator(B, Hyperplane.coordinate(d, n).to_float(), m, companion=basis(d, 0))
    claims = [(Hyperplane.coordinate(d, i), ZERO_EXACT) for i in range(n)]
    claims.append((Hyperplane.coordinate(d, n), NONZERO))
    return ExampleBundle(f"sphere_equator_{n}", T, B, claims,
                         "equator of the round sphere, null on every plane containing the polar axis")


def horizontal_circle(m: int = 32, height: float = 0.0) -> ExampleBundle:
    pts = [(c, s, height) for c, s in circle_points(m)]
    T = SimplicialChain.polyline(pts)
    claims = [(Hyperplane.coordinate(3, 0), ZERO_EXACT), (Hyperplane.coordinate(3, 1), ZERO_EXACT),
              (Hyperplane.coordinate(3, 2), NONZERO)]
    return ExampleBundle("horizontal_circle", T, None, claims,
                         "horizontal circle: null on vertical planes only")


# ------------------------------------------------------------- figure eight

FIGURE8_XY = [(3, 0), (2, -1), (1, -1), (0, 0), (-1, 1), (-2, 1),
              (-3, 0), (-2, -1), (-1, -1), (0, 0), (1, 1), (2, 1)]


def figure8_loop() -> ExampleBundle:
    """Embedded space loop whose top view is a figure eight traversed both ways.

    The forward pass climbs at height ``k`` over vertex ``k``; the return pass
    runs through edge midpoints at height ``k + k(12-k)/6`` so both passes
    meet only at their shared endpoints.  The top view keeps every segment
    after plain reduction; only overlay cancellation removes it.
    """
    xy = [tuple(Fraction(c) for c in p) for p in FIGURE8_XY]
    n = len(xy)

    def at(t: Fraction):
        k = int(t)
        a, b = xy[k % n], xy[(k + 1) % n]
        f = t - k
        return (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))

    def lift_back(t: Fraction):
        return t + t * (n - t) / 6

    fwd = [(*at(Fraction(k)), Fraction(k)) for k in range(n + 1)]
    back = []
    for j in range(2 * n, 0, -1):
        t = Fraction(j, 2)
        back.append((*at(t), lift_back(t)))
    loop = fwd + back[1:]  # back[0] is the top of the forward pass
    T = SimplicialChain.polyline(loop)
    return ExampleBundle("figure8_loop", T, None, [(Hyperplane.coordinate(3, 2), ZERO_EXACT)],
                         "embedded loop over a doubly traversed figure eight")


# ------------------------------------------------------------- cube loops

def _cube_graph(r: int):
    verts = [v for v in itertools.product(range(r + 1), repeat=3) if any(c in (0, r) for c in v)]
    idx = {v: i for i, v in enumerate(verts)}
    adj: list[list[int]] = [[] for _ in verts]
    for v in verts:
        for i in range(3):
            w = list(v)
            w[i] += 1
            w = tuple(w)
            if w in idx and any(v[j] == w[j] and v[j] in (0, r) for j in range(3) if j != i):
                a, b = idx[v], idx[w]
                adj[a].append(b)
                adj[b].append(a)
    return verts, adj


def _cube_symmetries(r: int) -> list[Callable]:
    ops = []
    for perm in itertools.permutations(range(3)):
        for flips in itertools.product((False, True), repeat=3):
            def op(v, perm=perm, flips=flips):
                w = [v[p] for p in perm]
                return tuple(r - c if f else c for c, f in zip(w, flips))
            ops.append(op)
    return ops


def _canonical_loop(loop: list[tuple], ops) -> tuple:
    best = None
    for op in ops:
        edges = tuple(sorted(tuple(sorted((op(a), op(b)))) for a, b in zip(loop, loop[1:] + loop[:1])))
        if best is None or edges < best:
            best = edges
    return best


@lru_cache(maxsize=None)
def _search_cube_loops(r: int, budget: int) -> tuple:
    verts, adj = _cube_graph(r)

    # projected edge keys: dropping axis ax, an edge along axis i lands on a
    # grid edge of the coordinate face; a loop projects to zero iff every such
    # key has net signed usage zero
    def keys(a, b):
        va, vb = verts[a], verts[b]
        i = next(k for k in range(3) if va[k] != vb[k])
        sgn = 1 if vb[i] > va[i] else -1
        lo = min(va, vb)
        return [((ax, i, tuple(c for k, c in enumerate(lo) if k != ax)), sgn) for ax in range(3) if ax != i]

    key_ids: dict = {}
    ek = {}
    for a in range(len(verts)):
        for b in adj[a]:
            ek[(a, b)] = tuple((key_ids.setdefault(k, len(key_ids)), s) for k, s in keys(a, b))
    sums = [0] * len(key_ids)
    nonzero = [0]
    visited = [False] * len(verts)
    found: list[list[int]] = []
    seen = [0]
    steps = [0]

    def bump(ks, sign):
        for k, s in ks:
            old = sums[k]
            new = old + sign * s
            sums[k] = new
            nonzero[0] += (new != 0) - (old != 0)

    def dfs(start, cur, path):
        for nb in adj[cur]:
            if nb == start and len(path) >= 4:
                if path[1] < path[-1]:
                    seen[0] += 1
                    ks = ek[(cur, start)]
                    bump(ks, 1)
                    if nonzero[0] == 0:
                        found.append(list(path))
                    bump(ks, -1)
                continue
            if nb <= start or visited[nb]:
                continue
            steps[0] += 1
            if steps[0] > budget:
                raise SearchBudgetExceeded(f"more than {budget} search steps on the r={r} grid")
            ks = ek[(cur, nb)]
            bump(ks, 1)
            visited[nb] = True
            path.append(nb)
            dfs(start, nb, path)
            path.pop()
            visited[nb] = False
            bump(ks, -1)

    for s in range(len(verts)):
        visited[s] = True
        dfs(s, s, [s])
        visited[s] = False

    ops = _cube_symmetries(r)
    classes: dict = {}
    for path in found:
        loop = [verts[i] for i in path]
        classes.setdefault(_canonical_loop(loop, ops), loop)
    return tuple(classes[k] for k in sorted(classes)), seen[0], len(found), steps[0]


def cube_loops(r: int = 2, budget: int = 20_000_000) -> list[ExampleBundle]:
    """All simple edge loops on the r-refined cube surface that project to zero
    on the three coordinate planes, one per symmetry class.

    ``budget`` caps the number of depth-first extension steps; r=2 needs
    about 9.5 million.
    """
    if not 1 <= r <= 4:
        raise GeometryError("refinement must be in 1..4")
    loops, searched, total, _ = _search_cube_loops(r, budget)
    out = []
    for k, loop in enumerate(loops):
        pts = [tuple(Fraction(c, r) for c in v) for v in loop]
        T = SimplicialChain.polyline(pts)
        claims = [(P, ZERO_EXACT) for P in coordinate_planes(3)]
        out.append(ExampleBundle(f"cube_loop_r{r}_{k}", T, AxisBox.unit_cube(3), claims,
                                 "edge loop on the unit cube surface found by exhaustive search",
                                 {"length": len(loop), "cycles_searched": searched, "matches": total}))
    return out


# ------------------------------------------------------------- registry

def _first_cube_loop(r: int = 2) -> ExampleBundle:
    loops = cube_loops(r)
    if not loops:
        raise GeometryError(f"no null cube loop at refinement {r}")
    return loops[0]


GALLERY: dict[str, tuple[Callable[..., ExampleBundle], dict]] = {
    "horizontal_circle": (horizontal_circle, {"m": 32}),
    "figure8_loop": (figure8_loop, {}),
    "doubling_points": (doubling_points, {"N": 3, "d": 3}),
    "latitude_pair": (latitude_pair, {"m": 32}),
    "doubled_arc_loop": (doubled_arc_loop, {"m": 32}),
    "clifford_torus": (clifford_torus, {"m": 16}),
    "sphere_equator": (sphere_equator, {"n": 2, "m": 32}),
    "cube_loop": (_first_cube_loop, {"r": 2}),
}


def build(name: str, **params) -> ExampleBundle:
    if name not in GALLERY:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(GALLERY)}")
    fn, defaults = GALLERY[name]
    kwargs = dict(defaults)
    for k, v in params.items():
        if k not in defaults:
            raise KeyError(f"example {name!r} takes no parameter {k!r}")
        kwargs[k] = type(defaults[k])(v)
    return fn(**kwargs)


def manifest() -> list[dict]:
    out = []
    for name, (fn, defaults) in GALLERY.items():
        doc = (fn.__doc__ or "").strip().splitlines()
        out.append({"name": name, "defaults": defaults, "summary": doc[0] if doc else ""})
    return out


__all__ = [
    "ExampleBundle", "ZERO", "check_bundle", "carrier_consistent", "doubling", "doubling_points",
    "latitude_pair", "doubled_arc_loop", "clifford_torus", "sphere_equator", "horizontal_circle",
    "figure8_loop", "cube_loops", "GALLERY", "build", "manifest", "SearchBudgetExceeded",
    "is_connected", "is_embedded_curve", "reduce", "ZERO_PROBABLE",
]
