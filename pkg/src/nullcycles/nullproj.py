"""Deciding whether a projected cycle is the zero current.

Three procedures, from strongest to weakest:

* exact cancellation: :func:`reduce` and :func:`hull_reduce` (overlay of cells
  sharing an affine hull);
* for 1-cycles in the plane, an exact trapezoidal decomposition of the segment
  arrangement that evaluates the winding number on every face;
* randomized ray shooting, which can certify a nonzero winding number but can
  only report that a cycle is *probably* zero.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .chains import NotACycle, SimplicialChain, boundary, pushforward, reduce, require_cycle
from .core import (
    EPS,
    DimensionMismatch,
    GeometryError,
    Hyperplane,
    NumericFailure,
    Simplex,
    Vec,
    affine_rank,
    chart_map,
    exact_det,
    independent,
    is_exact_vec,
    rref,
    scalar_to_json,
    sub,
)

ZERO_EXACT = "ZERO_EXACT"
ZERO_PROBABLE = "ZERO_PROBABLE"
NONZERO = "NONZERO"
MAX_RAY_TRIES = 64


class OnSupportError(GeometryError):
    """The query point lies on the support of the cycle."""


@dataclass
class ZeroVerdict:
    status: str
    method: str
    witness: dict | None = None
    samples_used: int = 0

    @property
    def is_zero(self) -> bool:
        return self.status in (ZERO_EXACT, ZERO_PROBABLE)

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            w = {}
            for k, v in self.witness.items():
                if k == "point":
                    w[k] = [scalar_to_json(x) for x in v]
                elif k == "cell":
                    w[k] = {"vertices": [[scalar_to_json(x) for x in p] for p in v.vertices],
                            "multiplicity": v.multiplicity}
                else:
                    w[k] = v
        return {"status": self.status, "witness": w, "samples_used": self.samples_used, "method": self.method}


@dataclass
class WindingField:
    cycle: SimplicialChain
    samples: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        d = self.cycle.ambient_dim
        names = ["x", "y", "z"] if d <= 3 else [f"x{i + 1}" for i in range(d)]
        w.writerow(names[:d] + ["winding"])
        for p, k in self.samples:
            w.writerow([float(x) for x in p] + [k])
        return buf.getvalue()


# ------------------------------------------------------------ hull overlay

def _flat_key(directions: Sequence[Vec], point: Vec):
    """Canonical description of the affine flat ``point + span(directions)``."""
    red = rref(directions)
    anchor = list(Fraction(x) for x in point)
    for row in red:
        p = next(i for i, x in enumerate(row) if x != 0)
        f = anchor[p]
        if f:
            anchor = [a - f * r for a, r in zip(anchor, row)]
    return red, tuple(anchor)


def _line_overlay(cells: list[Simplex], direction: Vec) -> list[Simplex]:
    """Exact multiplicity bookkeeping for segments on one line."""
    def param(v):
        return sum(a * b for a, b in zip(v, direction))

    where: dict = {}
    events = []
    for c in cells:
        a, b = c.vertices
        ta, tb = param(a), param(b)
        where[ta], where[tb] = a, b
        if ta < tb:
            events.append((ta, tb, c.multiplicity))
        else:
            events.append((tb, ta, -c.multiplicity))
    ts = sorted(where)
    # difference array over breakpoints
    delta: dict = defaultdict(int)
    for lo, hi, m in events:
        delta[lo] += m
        delta[hi] -= m
    out = []
    run = 0
    start = None
    for t0, t1 in zip(ts, ts[1:]):
        run += delta[t0]
        if start is not None and run != start[1]:
            out.append(Simplex((where[start[0]], where[t0]), start[1]))
            start = None
        if run and start is None:
            start = (t0, run)
    if start is not None:
        out.append(Simplex((where[start[0]], where[ts[-1]]), start[1]))
    return out


def hull_reduce(T: SimplicialChain) -> SimplicialChain:
    """Remove exactly cancelling overlaps between cells with a common hull.

    Segments on one line are split at every breakpoint and their
    multiplicities summed per elementary interval.  For cells of dimension
    two or more, a group of cells sharing an affine hull is dropped when it is
    itself a cycle, since a compactly supported top-dimensional cycle in a
    flat is zero.
    """
    if not T.exact:
        raise GeometryError("hull_reduce needs an exact (rational) chain")
    R = reduce(T)
    if R.dim == 0 or R.is_empty():
        return R
    groups: dict = defaultdict(list)
    for c in R.cells:
        v0 = c.vertices[0]
        edges = [sub(v, v0) for v in c.vertices[1:]]
        red = rref(edges)
        if len(red) < R.dim:
            continue  # degenerate cell carries no current
        groups[_flat_key(edges, v0)].append(c)
    out: list[Simplex] = []
    for (red, _), cells in groups.items():
        if R.dim == 1:
            out.extend(_line_overlay(cells, red[0]))
        else:
            G = SimplicialChain(R.ambient_dim, R.dim, tuple(cells))
            if not hull_reduce(boundary(G)).is_empty():
                out.extend(cells)
    return reduce(SimplicialChain(R.ambient_dim, R.dim, tuple(out)))


# --------------------------------------------------------- winding numbers

def _random_direction(d: int, rng: random.Random, exact_mode: bool):
    while True:
        if exact_mode:
            v = tuple(Fraction(rng.randint(-(1 << 20), 1 << 20)) for _ in range(d))
            if any(v):
                return v
        else:
            v = np.array([rng.gauss(0.0, 1.0) for _ in range(d)])
            n = np.linalg.norm(v)
            if n > 1e-6:
                return tuple(v / n)


class _CellTable:
    """Float arrays of a codimension-one cycle, cached for repeated rays."""

    def __init__(self, T: SimplicialChain):
        self.T = T
        self.d = T.ambient_dim
        self.cells = T.cells
        self.exact = T.exact
        self.v0 = np.array([[float(x) for x in c.vertices[0]] for c in T.cells]).reshape(len(T.cells), self.d)
        self.E = np.array([[[float(a) - float(b) for a, b in zip(v, c.vertices[0])] for v in c.vertices[1:]]
                           for c in T.cells]).reshape(len(T.cells), self.d - 1, self.d)
        self.mult = np.array([c.multiplicity for c in T.cells], dtype=np.int64)


def _winding_float_pass(tab: _CellTable, p: np.ndarray, direction: np.ndarray, tol: float):
    """Vectorized ray casting in binary64.

    Returns the float winding, the indices of cells whose classification is
    within ``tol`` of a decision boundary, the mask of clean hits, and the
    indices of cells nearly parallel to the ray.
    """
    n = len(tab.cells)
    d = tab.d
    # columns: E_1..E_k, -dir
    M = np.concatenate([tab.E, np.broadcast_to(-direction, (n, 1, d))], axis=1).transpose(0, 2, 1)
    rhs = p[None, :] - tab.v0
    D = np.linalg.det(M)
    colnorm = np.prod(np.linalg.norm(M, axis=1), axis=1)
    good = np.abs(D) / np.maximum(colnorm, 1e-300) > 1e-9
    sol = np.zeros((n, d))
    if np.any(good):
        sol[good] = np.linalg.solve(M[good], rhs[good][..., None])[..., 0]
    s = sol[:, :-1]
    t = sol[:, -1]
    ssum = s.sum(axis=1)
    inside = good & np.all(s > tol, axis=1) & (ssum < 1 - tol) & (t > tol)
    outside = np.any(s < -tol, axis=1) | (ssum > 1 + tol) | (t < -tol)
    ambiguous = np.nonzero(good & ~inside & ~outside)[0]
    orient = np.sign(np.linalg.det(np.concatenate([np.broadcast_to(direction, (n, 1, d)), tab.E], axis=1)))
    w = int(np.sum(tab.mult[inside] * orient[inside].astype(np.int64)))
    return w, ambiguous, inside, np.nonzero(~good)[0]


def _exact_cell_hit(cell: Simplex, p: Vec, direction: Vec):
    """Exact ray/cell test: returns +1/-1 contribution, 0, or raises/flags.

    Returns ``None`` when the ray is degenerate for this cell.
    """
    v0 = cell.vertices[0]
    E = [sub(v, v0) for v in cell.vertices[1:]]
    d = len(p)
    w = sub(p, v0)
    cols = E + [tuple(-x for x in direction)]
    rows = [[col[i] for col in cols] for i in range(d)]
    D = exact_det(rows)
    if D == 0:
        # ray parallel to the hull; degenerate only if p lies in the hull
        if d == 1 or exact_det([list(e) for e in E] + [list(w)]) == 0:
            return None
        return 0
    params = []
    for j in range(d):
        rj = [row[:j] + [w[i]] + row[j + 1:] for i, row in enumerate(rows)]
        params.append(exact_det(rj) / D)
    s, t = params[:-1], params[-1]
    ssum = sum(s, Fraction(0))
    in_closed = all(x >= 0 for x in s) and ssum <= 1
    if t == 0 and in_closed:
        raise OnSupportError(f"point {tuple(map(float, p))} lies on the support")
    if t < 0 or not in_closed:
        return 0
    if any(x == 0 for x in s) or ssum == 1:
        return None
    o = exact_det([list(direction)] + [list(e) for e in E])
    return cell.multiplicity * (1 if o > 0 else -1)


def _on_support_float(tab: _CellTable, i: int, p: np.ndarray, tol: float) -> bool:
    v0, A = tab.v0[i], tab.E[i].T
    coeffs, *_ = np.linalg.lstsq(A, p - v0, rcond=None)
    foot = v0 + A @ coeffs
    return bool(np.linalg.norm(p - foot) <= tol and np.all(coeffs >= -tol) and coeffs.sum() <= 1 + tol)


def _winding(tab: _CellTable, p: Vec, rng: random.Random) -> int:
    d = tab.d
    if not tab.cells:
        return 0
    pf = np.array([float(x) for x in p])
    exact_mode = tab.exact and is_exact_vec(p)
    scale = max(1.0, float(np.abs(tab.v0).max()))
    for _ in range(MAX_RAY_TRIES):
        direction = _random_direction(d, rng, exact_mode)
        df = np.array([float(x) for x in direction])
        df = df / np.linalg.norm(df)
        if exact_mode:
            _, amb, hits, bad = _winding_float_pass(tab, pf, df, 1e-7)
            check = sorted(set(amb.tolist()) | set(np.nonzero(hits)[0].tolist()) | set(bad.tolist()))
            total = 0
            for i in check:
                r = _exact_cell_hit(tab.cells[i], p, direction)
                if r is None:
                    break
                total += r
            else:
                return total
            continue
        w, amb, _, bad = _winding_float_pass(tab, pf, df, EPS)
        suspects = list(amb) + [i for i in bad if _near_hull(tab, i, pf, EPS * scale)]
        if suspects:
            if any(_on_support_float(tab, i, pf, EPS * scale) for i in suspects):
                raise OnSupportError(f"point {tuple(pf)} lies on the support")
            continue
        return w
    raise NumericFailure(f"no generic ray found after {MAX_RAY_TRIES} tries")


def _near_hull(tab: _CellTable, i: int, p: np.ndarray, tol: float) -> bool:
    n = _cell_normal(tab.E[i])
    return abs(float(np.dot(n, p - tab.v0[i]))) <= tol


def winding_number(T: SimplicialChain, p: Vec, rng_seed: int | random.Random = 0, check: bool = True) -> int:
    """Winding number of a codimension-one cycle around ``p`` by ray casting.

    Every cell the ray crosses contributes its multiplicity times the sign of
    ``det(direction, edges)``.  Rays that graze a cell's relative boundary
    are redrawn; exact chains decide every crossing in rational arithmetic.
    """
    if T.dim != T.ambient_dim - 1:
        raise DimensionMismatch(f"need an (d-1)-cycle in R^d, got a {T.dim}-chain in R^{T.ambient_dim}")
    if len(p) != T.ambient_dim:
        raise DimensionMismatch("query point has the wrong dimension")
    if check:
        require_cycle(T)
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    if T.dim == 0:
        return _winding_0(T, p, rng)
    return _winding(_CellTable(T), tuple(p), rng)


def _winding_0(T: SimplicialChain, p: Vec, rng: random.Random) -> int:
    """0-cycles on a line: count signed points on a random half-line."""
    x = p[0]
    for c in T.cells:
        if c.vertices[0][0] == x:
            raise OnSupportError(f"point {float(x)} lies on the support")
    sgn = 1 if rng.random() < 0.5 else -1
    return sum(c.multiplicity * sgn for c in T.cells if (c.vertices[0][0] - x) * sgn > 0)


def winding_field(T: SimplicialChain, points: Iterable[Vec], seed: int = 0) -> WindingField:
    require_cycle(T)
    rng = random.Random(seed)
    tab = _CellTable(T) if T.dim else None
    samples = []
    for p in points:
        p = tuple(p)
        w = _winding_0(T, p, rng) if T.dim == 0 else _winding(tab, p, rng)
        samples.append((p, w))
    return WindingField(T, samples)


# ------------------------------------------------------ planar arrangement

@dataclass
class Face:
    """One face of a planar segment arrangement."""

    index: int
    winding: int
    sample: Vec
    bounded: bool
    trapezoids: list = field(default_factory=list)


def _seg_intersection_x(a, b, c, d):
    """x-coordinate of a proper crossing of segments ab and cd, else None."""
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    den = r[0] * s[1] - r[1] * s[0]
    if den == 0:
        return None
    qp = (c[0] - a[0], c[1] - a[1])
    t = (qp[0] * s[1] - qp[1] * s[0]) / den
    u = (qp[0] * r[1] - qp[1] * r[0]) / den
    if 0 <= t <= 1 and 0 <= u <= 1:
        return a[0] + t * r[0]
    return None


def planar_faces(T: SimplicialChain) -> list[Face]:
    """Faces of the arrangement of an exact planar 1-cycle, with windings.

    The plane is cut into vertical slabs at every vertex and crossing.  Inside
    a slab the segments are totally ordered by height, so winding numbers of
    the gaps follow by accumulating signed crossings from below.  Gaps in
    adjacent slabs are merged into faces through the open parts of their
    common vertical wall.
    """
    if T.ambient_dim != 2 or T.dim != 1:
        raise DimensionMismatch("planar arrangement needs a 1-chain in R^2")
    if not T.exact:
        raise GeometryError("planar arrangement needs an exact chain")
    R = reduce(T)
    segs = [c for c in R.cells if c.vertices[0] != c.vertices[1]]
    if not segs:
        return [Face(0, 0, (Fraction(0), Fraction(0)), False)]
    xs = set()
    for c in segs:
        xs.add(c.vertices[0][0])
        xs.add(c.vertices[1][0])
    lo = np.array([[float(min(c.vertices[0][i], c.vertices[1][i])) for i in (0, 1)] for c in segs])
    hi = np.array([[float(max(c.vertices[0][i], c.vertices[1][i])) for i in (0, 1)] for c in segs])
    slack = 1e-9 * max(1.0, float(np.abs(np.concatenate([lo, hi])).max()))
    for i in range(len(segs)):
        cand = np.nonzero(np.all(lo[i + 1:] <= hi[i] + slack, axis=1) & np.all(hi[i + 1:] >= lo[i] - slack, axis=1))[0]
        a, b = segs[i].vertices
        for j in cand + i + 1:
            c, d = segs[j].vertices
            x = _seg_intersection_x(a, b, c, d)
            if x is not None:
                xs.add(x)
    xs = sorted(xs)

    # per segment: (xmin, xmax, slope, y-at-xmin, signed multiplicity)
    info = []
    verticals: dict = defaultdict(list)
    for c in segs:
        (ax, ay), (bx, by) = c.vertices
        if ax == bx:
            verticals[ax].append((min(ay, by), max(ay, by)))
            continue
        sign = 1 if bx > ax else -1
        if ax > bx:
            ax, ay, bx, by = bx, by, ax, ay
        info.append((ax, bx, (by - ay) / (bx - ax), ay, sign * c.multiplicity))
    info.sort(key=lambda r: r[0])

    def y_at(seg, x):
        return seg[3] + seg[2] * (x - seg[0])

    parent: list[int] = []

    def make():
        parent.append(len(parent))
        return len(parent) - 1

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def join(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    outer = make()
    gap_info: dict = {}  # node -> (winding, sample, trapezoid, area)
    prev = None  # gaps of previous slab: list of (node, lower_seg, upper_seg)
    for x0, x1 in zip(xs, xs[1:]):
        xm = (x0 + x1) / 2
        active = [s for s in info if s[0] <= x0 and s[1] >= x1]
        active.sort(key=lambda s: y_at(s, xm))
        # group overlapping collinear segments
        groups: list[list] = []
        for s in active:
            if groups and y_at(groups[-1][0], xm) == y_at(s, xm):
                groups[-1].append(s)
            else:
                groups.append([s])
        gaps = []
        wnd = 0
        below = None
        for g in groups + [None]:
            if below is not None and g is not None:
                node = make()
                ylo, yhi = y_at(below[0], xm), y_at(g[0], xm)
                corners = [(x0, y_at(below[0], x0)), (x1, y_at(below[0], x1)), (x1, y_at(g[0], x1)), (x0, y_at(g[0], x0))]
                area = float((x1 - x0) * ((corners[3][1] - corners[0][1]) + (corners[2][1] - corners[1][1])) / 2)
                gap_info[node] = (wnd, (xm, (ylo + yhi) / 2), corners, area)
                gaps.append((node, below[0], g[0]))
            else:
                gaps.append((outer, below[0] if below else None, g[0] if g else None))
            if g is not None:
                wnd += sum(s[4] for s in g)
                below = g
        if wnd != 0:
            raise NotACycle("winding does not return to zero above the arrangement")
        if prev is not None:
            _merge_wall(prev, gaps, x0, verticals.get(x0, []), y_at, join)
        prev = gaps

    faces: dict = defaultdict(list)
    for node in gap_info:
        faces[find(node)].append(node)
    out = [Face(0, 0, (xs[0] - 1, Fraction(0)), False)]
    for root, nodes in sorted(faces.items()):
        if root == find(outer):
            for n in nodes:
                if gap_info[n][0] != 0:
                    raise NumericFailure("outer face has a nonzero winding sample")
            continue
        windings = {gap_info[n][0] for n in nodes}
        if len(windings) != 1:
            raise NumericFailure("inconsistent winding numbers inside one face")
        best = max(nodes, key=lambda n: gap_info[n][3])
        out.append(Face(len(out), windings.pop(), gap_info[best][1], True, [gap_info[n][2] for n in nodes]))
    return out


def _merge_wall(left, right, x, verticals, y_at, join):
    """Join gaps of adjacent slabs whose open extents meet on the wall ``x``.

    Extents use ``None`` for an unbounded end.  Closed vertical segments on
    the wall block passage.
    """
    blocks = sorted(verticals)

    def extent(gap):
        _, lo, hi = gap
        return (None if lo is None else y_at(lo, x), None if hi is None else y_at(hi, x))

    def covered(lo, hi):
        if lo is None or hi is None:
            return False
        cur = lo
        for a, b in blocks:
            if a > cur:
                return False
            cur = max(cur, b)
            if cur >= hi:
                return True
        return False

    i = j = 0
    while i < len(left) and j < len(right):
        la, lb = extent(left[i])
        ra, rb = extent(right[j])
        lo = ra if la is None else la if ra is None else max(la, ra)
        hi = rb if lb is None else lb if rb is None else min(lb, rb)
        if (lo is None or hi is None or lo < hi) and not covered(lo, hi):
            join(left[i][0], right[j][0])
        if lb is None and rb is None:
            break
        if rb is None or (lb is not None and lb <= rb):
            i += 1
        else:
            j += 1


def planar_zero_test(T: SimplicialChain) -> ZeroVerdict:
    """Exact zero test for a 1-cycle in the plane."""
    if T.ambient_dim != 2 or T.dim != 1:
        raise DimensionMismatch("planar_zero_test needs a 1-chain in R^2")
    if not T.exact:
        raise GeometryError("planar_zero_test needs an exact chain")
    require_cycle(T)
    faces = planar_faces(T)
    for f in faces:
        if f.winding != 0:
            return ZeroVerdict(NONZERO, "planar_arrangement", {"point": f.sample, "winding": f.winding},
                               samples_used=len(faces))
    H = hull_reduce(T)
    if H.is_empty():
        return ZeroVerdict(ZERO_EXACT, "planar_arrangement", None, samples_used=len(faces))
    return ZeroVerdict(NONZERO, "planar_arrangement", {"cell": H.cells[0]}, samples_used=len(faces))


# ----------------------------------------------------------- zero testing

def _cell_normal(E: np.ndarray) -> np.ndarray:
    """Unit normal of a codimension-one simplex from its edge vectors."""
    d = E.shape[1]
    n = np.array([(-1) ** i * np.linalg.det(np.delete(E, i, axis=1)) for i in range(d)]) if d > 1 else np.ones(1)
    nn = np.linalg.norm(n)
    return n / nn if nn > 0 else n


def _sample_points(S: SimplicialChain, budget: int, rng: random.Random) -> list[np.ndarray]:
    tab = _CellTable(S)
    pts = np.array([[float(x) for x in v] for v in S.vertices()])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    diam = float(np.linalg.norm(hi - lo)) or 1.0
    delta = 1e-3 * diam
    near = []
    order = list(range(len(S.cells)))
    rng.shuffle(order)
    for i in order:
        c = tab.v0[i] + tab.E[i].sum(axis=0) / S.ambient_dim
        nrm = _cell_normal(tab.E[i])
        near.append(c + delta * nrm)
        near.append(c - delta * nrm)
    n_near = min(len(near), max(1, (3 * budget) // 4))
    out = near[:n_near]
    pad = 0.1 * (hi - lo) + delta
    while len(out) < budget:
        out.append(np.array([rng.uniform(a - p, b + p) for a, b, p in zip(lo, hi, pad)]))
    return out


def _sampling_verdict(S: SimplicialChain, budget: int, rng: random.Random) -> ZeroVerdict:
    tab = _CellTable(S)
    used = 0
    for q in _sample_points(S, budget, rng):
        p = tuple(Fraction(x) for x in q) if S.exact else tuple(float(x) for x in q)
        try:
            w = _winding(tab, p, rng)
        except OnSupportError:
            continue
        used += 1
        if w != 0:
            again = _winding(tab, p, random.Random(rng.random()))
            if again == w:
                return ZeroVerdict(NONZERO, "ray_sampling", {"point": p, "winding": w, "rechecked": True}, used)
    return ZeroVerdict(ZERO_PROBABLE, "ray_sampling", None, used)


def project_to_chart(T: SimplicialChain, P: Hyperplane) -> SimplicialChain:
    """``pi_# T`` expressed in d-1 coordinates of ``P``."""
    if P.dim != T.ambient_dim:
        raise DimensionMismatch(f"plane lives in R^{P.dim}, chain in R^{T.ambient_dim}")
    if not T.exact and P.exact:
        P = P.to_float()
    return pushforward(T, chart_map(P))


def zero_test(S: SimplicialChain, budget: int = 256, rng_seed: int = 0, exact: bool = False) -> ZeroVerdict:
    """Zero test for a codimension-one cycle ``S`` in R^n."""
    rng = random.Random(rng_seed)
    if exact and not S.exact:
        S = S.to_exact()
    R = reduce(S)
    if R.is_empty():
        return ZeroVerdict(ZERO_EXACT, "reduce")
    if R.dim == 0:
        return ZeroVerdict(NONZERO, "reduce", {"cell": R.cells[0], "point": R.cells[0].vertices[0]})
    if R.dim < R.ambient_dim - 1:
        # no winding numbers here; line overlay is complete for 1-chains only
        H = hull_reduce(R if R.exact else R.to_exact())
        if H.is_empty():
            return ZeroVerdict(ZERO_EXACT, "hull_reduce")
        if R.dim == 1:
            return ZeroVerdict(NONZERO, "hull_reduce", {"cell": H.cells[0]})
        raise GeometryError(f"cannot decide a {R.dim}-chain in R^{R.ambient_dim} after overlay")
    if R.exact:
        H = hull_reduce(R)
        if H.is_empty():
            return ZeroVerdict(ZERO_EXACT, "hull_reduce")
        if R.ambient_dim == 2:
            return planar_zero_test(H)
        R = H
    return _sampling_verdict(R, budget, rng)


def projects_to_zero(T: SimplicialChain, P: Hyperplane, budget: int = 256, rng_seed: int = 0,
                     exact: bool = False) -> ZeroVerdict:
    """Decide whether the cycle ``T`` projects to zero on ``P``."""
    if T.dim > T.ambient_dim - 2:
        raise DimensionMismatch(f"need at most an (n-1)-cycle in R^(n+1), got a {T.dim}-chain in R^{T.ambient_dim}")
    require_cycle(T)
    if exact and not T.exact:
        T = T.to_exact()
    return zero_test(project_to_chart(T, P), budget, rng_seed)


@dataclass
class SweepResult:
    entries: list
    max_independent_zero: int

    def to_json(self) -> dict:
        return {
            "entries": [{"plane": P.to_json(), "verdict": v.to_json()} for P, v in self.entries],
            "max_independent_zero": self.max_independent_zero,
        }


def max_independent(normals: Sequence[Vec]) -> int:
    """Size of the largest linearly independent subset."""
    from .core import exact_rank
    if not normals:
        return 0
    if all(is_exact_vec(n) for n in normals):
        return exact_rank(normals)
    m = np.array(normals, dtype=float)
    m = m / np.linalg.norm(m, axis=1)[:, None]
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv > EPS))


def null_directions_sweep(T: SimplicialChain, planes: Iterable, budget: int = 256, rng_seed: int = 0,
                          exact: bool = False) -> SweepResult:
    planes = [P if isinstance(P, Hyperplane) else Hyperplane(tuple(P)) for P in planes]
    entries = []
    for i, P in enumerate(planes):
        entries.append((P, projects_to_zero(T, P, budget, rng_seed + i, exact)))
    zero_normals = [P.normal for P, v in entries if v.is_zero]
    return SweepResult(entries, max_independent(zero_normals))


def verdict_json(v: ZeroVerdict) -> str:
    return json.dumps(v.to_json())
