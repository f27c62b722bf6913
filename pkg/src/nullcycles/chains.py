"""Integer-multiplicity simplicial chains standing in for currents.

A chain is a list of oriented simplices in R^d.  Two chains define the same
current when their canonical forms agree (see :func:`reduce`); cancellation
between partially overlapping cells is handled in :mod:`nullcycles.nullproj`.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import (
    AffineMap,
    DimensionMismatch,
    GeometryError,
    Simplex,
    Vec,
    affine_rank,
    exact,
    inexact,
    is_exact_vec,
    scalar_from_json,
    scalar_to_json,
    simplex_degenerate,
    sub,
)


class NotACycle(GeometryError):
    pass


def _sort_parity(verts: Sequence[Vec]) -> tuple[tuple, int]:
    """Sorted vertex tuple and the sign of the sorting permutation."""
    order = sorted(range(len(verts)), key=lambda i: verts[i])
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return tuple(verts[i] for i in order), sign


@dataclass(frozen=True)
class SimplicialChain:
    ambient_dim: int
    dim: int
    cells: tuple = field(default=())

    def __post_init__(self):
        cells = tuple(c if isinstance(c, Simplex) else Simplex(*c) for c in self.cells)
        if not 0 <= self.dim:
            raise GeometryError("chain dimension must be non-negative")
        for c in cells:
            if c.dim != self.dim or c.ambient_dim != self.ambient_dim:
                raise DimensionMismatch(
                    f"cell of dim {c.dim} in R^{c.ambient_dim} inside a {self.dim}-chain in R^{self.ambient_dim}"
                )
        object.__setattr__(self, "cells", cells)

    # -- construction helpers
    @classmethod
    def from_cells(cls, cells: Iterable, ambient_dim: int | None = None, dim: int | None = None) -> "SimplicialChain":
        cells = [c if isinstance(c, Simplex) else Simplex(tuple(c[0]), c[1] if len(c) > 1 else 1) for c in cells]
        if ambient_dim is None or dim is None:
            if not cells:
                raise GeometryError("empty cell list needs explicit dimensions")
            ambient_dim = cells[0].ambient_dim if ambient_dim is None else ambient_dim
            dim = cells[0].dim if dim is None else dim
        return cls(ambient_dim, dim, tuple(cells))

    @classmethod
    def empty(cls, ambient_dim: int, dim: int) -> "SimplicialChain":
        return cls(ambient_dim, dim, ())

    @classmethod
    def point(cls, p: Vec, multiplicity: int = 1) -> "SimplicialChain":
        p = tuple(p)
        return cls(len(p), 0, (Simplex((p,), multiplicity),))

    @classmethod
    def polyline(cls, points: Sequence[Vec], closed: bool = True, multiplicity: int = 1) -> "SimplicialChain":
        pts = [tuple(p) for p in points]
        pairs = list(zip(pts, pts[1:]))
        if closed and len(pts) > 1:
            pairs.append((pts[-1], pts[0]))
        return cls(len(pts[0]), 1, tuple(Simplex(pr, multiplicity) for pr in pairs))

    # -- basic properties
    @property
    def scalar(self) -> str:
        return "rational" if all(is_exact_vec(v) for c in self.cells for v in c.vertices) else "float"

    @property
    def exact(self) -> bool:
        return self.scalar == "rational"

    def __len__(self) -> int:
        return len(self.cells)

    def is_empty(self) -> bool:
        return not self.cells

    def vertices(self) -> list[Vec]:
        seen = {}
        for c in self.cells:
            for v in c.vertices:
                seen.setdefault(v, None)
        return list(seen)

    def to_exact(self) -> "SimplicialChain":
        return SimplicialChain(self.ambient_dim, self.dim, tuple(
            Simplex(tuple(exact(v) for v in c.vertices), c.multiplicity) for c in self.cells))

    def to_float(self) -> "SimplicialChain":
        return SimplicialChain(self.ambient_dim, self.dim, tuple(
            Simplex(tuple(inexact(v) for v in c.vertices), c.multiplicity) for c in self.cells))

    def diameter(self) -> float:
        import numpy as np
        pts = np.array([[float(x) for x in v] for v in self.vertices()])
        if len(pts) == 0:
            return 0.0
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))

    # -- serialization
    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "scalar": self.scalar,
            "cells": [
                {"vertices": [[scalar_to_json(x) for x in v] for v in c.vertices], "multiplicity": c.multiplicity}
                for c in self.cells
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "SimplicialChain":
        if isinstance(data, str):
            data = json.loads(data)
        rational = data.get("scalar", "rational") == "rational"
        cells = []
        for c in data["cells"]:
            verts = tuple(tuple(Fraction(x) if rational else float(scalar_from_json(x)) for x in v) for v in c["vertices"])
            cells.append(Simplex(verts, int(c["multiplicity"])))
        return cls(int(data["ambient_dim"]), int(data["dim"]), tuple(cells))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialChain):
            return NotImplemented
        return (self.ambient_dim, self.dim) == (other.ambient_dim, other.dim) and _canon(self) == _canon(other)

    def __hash__(self):
        return hash((self.ambient_dim, self.dim, frozenset(_canon(self).items())))


def _canon(T: SimplicialChain) -> dict:
    acc: dict = defaultdict(int)
    for c in T.cells:
        key, sign = _sort_parity(c.vertices)
        if len(set(key)) < len(key):
            continue
        acc[key] += sign * c.multiplicity
    return {k: m for k, m in acc.items() if m}


def reduce(T: SimplicialChain) -> SimplicialChain:
    """Canonical form: sorted vertices, merged multiplicities, zeros removed.

    Cells with a repeated vertex are dropped (they carry the zero current).
    """
    canon = _canon(T)
    cells = tuple(Simplex(k, m) for k, m in sorted(canon.items()))
    return SimplicialChain(T.ambient_dim, T.dim, cells)


def boundary(T: SimplicialChain) -> SimplicialChain:
    if T.dim == 0:
        raise GeometryError("a 0-chain has no boundary")
    faces = []
    for c in T.cells:
        vs = c.vertices
        for i in range(len(vs)):
            m = c.multiplicity if i % 2 == 0 else -c.multiplicity
            faces.append(Simplex(vs[:i] + vs[i + 1:], m))
    return reduce(SimplicialChain(T.ambient_dim, T.dim - 1, tuple(faces)))


@dataclass(frozen=True)
class CycleCertificate:
    chain: SimplicialChain
    is_cycle: bool
    boundary_residual: SimplicialChain


def cycle_certificate(T: SimplicialChain) -> CycleCertificate:
    """Cycle test.  For 0-chains the augmentation (total multiplicity) must vanish."""
    if T.dim == 0:
        total = sum(c.multiplicity for c in T.cells)
        resid = SimplicialChain(T.ambient_dim, 0, ()) if total == 0 else reduce(T)
        return CycleCertificate(T, total == 0, resid)
    b = boundary(T)
    return CycleCertificate(T, b.is_empty(), b)


def is_cycle(T: SimplicialChain) -> bool:
    return cycle_certificate(T).is_cycle


def require_cycle(T: SimplicialChain) -> None:
    cert = cycle_certificate(T)
    if not cert.is_cycle:
        raise NotACycle(f"chain is not a cycle ({len(cert.boundary_residual)} boundary cells survive)")


def map_cells(T: SimplicialChain, f: Callable[[Vec], Vec], out_dim: int | None = None) -> SimplicialChain:
    """Image of every cell under a vertex map, with no cancellation or dropping."""
    cache: dict = {}

    def g(v):
        if v not in cache:
            cache[v] = tuple(f(v))
        return cache[v]

    cells = tuple(Simplex(tuple(g(v) for v in c.vertices), c.multiplicity) for c in T.cells)
    if out_dim is None:
        out_dim = len(cells[0].vertices[0]) if cells else T.ambient_dim
    return SimplicialChain(out_dim, T.dim, cells)


def pushforward(T: SimplicialChain, G: AffineMap) -> SimplicialChain:
    """``G_# T``: map vertices, drop degenerate images, reduce."""
    if G.d_in != T.ambient_dim:
        raise DimensionMismatch(f"map expects R^{G.d_in}, chain lives in R^{T.ambient_dim}")
    img = map_cells(T, G, G.d_out)
    kept = tuple(c for c in img.cells if not simplex_degenerate(c))
    return reduce(SimplicialChain(G.d_out, T.dim, kept))


def _check_same(a: SimplicialChain, b: SimplicialChain) -> None:
    if (a.ambient_dim, a.dim) != (b.ambient_dim, b.dim):
        raise DimensionMismatch(
            f"chains differ in shape: ({a.ambient_dim},{a.dim}) vs ({b.ambient_dim},{b.dim})")


def negate(T: SimplicialChain) -> SimplicialChain:
    return SimplicialChain(T.ambient_dim, T.dim, tuple(c.negated() for c in T.cells))


def translate(T: SimplicialChain, v: Vec) -> SimplicialChain:
    v = tuple(v)
    if len(v) != T.ambient_dim:
        raise DimensionMismatch("translation vector has wrong length")
    return map_cells(T, lambda x: tuple(a + b for a, b in zip(x, v)), T.ambient_dim)


def union(*chains: SimplicialChain, reduced: bool = True) -> SimplicialChain:
    """Sum of chains.  ``reduced=False`` keeps the raw concatenation."""
    first = chains[0]
    for other in chains[1:]:
        _check_same(first, other)
    out = SimplicialChain(first.ambient_dim, first.dim, tuple(c for T in chains for c in T.cells))
    return reduce(out) if reduced else out


def support_cells(T: SimplicialChain) -> set[Simplex]:
    return set(reduce(T).cells)


# ---------------------------------------------------------------- topology

def vertex_components(T: SimplicialChain) -> int:
    """Number of connected components of the cell adjacency graph."""
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in T.cells:
        for v in c.vertices:
            parent.setdefault(v, v)
        r0 = find(c.vertices[0])
        for v in c.vertices[1:]:
            rv = find(v)
            if rv != r0:
                parent[rv] = r0
    return len({find(v) for v in parent})


def is_connected(T: SimplicialChain) -> bool:
    return bool(T.cells) and vertex_components(T) == 1


def euler_characteristic(T: SimplicialChain) -> int:
    """Alternating count of distinct faces of all cells (as a cell complex)."""
    from itertools import combinations
    faces: set = set()
    for c in T.cells:
        vs = sorted(c.vertices)
        for k in range(1, len(vs) + 1):
            faces.update(combinations(vs, k))
    return sum((-1) ** (len(f) - 1) for f in faces)


def _segments_meet(a0, a1, b0, b1) -> bool:
    """Closed segment intersection in R^d, exact when the inputs are exact."""
    from .core import EPS, is_exact_vec as ex
    exact_mode = ex(a0) and ex(a1) and ex(b0) and ex(b1)
    da, db, w = sub(a1, a0), sub(b1, b0), sub(b0, a0)
    # bounding boxes
    for i in range(len(a0)):
        if max(b0[i], b1[i]) < min(a0[i], a1[i]) - (0 if exact_mode else EPS):
            return False
        if max(a0[i], a1[i]) < min(b0[i], b1[i]) - (0 if exact_mode else EPS):
            return False
    if exact_mode:
        if affine_rank([a0, a1, b0, b1]) <= 1:
            # collinear: compare parameters along da
            dd = sum(x * x for x in da)
            if dd == 0:
                return _segments_meet(b0, b1, a0, a0) if sum(x * x for x in db) else a0 == b0
            t0 = sum(x * y for x, y in zip(w, da)) / dd
            t1 = sum(x * y for x, y in zip(sub(b1, a0), da)) / dd
            return max(min(t0, t1), 0) <= min(max(t0, t1), 1)
        # solve a0 + s da = b0 + t db on a nonsingular 2x2 minor
        d = len(a0)
        for i in range(d):
            for j in range(i + 1, d):
                den = da[i] * (-db[j]) - da[j] * (-db[i])
                if den != 0:
                    s = (w[i] * (-db[j]) - w[j] * (-db[i])) / den
                    t = (da[i] * w[j] - da[j] * w[i]) / den
                    if not (0 <= s <= 1 and 0 <= t <= 1):
                        return False
                    return all(a0[k] + s * da[k] == b0[k] + t * db[k] for k in range(d))
        return False
    import numpy as np
    A = np.array([da, [-x for x in db]], dtype=float).T
    sol, *_ = np.linalg.lstsq(A, np.array(w, dtype=float), rcond=None)
    s, t = np.clip(sol, 0.0, 1.0)
    pa = np.array(a0, float) + s * np.array(da, float)
    pb = np.array(b0, float) + t * np.array(db, float)
    # refine with alternating clamps for the parallel case
    for _ in range(3):
        t = float(np.clip(np.dot(pa - np.array(b0, float), np.array(db, float)) / max(np.dot(db, db), 1e-300), 0, 1))
        pb = np.array(b0, float) + t * np.array(db, float)
        s = float(np.clip(np.dot(pb - np.array(a0, float), np.array(da, float)) / max(np.dot(da, da), 1e-300), 0, 1))
        pa = np.array(a0, float) + s * np.array(da, float)
    return float(np.linalg.norm(pa - pb)) <= EPS


def is_embedded_curve(T: SimplicialChain) -> bool:
    """Whether a 1-chain is a disjoint union of simple closed polygons.

    Every vertex must meet exactly two cells, cells sharing a vertex may meet
    only there, and cells sharing no vertex may not meet at all.
    """
    if T.dim != 1:
        raise GeometryError("embeddedness test is implemented for 1-chains")
    cells = [c.vertices for c in T.cells]
    degree: dict = defaultdict(int)
    for a, b in cells:
        if a == b:
            return False
        degree[a] += 1
        degree[b] += 1
    if any(k != 2 for k in degree.values()):
        return False
    import numpy as np
    lo = np.array([[min(float(x), float(y)) for x, y in zip(a, b)] for a, b in cells])
    hi = np.array([[max(float(x), float(y)) for x, y in zip(a, b)] for a, b in cells])
    slack = 1e-9
    for i in range(len(cells)):
        cand = np.nonzero(np.all(lo[i + 1:] <= hi[i] + slack, axis=1) & np.all(hi[i + 1:] >= lo[i] - slack, axis=1))[0]
        a0, a1 = cells[i]
        for j in cand + i + 1:
            b0, b1 = cells[j]
            shared = {a0, a1} & {b0, b1}
            if len(shared) == 2:
                return False
            if len(shared) == 1:
                v = shared.pop()
                p = a1 if a0 == v else a0
                q = b1 if b0 == v else b0
                # only folding back onto each other can add intersection points
                if affine_rank([v, p, q]) <= 1:
                    dp, dq = sub(p, v), sub(q, v)
                    if sum(float(x) * float(y) for x, y in zip(dp, dq)) > 0:
                        return False
                continue
            if _segments_meet(a0, a1, b0, b1):
                return False
    return True


def is_embedded_surface(T: SimplicialChain) -> bool:
    """Combinatorial test for a closed triangulated surface.

    Every edge lies in exactly two triangles and every vertex link is a single
    cycle.  Geometric self-intersection of non-adjacent triangles is not
    tested.
    """
    if T.dim != 2:
        raise GeometryError("surface test is implemented for 2-chains")
    edges: dict = defaultdict(int)
    link: dict = defaultdict(list)
    for c in T.cells:
        a, b, cc = c.vertices
        if len({a, b, cc}) < 3:
            return False
        for x, y, z in ((a, b, cc), (b, cc, a), (cc, a, b)):
            edges[frozenset((x, y))] += 1
            link[x].append((y, z))
    if any(k != 2 for k in edges.values()):
        return False
    for v, pairs in link.items():
        sub_chain = SimplicialChain.from_cells([((p, q), 1) for p, q in pairs], ambient_dim=T.ambient_dim, dim=1)
        if vertex_components(sub_chain) != 1:
            return False
    return True
