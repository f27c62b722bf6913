"""Triangulated round spheres with exact mirror symmetry.

All meshes are outward oriented (they are the boundary of the ball).  Vertex
coordinates are built so that every coordinate reflection maps the vertex set
onto itself bit-for-bit, which is what lets projected copies cancel exactly.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .chains import SimplicialChain
from .core import Simplex


def circle_points(m: int) -> list[tuple[float, float]]:
    """Vertices ``(cos 2pi k/m, sin 2pi k/m)`` with exact reflection symmetry.

    The set is invariant under ``y -> -y`` for every ``m`` and under
    ``x -> -x`` for even ``m``.
    """
    if m < 2:
        raise ValueError("need at least two points on a circle")
    pts = [(math.cos(2 * math.pi * k / m), math.sin(2 * math.pi * k / m)) for k in range(m)]
    for k in range(m):
        if 4 * k == m:
            pts[k] = (0.0, 1.0)
        elif 2 * k == m:
            pts[k] = (-1.0, 0.0)
        elif 4 * k == 3 * m:
            pts[k] = (0.0, -1.0)
    pts[0] = (1.0, 0.0)
    if m % 2 == 0:
        h = m // 2
        for k in range(1, h):
            if 2 * k > h:
                c, s = pts[h - k]
                pts[k] = (-c, s)
    for k in range(m // 2 + 1, m):
        c, s = pts[m - k]
        pts[k] = (c, -s)
    return [(c + 0.0, s + 0.0) for c, s in pts]


def _kuhn_simplices(k: int, m: int):
    """Kuhn subdivision of the staircase simplex m >= y1 >= ... >= yk >= 0."""
    def ok(y):
        return all(0 <= c <= m for c in y) and all(y[i] >= y[i + 1] for i in range(len(y) - 1))

    for a in itertools.product(range(m), repeat=k):
        for perm in itertools.permutations(range(k)):
            y = list(a)
            verts = [tuple(y)]
            for i in perm:
                y[i] += 1
                verts.append(tuple(y))
            if all(ok(v) for v in verts):
                yield verts


def _weights(y, m):
    k = len(y)
    w = [m - y[0]] + [y[i] - y[i + 1] for i in range(k - 1)] + [y[-1]]
    return w


def sphere_mesh(k: int, m: int) -> SimplicialChain:
    """Outward-oriented float mesh of the unit k-sphere in R^(k+1).

    ``k=0``: the two points -1 (multiplicity -1) and +1 (multiplicity +1).
    ``k=1``: the ``m``-gon.  ``k>=2``: the boundary of the cross-polytope
    with every facet cut into ``m^k`` Kuhn simplices, pushed radially onto
    the sphere.
    """
    if k == 0:
        return SimplicialChain(1, 0, (Simplex(((-1.0,),), -1), Simplex(((1.0,),), 1)))
    if k == 1:
        pts = circle_points(m)
        return SimplicialChain.polyline(pts)
    if m < 1:
        raise ValueError("subdivision level must be positive")
    cache: dict = {}

    def point(w):
        key = tuple(w)
        if key not in cache:
            v = np.array(w, dtype=float)
            cache[key] = v / np.linalg.norm(v)
        return cache[key]

    base = [[point(_weights(y, m)) for y in verts] for verts in _kuhn_simplices(k, m)]
    cells = []
    for signs in itertools.product((1.0, -1.0), repeat=k + 1):
        sg = np.array(signs)
        for simplex in base:
            verts = [tuple(float(c) + 0.0 for c in sg * v) for v in simplex]
            arr = np.array(verts)
            frame = np.vstack([arr.mean(axis=0), arr[1:] - arr[0]])
            if np.linalg.det(frame) < 0:
                verts[0], verts[1] = verts[1], verts[0]
            cells.append(Simplex(tuple(verts), 1))
    return SimplicialChain(k + 1, k, tuple(cells))
