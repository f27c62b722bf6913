"""Independent reference computations used to cross-check the library.

None of these share code paths with the package: windings come from angle
or solid-angle sums, not ray casting; ellipsoid chords come from the plain
quadratic formula.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def winding_by_angles(segments, p) -> int:
    """Winding of oriented plane segments around ``p`` from summed turning angles."""
    total = 0.0
    px, py = float(p[0]), float(p[1])
    for (a, b), mult in segments:
        ax, ay = float(a[0]) - px, float(a[1]) - py
        bx, by = float(b[0]) - px, float(b[1]) - py
        total += mult * math.atan2(ax * by - ay * bx, ax * bx + ay * by)
    return round(total / (2 * math.pi))


def winding_by_solid_angle(triangles, p) -> int:
    """Winding of an oriented triangle mesh around ``p`` (Van Oosterom-Strackee)."""
    total = 0.0
    p = np.asarray(p, float)
    for (a, b, c), mult in triangles:
        ra, rb, rc = (np.asarray(v, float) - p for v in (a, b, c))
        la, lb, lc = (np.linalg.norm(v) for v in (ra, rb, rc))
        num = ra @ np.cross(rb, rc)
        den = la * lb * lc + (ra @ rb) * lc + (ra @ rc) * lb + (rb @ rc) * la
        total += mult * 2 * math.atan2(num, den)
    return round(total / (4 * math.pi))


def inside_convex_ccw(poly, p) -> bool:
    """Strict interior test for a counter-clockwise convex polygon."""
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) <= 0:
            return False
    return True


def det3(rows) -> Fraction:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def independent_by_minors(vectors) -> bool:
    """Linear independence of vectors in R^3 by brute-force minors."""
    k = len(vectors)
    if k > 3:
        return False
    if k == 0:
        return True
    for cols in itertools.combinations(range(3), k):
        m = [[v[c] for c in cols] for v in vectors]
        if k == 1 and m[0][0] != 0:
            return True
        if k == 2 and m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
            return True
        if k == 3 and det3(m) != 0:
            return True
    return False


def chord_roots(A, c, u, p):
    """Both line parameters where ``p + t u`` meets ``(x-c)^T A (x-c) = 1``."""
    A = np.asarray(A, float)
    y = np.asarray(p, float) - np.asarray(c, float)
    u = np.asarray(u, float)
    qa = u @ A @ u
    qb = 2 * (u @ A @ y)
    qc = y @ A @ y - 1
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return None
    s = math.sqrt(disc)
    return sorted(((-qb - s) / (2 * qa), (-qb + s) / (2 * qa)))


def reflection_degree(k: int) -> int:
    """Degree of a composition of k reflections of a sphere."""
    return (-1) ** k
