"""Convex bodies as oracles, and the involutions of strict ovaloids.

A :class:`ConvexBody` answers membership, chord and Gauss-normal queries.
From those alone we build the Steiner symmetrization ``sigma`` across a
hyperplane, the signed height ``lambda``, the involution
``rho(x) = x - 2 lambda(x) u`` that swaps the two ends of every chord
perpendicular to the plane, and its fixed set, the equator.
"""
from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .chains import SimplicialChain, map_cells
from .core import EPS, GeometryError, Hyperplane, Simplex, independent
from .meshes import sphere_mesh


class UnsupportedBody(GeometryError):
    """The operation needs a strictly convex body."""


class NotOnBoundary(GeometryError):
    pass


class AmbiguousHemisphere(GeometryError):
    pass


def _unit(P: Hyperplane) -> tuple[np.ndarray, float]:
    return P.unit, P.offset


class ConvexBody(ABC):
    strict: bool = False

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def contains(self, x) -> bool: ...

    @abstractmethod
    def chord(self, u, p) -> tuple[np.ndarray, np.ndarray] | None:
        """Closed segment of the body on the line ``p + t u`` (ends ordered by t)."""

    @abstractmethod
    def gauss(self, x) -> np.ndarray: ...

    @abstractmethod
    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]: ...

    @abstractmethod
    def on_boundary(self, x, tol: float | None = None) -> bool: ...

    @property
    def diameter(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    def to_json(self) -> dict:
        raise NotImplementedError


class Ellipsoid(ConvexBody):
    """``{x : (x - c)^T A (x - c) <= 1}`` for symmetric positive definite ``A``."""

    strict = True

    def __init__(self, center, shape):
        self.center = np.asarray(center, dtype=float)
        A = np.asarray(shape, dtype=float)
        if A.shape != (len(self.center), len(self.center)):
            raise GeometryError("shape matrix does not match the center")
        if not np.allclose(A, A.T, atol=EPS, rtol=0):
            raise GeometryError("shape matrix is not symmetric")
        self.A = (A + A.T) / 2
        evals, evecs = np.linalg.eigh(self.A)
        if evals.min() <= 0:
            raise GeometryError("shape matrix is not positive definite")
        self._evals, self._evecs = evals, evecs
        # boundary = center + root @ (unit sphere)
        self.root = evecs @ np.diag(evals ** -0.5) @ evecs.T

    @classmethod
    def sphere(cls, d: int, radius: float = 1.0, center=None) -> "Ellipsoid":
        c = np.zeros(d) if center is None else np.asarray(center, float)
        return cls(c, np.eye(d) / radius ** 2)

    @classmethod
    def axes(cls, semi_axes: Sequence[float], center=None) -> "Ellipsoid":
        a = np.asarray(semi_axes, float)
        c = np.zeros(len(a)) if center is None else np.asarray(center, float)
        return cls(c, np.diag(a ** -2.0))

    @property
    def dim(self) -> int:
        return len(self.center)

    def level(self, x) -> float:
        y = np.asarray(x, float) - self.center
        return float(y @ self.A @ y)

    def contains(self, x) -> bool:
        return self.level(x) <= 1 + EPS

    def on_boundary(self, x, tol=None) -> bool:
        return abs(self.level(x) - 1) <= (EPS if tol is None else tol)

    def _roots(self, u, p):
        u = np.asarray(u, float)
        y = np.asarray(p, float) - self.center
        a = float(u @ self.A @ u)
        b = float(u @ self.A @ y)
        g = float(y @ self.A @ y)
        disc = b * b - a * (g - 1)
        if disc < 0:
            if disc < -EPS * max(1.0, b * b):
                return None
            # tangent line up to roundoff: a double root
            t = -b / a
            return t, t, a, b, g
        sq = math.sqrt(disc)
        q = -(b + math.copysign(sq, b))
        if q == 0:
            t = -b / a
            return t, t, a, b, g
        far, near = q / a, (g - 1) / q
        if abs(near) > abs(far):
            near = far
        return far, near, a, b, g

    def chord(self, u, p):
        r = self._roots(u, p)
        if r is None:
            return None
        t1, t2 = sorted(r[:2])
        p = np.asarray(p, float)
        u = np.asarray(u, float)
        return p + t1 * u, p + t2 * u

    def gauss(self, x) -> np.ndarray:
        g = self.A @ (np.asarray(x, float) - self.center)
        return g / np.linalg.norm(g)

    def bounding_box(self):
        half = np.sqrt(np.diag(np.linalg.inv(self.A)))
        return self.center - half, self.center + half

    @property
    def diameter(self) -> float:
        return 2.0 / math.sqrt(self._evals.min())

    def boundary_point(self, s) -> np.ndarray:
        s = np.asarray(s, float)
        return self.center + self.root @ (s / np.linalg.norm(s))

    def sample_boundary(self, rng: np.random.Generator, count: int) -> np.ndarray:
        s = rng.normal(size=(count, self.dim))
        s /= np.linalg.norm(s, axis=1)[:, None]
        return self.center + s @ self.root.T

    def involution_batch(self, u, X) -> np.ndarray:
        """Vectorized far-root chord swap along ``u`` for boundary points ``X``."""
        u = np.asarray(u, float)
        Y = np.atleast_2d(np.asarray(X, float)) - self.center
        Au = self.A @ u
        a = float(u @ Au)
        b = Y @ Au
        g = np.einsum("ij,jk,ik->i", Y, self.A, Y)
        sq = np.sqrt(np.maximum(b * b - a * (g - 1), 0.0))
        q = -(b + np.copysign(sq, b))
        return Y + self.center + (q / a)[:, None] * u

    def height_closed_form(self, P: Hyperplane, x) -> float:
        """Signed P-height from the quadratic directly: ``u.A(x-c) / u.A.u``."""
        u = P.unit
        return float(u @ self.A @ (np.asarray(x, float) - self.center)) / float(u @ self.A @ u)

    def to_json(self) -> dict:
        return {"type": "ellipsoid", "center": self.center.tolist(), "shape": self.A.tolist()}


class AxisBox(ConvexBody):
    """Axis-aligned box.  Convex but not strict: involutions are refused."""

    strict = False

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, float)
        self.hi = np.asarray(hi, float)
        if self.lo.shape != self.hi.shape or np.any(self.lo >= self.hi):
            raise GeometryError("box corners must satisfy min < max componentwise")

    @classmethod
    def unit_cube(cls, d: int = 3) -> "AxisBox":
        return cls(np.zeros(d), np.ones(d))

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, x) -> bool:
        x = np.asarray(x, float)
        return bool(np.all(x >= self.lo - EPS) and np.all(x <= self.hi + EPS))

    def on_boundary(self, x, tol=None) -> bool:
        tol = EPS if tol is None else tol
        x = np.asarray(x, float)
        if np.any(x < self.lo - tol) or np.any(x > self.hi + tol):
            return False
        return bool(np.any(np.abs(x - self.lo) <= tol) or np.any(np.abs(x - self.hi) <= tol))

    def chord(self, u, p):
        u = np.asarray(u, float)
        p = np.asarray(p, float)
        t0, t1 = -np.inf, np.inf
        for i in range(self.dim):
            if abs(u[i]) <= 1e-15:
                if p[i] < self.lo[i] - EPS or p[i] > self.hi[i] + EPS:
                    return None
                continue
            a, b = (self.lo[i] - p[i]) / u[i], (self.hi[i] - p[i]) / u[i]
            t0, t1 = max(t0, min(a, b)), min(t1, max(a, b))
        if t0 > t1 + EPS:
            return None
        return p + t0 * u, p + t1 * u

    def gauss(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        dl, dh = np.abs(x - self.lo), np.abs(x - self.hi)
        i_lo, i_hi = int(np.argmin(dl)), int(np.argmin(dh))
        n = np.zeros(self.dim)
        if dl[i_lo] <= dh[i_hi]:
            n[i_lo] = -1.0
        else:
            n[i_hi] = 1.0
        return n

    def bounding_box(self):
        return self.lo.copy(), self.hi.copy()

    def to_json(self) -> dict:
        return {"type": "axis_box", "min": self.lo.tolist(), "max": self.hi.tolist()}


class SteinerSymmetral(ConvexBody):
    """The Steiner symmetral of ``body`` across ``P``, as a chord oracle.

    Only chords perpendicular to ``P`` are available; they are the body's
    chords translated until their midpoints lie on ``P``.
    """

    def __init__(self, body: ConvexBody, P: Hyperplane):
        self.body = body
        self.P = P
        self.u, self.off = _unit(P)

    @property
    def dim(self) -> int:
        return self.body.dim

    def chord(self, u, p):
        u = np.asarray(u, float)
        if abs(abs(float(u @ self.u)) - np.linalg.norm(u)) > 1e-12:
            raise GeometryError("symmetral chords are only defined perpendicular to the plane")
        ends = self.body.chord(self.u, p)
        if ends is None:
            return None
        a, b = ends
        shift = ((a + b) / 2) @ self.u - self.off
        a, b = a - shift * self.u, b - shift * self.u
        return (a, b) if float((b - a) @ u) >= 0 else (b, a)

    def contains(self, x) -> bool:
        ends = self.chord(self.u, x)
        if ends is None:
            return False
        a, b = ends
        h = float(np.asarray(x, float) @ self.u)
        return float(a @ self.u) - EPS <= h <= float(b @ self.u) + EPS

    def on_boundary(self, x, tol=None) -> bool:
        ends = self.chord(self.u, x)
        if ends is None:
            return False
        tol = EPS if tol is None else tol
        x = np.asarray(x, float)
        return min(np.linalg.norm(x - ends[0]), np.linalg.norm(x - ends[1])) <= tol

    def gauss(self, x):
        raise NotImplementedError("the symmetral is exposed as a chord oracle only")

    def bounding_box(self):
        return self.body.bounding_box()


def body_from_json(data: dict | str) -> ConvexBody:
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("type")
    if kind == "ellipsoid":
        return Ellipsoid(data["center"], data["shape"])
    if kind == "axis_box":
        return AxisBox(data["min"], data["max"])
    raise GeometryError(f"unknown body type {kind!r}")


def random_ellipsoid(rng: np.random.Generator, d: int = 3, axis_range=(0.5, 2.0), center_range=1.0) -> Ellipsoid:
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    q = q * np.sign(np.diag(r))
    axes = rng.uniform(*axis_range, size=d)
    center = rng.uniform(-center_range, center_range, size=d)
    return Ellipsoid(center, q @ np.diag(axes ** -2.0) @ q.T)


# ------------------------------------------------------------- operations

def _require_boundary(B: ConvexBody, x) -> np.ndarray:
    x = np.asarray(x, float)
    if not B.on_boundary(x):
        raise NotOnBoundary(f"point {x.tolist()} is not on the boundary")
    return x


def _require_strict(B: ConvexBody) -> None:
    if not B.strict:
        raise UnsupportedBody(f"{type(B).__name__} is not strictly convex")


def steiner(B: ConvexBody, P: Hyperplane, x) -> np.ndarray:
    """Image of a boundary point under Steiner symmetrization across ``P``."""
    x = _require_boundary(B, x)
    u, off = _unit(P)
    a, b = B.chord(u, x)
    m = float(((a + b) / 2) @ u) - off
    return x - m * u


def signed_height(B: ConvexBody, P: Hyperplane, x) -> float:
    u, off = _unit(P)
    return float(steiner(B, P, x) @ u) - off


def involution(B: ConvexBody, P: Hyperplane, x) -> np.ndarray:
    """The other end of the chord through ``x`` perpendicular to ``P``."""
    _require_strict(B)
    x = _require_boundary(B, x)
    u, _ = _unit(P)
    if isinstance(B, Ellipsoid):
        # stable root form: the near root is (g-1)/q, the far root q/a
        t_far = B._roots(u, x)[0]
        return x + t_far * u
    a, b = B.chord(u, x)
    return a if np.linalg.norm(a - x) > np.linalg.norm(b - x) else b


def involution_by_height(B: ConvexBody, P: Hyperplane, x) -> np.ndarray:
    """``x - 2 lambda(x) u``, with lambda in closed form for ellipsoids."""
    _require_strict(B)
    x = _require_boundary(B, x)
    lam = B.height_closed_form(P, x) if isinstance(B, Ellipsoid) else signed_height(B, P, x)
    return x - 2 * lam * P.unit


class Hemisphere(Enum):
    PLUS = 1
    MINUS = -1

    def __neg__(self) -> "Hemisphere":
        return Hemisphere(-self.value)


def hemisphere_of(B: ConvexBody, P: Hyperplane, x) -> Hemisphere:
    lam = signed_height(B, P, x)
    if abs(lam) <= EPS:
        raise AmbiguousHemisphere(f"point is within {EPS} of the equator")
    return Hemisphere.PLUS if lam > 0 else Hemisphere.MINUS


def composed_involution(B: ConvexBody, planes: Sequence[Hyperplane], x) -> np.ndarray:
    """``rho_k o ... o rho_1`` (the first plane acts first)."""
    _require_strict(B)
    if not independent([P.unit.tolist() for P in planes]):
        raise GeometryError("planes are not independent")
    y = np.asarray(x, float)
    for P in planes:
        y = involution(B, P, y)
    return y


def slice_frame(B: Ellipsoid, P: Hyperplane, companion=None) -> np.ndarray:
    """Columns spanning the equator's hyperplane, orthonormal for ``A``.

    With ``companion`` (a direction in that hyperplane) the first column is
    parallel to it; then the involution of any plane with normal
    ``companion`` acts on the frame coordinates as the reflection of the first
    one.
    """
    u = P.unit
    w = B.A @ u
    d = B.dim
    basis = []
    if companion is not None:
        v = np.asarray(companion, float)
        if abs(v @ w) > 1e-9 * np.linalg.norm(v) * np.linalg.norm(w):
            raise GeometryError("companion direction is not tangent to the equator slice")
        basis.append(v)
    # coordinate axes least aligned with w first; for axis-aligned planes on
    # round spheres this keeps the frame exactly on coordinate axes
    eye = np.eye(d)
    basis.extend(eye[i] for i in np.argsort(np.abs(w), kind="stable"))
    frame = []
    for v in basis:
        v = v - (v @ w) / (w @ w) * w
        for f in frame:
            v = v - (f @ B.A @ v) * f
        nrm = math.sqrt(max(float(v @ B.A @ v), 0.0))
        if nrm > 1e-6 * math.sqrt(float(v @ v) or 1.0) and nrm > 1e-12:
            frame.append(v / nrm)
        if len(frame) == d - 1:
            break
    return np.array(frame).T


def equator(B: ConvexBody, P: Hyperplane, resolution: int = 32, companion=None) -> SimplicialChain:
    """Discretized P-equator of an ellipsoid as an oriented cycle.

    For ``(x-c)^T A (x-c) = 1`` the equator is the slice by the plane through
    ``c`` with normal ``A u``.  Orientation: the tangent frame of a cell,
    then the outward normal, then ``u`` is positive in the ambient space.
    """
    _require_strict(B)
    if not isinstance(B, Ellipsoid):
        raise UnsupportedBody("equators are implemented for ellipsoids")
    L = slice_frame(B, P, companion)
    k = B.dim - 2
    mesh = sphere_mesh(k, resolution)
    img = map_cells(mesh, lambda z: tuple(float(c) + 0.0 for c in B.center + L @ np.asarray(z, float)), B.dim)
    u = P.unit
    cells = []
    for c in img.cells:
        pts = np.array(c.vertices)
        nu = B.gauss(pts.mean(axis=0)) if k > 0 else B.gauss(pts[0])
        frame = np.vstack([pts[1:] - pts[0], nu, u])
        sgn = 1 if np.linalg.det(frame) > 0 else -1
        if k == 0:
            cells.append(Simplex(c.vertices, sgn))
        elif sgn > 0:
            cells.append(c)
        else:
            vs = list(c.vertices)
            vs[0], vs[1] = vs[1], vs[0]
            cells.append(Simplex(tuple(vs), c.multiplicity))
    return SimplicialChain(B.dim, k, tuple(cells))


def project_cycle_onto_body(B: Ellipsoid, T: SimplicialChain) -> SimplicialChain:
    """Radially snap every vertex onto the ellipsoid boundary from its center."""
    if not isinstance(B, Ellipsoid):
        raise UnsupportedBody("radial snapping is implemented for ellipsoids")
    limit = 0.1 * B.diameter

    def snap(v):
        x = np.asarray(v, float)
        y = x - B.center
        s = math.sqrt(float(y @ B.A @ y))
        if s == 0:
            raise GeometryError("vertex at the center cannot be snapped")
        out = B.center + y / s
        if np.linalg.norm(out - x) > limit:
            raise GeometryError("vertex is too far from the boundary to snap")
        return tuple(float(c) + 0.0 for c in out)

    return map_cells(T, snap, B.dim)


def involution_chain(B: ConvexBody, P: Hyperplane, T: SimplicialChain) -> SimplicialChain:
    """Apply the P-involution to every vertex of a chain on the boundary."""
    return map_cells(T, lambda v: tuple(involution(B, P, v)), B.dim)
