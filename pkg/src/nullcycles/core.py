"""Scalars, vectors, hyperplanes, affine maps and simplices.

Two scalar flavors coexist: exact rationals (``fractions.Fraction``) and
binary64 floats.  A vector is a plain tuple; its flavor is exact when every
coordinate is an ``int`` or ``Fraction``.  Float comparisons go through the
module-level tolerance :data:`EPS`, which can be overridden with the
``NULLCYCLES_EPS`` environment variable.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

EPS: float = float(os.environ.get("NULLCYCLES_EPS", "1e-9"))

Vec = tuple


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DimensionMismatch(GeometryError):
    pass


class NumericFailure(ArithmeticError):
    """A numeric procedure could not reach a reliable answer."""


# ---------------------------------------------------------------- scalars

def parse_scalar(text: str | int | float | Fraction) -> Fraction | float:
    """Parse ``"3"``, ``"-1/3"`` or ``"0.25"``; integers and p/q stay exact."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return text
    s = str(text).strip()
    if "/" in s or s.lstrip("+-").isdigit():
        return Fraction(s)
    return float(s)


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def is_exact_vec(v: Iterable) -> bool:
    return all(isinstance(c, Rational) for c in v)


def exact(v: Iterable) -> Vec:
    """Convert coordinates to Fractions (floats are converted bit-exactly)."""
    return tuple(Fraction(c) for c in v)


def inexact(v: Iterable) -> Vec:
    return tuple(float(c) for c in v)


def scalar_to_json(x):
    if isinstance(x, Rational):
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def scalar_from_json(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return float(x)


# ---------------------------------------------------------------- vectors

def _check_len(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths differ: {len(a)} vs {len(b)}")


def add(a: Vec, b: Vec) -> Vec:
    _check_len(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vec, b: Vec) -> Vec:
    _check_len(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(s, a: Vec) -> Vec:
    return tuple(s * x for x in a)


def dot(a: Vec, b: Vec):
    _check_len(a, b)
    return sum((x * y for x, y in zip(a, b)), Fraction(0) if is_exact_vec(a) and is_exact_vec(b) else 0.0)


def norm(a: Vec) -> float:
    return math.sqrt(float(sum(float(x) ** 2 for x in a)))


def basis(d: int, i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(d))


# ----------------------------------------------------------- linear algebra

def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals by fraction-free Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            f = m[i][col]
            if f:
                f = f / p
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def exact_det(rows: Sequence[Sequence]):
    """Determinant of a square matrix of exact scalars."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for i in range(col + 1, n):
            f = m[i][col]
            if f:
                f = f / p
                row = m[col]
                m[i] = [a - f * b for a, b in zip(m[i], row)]
    return det


def det(rows: Sequence[Sequence]):
    if all(is_exact_vec(r) for r in rows):
        return exact_det(rows)
    return float(np.linalg.det(np.array(rows, dtype=float)))


def exact_solve(a: Sequence[Sequence], b: Sequence) -> list | None:
    """Solve a square exact system; ``None`` when singular."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def rref(rows: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Reduced row echelon form over the rationals, zero rows removed."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Rational basis of {x : rows @ x = 0}."""
    red = rref(rows) if rows else ()
    pivots = []
    for row in red:
        pivots.append(next(i for i, x in enumerate(row) if x != 0))
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        out.append(tuple(v))
    return out


def independent(normals: Sequence[Vec], eps: float | None = None) -> bool:
    """True iff the vectors are linearly independent.

    Exact vectors use rational rank; float vectors compare the smallest
    singular value of the row-normalized matrix against ``eps``.
    """
    normals = [tuple(v) for v in normals]
    if not normals:
        return True
    d = len(normals[0])
    for v in normals:
        if len(v) != d:
            raise DimensionMismatch("normals of different dimensions")
    if len(normals) > d:
        return False
    if all(is_exact_vec(v) for v in normals):
        return exact_rank(normals) == len(normals)
    m = np.array(normals, dtype=float)
    lens = np.linalg.norm(m, axis=1)
    if np.any(lens <= (EPS if eps is None else eps)):
        return False
    sv = np.linalg.svd(m / lens[:, None], compute_uv=False)
    return bool(sv[-1] > (EPS if eps is None else eps))


# ------------------------------------------------------------- hyperplanes

@dataclass(frozen=True)
class Hyperplane:
    """The plane ``{x : x . normal = level}``.

    Exact planes keep an unnormalized rational normal; every formula below is
    written scale-invariantly, so ``normal`` need not be unit.  For a unit
    normal ``level`` is the signed distance of the plane from the origin.
    """

    normal: Vec
    level: object = Fraction(0)

    def __post_init__(self):
        n = tuple(self.normal)
        if self.exact:
            n = exact(n)
        object.__setattr__(self, "normal", n)
        if not any(c != 0 for c in n):
            raise GeometryError("hyperplane normal is zero")
        lv = self.level
        if is_exact_vec(n) and is_exact(lv):
            lv = Fraction(lv)
        else:
            lv = float(lv)
        object.__setattr__(self, "level", lv)

    @property
    def exact(self) -> bool:
        return is_exact_vec(self.normal) and is_exact(self.level)

    @property
    def dim(self) -> int:
        return len(self.normal)

    @property
    def norm2(self):
        return dot(self.normal, self.normal)

    @property
    def unit(self) -> np.ndarray:
        n = np.array(self.normal, dtype=float)
        return n / np.linalg.norm(n)

    @property
    def offset(self) -> float:
        """Signed distance of the plane from the origin along ``unit``."""
        return float(self.level) / math.sqrt(float(self.norm2))

    def height(self, x: Vec):
        """``x . normal - level`` (a scaled signed distance)."""
        return dot(tuple(x), self.normal) - self.level

    def contains(self, x: Vec, eps: float | None = None) -> bool:
        h = self.height(x)
        if is_exact(h):
            return h == 0
        return abs(h) / math.sqrt(float(self.norm2)) <= (EPS if eps is None else eps)

    def to_float(self) -> "Hyperplane":
        u = self.unit
        return Hyperplane(tuple(float(c) for c in u), self.offset)

    @classmethod
    def coordinate(cls, d: int, i: int, level=0) -> "Hyperplane":
        return cls(basis(d, i), Fraction(level))

    @classmethod
    def parse(cls, text: str) -> "Hyperplane":
        """Parse ``"u1,...,ud[:level]"``; rational literals like ``1/3`` are exact."""
        body, _, lvl = text.partition(":")
        coords = [parse_scalar(t) for t in body.split(",") if t.strip()]
        if not coords:
            raise GeometryError(f"empty plane string {text!r}")
        level = parse_scalar(lvl) if lvl.strip() else Fraction(0)
        return cls(tuple(coords), level)

    def to_json(self) -> dict:
        return {"normal": [scalar_to_json(c) for c in self.normal], "level": scalar_to_json(self.level)}

    @classmethod
    def from_json(cls, data: dict) -> "Hyperplane":
        return cls(tuple(scalar_from_json(c) for c in data["normal"]), scalar_from_json(data.get("level", "0/1")))

    def __str__(self) -> str:
        def fmt(c):
            return str(c) if is_exact(c) else repr(c)
        s = ",".join(fmt(c) for c in self.normal)
        return s if self.level == 0 else f"{s}:{fmt(self.level)}"


# ------------------------------------------------------------- affine maps

@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + translation`` with exact or float entries."""

    matrix: tuple
    translation: Vec

    def __post_init__(self):
        mat = tuple(tuple(r) for r in self.matrix)
        if len(mat) != len(self.translation):
            raise DimensionMismatch("matrix rows and translation length differ")
        if mat and any(len(r) != len(mat[0]) for r in mat):
            raise DimensionMismatch("ragged matrix")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "translation", tuple(self.translation))

    @property
    def d_in(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def d_out(self) -> int:
        return len(self.matrix)

    @property
    def exact(self) -> bool:
        return all(is_exact_vec(r) for r in self.matrix) and is_exact_vec(self.translation)

    def __call__(self, x: Vec) -> Vec:
        if len(x) != self.d_in:
            raise DimensionMismatch(f"map expects dimension {self.d_in}, got {len(x)}")
        return tuple(sum((a * b for a, b in zip(row, x)), t) for row, t in zip(self.matrix, self.translation))

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """``self o inner``."""
        if inner.d_out != self.d_in:
            raise DimensionMismatch("cannot compose maps of mismatched dimensions")
        cols = list(zip(*inner.matrix))
        mat = tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.matrix)
        return AffineMap(mat, self(inner.translation))

    @classmethod
    def identity(cls, d: int) -> "AffineMap":
        return cls(tuple(basis(d, i) for i in range(d)), (Fraction(0),) * d)


def project_map(P: Hyperplane) -> AffineMap:
    """Orthogonal projection onto ``P``: ``x - ((x.n - level)/(n.n)) n``."""
    n = P.normal
    n2 = P.norm2
    d = len(n)
    one = Fraction(1) if P.exact else 1.0
    mat = tuple(tuple((one if i == j else 0 * one) - n[i] * n[j] / n2 for j in range(d)) for i in range(d))
    trans = tuple(P.level * n[i] / n2 for i in range(d))
    return AffineMap(mat, trans)


def chart_axis(P: Hyperplane) -> int:
    """Coordinate dropped by :func:`chart_map` (largest normal component)."""
    mags = [abs(c) for c in P.normal]
    return mags.index(max(mags))


def chart_map(P: Hyperplane) -> AffineMap:
    """Projection onto ``P`` followed by deletion of one coordinate.

    The coordinate deleted is one where the normal does not vanish, so the
    deletion is a linear isomorphism from ``P`` onto R^(d-1).  Vanishing of a
    pushed-forward current does not depend on this choice.
    """
    pi = project_map(P)
    j = chart_axis(P)
    keep = [i for i in range(P.dim) if i != j]
    return AffineMap(tuple(pi.matrix[i] for i in keep), tuple(pi.translation[i] for i in keep))


# ---------------------------------------------------------------- simplices

@dataclass(frozen=True)
class Simplex:
    """An oriented simplex; the orientation is the vertex order."""

    vertices: tuple
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(v) for v in self.vertices))
        if self.multiplicity == 0:
            raise GeometryError("zero multiplicity")
        if len({len(v) for v in self.vertices}) > 1:
            raise DimensionMismatch("simplex vertices of different dimensions")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def negated(self) -> "Simplex":
        return Simplex(self.vertices, -self.multiplicity)


def affine_rank(vertices: Sequence[Vec], eps: float | None = None) -> int:
    """Dimension of the affine hull of a vertex list."""
    if len(vertices) <= 1:
        return 0
    v0 = vertices[0]
    edges = [sub(v, v0) for v in vertices[1:]]
    if all(is_exact_vec(v) for v in vertices):
        return exact_rank(edges)
    m = np.array(edges, dtype=float)
    if not m.size:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    scale_ = max(1.0, float(np.abs(m).max()))
    return int(np.sum(sv > (EPS if eps is None else eps) * scale_))


def simplex_degenerate(s: Simplex | Sequence[Vec], eps: float | None = None) -> bool:
    """True iff the vertices are affinely dependent."""
    verts = s.vertices if isinstance(s, Simplex) else tuple(tuple(v) for v in s)
    return affine_rank(verts, eps) < len(verts) - 1
