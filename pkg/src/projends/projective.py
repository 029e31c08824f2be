"""Points, maps, hyperplanes and subspaces of the projective sphere S^n.

S^n is the space of rays in R^{n+1}; a point is stored as a unit vector and
``-p`` is its antipode. Maps are matrices with |det| = 1 acting on column
vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.linalg import null_space

from .config import tol
from .errors import DegenerateConfig, NotCollinear, SingularMatrix

ArrayLike = Union[np.ndarray, Sequence[float]]


def normalize(v: ArrayLike) -> np.ndarray:
    """Scale a vector (or each row of a 2D array) to unit Euclidean norm."""
    a = np.asarray(v, dtype=float)
    n = np.linalg.norm(a, axis=-1, keepdims=True)
    if np.any(n == 0):
        raise DegenerateConfig("cannot normalize the zero vector")
    return a / n


def _vec(p) -> np.ndarray:
    if isinstance(p, ProjPoint):
        return p.vec
    if isinstance(p, Hyperplane):
        return p.covec
    return normalize(p)


def _mat(g) -> np.ndarray:
    if isinstance(g, ProjMap):
        return g.mat
    return np.asarray(g, dtype=float)


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of S^n, i.e. a unit vector of R^{n+1}."""

    vec: np.ndarray

    def __post_init__(self):
        v = normalize(np.array(self.vec, dtype=float).ravel())
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)

    @property
    def dim(self) -> int:
        return self.vec.size - 1

    def antipode(self) -> "ProjPoint":
        return ProjPoint(-self.vec)

    def angle(self, other) -> float:
        """Spherical distance to another point."""
        return spherical_distance(self.vec, _vec(other))

    def __repr__(self):
        return f"ProjPoint({np.array2string(self.vec, precision=6)})"


@dataclass(frozen=True, eq=False)
class ProjMap:
    """An element of SL±(n+1, R)."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.array(self.mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SingularMatrix("ProjMap needs a square matrix")
        d = abs(np.linalg.det(m))
        hadamard = float(np.prod(np.linalg.norm(m, axis=0)))
        if abs(d - 1.0) > max(tol().det, 1e3 * np.finfo(float).eps * hadamard):
            raise SingularMatrix(f"|det| = {d!r}, expected 1 (use ProjMap.normalized)")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @classmethod
    def normalized(cls, mat: ArrayLike) -> "ProjMap":
        """Rescale a nonsingular matrix to |det| = 1."""
        m = np.asarray(mat, dtype=float)
        sv = np.linalg.svd(m, compute_uv=False) if m.size else np.zeros(1)
        if not np.all(np.isfinite(sv)) or sv[-1] <= tol().det * sv[0]:
            raise SingularMatrix("matrix is numerically singular")
        d = abs(np.linalg.det(m))
        return cls(m * d ** (-1.0 / m.shape[0]))

    @classmethod
    def identity(cls, size: int) -> "ProjMap":
        return cls(np.eye(size))

    @property
    def size(self) -> int:
        return self.mat.shape[0]

    def __matmul__(self, other):
        if isinstance(other, ProjMap):
            return ProjMap(self.mat @ other.mat)
        if isinstance(other, ProjPoint):
            return apply(self, other)
        return NotImplemented

    def inverse(self) -> "ProjMap":
        return ProjMap(np.linalg.inv(self.mat))

    def __repr__(self):
        return f"ProjMap({np.array2string(self.mat, precision=4)})"


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Oriented great sphere {covec . x = 0}; the positive side is covec . x > 0."""

    covec: np.ndarray

    def __post_init__(self):
        c = normalize(np.array(self.covec, dtype=float).ravel())
        c.setflags(write=False)
        object.__setattr__(self, "covec", c)

    def side(self, x) -> float:
        return float(self.covec @ _vec(x))

    def flipped(self) -> "Hyperplane":
        return Hyperplane(-self.covec)

    def __repr__(self):
        return f"Hyperplane({np.array2string(self.covec, precision=6)})"


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of R^{n+1} with an orthonormal basis stored as rows."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.atleast_2d(np.array(self.basis, dtype=float))
        gram = b @ b.T
        if not np.allclose(gram, np.eye(b.shape[0]), atol=1e3 * tol().norm):
            b = orthonormal_rows(b)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def contains(self, x, atol: float | None = None) -> bool:
        v = np.asarray(_vec(x))
        atol = tol().col if atol is None else atol
        return float(np.linalg.norm(v - self.projector() @ v)) <= atol

    def complement(self) -> "Subspace":
        return Subspace(null_space(self.basis).T)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def orthonormal_rows(vectors: np.ndarray, rtol: float | None = None) -> np.ndarray:
    """Orthonormal basis (rows) of the row span, rank decided relative to the top singular value."""
    a = np.atleast_2d(np.asarray(vectors, dtype=float))
    rtol = tol().col if rtol is None else rtol
    _, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((0, a.shape[1]))
    rank = int(np.sum(s > rtol * s[0]))
    return vt[:rank]


def spherical_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Angle between unit vectors, stable near 0 and pi."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    diff = np.linalg.norm(a - b, axis=-1)
    summ = np.linalg.norm(a + b, axis=-1)
    return 2.0 * np.arctan2(diff, summ)


def apply(g, p) -> ProjPoint:
    """Image of a point: normalize(M v). Positive rescaling keeps the sphere point."""
    return ProjPoint(_mat(g) @ _vec(p))


def apply_many(g, points: np.ndarray) -> np.ndarray:
    """Apply a matrix to each row of ``points`` and renormalize."""
    return normalize(np.asarray(points, dtype=float) @ _mat(g).T)


def dual_map(g) -> ProjMap:
    """Inverse transpose: the induced action on covectors."""
    m = _mat(g)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= tol().det * sv[0]:
        raise SingularMatrix("cannot dualize a singular matrix")
    return ProjMap(np.linalg.inv(m).T)


def join_points(points: Iterable) -> Subspace:
    """Smallest subspace containing every given point."""
    vs = [np.asarray(_vec(p)) for p in points]
    if not vs:
        raise DegenerateConfig("join of an empty list")
    return Subspace(orthonormal_rows(np.vstack(vs)))


def _plane_coords(vs: np.ndarray) -> np.ndarray:
    _, s, vt = np.linalg.svd(vs, full_matrices=True)
    if s.size > 2 and s[2] > tol().col * s[0]:
        raise NotCollinear(f"points are not on one great circle (residual {s[2] / s[0]:.3e})")
    return vs @ vt[:2].T


def _det2(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def cross_ratio(o, s, q, p) -> float:
    """Cross-ratio [o, s, q, p] = ((o-q)/(s-q)) * ((s-p)/(o-p)).

    Evaluated with 2x2 determinants in the plane of the four points, which
    equals the affine formula in every chart and does not depend on the sign
    of the representing vectors.
    """
    vs = np.vstack([_vec(o), _vec(s), _vec(q), _vec(p)])
    o2, s2, q2, p2 = _plane_coords(vs)
    den_sq = _det2(s2, q2)
    den_op = _det2(o2, p2)
    if abs(den_sq) < tol().den or abs(den_op) < tol().den:
        raise DegenerateConfig("cross-ratio denominator vanishes (s=q or o=p)")
    return _det2(o2, q2) * _det2(s2, p2) / (den_sq * den_op)


def affine_point(x: float) -> ProjPoint:
    """The point of S^1 with affine coordinate x in the chart x_2 = 1."""
    return ProjPoint([x, 1.0])


def householder_to_last(v: np.ndarray) -> np.ndarray:
    """Orthogonal symmetric P with P e_{n+1} = v (identity when v = e_{n+1})."""
    v = normalize(v)
    e = np.zeros_like(v)
    e[-1] = 1.0
    u = e - v
    nu = np.linalg.norm(u)
    if nu < 1e-15:
        return np.eye(v.size)
    u = u / nu
    return np.eye(v.size) - 2.0 * np.outer(u, u)


def sign_normalize(mat: np.ndarray) -> np.ndarray:
    """Flip sign so the first entry of near-maximal magnitude is positive.

    Entries within a relative 1e-6 of the maximum are treated as tied, which
    keeps the choice stable under rounding.
    """
    m = np.asarray(mat, dtype=float)
    flat = m.reshape(m.shape[0], -1) if m.ndim == 3 else m.reshape(1, -1)
    absf = np.abs(flat)
    mx = absf.max(axis=1, keepdims=True)
    idx = np.argmax(absf >= mx * (1 - 1e-6), axis=1)
    signs = np.sign(flat[np.arange(flat.shape[0]), idx])
    signs[signs == 0] = 1.0
    if m.ndim == 3:
        return m * signs[:, None, None]
    return m * signs[0]


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    s = np.linalg.svd(a.basis @ b.basis.T, compute_uv=False)
    return np.arccos(np.clip(s, -1.0, 1.0))


def random_projmap(size: int, rng: np.random.Generator, cond_max: float = 20.0) -> ProjMap:
    """Random well-conditioned element of SL±, used by tests and audits."""
    while True:
        m = rng.normal(size=(size, size)) + 2.0 * np.eye(size)
        if np.linalg.cond(m) < cond_max:
            return ProjMap.normalized(m)
