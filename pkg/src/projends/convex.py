"""Properly convex bodies in S^n: polytopes and ellipsoids.

Every body carries a chart covector ``alpha`` that is positive on it. Affine
coordinates in that chart are y = E x / (alpha . x), where the rows of E
complete alpha to an orthonormal basis.

An ellipsoid is stored as a quadric M of signature (n, 1); the body is
{x : x^T M x <= 0, alpha . x > 0}. Duality sends M to M^{-1}.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError, cKDTree

from .config import tol
from .errors import (
    DegenerateBody,
    DegenerateConfig,
    IdenticalPoints,
    NotInAmbient,
    NotIndependent,
    NotInterior,
    NotOnBoundary,
    NotProperlyConvex,
    NotStrictlyConvexInput,
)
from .projective import (
    ProjPoint,
    _mat,
    _vec,
    householder_to_last,
    normalize,
    orthonormal_rows,
    spherical_distance,
)


class Containment(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


class BoundaryType(enum.Enum):
    STRICT_C1 = "StrictC1"
    CORNER = "Corner"
    FLAT_FACE = "FlatFace"


# ---------------------------------------------------------------- charts


def chart_frame(alpha: np.ndarray) -> np.ndarray:
    """Rows spanning alpha^perp; the identity block when alpha = e_{n+1}."""
    return householder_to_last(alpha)[:, :-1].T


def to_chart(points: np.ndarray, alpha: np.ndarray, frame: np.ndarray | None = None) -> np.ndarray:
    x = np.atleast_2d(np.asarray(points, dtype=float))
    e = chart_frame(alpha) if frame is None else frame
    h = x @ alpha
    if np.any(h <= 0):
        raise NotProperlyConvex("point not in the open hemisphere of the chart")
    return (x @ e.T) / h[:, None]


def from_chart(coords: np.ndarray, alpha: np.ndarray, frame: np.ndarray | None = None) -> np.ndarray:
    y = np.atleast_2d(np.asarray(coords, dtype=float))
    e = chart_frame(alpha) if frame is None else frame
    return normalize(alpha[None, :] + y @ e)


def find_chart(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Covector maximizing min(alpha . x) over the points (an LP), unit-normalized.

    Returns (alpha, margin); margin <= 0 means no open hemisphere contains them.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    guess = x.sum(axis=0)
    if np.linalg.norm(guess) > 0:
        guess = guess / np.linalg.norm(guess)
        m = float((x @ guess).min())
        if m > 0.2:
            return guess, m
    dim = x.shape[1]
    # variables (alpha, t); maximize t subject to x_i . alpha >= t, |alpha_j| <= 1
    c = np.zeros(dim + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-x, np.ones((x.shape[0], 1))])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(x.shape[0]),
                  bounds=[(-1, 1)] * dim + [(None, 1)], method="highs")
    if not res.success:
        raise NotProperlyConvex("chart LP failed")
    alpha = res.x[:dim]
    na = np.linalg.norm(alpha)
    if na == 0:
        return alpha, 0.0
    alpha = alpha / na
    return alpha, float((x @ alpha).min())


# ---------------------------------------------------------------- hulls


@dataclass(frozen=True)
class HullData:
    vertex_index: np.ndarray  # indices into the input cloud
    dim: int  # affine dimension of the cloud
    equations: np.ndarray | None  # (k, n+1) rows [a | b], a.y + b <= 0 inside, unit a
    simplices: np.ndarray | None


def affine_hull_dim(y: np.ndarray, rtol: float | None = None) -> tuple[int, np.ndarray, np.ndarray]:
    """Dimension, mean and principal directions of a point cloud."""
    rtol = tol().hull if rtol is None else rtol
    mu = y.mean(axis=0)
    c = y - mu
    if y.shape[0] == 1:
        return 0, mu, np.zeros((0, y.shape[1]))
    _, s, vt = np.linalg.svd(c, full_matrices=False)
    scale = max(float(np.abs(y).max()), 1.0)
    d = int(np.sum(s > rtol * scale * np.sqrt(y.shape[0])))
    return d, mu, vt[:d]


def _qhull(z: np.ndarray) -> ConvexHull:
    try:
        return ConvexHull(z)
    except QhullError:
        return ConvexHull(z, qhull_options="QJ")


def hull_data(y: np.ndarray) -> HullData:
    """Convex hull of chart coordinates, reducing to the affine hull first."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    d, mu, pcs = affine_hull_dim(y)
    if d == 0:
        return HullData(np.array([0]), 0, None, None)
    z = (y - mu) @ pcs.T
    if d == 1:
        i, j = int(np.argmin(z[:, 0])), int(np.argmax(z[:, 0]))
        eq = None
        if y.shape[1] == 1:
            eq = np.array([[-1.0, y[i, 0]], [1.0, -y[j, 0]]])
        return HullData(np.array(sorted({i, j})), 1, eq, None)
    h = _qhull(z)
    if d < y.shape[1]:
        return HullData(np.sort(h.vertices), d, None, h.simplices)
    a = h.equations[:, :-1] @ pcs
    b = h.equations[:, -1] - a @ mu
    eq = np.hstack([a, b[:, None]])
    norms = np.linalg.norm(eq[:, :-1], axis=1, keepdims=True)
    eq = eq / norms
    return HullData(np.sort(h.vertices), d, eq, h.simplices)


def _unique_rows(a: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    if a.shape[0] == 0:
        return a
    return a[unique_index(a, atol)]


def unique_index(a: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    """Indices of a greedy subset of rows with no two closer than ``atol``."""
    tree = cKDTree(a)
    keep = np.ones(a.shape[0], dtype=bool)
    for i in range(a.shape[0]):
        if keep[i]:
            for j in tree.query_ball_point(a[i], atol):
                if j != i:
                    keep[j] = False
    return np.flatnonzero(keep)


# ---------------------------------------------------------------- bodies


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """A polytope (``vertices``) or an ellipsoid (``quadric``) with a chart covector."""

    kind: str
    chart: np.ndarray
    vertices: np.ndarray | None = None
    quadric: np.ndarray | None = None

    # constructors ---------------------------------------------------

    @classmethod
    def polytope(cls, points, chart=None, prune: bool = True) -> "ConvexBody":
        pts = normalize(np.atleast_2d(np.asarray([_vec(p) for p in points]
                                                  if not isinstance(points, np.ndarray) else points,
                                                  dtype=float)))
        if chart is None:
            alpha, margin = find_chart(pts)
            if margin <= tol().geo:
                raise NotProperlyConvex("vertices do not lie in an open hemisphere")
        else:
            alpha = normalize(_vec(chart))
            if np.any(pts @ alpha <= 0):
                raise NotProperlyConvex("vertex outside the chart hemisphere")
        if prune:
            hd = hull_data(to_chart(pts, alpha))
            pts = pts[hd.vertex_index]
        return cls("polytope", alpha, vertices=pts)

    @classmethod
    def ellipsoid(cls, center, form, chart=None) -> "ConvexBody":
        """{(y - c)^T Q (y - c) <= 1} in the affine chart of ``chart`` (default e_{n+1}).

        ``center`` is either chart coordinates (length n) or a point of S^n.
        """
        q = np.asarray(form, dtype=float)
        n = q.shape[0]
        alpha = np.zeros(n + 1)
        alpha[-1] = 1.0
        if chart is not None:
            alpha = normalize(_vec(chart))
        e = chart_frame(alpha)
        c = np.asarray(_vec(center) if isinstance(center, ProjPoint) else center, dtype=float).ravel()
        if c.size == n + 1:
            c = to_chart(c, alpha, e)[0]
        if np.any(np.linalg.eigvalsh((q + q.T) / 2) <= 0):
            raise DegenerateBody("ellipsoid form must be positive definite")
        el = e - np.outer(c, alpha)
        m = el.T @ q @ el - np.outer(alpha, alpha)
        return cls.from_quadric(m, alpha)

    @classmethod
    def from_quadric(cls, m: np.ndarray, chart=None) -> "ConvexBody":
        """Body {x^T M x <= 0} on the chart side; without a chart, the negative eigenvector is used."""
        m = np.asarray(m, dtype=float)
        m = (m + m.T) / 2
        m = m / np.linalg.norm(m)
        if chart is None:
            w, vecs = np.linalg.eigh(m if np.sum(np.linalg.eigvalsh(m) < 0) == 1 else -m)
            chart = vecs[:, 0] * (1.0 if vecs[np.argmax(np.abs(vecs[:, 0])), 0] > 0 else -1.0)
        alpha = normalize(_vec(chart))
        e = chart_frame(alpha)
        w = np.linalg.eigvalsh(e @ m @ e.T)
        if np.all(w < 0):
            m = -m
        elif np.any(w <= 0):
            raise NotProperlyConvex("quadric is not an ellipsoid in this chart")
        a, b = e @ m @ e.T, e @ m @ alpha
        if b @ np.linalg.solve(a, b) - alpha @ m @ alpha <= 0:
            raise NotProperlyConvex("quadric has no real points in this chart")
        return cls("ellipsoid", alpha, quadric=m)

    # basic geometry -------------------------------------------------

    @property
    def n(self) -> int:
        return self.chart.size - 1

    @property
    def is_polytope(self) -> bool:
        return self.kind == "polytope"

    @cached_property
    def frame(self) -> np.ndarray:
        return chart_frame(self.chart)

    @cached_property
    def _conic(self) -> tuple[np.ndarray, np.ndarray]:
        m, alpha, e = self.quadric, self.chart, self.frame
        a = e @ m @ e.T
        b = e @ m @ alpha
        c0 = alpha @ m @ alpha
        ainv_b = np.linalg.solve(a, b)
        center = -ainv_b
        form = a / (b @ ainv_b - c0)
        return center, form

    @property
    def center_chart(self) -> np.ndarray:
        if self.is_polytope:
            return self.vertex_chart.mean(axis=0)
        return self._conic[0]

    @property
    def form(self) -> np.ndarray:
        if self.is_polytope:
            raise TypeError("polytopes have no quadratic form")
        return self._conic[1]

    @property
    def center(self) -> ProjPoint:
        return ProjPoint(from_chart(self.center_chart, self.chart, self.frame)[0])

    def interior_point(self) -> np.ndarray:
        return self.center.vec

    @cached_property
    def vertex_chart(self) -> np.ndarray:
        return to_chart(self.vertices, self.chart, self.frame)

    @cached_property
    def _hull(self) -> HullData:
        return hull_data(self.vertex_chart)

    @property
    def intrinsic_dim(self) -> int:
        if not self.is_polytope:
            return self.n
        return self._hull.dim

    @property
    def full_dimensional(self) -> bool:
        return self.intrinsic_dim == self.n

    @cached_property
    def chart_equations(self) -> np.ndarray:
        """Unit-normal facet inequalities a.y + b <= 0 in chart coordinates."""
        if not self.is_polytope or not self.full_dimensional:
            raise DegenerateBody("facets need a full-dimensional polytope")
        return _unique_rows(self._hull.equations)

    @cached_property
    def facet_covectors(self) -> np.ndarray:
        """Unit covectors f with f . x >= 0 on the body, one per facet."""
        eq = self.chart_equations
        f = -(eq[:, -1:] * self.chart[None, :] + eq[:, :-1] @ self.frame)
        return _unique_rows(normalize(f))

    def transform(self, g) -> "ConvexBody":
        m = _mat(g)
        alpha = normalize(np.linalg.solve(m.T, self.chart))
        if self.is_polytope:
            return ConvexBody("polytope", alpha, vertices=normalize(self.vertices @ m.T))
        minv = np.linalg.inv(m)
        return ConvexBody.from_quadric(minv.T @ self.quadric @ minv, alpha)

    def with_chart(self, chart) -> "ConvexBody":
        alpha = normalize(_vec(chart))
        if self.is_polytope:
            return ConvexBody.polytope(self.vertices, chart=alpha, prune=False)
        return ConvexBody.from_quadric(self.quadric, alpha)

    def boundary_samples(self, count: int, rng: np.random.Generator | None = None) -> np.ndarray:
        """Points on the boundary of an ellipsoid (or the vertices of a polytope)."""
        if self.is_polytope:
            return self.vertices.copy()
        rng = np.random.default_rng(0) if rng is None else rng
        u = normalize(rng.normal(size=(count, self.n)))
        w, v = np.linalg.eigh(self.form)
        y = self.center_chart + (u / np.sqrt(w)) @ v.T
        return from_chart(y, self.chart, self.frame)

    def __repr__(self):
        if self.is_polytope:
            return f"ConvexBody(polytope, n={self.n}, vertices={len(self.vertices)})"
        return f"ConvexBody(ellipsoid, n={self.n})"


def depth(body: ConvexBody, points: np.ndarray) -> np.ndarray:
    """Signed chart distance to the boundary, positive inside.

    Exact for polytopes, first order for ellipsoids. Points outside the chart
    hemisphere get -inf.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    h = x @ body.chart
    out = np.full(x.shape[0], -np.inf)
    ok = h > 1e-14
    if not np.any(ok):
        return out
    y = (x[ok] @ body.frame.T) / h[ok, None]
    if not body.is_polytope:
        c, q = body._conic
        u = y - c
        qu = u @ q
        s2 = np.einsum("ij,ij->i", u, qu)
        s = np.sqrt(np.maximum(s2, 0.0))
        g = np.linalg.norm(qu, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(g > 0, (1.0 - s) * s / g, np.inf)
        out[ok] = d
        return out
    hd = body._hull
    if hd.dim == body.n:
        eq = body.chart_equations
        out[ok] = -(y @ eq[:, :-1].T + eq[:, -1]).max(axis=1)
        return out
    # lower-dimensional polytope: no interior, report minus the distance to it
    vy = body.vertex_chart
    dd, mu, pcs = affine_hull_dim(vy)
    off = (y - mu) - ((y - mu) @ pcs.T) @ pcs
    r = np.linalg.norm(off, axis=1)
    if dd == 0:
        rel = np.zeros(y.shape[0])
    elif dd == 1:
        z = ((y - mu) @ pcs.T)[:, 0]
        zv = ((vy - mu) @ pcs.T)[:, 0]
        rel = np.minimum(z - zv.min(), zv.max() - z)
    else:
        z = (y - mu) @ pcs.T
        hz = _qhull((vy - mu) @ pcs.T)
        rel = -(z @ hz.equations[:, :-1].T + hz.equations[:, -1]).max(axis=1)
    out[ok] = -np.maximum(r, np.maximum(-rel, 0.0))
    return out


def contains(body: ConvexBody, x) -> Containment:
    d = float(depth(body, _vec(x))[0])
    t = tol().geo
    if body.is_polytope and not body.full_dimensional:
        return Containment.BOUNDARY if d >= -t else Containment.OUTSIDE
    if d > t:
        return Containment.INTERIOR
    if d >= -t:
        return Containment.BOUNDARY
    return Containment.OUTSIDE


# ---------------------------------------------------------------- chords and metric


@dataclass(frozen=True)
class Chord:
    o: ProjPoint
    s: ProjPoint
    p: ProjPoint
    q: ProjPoint
    t_o: float  # affine parameters along p + t (q - p) in the body's chart
    t_s: float


def _lift(body: ConvexBody, x: np.ndarray) -> np.ndarray:
    h = x @ body.chart
    if np.any(h <= 0):
        raise NotInterior("point outside the chart hemisphere of the body")
    return x / h[..., None] if x.ndim > 1 else x / h


def chord_parameters(body: ConvexBody, p_lift: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exit parameters t_o < 0 < t_s of the lines P + t d (rows), P inside the body.

    Rows of ``p_lift`` are chart lifts (alpha . P = 1) and ``d`` lies in alpha^perp.
    """
    p_lift = np.atleast_2d(p_lift)
    d = np.atleast_2d(d)
    if body.is_polytope:
        if not body.full_dimensional:
            raise DegenerateBody("chords need a full-dimensional body")
        f = body.facet_covectors
        fp = p_lift @ f.T
        fd = d @ f.T
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = -fp / fd
        lo = np.where(fd > 0, ratio, -np.inf).max(axis=1)
        hi = np.where(fd < 0, ratio, np.inf).min(axis=1)
        return lo, hi
    m = body.quadric
    a = np.einsum("ij,jk,ik->i", d, m, d)
    b = np.einsum("ij,jk,ik->i", p_lift, m, d)
    c = np.einsum("ij,jk,ik->i", p_lift, m, p_lift)
    disc = np.sqrt(np.maximum(b * b - a * c, 0.0))
    sgn = np.where(b >= 0, 1.0, -1.0)
    t1 = (-b - sgn * disc) / a
    with np.errstate(divide="ignore", invalid="ignore"):
        t2 = np.where(t1 != 0, c / (a * t1), 0.0)
    return np.minimum(t1, t2), np.maximum(t1, t2)


def maximal_chord(body: ConvexBody, p, q) -> Chord:
    """Endpoints o, s of the maximal segment through p, q, ordered o, p, q, s."""
    pv, qv = _vec(p), _vec(q)
    if spherical_distance(pv, qv) < tol().geo:
        raise IdenticalPoints("p and q coincide")
    for x in (pv, qv):
        if contains(body, x) is not Containment.INTERIOR:
            raise NotInterior("chord points must be interior")
    pl, ql = _lift(body, pv), _lift(body, qv)
    lo, hi = chord_parameters(body, pl, ql - pl)
    t_o, t_s = float(lo[0]), float(hi[0])
    o = ProjPoint(pl + t_o * (ql - pl))
    s = ProjPoint(pl + t_s * (ql - pl))
    return Chord(o, s, ProjPoint(pv), ProjPoint(qv), t_o, t_s)


def _distance_from_params(t_o, t_s):
    return np.log1p(1.0 / (-t_o)) + np.log1p(1.0 / (t_s - 1.0))


def hilbert_distance(body: ConvexBody, p, q) -> float:
    """log |[o, s, q, p]| along the maximal chord through p and q."""
    pv, qv = _vec(p), _vec(q)
    if spherical_distance(pv, qv) < tol().geo:
        return 0.0
    ch = maximal_chord(body, pv, qv)
    if not (ch.t_o < 0 < 1 < ch.t_s):
        raise NotInterior("chord parameters inconsistent with interior points")
    return float(_distance_from_params(ch.t_o, ch.t_s))


def hilbert_distances(body: ConvexBody, points: np.ndarray, q) -> np.ndarray:
    """Vectorized distance from each row of ``points`` to q (interior points)."""
    x = np.atleast_2d(points)
    qv = _vec(q)
    if not body.is_polytope:
        m = body.quadric
        xm = x @ m
        num = np.abs(xm @ qv)
        den = np.sqrt(np.einsum("ij,ij->i", xm, x) * (qv @ m @ qv))
        return 2.0 * np.arccosh(np.maximum(num / den, 1.0))
    pl = _lift(body, x)
    ql = _lift(body, qv)
    d = ql[None, :] - pl
    same = np.linalg.norm(d, axis=1) < 1e-15
    d[same] = body.frame[0]
    lo, hi = chord_parameters(body, pl, d)
    out = _distance_from_params(lo, hi)
    out[same] = 0.0
    return out


def distance_to_section(body: ConvexBody, points: np.ndarray, covector: np.ndarray) -> np.ndarray:
    """Hilbert distance from points of an ellipsoid to its section by the hyperplane ``covector``."""
    if body.is_polytope:
        raise TypeError("closed form needs an ellipsoid")
    x = np.atleast_2d(points)
    m = body.quadric
    h = normalize(covector)
    nu = np.linalg.solve(m, h)
    nn = h @ nu
    if nn <= 0:
        raise DegenerateConfig("hyperplane misses the ellipsoid")
    xx = -np.einsum("ij,jk,ik->i", x, m, x)
    return 2.0 * np.arcsinh(np.abs(x @ h) / np.sqrt(xx * nn))


def distance_to_body(amb: ConvexBody, x, sub: ConvexBody, starts: int = 4) -> float:
    """Hilbert distance in ``amb`` from x to a polytope or ellipsoid ``sub`` (numeric minimization)."""
    xv = _vec(x)
    e, alpha = amb.frame, amb.chart
    if contains(sub.with_chart(alpha), xv) is not Containment.OUTSIDE and (
            not sub.is_polytope or sub.full_dimensional):
        if contains(sub.with_chart(alpha), xv) is Containment.INTERIOR:
            return 0.0

    def point(z):
        return from_chart(z, alpha, e)[0]

    if sub.is_polytope:
        vy = to_chart(sub.vertices, alpha, e)
        k = vy.shape[0]

        def obj(w):
            w = np.maximum(w, 0)
            w = w / w.sum()
            return hilbert_distance(amb, xv, point(w @ vy))

        best = np.inf
        yx = to_chart(xv, alpha, e)[0]
        order = np.argsort(np.linalg.norm(vy - yx, axis=1))
        inits = [np.full(k, 1.0 / k)] + [np.eye(k)[i] * 0.9 + 0.1 / k for i in order[:starts]]
        cons = [{"type": "eq", "fun": lambda w: w.sum() - 1.0}]
        for w0 in inits:
            r = minimize(obj, w0, method="SLSQP", bounds=[(0, 1)] * k, constraints=cons,
                         options={"ftol": 1e-12, "maxiter": 300})
            best = min(best, float(r.fun), obj(w0))
        return best
    sc = sub.with_chart(alpha)
    c, q = sc._conic
    w, v = np.linalg.eigh(q)
    root = v @ np.diag(1 / np.sqrt(w)) @ v.T

    def obj2(u):
        nu = np.linalg.norm(u)
        uu = u if nu <= 1 else u / nu
        return hilbert_distance(amb, xv, point(c + root @ uu))

    yx = to_chart(xv, alpha, e)[0]
    u0 = np.linalg.solve(root, yx - c)
    u0 = u0 / max(np.linalg.norm(u0), 1.0) * 0.999
    r = minimize(obj2, u0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
    return float(min(r.fun, obj2(u0)))


# ---------------------------------------------------------------- duality and inclusion


def dual_body(body: ConvexBody) -> ConvexBody:
    """Covectors nonnegative on the body, as a body of S^n (covector coordinates)."""
    if body.is_polytope:
        if not body.full_dimensional:
            raise DegenerateBody("dual of a body with empty interior")
        chart = body.interior_point()
        return ConvexBody.polytope(body.facet_covectors, chart=chart, prune=False)
    return ConvexBody.from_quadric(np.linalg.inv(body.quadric), body.interior_point())


def _lambda_max(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((a + a.T) / 2)[-1])


def is_subset(a: ConvexBody, b: ConvexBody, atol: float = 1e-9) -> bool:
    """Whether A is contained in B (closed bodies, same sphere)."""
    if a.is_polytope:
        pts = a.vertices
        if b.is_polytope and b.full_dimensional:
            return bool((pts @ b.facet_covectors.T).min() >= -atol)
        return bool(depth(b, pts).min() >= -atol)
    if b.is_polytope:
        if not b.full_dimensional:
            return False
        da = dual_body(a)
        return bool(depth(da, b.facet_covectors).min() >= -atol)
    if depth(b, a.interior_point()[None, :])[0] <= 0:
        return False
    ma, mb = a.quadric, b.quadric

    def f(t):
        return _lambda_max(mb - t * ma)

    hi = 1.0
    while f(2 * hi) < f(hi) and hi < 1e12:
        hi *= 2
    r = minimize_scalar(f, bounds=(0.0, 2 * hi), method="bounded", options={"xatol": 1e-12})
    return bool(min(r.fun, f(0.0)) <= atol)


def dual_inclusion_check(a: ConvexBody, b: ConvexBody) -> bool:
    """(A in B) == (B* in A*); a self-test that must hold."""
    return is_subset(a, b) == is_subset(dual_body(b), dual_body(a))


# ---------------------------------------------------------------- joins


def _polytope_points(body: ConvexBody, samples: int) -> np.ndarray:
    return body.vertices if body.is_polytope else body.boundary_samples(samples)


def join(a: ConvexBody, b: ConvexBody, ambient: ConvexBody, samples: int = 256) -> ConvexBody:
    """Join of A and B inside ``ambient``; ellipsoids are replaced by boundary samples."""
    alpha = ambient.chart
    pa, pb = _polytope_points(a, samples), _polytope_points(b, samples)
    for pts, name in ((pa, "A"), (pb, "B")):
        if np.any(pts @ alpha <= 0):
            raise NotInAmbient(f"{name} leaves the hemisphere of the ambient body")
    return ConvexBody.polytope(np.vstack([pa, pb]), chart=alpha)


def strict_join(parts: list[ConvexBody], samples: int = 256) -> ConvexBody:
    """Strict join of bodies spanning independent subspaces."""
    clouds = [_polytope_points(p, samples) for p in parts]
    bases = [orthonormal_rows(c) for c in clouds]
    total = sum(b.shape[0] for b in bases)
    stacked = np.vstack(bases)
    if np.linalg.matrix_rank(stacked, tol=tol().col * max(1.0, np.abs(stacked).max())) < total:
        raise NotIndependent("supporting subspaces are not independent")
    return ConvexBody.polytope(np.vstack(clouds))


def join_point_body(v, body: ConvexBody, ambient_chart=None) -> ConvexBody:
    """Cone v * body as a polytope."""
    pts = np.vstack([_vec(v)[None, :], _polytope_points(body, 256)])
    return ConvexBody.polytope(pts, chart=ambient_chart)


# ---------------------------------------------------------------- neighborhoods and boundary types


def _is_totally_geodesic(body: ConvexBody) -> bool:
    return body.is_polytope and not body.full_dimensional


def _sample_body(body: ConvexBody, count: int, rng: np.random.Generator) -> np.ndarray:
    if not body.is_polytope:
        return np.vstack([body.boundary_samples(count, rng), body.interior_point()[None, :]])
    v = body.vertices
    k = v.shape[0]
    w = rng.dirichlet(np.full(k, 0.3), size=count)
    mids = []
    for i in range(k):
        for j in range(i + 1, k):
            t = np.linspace(0, 1, 9)[1:-1, None]
            mids.append((1 - t) * v[i] + t * v[j])
    extra = np.vstack(mids) if mids else np.zeros((0, v.shape[1]))
    return normalize(np.vstack([v, w @ v, extra]))


def eps_neighborhood(sub: ConvexBody, amb: ConvexBody, eps: float, directions: int = 256,
                     samples: int = 200, rng: np.random.Generator | None = None) -> ConvexBody:
    """Hull of sampled points at Hilbert distance eps from ``sub`` inside ``amb``.

    ``sub`` must be strictly convex (an ellipsoid) or totally geodesic (a
    lower-dimensional polytope).
    """
    if eps <= 0:
        raise DegenerateConfig("eps must be positive")
    if sub.is_polytope and sub.full_dimensional:
        raise NotStrictlyConvexInput("a full-dimensional polytope has flat faces in the interior")
    rng = np.random.default_rng(0) if rng is None else rng
    base = _sample_body(sub, samples, rng)
    if np.any(depth(amb, base) <= 0):
        raise NotInAmbient("the inner body must lie in the interior of the ambient body")
    alpha, e = amb.chart, amb.frame
    dirs = normalize(rng.normal(size=(directions, amb.n)))
    dirs = np.vstack([dirs, np.eye(amb.n), -np.eye(amb.n)])
    p = base / (base @ alpha)[:, None]
    pp = np.repeat(p, dirs.shape[0], axis=0)
    dd = np.tile(dirs @ e, (p.shape[0], 1))
    lo, hi = chord_parameters(amb, pp, dd)
    a = -lo
    k = np.exp(eps)
    t = a * hi * (k - 1.0) / (hi + k * a)
    pts = normalize(pp + t[:, None] * dd)
    return ConvexBody.polytope(np.vstack([pts, base]), chart=alpha)


def strict_convexity_at(body: ConvexBody, x) -> BoundaryType:
    xv = _vec(x)
    if contains(body, xv) is not Containment.BOUNDARY:
        raise NotOnBoundary("point is not on the boundary")
    if not body.is_polytope:
        return BoundaryType.STRICT_C1
    if not body.full_dimensional:
        near = spherical_distance(body.vertices, xv).min() < 1e3 * tol().geo
        return BoundaryType.CORNER if near else BoundaryType.FLAT_FACE
    y = to_chart(xv, body.chart, body.frame)[0]
    eq = body.chart_equations
    active = np.abs(y @ eq[:, :-1].T + eq[:, -1]) <= 10 * tol().geo
    return BoundaryType.FLAT_FACE if int(active.sum()) == 1 else BoundaryType.CORNER


# ---------------------------------------------------------------- distances between bodies


def vertex_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two clouds of unit vectors (chordal metric)."""
    ta, tb = cKDTree(a), cKDTree(b)
    return float(max(tb.query(a)[0].max(), ta.query(b)[0].max()))


def support_function(body: ConvexBody, dirs: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    e = chart_frame(alpha)
    if body.is_polytope:
        return (to_chart(body.vertices, alpha, e) @ dirs.T).max(axis=0)
    b = body.with_chart(alpha)
    c, q = b._conic
    qi = np.linalg.inv(q)
    return dirs @ c + np.sqrt(np.einsum("ij,jk,ik->i", dirs, qi, dirs))


def hausdorff_distance(a: ConvexBody, b: ConvexBody, chart=None, directions: int = 4000,
                       rng: np.random.Generator | None = None) -> float:
    """Chart-coordinate Hausdorff distance, via sampled support functions
    (exact vertex distance when both are polytopes and no chart is given)."""
    if a.is_polytope and b.is_polytope and chart is None:
        return vertex_hausdorff(a.vertices, b.vertices)
    alpha = a.chart if chart is None else normalize(_vec(chart))
    rng = np.random.default_rng(0) if rng is None else rng
    dirs = normalize(np.vstack([rng.normal(size=(directions, a.n)), np.eye(a.n), -np.eye(a.n)]))
    return float(np.abs(support_function(a, dirs, alpha) - support_function(b, dirs, alpha)).max())


def polytope_from_halfspaces(covectors: np.ndarray, interior: np.ndarray) -> ConvexBody:
    """Polytope {x : f_i . x >= 0} through an independent half-space intersection."""
    alpha = normalize(interior)
    e = chart_frame(alpha)
    # f . (alpha + E^T y) >= 0  <=>  -(E f) . y - f . alpha <= 0
    f = np.atleast_2d(covectors)
    hs = np.hstack([-(f @ e.T), -(f @ alpha)[:, None]])
    hi = HalfspaceIntersection(hs, np.zeros(alpha.size - 1))
    pts = from_chart(hi.intersections, alpha, e)
    return ConvexBody.polytope(pts, chart=alpha)
