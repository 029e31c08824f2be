"""Tubes, limit sets, lens and quasi-lens constructions, and the end classifier."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls
from scipy.spatial import cKDTree

from .config import tol
from .convex import (
    ConvexBody,
    Containment,
    _qhull,
    chart_frame,
    contains,
    depth,
    distance_to_section,
    dual_body,
    find_chart,
    hausdorff_distance,
    polytope_from_halfspaces,
    to_chart,
    unique_index,
    vertex_hausdorff,
)
from .errors import (
    AtVertex,
    DegenerateHull,
    HullTouchesAntipode,
    NoProximalElements,
    NotBoundaryPreserving,
    NotProperlyConvex,
    OrbitEscape,
    ProjEndsError,
    UMECFailed,
    WrongBlockPattern,
)
from .holonomy import (
    GroupSample,
    Proximality,
    UMECReport,
    check_umec,
    check_weak_umec,
    eigen_profile,
    factor_decomposition,
    proximality_class,
    vertex_block_form,
)
from .projective import Subspace, _mat, _vec, householder_to_last, normalize, spherical_distance


# ---------------------------------------------------------------- tubes


@dataclass(frozen=True, eq=False)
class TubeDomain:
    """Closure of the union of great segments from v to -v through directions of ``base``.

    ``base`` lives in the link sphere, written in the coordinates of ``link_frame``
    (orthonormal columns spanning v^perp).
    """

    vertex: np.ndarray
    base: ConvexBody

    @property
    def n(self) -> int:
        return self.vertex.size - 1

    @property
    def link_frame(self) -> np.ndarray:
        return householder_to_last(self.vertex)[:, :-1]

    def link_coords(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_2d(x) @ self.link_frame

    def from_link(self, y: np.ndarray) -> np.ndarray:
        return np.atleast_2d(y) @ self.link_frame.T

    def boundary_residual(self, x: np.ndarray) -> np.ndarray:
        """Chart depth of the radial projection inside the base (0 on the tube boundary)."""
        return depth(self.base, self.link_coords(x))

    def contains(self, x) -> Containment:
        return contains(self.base, radial_projection(self, x) @ self.link_frame)


def radial_projection(T: TubeDomain, x) -> np.ndarray:
    """Unit direction orthogonal to v of the great segment from v through x."""
    xv = _vec(x)
    v = T.vertex
    if min(spherical_distance(xv, v), spherical_distance(xv, -v)) < tol().geo:
        raise AtVertex("radial projection is undefined at the tube vertices")
    return normalize(xv - (xv @ v) * v)


def cone_angle(points: np.ndarray, u: np.ndarray) -> float:
    """Spherical distance from u to the convex cone spanned by the rows of ``points``."""
    a = np.atleast_2d(points).T
    w, _ = nnls(a, u)
    proj = a @ w
    r = np.linalg.norm(proj)
    if r > 1e-14:
        return float(np.arccos(np.clip(r, -1.0, 1.0)))
    w2, _ = nnls(a, -u)
    r2 = np.linalg.norm(a @ w2)
    if r2 > 1e-14:
        return float(np.pi - np.arccos(np.clip(r2, -1.0, 1.0)))
    return float(np.pi / 2)


@dataclass
class DualTube:
    tube: TubeDomain
    dual_sample: GroupSample
    residual: float  # Hausdorff distance between R_v(B*) and the dual of the base


def _check_preserves(sample: GroupSample, h: np.ndarray, omega: ConvexBody):
    p = householder_to_last(h)
    for i in sample.nonidentity():
        try:
            bf = vertex_block_form(sample.elements[i], h, "affine")
        except ProjEndsError as exc:
            raise NotBoundaryPreserving(str(exc)) from exc
        u = (p @ sample.elements[i] @ p)[:-1, :-1]
        image = omega.transform(u)
        if omega.is_polytope:
            ok = vertex_hausdorff(image.vertices, omega.vertices) <= 1e-6
        else:
            ok = np.linalg.norm(normalize(image.quadric.ravel()) - normalize(omega.quadric.ravel())) <= 1e-6
        if not ok:
            raise NotBoundaryPreserving("a sample element moves the base body")
        del bf


def dual_tube(sample: GroupSample, omega: ConvexBody, hyperplane) -> DualTube:
    """Tube over the dual of ``omega`` at the point dual to ``hyperplane``.

    ``omega`` is a body in the hyperplane, in the coordinates of its link frame.
    The identity R_v(B*) = omega* is checked on a body B meeting the hyperplane
    exactly in ``omega``.
    """
    h = _vec(hyperplane)
    _check_preserves(sample, h, omega)
    base_dual = dual_body(omega)
    tube = TubeDomain(h, base_dual)
    p = householder_to_last(h)
    n = h.size - 1
    if omega.is_polytope:
        pts = np.hstack([omega.vertices, np.zeros((omega.vertices.shape[0], 1))])
        pts = np.vstack([pts, np.eye(n + 1)[-1]])
        b = ConvexBody.polytope(pts @ p.T)
        bd = dual_body(b)
        keep = spherical_distance(bd.vertices, h) > 1e-9
        proj = normalize((bd.vertices[keep] @ p)[:, :n])
        image = ConvexBody.polytope(proj, chart=base_dual.chart)
        res = vertex_hausdorff(image.vertices, base_dual.vertices)
    else:
        m = np.zeros((n + 1, n + 1))
        m[:n, :n] = omega.quadric
        m[n, n] = 1.0
        b = ConvexBody.from_quadric(p @ m @ p.T, p @ np.append(omega.chart, 0.0))
        nq = p.T @ dual_body(b).quadric @ p
        schur = nq[:n, :n] - np.outer(nq[:n, n], nq[n, :n]) / nq[n, n]
        image = ConvexBody.from_quadric(schur, base_dual.chart)
        res = hausdorff_distance(image, base_dual, chart=base_dual.chart)
    return DualTube(tube, sample.dual(), float(res))


# ---------------------------------------------------------------- limit sets and distanced hulls


@dataclass
class LimitSet:
    points: np.ndarray  # unit vectors on the tube boundary
    words: list[tuple[int, ...]]
    radius: int
    hyperplane: np.ndarray | None  # invariant hyperplane of a factorable sample


def _orient(y: np.ndarray, chart: np.ndarray | None) -> np.ndarray:
    if chart is None:
        return y
    return np.where((y @ chart)[:, None] < 0, -y, y)


def limit_set(sample: GroupSample, T: TubeDomain | None = None, v=None) -> LimitSet:
    """Attracting fixed points (off the vertices) of elements with a proximal linear block."""
    vv = T.vertex if T is not None else _vec(v)
    p = householder_to_last(vv)
    n = vv.size - 1
    pts, words = [], []
    for i in sample.nonidentity():
        bf = vertex_block_form(sample.elements[i], vv, "R")
        u = bf.linear_part * bf.vertex_eigenvalue ** (-1.0 / n)
        prof = eigen_profile(u)
        if proximality_class(prof) not in (Proximality.BIPROXIMAL, Proximality.PROXIMAL):
            continue
        w, vecs = np.linalg.eig(u)
        k = int(np.argmax(np.abs(w)))
        mu = w[k].real
        y = vecs[:, k].real
        lam = bf.vertex_eigenvalue
        if abs(mu - lam) <= 1e-9 * max(mu, lam):
            continue
        t = (bf.translation @ y) / (mu - lam)
        pts.append(normalize(p @ np.append(y, t)))
        words.append(sample.words[i])
    if not pts:
        raise NoProximalElements("no element has a proximal linear part")
    pts = np.array(pts)
    link = pts @ p[:, :-1]
    if T is not None:
        chart = T.base.chart
    else:
        w, vecs = np.linalg.eigh(link.T @ link)
        chart = vecs[:, -1]
        if np.sum(link @ chart) < 0:
            chart = -chart
    sign = np.where(link @ chart < 0, -1.0, 1.0)
    pts = pts * sign[:, None]
    keep_idx = _dedup_index(pts)
    hyper = None
    dec = factor_decomposition(sample, vv)
    if dec.l0 > 1:
        hyper = dec.hyperplane
    return LimitSet(pts[keep_idx], [words[i] for i in keep_idx], sample.radius, hyper)


def _dedup_index(pts: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    return unique_index(pts, atol)


@dataclass
class DistancedHull:
    body: ConvexBody
    cloud: np.ndarray
    delta: float
    radius: int
    hyperplane: np.ndarray | None
    in_hyperplane: bool | None
    umec: UMECReport

    def to_dict(self) -> dict:
        return {"delta": self.delta, "ball_radius": self.radius, "vertices": int(self.body.vertices.shape[0]),
                "in_invariant_hyperplane": self.in_hyperplane}


def distanced_hull(sample: GroupSample, T: TubeDomain) -> DistancedHull:
    rep = check_umec(sample, T.vertex, "R")
    if not rep.passed or rep.vacuous:
        raise UMECFailed("the sample does not satisfy the middle-eigenvalue condition")
    ls = limit_set(sample, T)
    if ls.points.shape[0] < 2:
        raise DegenerateHull("limit set has fewer than two points")
    alpha, margin = find_chart(ls.points)
    if margin <= 0:
        raise NotProperlyConvex("limit set is not in an open hemisphere")
    body = ConvexBody.polytope(ls.points, chart=alpha)
    v = T.vertex
    delta = min(cone_angle(body.vertices, v), cone_angle(body.vertices, -v))
    inside = None
    if ls.hyperplane is not None:
        inside = bool(np.abs(body.vertices @ ls.hyperplane).max() <= 1e-8)
    return DistancedHull(body, ls.points, delta, sample.radius, ls.hyperplane, inside, rep)


# ---------------------------------------------------------------- lens cones


@dataclass
class LensAudit:
    a_boundary: bool
    a_residual: float  # worst distance of a tube-boundary hull vertex to K
    b_two_components: bool
    near_facets: int
    far_facets: int
    vertical_facets: int
    c_evaluated: bool
    c_within: bool | None
    eps: float | None
    c_excess: float | None
    rays: int
    ray_failures: int
    cap_hausdorff: float | None
    orbit_min_residual: float
    seeds_heuristic: bool

    @property
    def passed(self) -> bool:
        c_ok = self.c_within if self.c_evaluated else True
        return self.a_boundary and self.b_two_components and bool(c_ok) and self.ray_failures == 0

    def to_dict(self) -> dict:
        return {k: (float(v) if isinstance(v, np.floating) else v) for k, v in self.__dict__.items()} | {
            "passed": self.passed}


@dataclass
class LensCone:
    lens: ConvexBody
    cone: ConvexBody
    audit: LensAudit
    orbit: np.ndarray
    far_vertices: np.ndarray
    dual_route_residual: float | None = None


def _ruling_point(v: np.ndarray, d: np.ndarray, theta: float) -> np.ndarray:
    return np.cos(theta) * v + np.sin(theta) * d


def _section_covector(ambient: ConvexBody, K: ConvexBody) -> np.ndarray:
    basis = K.vertices
    _, s, vt = np.linalg.svd(basis)
    return vt[-1]


def default_seeds(T: TubeDomain, K: ConvexBody, ambient: ConvexBody | None, count: int = 4,
                  distance: float = 0.1, rng: np.random.Generator | None = None) -> np.ndarray:
    """Seeds on both sides of K, pushed from interior points of K along rulings.

    With an ambient ellipsoid the push is to Hilbert distance ``distance`` from
    the section containing K; otherwise it is a fixed angle.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    v = T.vertex
    kv = K.vertices
    out = []
    for j in range(count):
        w = rng.dirichlet(np.full(kv.shape[0], 1.0))
        base = normalize(w @ kv)
        d = radial_projection(T, base)
        theta0 = float(np.arctan2(base @ d, base @ v))
        side = 1.0 if j % 2 == 0 else -1.0
        if ambient is None:
            out.append(_ruling_point(v, d, theta0 + side * distance))
            continue
        h = _section_covector(ambient, K)
        lo, hi = theta0, theta0 + side * np.pi / 2
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            x = _ruling_point(v, d, mid)
            if depth(ambient, x[None])[0] <= 0:
                hi = mid
                continue
            if distance_to_section(ambient, x, h)[0] < distance:
                lo = mid
            else:
                hi = mid
        out.append(_ruling_point(v, d, 0.5 * (lo + hi)))
    return np.array(out)


def _theta_interval(f: np.ndarray, v: np.ndarray, d: np.ndarray) -> tuple[float, float, int, int]:
    """Intersect {theta in [0, pi] : f_i . (cos theta v + sin theta d) >= 0} over all facets.

    Returns (lo, hi, entering facet, exiting facet); facet -1 means the bound is 0 or pi.
    """
    a, b = f @ v, f @ d
    phi = np.arctan2(b, a)
    # allowed arc is |theta - phi| <= pi/2; take the representative closest to pi/2
    phi = phi + 2 * np.pi * np.round((np.pi / 2 - phi) / (2 * np.pi))
    start, stop = phi - np.pi / 2, phi + np.pi / 2
    i_lo, i_hi = int(np.argmax(start)), int(np.argmin(stop))
    lo, hi = float(start[i_lo]), float(stop[i_hi])
    if lo <= 0:
        lo, i_lo = 0.0, -1
    if hi >= np.pi:
        hi, i_hi = np.pi, -1
    return lo, hi, i_lo, i_hi


def lens_cone_from_orbit(sample: GroupSample, T: TubeDomain, K: ConvexBody, seeds=None,
                         ambient: ConvexBody | None = None, rays: int = 1000,
                         saturate_radius: int = 1, rng: np.random.Generator | None = None) -> LensCone:
    """Hull of the orbit of the seeds together with K, with the lens audits.

    K is saturated by a small ball (its images g.K are added) so that the hull
    meets the tube boundary only in K.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    v = T.vertex
    heuristic = seeds is None
    if seeds is None:
        seeds = default_seeds(T, K, ambient, rng=rng)
    seeds = normalize(np.atleast_2d(np.asarray(seeds, dtype=float)))
    orbit = normalize(np.einsum("aij,sj->asi", sample.elements, seeds).reshape(-1, v.size))
    near_v = np.minimum(spherical_distance(orbit, v), spherical_distance(orbit, -v))
    if near_v.min() < 1e-6:
        raise OrbitEscape("orbit accumulates at a tube vertex")
    small = sample.elements[sample.lengths <= saturate_radius]
    kpts = normalize(np.einsum("aij,kj->aki", small, K.vertices).reshape(-1, v.size))
    kpts = kpts[_dedup_index(kpts, 1e-10)]
    pts = np.vstack([kpts, orbit])
    is_k = np.zeros(pts.shape[0], dtype=bool)
    is_k[: kpts.shape[0]] = True

    alpha, margin = find_chart(np.vstack([pts, v[None]]))
    if margin <= 0:
        raise NotProperlyConvex("orbit hull is not properly convex")
    e = chart_frame(alpha)
    y = to_chart(pts, alpha, e)
    hull = _qhull(y)
    eqs = hull.equations
    fcov = normalize(-(eqs[:, -1:] * alpha[None, :] + eqs[:, :-1] @ e))
    fv = fcov @ v
    vert_tol = 1e-9
    near = fv < -vert_tol
    far = fv > vert_tol
    vertical = ~(near | far)

    # (a) tube boundary contact only at K
    res = T.boundary_residual(pts)
    orbit_res = float(res[~is_k].min())
    hv = np.unique(hull.simplices)
    on_bd = hv[np.abs(res[hv]) <= 1e-12]
    a_res = 0.0
    for i in on_bd:
        if not is_k[i]:
            a_res = max(a_res, float(np.min(np.linalg.norm(kpts - pts[i], axis=1))))
    a_ok = orbit_res > 1e-12 and a_res <= 1e-6

    # (b) two components: near and far facets meet only along K
    b_ok = bool(near.any() and far.any())
    b_ok &= bool(np.any(~is_k[hull.simplices[near]])) and bool(np.any(~is_k[hull.simplices[far]]))
    if b_ok:
        for fi in np.flatnonzero(vertical):
            if not is_k[hull.simplices[fi]].all():
                b_ok = False
                break
    if b_ok:
        for fi in np.flatnonzero(near):
            for nb in hull.neighbors[fi]:
                if far[nb]:
                    ridge = np.intersect1d(hull.simplices[fi], hull.simplices[nb])
                    if not is_k[ridge].all():
                        b_ok = False
                        break
            if not b_ok:
                break

    # (c) eps-neighborhood containment
    c_eval = ambient is not None
    c_ok = eps = excess = None
    if c_eval:
        hcov = _section_covector(ambient, K)
        eps = float(distance_to_section(ambient, seeds, hcov).max())
        d_orbit = distance_to_section(ambient, orbit, hcov)
        w = rng.dirichlet(np.full(8, 1.0), size=4000)
        picks = rng.integers(0, orbit.shape[0], size=(4000, 8))
        mix = normalize(np.einsum("sk,skj->sj", w, orbit[picks]))
        d_mix = distance_to_section(ambient, mix, hcov)
        excess = float(max(d_orbit.max(), d_mix.max()) - eps)
        c_ok = excess <= 1e-6

    # ray test and cap distance
    far_idx = np.unique(hull.simplices[far])
    kv_link = T.link_coords(K.vertices)
    wts = rng.dirichlet(np.full(kv_link.shape[0], 1.0), size=rays)
    dirs = normalize((0.98 * wts + 0.02 / kv_link.shape[0]) @ kv_link)
    dirs_full = T.from_link(dirs)
    failures = 0
    exits = np.empty(rays)
    for r_i in range(rays):
        lo, hi, lo_i, hi_i = _theta_interval(fcov, v, dirs_full[r_i])
        exits[r_i] = hi
        if not (lo < hi and hi_i >= 0 and far[hi_i] and (lo_i < 0 or not far[lo_i])):
            failures += 1
    cap = None
    if c_eval:
        hcov = _section_covector(ambient, K)
        errs = []
        for r_i in range(0, rays, 10):
            d = dirs_full[r_i]
            lo_t = float(np.arctan2(-(hcov @ v), hcov @ d)) % np.pi
            hi_t = np.pi
            for _ in range(100):
                mid = 0.5 * (lo_t + hi_t)
                x = _ruling_point(v, d, mid)
                if depth(ambient, x[None])[0] <= 0 or distance_to_section(ambient, x, hcov)[0] >= eps:
                    hi_t = mid
                else:
                    lo_t = mid
            errs.append(abs(exits[r_i] - 0.5 * (lo_t + hi_t)))
        cap = float(max(errs))

    lens = ConvexBody.polytope(pts[np.unique(hull.simplices)], chart=alpha, prune=False)
    far_pts = pts[far_idx]
    cone = ConvexBody.polytope(np.vstack([v[None], far_pts]), chart=alpha)
    audit = LensAudit(a_ok, a_res, b_ok, int(near.sum()), int(far.sum()), int(vertical.sum()),
                      c_eval, c_ok, eps, excess, rays, failures, cap, orbit_res, heuristic)
    result = LensCone(lens, cone, audit, orbit, far_pts)
    result.dual_route_residual = cone_duality_residual(result, v)
    return result


def cone_duality_residual(result: LensCone, v: np.ndarray) -> float:
    """Dual of the cone by facet enumeration versus a half-space intersection."""
    primal = dual_body(result.cone)
    cov = np.vstack([result.lens.vertices, v[None]])
    route = polytope_from_halfspaces(cov, primal.chart)
    return body_discrepancy(primal, route)


def body_discrepancy(a: ConvexBody, b: ConvexBody) -> float:
    """Largest facet violation of either body's vertices in the other, in unit-covector units."""
    def worst(pts, cov):
        out = np.inf
        for k in range(0, pts.shape[0], 2048):
            out = min(out, float((pts[k:k + 2048] @ cov.T).min()))
        return -out

    return float(max(worst(a.vertices, b.facet_covectors), worst(b.vertices, a.facet_covectors), 0.0))


# ---------------------------------------------------------------- quasi-lens data


@dataclass
class TranslationCocycle:
    values: np.ndarray  # v(g) for each element of the sample
    generator_values: list[float]
    basis: np.ndarray  # columns [D-block, w, v]
    additivity_residual: float
    conjugation_residual: float

    def to_dict(self) -> dict:
        return {"generator_values": self.generator_values,
                "additivity_residual": self.additivity_residual,
                "conjugation_residual": self.conjugation_residual}


def _adapted_basis(v: np.ndarray, circle: Subspace, d_block: Subspace | None) -> np.ndarray:
    cb = circle.basis
    w = cb[0] - (cb[0] @ v) * v
    if np.linalg.norm(w) < 1e-9:
        w = cb[1] - (cb[1] @ v) * v
    w = normalize(w)
    d = circle.complement().basis if d_block is None else d_block.basis
    return np.column_stack([d.T, w, v])


def _cocycle_value(g: np.ndarray, q: np.ndarray, qi: np.ndarray) -> tuple[float, float]:
    gp = qi @ g @ q
    m = gp.shape[0]
    lam = gp[-1, -1]
    scale = max(1.0, float(np.abs(gp).max()))
    pattern = gp.copy()
    pattern[:m - 2, :m - 2] = 0.0
    pattern[-1, -1] = pattern[-2, -2] = pattern[-1, -2] = 0.0
    bad = float(np.abs(pattern).max())
    bad = max(bad, abs(gp[-2, -2] - lam))
    if lam <= 0:
        bad = np.inf
    return float(gp[-1, -2] / lam), bad / scale


def translation_cocycle(sample: GroupSample, v, circle: Subspace, d_block: Subspace | None = None,
                        orient=None) -> TranslationCocycle:
    """v(g) read off the adapted block form.

    The sign depends on the orientation of w in the circle. ``orient`` fixes it:
    a point (vector) is put on the positive side of w, a matrix gets v >= 0.
    """
    vv = _vec(v)
    q = _adapted_basis(vv, circle, d_block)
    if orient is not None:
        o = np.asarray(_mat(orient), dtype=float)
        if o.ndim == 2:
            val, _ = _cocycle_value(o, q, np.linalg.inv(q))
        else:
            val = float(np.linalg.solve(q, o)[-2])
        if val < 0:
            q[:, -2] *= -1
    qi = np.linalg.inv(q)
    vals = np.empty(len(sample))
    for i, g in enumerate(sample.elements):
        val, bad = _cocycle_value(g, q, qi)
        if bad > tol().mat:
            raise WrongBlockPattern(f"element {sample.words[i]} breaks the block pattern ({bad:.2e})")
        vals[i] = val
    gens = [_cocycle_value(g.mat, q, qi)[0] for g in sample.generators]
    letters = [_cocycle_value(g.mat, q, qi)[0] for g in sample.letters]
    add = 0.0
    for k, s in enumerate(sample.letters):
        prod = np.einsum("aij,jk->aik", sample.elements, s.mat)
        hits = sample.lookup(prod)
        ok = hits >= 0
        if ok.any():
            add = max(add, float(np.abs(vals[hits[ok]] - vals[ok] - letters[k]).max()))
    conj = 0.0
    idx = np.arange(min(len(sample), 60))
    for i in idx:
        h = sample.elements[i]
        hi = np.linalg.inv(h)
        for j in idx[::7]:
            cv, _ = _cocycle_value(h @ sample.elements[j] @ hi, q, qi)
            conj = max(conj, abs(cv - vals[j]))
    return TranslationCocycle(vals, gens, q, add, conj)


@dataclass
class PositiveTranslation:
    passed: bool
    c1: float | None
    vacuous: bool
    qualifying: int
    failures: list[tuple[int, ...]]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "c1": self.c1, "vacuous": self.vacuous,
                "qualifying": self.qualifying, "failures": [list(w) for w in self.failures]}


def positive_translation_check(sample: GroupSample, coc: TranslationCocycle, d_block=None) -> PositiveTranslation:
    q = coc.basis
    qi = np.linalg.inv(q)
    m = q.shape[0]
    ratios, fails = [], []
    for i, g in enumerate(sample.elements):
        gp = qi @ g @ q
        lam_v = gp[-1, -1]
        lam_d = float(np.max(np.abs(np.linalg.eigvals(gp[:m - 2, :m - 2])))) if m > 2 else 0.0
        if lam_d <= 0 or np.log(lam_v / lam_d) <= tol().gap:
            continue
        val = coc.values[i]
        if val <= tol().coc:
            fails.append(sample.words[i])
            continue
        ratios.append(val / np.log(lam_v / lam_d))
    count = len(ratios) + len(fails)
    if count == 0:
        return PositiveTranslation(True, None, True, 0, [])
    c1 = float(min(ratios)) if ratios and not fails else None
    return PositiveTranslation(not fails and c1 is not None and c1 > 0, c1, False, count, fails)


@dataclass
class QuasiLensHull:
    hull: ConvexBody
    antipode_distance: float
    margin: float
    orbit_size: int
    limits: np.ndarray

    def to_dict(self) -> dict:
        return {"antipode_distance": self.antipode_distance, "chart_margin": self.margin,
                "orbit_size": self.orbit_size, "vertices": int(self.hull.vertices.shape[0])}


def _limit_point(h: np.ndarray, z: np.ndarray, squarings: int = 60) -> np.ndarray:
    m = h / np.linalg.norm(h)
    for _ in range(squarings):
        m = m @ m
        m = m / np.linalg.norm(m)
    x = m @ z
    if np.linalg.norm(x) < 1e-12:
        x = m[:, int(np.argmax(np.linalg.norm(m, axis=0)))]
    return normalize(x)


def quasi_lens_construct(G_sample: GroupSample | None, zeta, seed, v, powers: int = 8,
                         g_radius: int = 4) -> QuasiLensHull:
    """Hull of the orbit of ``seed`` under zeta^k g, plus the attracting limits of a few elements."""
    zm = _mat(zeta)
    z = _vec(seed)
    vv = _vec(v)
    size = zm.shape[0]
    if G_sample is None or len(G_sample.generators) == 0:
        g_els = np.eye(size)[None]
        g_gens = []
    else:
        g_els = G_sample.elements[G_sample.lengths <= g_radius]
        g_gens = [g.mat for g in G_sample.letters]
    zpows = [np.linalg.matrix_power(zm, k) if k >= 0 else np.linalg.matrix_power(np.linalg.inv(zm), -k)
             for k in range(-powers, powers + 1)]
    orbit = normalize(np.einsum("kij,ajl,l->kai", np.array(zpows), g_els, z).reshape(-1, size))
    zi = np.linalg.inv(zm)
    hs = [zm, zi] + g_gens + [zm @ g for g in g_gens] + [zi @ g for g in g_gens]
    limits = np.array([_limit_point(h, z) for h in hs])
    pts = np.vstack([orbit, limits])
    alpha, margin = find_chart(pts)
    if margin <= tol().geo:
        raise NotProperlyConvex("orbit hull is not properly convex")
    hull = ConvexBody.polytope(pts, chart=alpha)
    r = cone_angle(hull.vertices, -vv)
    if r < tol().geo:
        raise HullTouchesAntipode("orbit hull reaches the antipode of the vertex")
    return QuasiLensHull(hull, r, margin, orbit.shape[0], limits)


def detect_quasi_lens(sample: GroupSample, v) -> tuple[int, Subspace, Subspace] | None:
    """Shortest element whose vertex eigenvalue is top with multiplicity >= 2, with its circle and D-block."""
    vv = _vec(v)
    order = np.argsort(sample.lengths, kind="stable")
    for i in order:
        if sample.lengths[i] == 0:
            continue
        g = sample.elements[i]
        prof = eigen_profile(g)
        if prof.single_cluster:
            continue
        lam = vertex_block_form(g, vv, "R").vertex_eigenvalue
        if abs(np.log(lam) - prof.log_norms[0]) > 1e-6 or prof.top_multiplicity < 2:
            continue
        a = g - lam * np.eye(g.shape[0])
        a2 = a @ a
        u, s, vt = np.linalg.svd(a2)
        rank = int(np.sum(s > 1e-8 * max(1.0, s[0])))
        circle = Subspace(vt[rank:])
        if circle.dim != 2 or not circle.contains(vv, 1e-6):
            continue
        d_block = Subspace(u[:, :rank].T)
        return int(i), circle, d_block
    return None


# ---------------------------------------------------------------- asymptotic hyperplanes


@dataclass
class AsymptoticHyperplanes:
    boundary_points: np.ndarray  # points of the boundary of Omega (ambient coordinates)
    hyperplanes: np.ndarray  # covectors, one per boundary point
    transversality: float  # smallest angle between a hyperplane covector and +-phi
    uniqueness_spread: float
    umec: UMECReport


def asymptotic_hyperplanes(sample: GroupSample, omega: ConvexBody, hyperplane) -> AsymptoticHyperplanes:
    """Supporting hyperplanes at the ideal boundary from the limit set of the dual tube action."""
    phi = _vec(hyperplane)
    dual = sample.dual()
    rep = check_umec(dual, phi, "R")
    if not rep.passed or rep.vacuous:
        raise UMECFailed("dual action is not distanced")
    tube = TubeDomain(phi, dual_body(omega))
    ls = limit_set(dual, tube)
    psi = ls.points
    frame = tube.link_frame
    xi = normalize(psi @ frame)
    eta = psi @ phi
    if omega.is_polytope:
        idx = np.argmin(xi @ omega.vertices.T, axis=1)
        contact = omega.vertices[idx]
    else:
        contact = normalize(np.linalg.solve(omega.quadric, xi.T).T)
        contact = np.where((contact @ omega.chart)[:, None] < 0, -contact, contact)
    points = contact @ frame.T
    trans = float(np.minimum(spherical_distance(psi, phi), spherical_distance(psi, -phi)).min())
    spread = 0.0
    tree = cKDTree(xi)
    for i, neigh in enumerate(tree.query_ball_point(xi, 1e-7)):
        spread = max(spread, float(np.abs(eta[neigh] - eta[i]).max()))
    return AsymptoticHyperplanes(points, psi, trans, spread, rep)


# ---------------------------------------------------------------- classification


class Verdict(enum.Enum):
    HOROSPHERICAL = "Horospherical"
    LENS = "Lens"
    GENERALIZED_LENS = "GeneralizedLens"
    TOTALLY_GEODESIC = "TotallyGeodesic"
    QUASI_LENS = "QuasiLens"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class EndData:
    kind_hint: str  # "R" or "T"
    vertex: np.ndarray  # vertex, or covector of the ideal hyperplane
    sample: GroupSample
    verdict: Verdict | None = None
    evidence: dict = field(default_factory=dict)
    caveats: list[str] = field(default_factory=list)

    def report(self) -> dict:
        um = self.evidence.get("umec", {})
        return {
            "verdict": self.verdict.value if self.verdict else None,
            "ball_radius": self.sample.radius,
            "best_C": um.get("best_C"),
            "delta": self.evidence.get("delta"),
            "violations": um.get("violations", []),
            "caveats": list(self.caveats),
            "evidence": self.evidence,
        }


def _all_norms_one(sample: GroupSample) -> bool:
    for g in sample.elements[sample.nonidentity()]:
        prof = eigen_profile(g)
        if np.abs(prof.log_norms).max() > tol().eig:
            return False
    return True


def classify_end(data: EndData) -> EndData:
    s = data.sample
    v = normalize(data.vertex)
    ev = {"tests": []}
    cav: list[str] = []
    out = EndData(data.kind_hint, v, s, None, ev, cav)
    if len(s.nonidentity()) == 0:
        out.verdict = Verdict.INCONCLUSIVE
        cav.append("empty sample")
        return out
    ev["tests"].append("eigenvalue norms")
    if _all_norms_one(s):
        out.verdict = Verdict.HOROSPHERICAL
        cav.append("all eigenvalue norms are 1; non-horospherical ends with this property are not distinguished")
        return out
    kind = "T" if data.kind_hint == "T" else "R"
    ev["tests"].append("uniform middle eigenvalue condition")
    rep = check_umec(s, v, kind)
    ev["umec"] = rep.to_dict()
    rs = s.dual() if kind == "T" else s
    dec = factor_decomposition(rs, v)
    ev["factors"] = dec.l0
    if rep.passed and not rep.vacuous:
        if kind == "R":
            out.verdict = Verdict.LENS
            if rep.constant_vertex:
                ev["route"] = "vertex eigenvalue identically 1"
        else:
            out.verdict = Verdict.TOTALLY_GEODESIC
        try:
            ls = limit_set(rs, v=v)
            if ls.points.shape[0] >= 2:
                ev["delta"] = min(cone_angle(ls.points, v), cone_angle(ls.points, -v))
        except ProjEndsError:
            pass
        if dec.l0 > 1:
            ev["totally_geodesic_factorable"] = True
            cav.append(f"sample splits into {dec.l0} factors; the end is totally geodesic")
        cav.append(f"verified on the word ball of radius {s.radius} only")
        return out
    if rep.constant_vertex and not rep.violations:
        out.verdict = Verdict.GENERALIZED_LENS
        cav.append("vertex eigenvalue is identically 1 but the ratio bound was not verified")
        return out
    ev["tests"].append("quasi-lens detection")
    found = detect_quasi_lens(rs, v)
    if found is not None:
        zi, circle, d_block = found
        weak = check_weak_umec(rs, v)
        ev["weak_umec"] = weak.to_dict()
        try:
            coc = translation_cocycle(rs, v, circle, d_block, orient=rs.elements[zi])
            pos = positive_translation_check(rs, coc, d_block)
            ev["cocycle"] = coc.to_dict()
            ev["positive_translation"] = pos.to_dict()
            if weak.passed and pos.passed and not pos.vacuous:
                out.verdict = Verdict.QUASI_LENS
                ev["zeta_word"] = list(rs.words[zi])
                cav.append(f"verified on the word ball of radius {s.radius} only")
                return out
        except ProjEndsError as exc:
            ev["cocycle_error"] = str(exc)
    out.verdict = Verdict.INCONCLUSIVE
    return out
