"""Geodesic flow on an ellipsoid and the stable/neutral/unstable line bundles along it."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .convex import Containment, ConvexBody, chord_parameters, contains, from_chart, hilbert_distances
from .errors import NotInterior, NotStrictlyConvex, RecenterFailure
from .holonomy import GroupSample
from .projective import Hyperplane, Subspace, _mat, _vec, normalize


@dataclass(frozen=True, eq=False)
class UnitTangent:
    """Base point in the interior and a unit direction in the body's affine chart."""

    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", normalize(np.asarray(self.base, dtype=float)))
        object.__setattr__(self, "direction", normalize(np.asarray(self.direction, dtype=float)))


@dataclass(frozen=True, eq=False)
class BundleFrame:
    v_plus: Subspace  # expanding line: backward endpoint
    v_minus: Subspace  # contracting line: forward endpoint
    v_zero: Subspace
    h_plus: Hyperplane  # tangent hyperplane at the forward endpoint
    h_minus: Hyperplane  # tangent hyperplane at the backward endpoint
    forward_endpoint: np.ndarray
    backward_endpoint: np.ndarray

    def direct_sum_residual(self) -> float:
        """Smallest singular value of the stacked bases (0 means the sum is not direct)."""
        stacked = np.vstack([self.v_plus.basis, self.v_zero.basis, self.v_minus.basis])
        return float(np.linalg.svd(stacked, compute_uv=False)[-1])


def _require_ellipsoid(body: ConvexBody):
    if body.is_polytope:
        raise NotStrictlyConvex("the flow needs a strictly convex body (an ellipsoid)")


def _chord(body: ConvexBody, u: UnitTangent):
    if contains(body, u.base) is not Containment.INTERIOR:
        raise NotInterior("tangent base point must be interior")
    p = u.base / (u.base @ body.chart)
    d = u.direction @ body.frame
    lo, hi = chord_parameters(body, p, d)
    return p, d, float(lo[0]), float(hi[0])


def geodesic_flow(body: ConvexBody, u: UnitTangent, t: float) -> UnitTangent:
    """Move the base point a Hilbert distance t along its chord (backwards for t < 0)."""
    _require_ellipsoid(body)
    p, d, t_o, t_s = _chord(body, u)
    a_plus, a_minus = p + t_s * d, p + t_o * d
    # p = alpha a_plus + beta a_minus with alpha + beta = 1
    alpha = -t_o / (t_s - t_o)
    beta = t_s / (t_s - t_o)
    q = np.exp(t / 2) * alpha * a_plus + np.exp(-t / 2) * beta * a_minus
    return UnitTangent(q, u.direction)


def bundle_frame(body: ConvexBody, u: UnitTangent) -> BundleFrame:
    _require_ellipsoid(body)
    p, d, t_o, t_s = _chord(body, u)
    fwd = normalize(p + t_s * d)
    bwd = normalize(p + t_o * d)
    m = body.quadric
    hp, hm = -m @ fwd, -m @ bwd
    zero = Subspace(np.linalg.svd(np.vstack([hp, hm]))[2][2:])
    return BundleFrame(Subspace(bwd[None]), Subspace(fwd[None]), zero, Hyperplane(hp), Hyperplane(hm), fwd, bwd)


def transform_tangent(g, body: ConvexBody, u: UnitTangent) -> tuple[ConvexBody, UnitTangent]:
    """Image of (body, u) under g; the direction is pushed forward through the chart."""
    m = _mat(g)
    image = body.transform(m)
    p = u.base / (u.base @ body.chart)
    x = m @ p
    xd = m @ (u.direction @ body.frame)
    a = image.chart
    e = image.frame
    h = a @ x
    dy = (e @ xd) * h - (e @ x) * (a @ xd)
    if h < 0:
        x = -x
    return image, UnitTangent(x, dy / h ** 2)


# ---------------------------------------------------------------- contraction audit


def recenter(body: ConvexBody, sample: GroupSample, x: np.ndarray, basepoint: np.ndarray,
             bound: float, max_steps: int = 200) -> tuple[np.ndarray, float]:
    """Greedy descent: repeatedly apply the ball element bringing x closest to the basepoint.

    Returns the accumulated matrix and the final Hilbert distance.
    """
    els = sample.elements
    total = np.eye(x.size)
    cur = normalize(x)
    dist = float(hilbert_distances(body, cur[None], basepoint)[0])
    for _ in range(max_steps):
        imgs = normalize(np.einsum("aij,j->ai", els, cur))
        imgs = np.where((imgs @ body.chart)[:, None] < 0, -imgs, imgs)
        d = hilbert_distances(body, imgs, basepoint)
        k = int(np.argmin(d))
        if d[k] >= dist - 1e-12:
            break
        total = els[k] @ total
        cur, dist = imgs[k], float(d[k])
    if dist > bound:
        raise RecenterFailure(f"recentered point is still at distance {dist:.3f} from the basepoint")
    return total, dist


@dataclass
class ContractionAudit:
    rows: list[tuple[int, float, str, float]]  # (u_index, t, space, log norm ratio)
    slopes: dict[str, list[float]]
    intercepts: dict[str, list[float]]
    k_min: float
    monotone_fraction: float
    recenter_max: float
    passed: bool = field(default=False)

    def summary(self) -> dict:
        return {
            "k_min": self.k_min,
            "passed": self.passed,
            "slopes": self.slopes,
            "intercepts": self.intercepts,
            "max_slope_minus": max(self.slopes["minus"]),
            "max_slope_plus": max(self.slopes["plus"]),
            "max_abs_slope_zero": max(abs(s) for s in self.slopes["zero"]),
            "monotone_fraction": self.monotone_fraction,
            "recenter_max_distance": self.recenter_max,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u_index", "t", "space", "log_norm"])
        for r in self.rows:
            w.writerow([r[0], f"{r[1]:g}", r[2], f"{r[3]:.12g}"])
        return buf.getvalue()


def contraction_audit(body: ConvexBody, sample: GroupSample, u_set: list[UnitTangent], times,
                      basepoint=None, k_min: float = 0.1, bound: float = 6.0) -> ContractionAudit:
    """Log-norm growth of the three bundles along flow lines, measured after recentering.

    ``times`` are in the hyperbolic normalization: the flow runs for Hilbert time 2t.
    The expanding line is audited along the backward flow.
    """
    _require_ellipsoid(body)
    base = body.interior_point() if basepoint is None else _vec(basepoint)
    times = np.asarray(times, dtype=float)
    rows = []
    slopes = {"minus": [], "zero": [], "plus": []}
    inter = {"minus": [], "zero": [], "plus": []}
    mono_ok = mono_all = 0
    worst = 0.0
    for ui, u in enumerate(u_set):
        fr = bundle_frame(body, u)
        vecs = {"minus": fr.forward_endpoint, "zero": fr.v_zero.basis[0], "plus": fr.backward_endpoint}
        for space, vec in vecs.items():
            sign = -1.0 if space == "plus" else 1.0
            logs = []
            for t in times:
                pt = geodesic_flow(body, u, sign * 2.0 * t).base
                gam, dist = recenter(body, sample, pt, base, bound)
                worst = max(worst, dist)
                logs.append(float(np.log(np.linalg.norm(gam @ vec))))
            logs = np.array(logs)
            if times.size and np.any(times == 0):
                logs = logs - logs[np.flatnonzero(times == 0)[0]]
            for t, val in zip(times, logs):
                rows.append((ui, float(t), space, float(val)))
            k, c = np.polyfit(times, logs, 1)
            slopes[space].append(float(k))
            inter[space].append(float(c))
            if space != "zero":
                sel = logs[times >= 1]
                mono_all += 1
                mono_ok += bool(np.all(np.diff(sel) <= 1e-9))
    audit = ContractionAudit(rows, slopes, inter, k_min, mono_ok / max(mono_all, 1), worst)
    audit.passed = max(slopes["minus"]) < -k_min and max(slopes["plus"]) < -k_min
    return audit


def random_tangents(body: ConvexBody, count: int, rng: np.random.Generator, at=None) -> list[UnitTangent]:
    base = body.interior_point() if at is None else _vec(at)
    return [UnitTangent(base, d) for d in normalize(rng.normal(size=(count, body.n)))]


def chart_point(body: ConvexBody, y) -> np.ndarray:
    return from_chart(np.asarray(y, dtype=float), body.chart, body.frame)[0]
