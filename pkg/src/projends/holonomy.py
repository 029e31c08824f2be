"""Eigenvalue analysis of end holonomy groups.

Eigenvalue moduli are clustered before any comparison: a cluster of k
numerically equal moduli is accepted up to the k-th root of the backward
error, which is how far a k x k Jordan block can split under rounding.
Every modulus in a cluster is replaced by the cluster's geometric mean, so a
unipotent matrix reports norms that are exactly 1.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.spatial import cKDTree

from .config import tol
from .errors import (
    BallExplosion,
    EigenFailure,
    NotFixed,
    NotInBall,
    NotProximal,
    NotSemiproximal,
    ZeroGap,
)
from .projective import ProjMap, Subspace, _mat, _vec, householder_to_last, sign_normalize


class Proximality(enum.Enum):
    BIPROXIMAL = "Biproximal"
    PROXIMAL = "Proximal"
    BISEMIPROXIMAL = "BiSemiproximal"
    SEMIPROXIMAL = "Semiproximal"
    NONE = "None"

    @property
    def semiproximal(self) -> bool:
        return self is not Proximality.NONE


# ---------------------------------------------------------------- spectra


@dataclass(frozen=True)
class EigenProfile:
    norms: np.ndarray  # descending, clustered
    eigenvalues: np.ndarray  # raw eigenvalues, ordered like ``norms``
    top_real_positive: bool
    bottom_real_positive: bool
    top_multiplicity: int
    bottom_multiplicity: int
    clusters: tuple[tuple[int, int], ...]  # [start, stop) ranges into ``norms``

    @property
    def log_norms(self) -> np.ndarray:
        return np.log(self.norms)

    @property
    def size(self) -> int:
        return self.norms.size

    @property
    def single_cluster(self) -> bool:
        return len(self.clusters) == 1

    def multiplicity_of(self, value: float) -> int:
        """Number of norms in the cluster matching ``value`` (0 if none)."""
        lv = np.log(value)
        logs = self.log_norms
        for a, b in self.clusters:
            if abs(logs[a] - lv) <= _cluster_width(self._eta, b - a + 1):
                return b - a
        return 0

    _eta: float = 0.0


def _cluster_width(eta: float, k: int) -> float:
    return max(tol().gap, 4.0 * eta ** (1.0 / k))


def _backward_error(m: np.ndarray) -> float:
    size = m.shape[0]
    try:
        cond = np.linalg.norm(m) * np.linalg.norm(np.linalg.inv(m))
    except np.linalg.LinAlgError:
        cond = np.inf
    return float(np.finfo(float).eps * cond * size)


def _real_positive(values: np.ndarray, width: float) -> bool:
    mod = np.abs(values)
    return bool(np.all(values.real > 0) and np.all(np.abs(values.imag) <= max(tol().eig, width) * mod))


def eigen_profile(g) -> EigenProfile:
    m = _mat(g)
    try:
        ev = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    if not np.all(np.isfinite(ev)) or np.any(ev == 0):
        raise EigenFailure("eigenvalues are not finite and nonzero")
    eta = _backward_error(m)
    logs = np.log(np.abs(ev))
    order = np.argsort(-logs, kind="stable")
    logs, ev = logs[order], ev[order]
    clusters = []
    start = 0
    size = logs.size
    while start < size:
        # largest cluster starting here whose spread fits its own size
        stop = size
        while stop > start + 1 and logs[start] - logs[stop - 1] > _cluster_width(eta, stop - start):
            stop -= 1
        clusters.append((start, stop))
        start = stop
    clog = logs.copy()
    for a, b in clusters:
        clog[a:b] = logs[a:b].mean()
    (ta, tb), (ba, bb) = clusters[0], clusters[-1]
    prof = EigenProfile(
        norms=np.exp(clog),
        eigenvalues=ev,
        top_real_positive=_real_positive(ev[ta:tb], _cluster_width(eta, tb - ta)),
        bottom_real_positive=_real_positive(ev[ba:bb], _cluster_width(eta, bb - ba)),
        top_multiplicity=tb - ta,
        bottom_multiplicity=bb - ba,
        clusters=tuple(clusters),
    )
    object.__setattr__(prof, "_eta", eta)
    return prof


def proximality_class(g) -> Proximality:
    p = g if isinstance(g, EigenProfile) else eigen_profile(g)
    if p.single_cluster:
        return Proximality.NONE
    top_prox = p.top_real_positive and p.top_multiplicity == 1
    bot_prox = p.bottom_real_positive and p.bottom_multiplicity == 1
    if top_prox and bot_prox:
        return Proximality.BIPROXIMAL
    if p.top_real_positive and p.bottom_real_positive:
        return Proximality.BISEMIPROXIMAL
    if top_prox:
        return Proximality.PROXIMAL
    if p.top_real_positive:
        return Proximality.SEMIPROXIMAL
    return Proximality.NONE


def _leng_profile(p: EigenProfile) -> float:
    return float(np.log(p.norms[0]) - np.log(p.norms[-1]))


def leng(g) -> float:
    """log(lambda_1 / lambda_min), the translation length of a semiproximal element."""
    p = eigen_profile(g)
    if not proximality_class(p).semiproximal:
        raise NotProximal("translation length needs a (semi)proximal element")
    return _leng_profile(p)


def alpha_beta(g) -> tuple[float, float]:
    p = eigen_profile(g)
    if p.size < 3:
        raise NotProximal("needs a block of size at least 3")
    if proximality_class(p) is not Proximality.BIPROXIMAL:
        raise NotProximal("alpha/beta need a biproximal element")
    lg = p.log_norms
    if lg[0] - lg[1] <= tol().eig:
        raise ZeroGap("lambda_1 and lambda_2 coincide")
    span = lg[0] - lg[-1]
    return float(span / (lg[0] - lg[-2])), float(span / (lg[0] - lg[1]))


@dataclass(frozen=True)
class BoundsReport:
    n: int
    leng: float
    log_top: float
    lower_margin: float  # log_top - leng / n
    upper_margin: float  # (n - 1) leng / n - log_top
    passed: bool


def eigen_length_bounds_check(g) -> BoundsReport:
    """leng/n <= log lambda_1 <= (n-1) leng / n for the unimodular rescaling of g."""
    p = eigen_profile(g)
    if not p.top_real_positive or p.single_cluster:
        raise NotSemiproximal("top eigenvalue is not real positive")
    lg = p.log_norms - p.log_norms.mean()
    n = lg.size
    length = float(lg[0] - lg[-1])
    lo = float(lg[0] - length / n)
    hi = float((n - 1) * length / n - lg[0])
    slack = 1e-12 * max(1.0, length)
    return BoundsReport(n, length, float(lg[0]), lo, hi, lo >= -slack and hi >= -slack)


def refined_lower_bound(g, beta_sup: float) -> tuple[float, float]:
    """(bound, log lambda_1) for the beta-refined lower estimate on a unimodular block."""
    p = eigen_profile(g)
    lg = p.log_norms - p.log_norms.mean()
    n = lg.size
    length = lg[0] - lg[-1]
    return float((1.0 + (n - 2) / beta_sup) * length / n), float(lg[0])


# ---------------------------------------------------------------- block form at a vertex


@dataclass(frozen=True)
class VertexBlockForm:
    linear_part: np.ndarray  # h-hat, |det| = 1
    translation: np.ndarray  # b_g
    vertex_eigenvalue: float  # lambda_v
    frame: np.ndarray  # orthogonal P with P e_{n+1} = v
    kind: str

    @property
    def n(self) -> int:
        return self.linear_part.shape[0]

    def reassemble(self) -> np.ndarray:
        n = self.n
        lam = self.vertex_eigenvalue
        u = self.linear_part * lam ** (-1.0 / n)
        g = np.zeros((n + 1, n + 1))
        g[:n, :n] = u
        g[n, n] = lam
        if self.kind == "R":
            g[n, :n] = self.translation
        else:
            g[:n, n] = self.translation
        return self.frame @ g @ self.frame.T


def vertex_block_form(g, v, kind: str = "R") -> VertexBlockForm:
    """Conjugate v to e_{n+1} and split g into (h-hat, b_g, lambda_v).

    kind "R": g fixes the point v. kind "affine": g preserves the hyperplane
    with covector v.
    """
    m = _mat(g)
    vv = _vec(v)
    p = householder_to_last(vv)
    gp = p @ m @ p
    n = m.shape[0] - 1
    scale = max(1.0, float(np.abs(gp).max()))
    if kind == "R":
        off = gp[:n, n]
        trans = gp[n, :n].copy()
    elif kind in ("affine", "T"):
        off = gp[n, :n]
        trans = gp[:n, n].copy()
        kind = "affine"
    else:
        raise ValueError(f"unknown kind {kind!r}")
    lam = gp[n, n]
    if np.abs(off).max(initial=0.0) > tol().mat * scale or lam <= 0:
        raise NotFixed("the vertex (or hyperplane) is not preserved with a positive eigenvalue")
    u = gp[:n, :n]
    return VertexBlockForm(u * lam ** (1.0 / n), trans, float(lam), p, kind)


# ---------------------------------------------------------------- word balls


def _keys(mats: np.ndarray) -> np.ndarray:
    return sign_normalize(mats).reshape(mats.shape[0], -1)


def _radii(mats: np.ndarray) -> np.ndarray:
    return tol().dedup * np.maximum(1.0, np.linalg.norm(mats.reshape(mats.shape[0], -1), axis=1))


@dataclass(eq=False)
class GroupSample:
    """Generators and an enumerated word ball, elements stored as an (N, m, m) array."""

    generators: list[ProjMap]
    elements: np.ndarray
    lengths: np.ndarray
    words: list[tuple[int, ...]]
    radius: int
    letters: list[ProjMap] = field(default_factory=list)  # generators followed by appended inverses

    def __post_init__(self):
        self._tree = cKDTree(_keys(self.elements))

    def __len__(self) -> int:
        return self.elements.shape[0]

    @property
    def size(self) -> int:
        return self.elements.shape[1]

    def element(self, i: int) -> ProjMap:
        return ProjMap(self.elements[i])

    def nonidentity(self) -> np.ndarray:
        return np.flatnonzero(self.lengths > 0)

    def lookup(self, mats: np.ndarray) -> np.ndarray:
        """Index of each matrix in the ball, or -1."""
        mats = np.asarray(mats, dtype=float).reshape(-1, self.size, self.size)
        d, i = self._tree.query(_keys(mats))
        return np.where(d <= _radii(mats), i, -1)

    def index_of(self, g) -> int:
        i = int(self.lookup(_mat(g)[None])[0])
        if i < 0:
            raise NotInBall("element not in the sample ball")
        return i

    def transformed(self, fn) -> "GroupSample":
        """Apply ``fn`` (matrix -> matrix) elementwise, keeping words and lengths."""
        els = np.stack([fn(e) for e in self.elements])
        return GroupSample([ProjMap.normalized(fn(g.mat)) for g in self.generators], els,
                           self.lengths.copy(), list(self.words), self.radius,
                           [ProjMap.normalized(fn(g.mat)) for g in self.letters])

    def conjugated(self, h) -> "GroupSample":
        hm = _mat(h)
        hi = np.linalg.inv(hm)
        return self.transformed(lambda e: hm @ e @ hi)

    def dual(self) -> "GroupSample":
        return self.transformed(lambda e: np.linalg.inv(e).T)


def word_ball(gens: Sequence, radius: int) -> GroupSample:
    """Breadth-first enumeration of all elements of word length <= radius."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    base = [ProjMap.normalized(_mat(g)) for g in gens]
    if not base:
        raise ValueError("no generators")
    letters = list(base)
    for g in base:
        gi = np.linalg.inv(g.mat)
        if not any(np.linalg.norm(sign_normalize(gi) - sign_normalize(h.mat)) <= _radii(gi[None])[0]
                   for h in letters):
            letters.append(ProjMap(gi))
    lmats = np.stack([g.mat for g in letters])
    size = lmats.shape[1]
    cap = tol().ball_cap

    levels = [np.eye(size)[None]]
    level_words: list[list[tuple[int, ...]]] = [[()]]
    trees = [cKDTree(_keys(levels[0]))]
    for depth in range(1, radius + 1):
        frontier = levels[-1]
        cand = np.einsum("aij,bjk->abik", frontier, lmats).reshape(-1, size, size)
        cand_words = [w + (b,) for w in level_words[-1] for b in range(len(letters))]
        keys = _keys(cand)
        rad = _radii(cand)
        fresh = np.ones(cand.shape[0], dtype=bool)
        for tree in trees[-2:]:
            d, _ = tree.query(keys)
            fresh &= d > rad
        idx = np.flatnonzero(fresh)
        if idx.size:
            sub = cKDTree(keys[idx])
            keep = np.ones(idx.size, dtype=bool)
            for a, neigh in enumerate(sub.query_ball_point(keys[idx], rad[idx])):
                if keep[a]:
                    for b in neigh:
                        if b > a:
                            keep[b] = False
            idx = idx[keep]
        new = cand[idx]
        total = sum(lv.shape[0] for lv in levels) + new.shape[0]
        if total > cap:
            raise BallExplosion(f"word ball exceeds {cap} elements at radius {depth}")
        if new.shape[0] == 0:
            break
        levels.append(new)
        level_words.append([cand_words[i] for i in idx])
        trees.append(cKDTree(keys[idx]))
    elements = np.concatenate(levels)
    lengths = np.concatenate([np.full(lv.shape[0], d) for d, lv in enumerate(levels)])
    words = [w for lw in level_words for w in lw]
    return GroupSample(base, elements, lengths, words, radius, letters)


def cwl_estimate(sample: GroupSample, g) -> int:
    """Smallest word length among conjugates c g c^{-1} found in the ball (an upper bound)."""
    i = sample.index_of(g)
    gm = sample.elements[i]
    els = sample.elements
    inv = np.linalg.inv(els)
    conj = np.einsum("aij,jk,akl->ail", els, gm, inv)
    hits = sample.lookup(conj)
    found = sample.lengths[hits[hits >= 0]]
    return int(min(found.min(initial=sample.lengths[i]), sample.lengths[i]))


# ---------------------------------------------------------------- middle eigenvalue conditions


@dataclass(frozen=True)
class ElementRatio:
    index: int
    word: tuple[int, ...]
    log_ratio: float  # log(lambda-bar / lambda_v)
    length: float  # leng of the linear block
    ratio: float | None


@dataclass
class UMECReport:
    passed: bool
    best_C: float | None
    violations: list[ElementRatio]
    checked: int
    neutral: int
    radius: int
    kind: str
    vacuous: bool = False
    constant_vertex: bool = False  # lambda_v = 1 on the whole sample
    ratios: list[ElementRatio] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "best_C": self.best_C,
            "checked": self.checked,
            "neutral": self.neutral,
            "ball_radius": self.radius,
            "kind": self.kind,
            "vacuous": self.vacuous,
            "vertex_eigenvalue_constant_one": self.constant_vertex,
            "violations": [
                {"word": list(e.word), "log_ratio": e.log_ratio, "length": e.length}
                for e in self.violations
            ],
        }


def _block_length(h: np.ndarray) -> float:
    return _leng_profile(eigen_profile(h))


def element_ratio(g: np.ndarray, v: np.ndarray, length_fn=None) -> tuple[float, float, VertexBlockForm]:
    """(log(lambda-bar/lambda_v), leng of the block, block form), with clustered logs."""
    bf = vertex_block_form(g, v, "R")
    hp = eigen_profile(bf.linear_part)
    n = bf.n
    lv = np.log(bf.vertex_eigenvalue)
    top_u = float(hp.log_norms[0]) - lv / n
    log_ratio = max(top_u, lv) - lv
    if log_ratio <= tol().gap:
        log_ratio = 0.0
    length = _leng_profile(hp) if length_fn is None else length_fn(bf)
    if length <= tol().gap:
        length = 0.0
    return log_ratio, length, bf


def _ratios_report(sample: GroupSample, v: np.ndarray, indices, kind: str, length_fn=None) -> UMECReport:
    viol, ratios = [], []
    neutral = 0
    constant = True
    for i in indices:
        lr, ln, bf = element_ratio(sample.elements[i], v, length_fn)
        if abs(np.log(bf.vertex_eigenvalue)) > tol().gap:
            constant = False
        if ln == 0.0 and lr == 0.0:
            neutral += 1
            continue
        er = ElementRatio(int(i), sample.words[i], lr, ln, lr / ln if ln > 0 and lr > 0 else None)
        if er.ratio is None:
            viol.append(er)
        else:
            ratios.append(er)
    checked = len(viol) + len(ratios)
    if checked == 0:
        return UMECReport(True, None, [], 0, neutral, sample.radius, kind, vacuous=True,
                          constant_vertex=constant)
    best = None
    if not viol:
        r = np.array([e.ratio for e in ratios])
        best = float(max(r.max(), (1.0 / r).max()))
    return UMECReport(not viol, best, viol, checked, neutral, sample.radius, kind,
                      constant_vertex=constant, ratios=ratios)


def check_umec(sample: GroupSample, v, kind: str = "R") -> UMECReport:
    """Middle-eigenvalue ratios over the ball.

    kind "T": ``v`` is the covector of the invariant hyperplane and the R-end
    test is run on the inverse-transpose images at that point.
    """
    vv = _vec(v)
    if kind == "T":
        sample = sample.dual()
    elif kind != "R":
        raise ValueError(f"unknown kind {kind!r}")
    return _ratios_report(sample, vv, sample.nonidentity(), kind)


# ---------------------------------------------------------------- factors


@dataclass
class FactorDecomposition:
    subspaces: list[Subspace]  # in the n coordinates of the block form
    basis: np.ndarray  # columns: concatenated factor bases
    dims: list[int]
    center_words: list[tuple[int, ...]]
    consistent: bool
    frame: np.ndarray | None  # block-form frame P, or None for raw elements
    hyperplane: np.ndarray | None = None  # covector of an invariant hyperplane missing v

    @property
    def l0(self) -> int:
        return len(self.subspaces)

    def block(self, h: np.ndarray, i: int) -> np.ndarray:
        w = self.basis
        a = int(sum(self.dims[:i]))
        b = a + self.dims[i]
        return np.linalg.solve(w, h @ w)[a:b, a:b]


def _generalized_eigenspaces(c: np.ndarray) -> list[np.ndarray]:
    """Real bases (columns) of generalized eigenspaces, complex pairs merged."""
    ev = np.linalg.eigvals(c)
    scale = max(1.0, float(np.abs(ev).max()))
    radius = 1e-6 * scale
    groups: list[list[complex]] = []
    for lam in ev:
        for grp in groups:
            if abs(grp[0] - lam) <= radius:
                grp.append(lam)
                break
        else:
            groups.append([lam])
    out = []
    done = set()
    for gi, grp in enumerate(groups):
        if gi in done:
            continue
        lam = np.mean(grp)
        k = len(grp)
        mat = np.linalg.matrix_power(c - lam * np.eye(c.shape[0]), k)
        ns = null_space(mat, rcond=1e-7)
        if abs(lam.imag) > radius:
            for gj, other in enumerate(groups):
                if gj != gi and abs(np.mean(other) - np.conj(lam)) <= radius:
                    done.add(gj)
            ns = np.hstack([ns.real, ns.imag])
            ns = np.linalg.svd(ns, full_matrices=False)[0][:, :2 * k]
        else:
            ns = ns.real
        done.add(gi)
        out.append(ns)
    return out


def factor_decomposition(sample: GroupSample, v=None, rng: np.random.Generator | None = None) -> FactorDecomposition:
    """Split R^n by the common eigenspaces of central elements of the sample."""
    rng = np.random.default_rng(0) if rng is None else rng
    idx = sample.nonidentity()
    if v is not None:
        vv = _vec(v)
        blocks = {i: vertex_block_form(sample.elements[i], vv, "R") for i in idx}
        hs = {i: b.linear_part for i, b in blocks.items()}
        frame = householder_to_last(vv)
    else:
        hs = {i: sample.elements[i] for i in idx}
        frame = None
    n = next(iter(hs.values())).shape[0] if hs else sample.size
    gen_idx = [int(sample.lookup(g.mat[None])[0]) for g in sample.letters]
    gen_h = [hs[i] for i in gen_idx if i in hs]
    whole = FactorDecomposition([Subspace(np.eye(n))], np.eye(n), [n], [], True, frame)
    centers = []
    for i, h in hs.items():
        hn = h / np.linalg.norm(h)
        if np.linalg.norm(hn - np.trace(hn) / n * np.eye(n)) <= 1e-6:
            continue
        if all(np.linalg.norm(hn @ s - s @ hn) <= 1e2 * tol().mat * np.linalg.norm(s) for s in gen_h):
            centers.append(i)
    if not centers:
        return whole
    comb = sum(rng.uniform(0.5, 1.5) * hs[i] / np.linalg.norm(hs[i]) for i in centers)
    spaces = _generalized_eigenspaces(comb)
    if len(spaces) <= 1:
        return whole
    w = np.hstack(spaces)
    dims = [s.shape[1] for s in spaces]
    dec = FactorDecomposition([Subspace(s.T) for s in spaces], w, dims,
                              [sample.words[i] for i in centers], True, frame)
    if np.linalg.cond(w) > 1e8:
        whole.consistent = False
        return whole
    bounds = np.cumsum([0] + dims)
    mask = np.zeros((n, n), dtype=bool)
    for a, b in zip(bounds[:-1], bounds[1:]):
        mask[a:b, a:b] = True
    for h in hs.values():
        conj = np.linalg.solve(w, h @ w)
        if np.abs(conj[~mask]).max(initial=0.0) > 1e2 * tol().mat * np.abs(conj).max():
            whole.consistent = False
            return whole
    if v is not None:
        dec.hyperplane = _invariant_hyperplane(dec, [sample.elements[i] for i in centers], vv)
    return dec


def _invariant_hyperplane(dec: FactorDecomposition, centers: list[np.ndarray], v: np.ndarray) -> np.ndarray | None:
    """Sum over factors of the complement to v inside span(V_i, v) cut out by a central element."""
    p = dec.frame
    n = dec.basis.shape[0]
    pieces = []
    for i, sub in enumerate(dec.subspaces):
        span = np.zeros((n + 1, sub.dim + 1))
        span[:n, :sub.dim] = sub.basis.T
        span[n, sub.dim] = 1.0
        found = None
        for c in centers:
            cp = p @ c @ p
            lam = cp[n, n]
            restricted = (cp - lam * np.eye(n + 1)) @ span
            u, s, _ = np.linalg.svd(restricted, full_matrices=False)
            if s.size and s[sub.dim - 1] > 1e-8 * max(1.0, s[0]):
                found = u[:, :sub.dim]
                break
        if found is None:
            return None
        pieces.append(found)
    basis = np.hstack(pieces)
    cov = null_space(basis.T)
    if cov.shape[1] != 1:
        return None
    h = p @ cov[:, 0]
    return h if h @ v > 0 else -h


@dataclass
class WeakUMECReport:
    passed: bool
    clause_a: bool
    clause_b: bool
    a_failures: list[tuple[int, ...]]
    factor_reports: list[UMECReport]
    l0: int
    consistent_split: bool
    radius: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "clause_a": self.clause_a,
            "clause_b": self.clause_b,
            "clause_a_failures": [list(w) for w in self.a_failures],
            "factors": self.l0,
            "consistent_split": self.consistent_split,
            "ball_radius": self.radius,
            "factor_reports": [r.to_dict() for r in self.factor_reports],
        }


def check_weak_umec(sample: GroupSample, v, rng: np.random.Generator | None = None) -> WeakUMECReport:
    vv = _vec(v)
    fails = []
    for i in sample.nonidentity():
        g = sample.elements[i]
        prof = eigen_profile(g)
        bf = vertex_block_form(g, vv, "R")
        lv = np.log(bf.vertex_eigenvalue)
        top = prof.log_norms[0]
        a, b = prof.clusters[0]
        if lv >= top - _cluster_width(prof._eta, b - a + 1) and prof.top_multiplicity < 2:
            fails.append(sample.words[i])
    dec = factor_decomposition(sample, vv, rng)
    reports = []
    idx = sample.nonidentity()
    if dec.l0 == 1:
        reports.append(_ratios_report(sample, vv, idx, "R"))
    else:
        for k, dim in enumerate(dec.dims):
            if dim < 2:
                continue
            members = []
            for i in idx:
                h = vertex_block_form(sample.elements[i], vv, "R").linear_part
                scalar = True
                for j in range(dec.l0):
                    if j == k:
                        continue
                    blk = dec.block(h, j)
                    c = np.trace(blk) / blk.shape[0]
                    if np.linalg.norm(blk - c * np.eye(blk.shape[0])) > 1e-6 * max(1.0, abs(c)):
                        scalar = False
                        break
                if scalar:
                    members.append(i)

            def block_len(bf, k=k):
                return _block_length(dec.block(bf.linear_part, k))

            reports.append(_ratios_report(sample, vv, members, "R", block_len))
    clause_b = all(r.passed for r in reports)
    return WeakUMECReport(not fails and clause_b, not fails, clause_b, fails, reports, dec.l0,
                          dec.consistent, sample.radius)
