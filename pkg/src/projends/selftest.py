"""Fast invariant suite behind ``projends self-test``."""
from __future__ import annotations

import numpy as np

from .convex import ConvexBody, dual_body, hilbert_distance, vertex_hausdorff
from .ends import EndData, Verdict, classify_end, detect_quasi_lens, dual_tube, translation_cocycle
from .errors import HullTouchesAntipode
from .fixtures import LORENTZ3, fixture
from .holonomy import check_umec, eigen_length_bounds_check, word_ball
from .projective import apply, random_projmap


def _check(name, fn):
    try:
        ok, value = fn()
    except Exception as exc:  # a crash is a failed check, reported by name
        return {"name": name, "passed": False, "value": f"{type(exc).__name__}: {exc}"}
    return {"name": name, "passed": bool(ok), "value": value}


def run_self_test(rng: np.random.Generator) -> list[dict]:
    checks = []
    interval = ConvexBody.polytope(np.array([[-1.0, 1.0], [1.0, 1.0]]))

    def c_interval():
        d = hilbert_distance(interval, [0.0, 1.0], [0.5, 1.0])
        return abs(d - np.log(3.0)) < 1e-10, d

    def c_klein():
        disk = ConvexBody.from_quadric(LORENTZ3, [0.0, 0.0, 1.0])
        worst = 0.0
        for _ in range(20):
            x, y = rng.uniform(-0.6, 0.6, size=(2, 2))
            p, q = np.append(x, 1.0), np.append(y, 1.0)
            lor = lambda a, b: a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
            hyp = np.arccosh(-lor(p, q) / np.sqrt(lor(p, p) * lor(q, q)))
            worst = max(worst, abs(hilbert_distance(disk, p, q) - 2 * hyp))
        return worst < 1e-8, worst

    def c_invariance():
        sq = ConvexBody.polytope(np.array([[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1.0]]))
        worst = 0.0
        for _ in range(20):
            g = random_projmap(3, rng)
            p, q = np.append(rng.uniform(-0.5, 0.5, 2), 1.0), np.append(rng.uniform(-0.5, 0.5, 2), 1.0)
            d0 = hilbert_distance(sq, p, q)
            d1 = hilbert_distance(sq.transform(g), apply(g, p), apply(g, q))
            worst = max(worst, abs(d0 - d1))
        return worst < 1e-8, worst

    def c_double_dual():
        pts = np.hstack([rng.normal(size=(12, 3)), np.full((12, 1), 4.0)])
        body = ConvexBody.polytope(pts)
        dd = dual_body(dual_body(body))
        h = vertex_hausdorff(dd.with_chart(body.chart).vertices, body.vertices)
        return h < 1e-7, h

    def c_bounds():
        fails = 0
        for _ in range(200):
            g = random_projmap(int(rng.integers(3, 9)), rng).mat
            g = g @ g.T
            fails += not eigen_length_bounds_check(g).passed
        return fails == 0, fails

    def c_umec_pass():
        f = fixture("so21_lattice")
        rep = check_umec(word_ball(f.generators, 4), f.vertex)
        return rep.passed and 1.9 <= rep.best_C <= 2.1, rep.best_C

    def c_umec_fail():
        f = fixture("bad_vertex_dominant")
        rep = check_umec(word_ball(f.generators, 3), f.vertex)
        return (not rep.passed) and len(rep.violations) >= 1, len(rep.violations)

    def c_dual_tube():
        f = fixture("so21_lattice")
        omega = ConvexBody.from_quadric(LORENTZ3, [0.0, 0.0, 1.0])
        res = dual_tube(word_ball(f.generators, 2), omega, f.vertex)
        return res.residual < 1e-6, res.residual

    def c_horospherical():
        f = fixture("unipotent_cusp")
        v = classify_end(EndData("R", f.vertex, word_ball(f.generators, 3))).verdict
        return v is Verdict.HOROSPHERICAL, v.value

    def c_cocycle():
        f = fixture("quasi_lens_4")
        s = word_ball(f.generators, 3)
        zi, circle, d_block = detect_quasi_lens(s, f.vertex)
        coc = translation_cocycle(s, f.vertex, circle, d_block, orient=s.elements[zi])
        r = max(coc.additivity_residual, coc.conjugation_residual)
        return r < 1e-7, r

    def c_antipode():
        from .ends import quasi_lens_construct
        f = fixture("quasi_lens_3_negated")
        try:
            quasi_lens_construct(None, f.extra["zeta"], np.ones(3) / np.sqrt(3.0), f.vertex)
        except HullTouchesAntipode:
            return True, "raised"
        return False, "not raised"

    for name, fn in (("interval distance is log 3", c_interval),
                     ("disk metric is twice the Klein metric", c_klein),
                     ("projective invariance", c_invariance),
                     ("double dual", c_double_dual),
                     ("eigenvalue length bounds", c_bounds),
                     ("UMEC passes on the lattice fixture", c_umec_pass),
                     ("UMEC fails on the vertex-dominant fixture", c_umec_fail),
                     ("tube duality on the disk", c_dual_tube),
                     ("unipotent cusp is horospherical", c_horospherical),
                     ("translation cocycle identities", c_cocycle),
                     ("negated translation reaches the antipode", c_antipode)):
        checks.append(_check(name, fn))
    return checks
