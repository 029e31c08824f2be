import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projends.errors import BallExplosion, NotFixed, NotInBall, NotProximal, ZeroGap
from projends.fixtures import adjoint_sl2, direct_sum, fixture
from projends.holonomy import (
    Proximality,
    alpha_beta,
    check_umec,
    check_weak_umec,
    cwl_estimate,
    eigen_length_bounds_check,
    eigen_profile,
    factor_decomposition,
    leng,
    proximality_class,
    vertex_block_form,
    word_ball,
)
from projends.config import override
from projends.projective import ProjMap, dual_map, householder_to_last, random_projmap

E = np.e


def unimodular(m):
    return ProjMap.normalized(m).mat


def conj_by_random(d, rng):
    q = random_projmap(d.shape[0], rng).mat
    return q @ d @ np.linalg.inv(q)


# ---------------------------------------------------------------- spectra


def test_eigen_profile_examples():
    p = eigen_profile(np.diag([2.0, 1.0, 0.5]))
    assert np.allclose(p.norms, [2, 1, 0.5])
    assert p.top_real_positive and p.bottom_real_positive
    assert p.top_multiplicity == 1 and p.bottom_multiplicity == 1
    jordan = np.eye(3) + np.diag([1.0, 1.0], 1)
    assert np.allclose(eigen_profile(jordan).norms, 1.0, atol=1e-9)


def test_proximality_examples():
    assert proximality_class(np.diag([2.0, 1.0, 0.5])) is Proximality.BIPROXIMAL
    assert proximality_class(np.diag([-2.0, 1.0, -0.5])) is Proximality.NONE
    assert proximality_class(np.diag([2.0, 2.0, 0.25])) is Proximality.BISEMIPROXIMAL
    assert proximality_class(np.diag([2.0, 1.0, -0.5])) is Proximality.PROXIMAL


def test_leng_examples():
    assert leng(np.diag([E, 1.0, 1 / E])) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(NotProximal):
        leng(np.eye(3))


def test_leng_matches_sampled_hilbert_displacement(rng):
    from projends.convex import ConvexBody, hilbert_distances
    from projends.fixtures import LORENTZ3, boost
    ell = 0.7
    g = boost(ell)
    disk = ConvexBody.from_quadric(LORENTZ3, [0, 0, 1.0])
    r = np.sqrt(rng.uniform(0, 0.99, 10_000))
    th = rng.uniform(0, 2 * np.pi, 10_000)
    pts = np.column_stack([r * np.cos(th), r * np.sin(th), np.ones_like(r)])
    disp = np.array([hilbert_distances(disk, (g @ p)[None], p)[0] for p in pts[:2000]])
    assert leng(g) == pytest.approx(2 * ell, abs=1e-12)
    assert disp.min() >= leng(g) - 1e-9
    assert disp.min() == pytest.approx(leng(g), rel=0.05)


def test_alpha_beta_examples():
    a, b = alpha_beta(np.diag(np.exp([3.0, 1.0, -1.0, -3.0])))
    assert (a, b) == (pytest.approx(1.5), pytest.approx(3.0))
    a, b = alpha_beta(np.diag(np.exp([0.8, 0.0, 0.0, -0.8])))
    assert (a, b) == (pytest.approx(2.0), pytest.approx(2.0))
    a, b = alpha_beta(np.diag(np.exp([2.0, 1.0, -3.0])))
    assert (a, b) == (pytest.approx(5.0), pytest.approx(5.0))
    with pytest.raises(NotProximal):
        alpha_beta(np.diag([2.0, 2.0, 0.25]))


def test_zero_gap():
    with override(gap=1e-3):
        with pytest.raises((ZeroGap, NotProximal)):
            alpha_beta(np.diag(np.exp([1.0, 1.0 - 1e-5, -2.0 + 1e-5])))


def test_bounds_examples():
    r = eigen_length_bounds_check(np.diag([E, 1.0, 1 / E]))
    assert r.passed and r.lower_margin == pytest.approx(1 - 2 / 3) and r.upper_margin == pytest.approx(4 / 3 - 1)
    r = eigen_length_bounds_check(np.diag([E, E, E ** -2]))
    assert r.passed and r.lower_margin == pytest.approx(0.0, abs=1e-12)


@given(st.lists(st.floats(-4, 4, allow_nan=False), min_size=3, max_size=8), st.integers(0, 2**31))
def test_bounds_hold_for_conjugated_positive_spectra(logs, seed):
    logs = np.array(logs)
    if np.ptp(logs) < 1e-3:
        return
    g = conj_by_random(np.diag(np.exp(logs - logs.mean())), np.random.default_rng(seed))
    assert eigen_length_bounds_check(g).passed


def test_dual_reverses_norms(rng):
    worst = 0.0
    for _ in range(500):
        g = random_projmap(int(rng.integers(3, 7)), rng)
        a = eigen_profile(g).norms
        b = eigen_profile(dual_map(g)).norms
        worst = max(worst, float(np.abs(1 / a[::-1] - b).max()))
    assert worst < 1e-6


@given(st.integers(0, 2**31))
def test_leng_inverse_and_conjugation(seed):
    r = np.random.default_rng(seed)
    g = conj_by_random(np.diag(np.exp([1.2, 0.3, -1.5])), r)
    h = random_projmap(3, r).mat
    assert leng(np.linalg.inv(g)) == pytest.approx(leng(g), abs=1e-7)
    assert leng(h @ g @ np.linalg.inv(h)) == pytest.approx(leng(g), abs=1e-7)


# ---------------------------------------------------------------- block form


def test_block_form_diagonal():
    bf = vertex_block_form(np.diag([2.0, 1.0, 0.5]), [0, 0, 1.0])
    assert bf.vertex_eigenvalue == pytest.approx(0.5)
    assert np.allclose(bf.translation, 0)
    assert abs(np.linalg.det(bf.linear_part)) == pytest.approx(1.0)
    assert np.allclose(np.diag(bf.linear_part) / bf.linear_part[1, 1], [2.0, 1.0])


def test_block_form_affine_translation():
    g = np.eye(3)
    g[:2, 2] = [0.3, -0.4]
    bf = vertex_block_form(g, [0, 0, 1.0], "affine")
    assert np.allclose(bf.linear_part, np.eye(2))
    assert np.allclose(bf.translation, [0.3, -0.4])
    assert bf.vertex_eigenvalue == pytest.approx(1.0)


@given(st.integers(0, 2**31))
def test_block_form_round_trip(seed):
    r = np.random.default_rng(seed)
    v = r.normal(size=4)
    p = householder_to_last(v)
    m = r.normal(size=(4, 4)) + 3 * np.eye(4)
    m[:3, 3] = 0.0
    m[3, 3] = abs(m[3, 3]) + 0.5
    g = unimodular(p @ m @ p)
    bf = vertex_block_form(g, v)
    assert np.abs(bf.reassemble() - g).max() < 1e-8


def test_block_form_rejects_moved_vertex():
    with pytest.raises(NotFixed):
        vertex_block_form(np.array([[1.0, 0, 1], [0, 1, 0], [0, 0, 1]]), [0, 0, 1.0])


# ---------------------------------------------------------------- word balls


def test_word_ball_counts():
    g = np.diag([2.0, 1.0, 0.5])
    assert len(word_ball([g], 5)) == 11
    f = fixture("so21_lattice")
    assert len(word_ball(f.generators, 3)) == 53
    r = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 1]])
    s = np.diag([1.0, -1.0, -1.0])
    assert len(word_ball([r, s], 6)) < 1 + 4 + 4 * 3 ** 5
    assert len(word_ball([r, s], 6)) == 8


def test_word_ball_lengths_and_lookup():
    f = fixture("so21_lattice")
    s = word_ball(f.generators, 3)
    a, b = (g.mat for g in s.generators)
    assert s.lengths[s.index_of(a @ b @ np.linalg.inv(a))] == 3
    assert s.lengths[s.index_of(-a)] == 1  # sign ambiguity of S^n points
    with pytest.raises(NotInBall):
        s.index_of(a @ a @ a @ a)


def test_ball_explosion():
    f = fixture("so31_lattice")
    with override(ball_cap=50):
        with pytest.raises(BallExplosion):
            word_ball(f.generators, 3)


def test_cwl_examples():
    f = fixture("so21_lattice")
    s = word_ball(f.generators, 4)
    a, b = (g.mat for g in s.generators)
    assert cwl_estimate(s, a) == 1
    assert cwl_estimate(s, b @ a @ np.linalg.inv(b)) == 1
    assert cwl_estimate(s, np.eye(4)) == 0


# ---------------------------------------------------------------- middle eigenvalue conditions


def test_umec_lattice_best_c_two():
    f = fixture("so21_lattice")
    rep = check_umec(word_ball(f.generators, 4), f.vertex)
    assert rep.passed and rep.constant_vertex
    assert rep.best_C == pytest.approx(2.0, abs=1e-6)


def test_umec_records_violation():
    f = fixture("bad_vertex_dominant")
    rep = check_umec(word_ball(f.generators, 2), f.vertex)
    assert not rep.passed and rep.violations
    assert (0,) in [e.word for e in rep.violations]


def test_umec_diagonal_ratio_constant():
    f = fixture("diag_z1")
    rep = check_umec(word_ball(f.generators, 5), f.vertex)
    assert rep.passed
    rs = {round(e.ratio, 9) for e in rep.ratios}
    assert len(rs) == 1


def test_umec_vacuous_on_trivial_group():
    rep = check_umec(word_ball([np.eye(3)], 2), [0, 0, 1.0])
    assert rep.vacuous and rep.best_C is None


@given(st.integers(0, 2**31))
def test_umec_conjugation_invariant(seed):
    r = np.random.default_rng(seed)
    f = fixture("so21_lattice")
    s = word_ball(f.generators, 3)
    p = householder_to_last(f.vertex)
    m = r.normal(size=(4, 4)) * 0.3 + np.eye(4)
    m[:3, 3] = 0.0
    h = unimodular(p @ m @ p)
    a, b = check_umec(s, f.vertex), check_umec(s.conjugated(h), f.vertex)
    assert a.passed == b.passed
    assert a.best_C == pytest.approx(b.best_C, abs=1e-6)


def test_t_end_uses_dual_action():
    f = fixture("so21_lattice")
    s = word_ball(f.generators, 3)
    assert check_umec(s, f.vertex, "T").passed


def test_weak_umec_examples():
    f = fixture("quasi_lens_3")
    assert check_weak_umec(word_ball(f.generators, 4), f.vertex).passed
    simple_top = word_ball([np.diag([4.0, 1.0, 0.25])], 3)
    rep = check_weak_umec(simple_top, [1.0, 0, 0])
    assert not rep.clause_a and not rep.passed
    f = fixture("so21_lattice")
    rep = check_weak_umec(word_ball(f.generators, 3), f.vertex)
    assert rep.passed and rep.clause_a


def test_factor_examples(rng):
    a = np.array([[2.0, 1.0], [1.0, 1.0]])
    b = np.array([[1.0, 1.0], [1.0, 2.0]])
    gens = [direct_sum(a, b), direct_sum(b, a), np.diag([2.0, 2.0, 0.5, 0.5])]
    dec = factor_decomposition(word_ball(gens, 2))
    assert dec.l0 == 2 and dec.dims == [2, 2]
    so21 = [adjoint_sl2([[1, 2], [0, 1]]), adjoint_sl2([[1, 0], [2, 1]])]
    assert factor_decomposition(word_ball(so21, 3)).l0 == 1
    f = fixture("diag_z2")
    dec = factor_decomposition(word_ball(f.generators, 2), f.vertex)
    assert dec.l0 == 3 and dec.dims == [1, 1, 1]
