import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projends.convex import (
    BoundaryType,
    Containment,
    ConvexBody,
    contains,
    dual_body,
    dual_inclusion_check,
    eps_neighborhood,
    hausdorff_distance,
    hilbert_distance,
    hilbert_distances,
    is_subset,
    join,
    join_point_body,
    maximal_chord,
    polytope_from_halfspaces,
    strict_convexity_at,
    strict_join,
    to_chart,
    vertex_hausdorff,
)
from projends.errors import IdenticalPoints, NotIndependent, NotInterior, NotProperlyConvex, NotStrictlyConvexInput
from projends.fixtures import LORENTZ3
from projends.projective import apply, random_projmap

SQUARE = np.array([[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1.0]])


def lift(*ys):
    return np.append(np.asarray(ys, dtype=float), 1.0)


def disk():
    return ConvexBody.from_quadric(LORENTZ3, [0.0, 0.0, 1.0])


def klein(p, q):
    lor = lambda a, b: a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
    return np.arccosh(-lor(p, q) / np.sqrt(lor(p, p) * lor(q, q)))


def simplex(n):
    pts = np.vstack([np.eye(n), -np.ones((1, n))])
    return ConvexBody.polytope(np.hstack([pts, np.ones((n + 1, 1))]))


# ---------------------------------------------------------------- containment and chords


def test_contains_simplex():
    s = simplex(2)
    assert contains(s, lift(0, 0)) is Containment.INTERIOR
    assert contains(s, lift(1, 0)) is Containment.BOUNDARY
    assert contains(s, -lift(0, 0)) is Containment.OUTSIDE


def test_maximal_chord_examples():
    ch = maximal_chord(disk(), lift(0, 0), lift(0.5, 0))
    assert np.allclose(to_chart(ch.o.vec, [0, 0, 1.0])[0], [-1, 0], atol=1e-12)
    assert np.allclose(to_chart(ch.s.vec, [0, 0, 1.0])[0], [1, 0], atol=1e-12)

    sq = ConvexBody.polytope(SQUARE)
    ch = maximal_chord(sq, lift(0, 0), lift(0.5, 0.5))
    assert np.allclose(ch.o.vec / ch.o.vec[2], lift(-1, -1), atol=1e-12)
    assert np.allclose(ch.s.vec / ch.s.vec[2], lift(1, 1), atol=1e-12)

    ell = ConvexBody.ellipsoid([0.0, 0.0], np.diag([1.0, 4.0]))
    ch = maximal_chord(ell, lift(0, 0), lift(0, 0.25))
    assert np.allclose(ch.o.vec / ch.o.vec[2], lift(0, -0.5), atol=1e-12)
    assert np.allclose(ch.s.vec / ch.s.vec[2], lift(0, 0.5), atol=1e-12)


def test_chord_errors():
    with pytest.raises(IdenticalPoints):
        maximal_chord(disk(), lift(0, 0), lift(0, 0))
    with pytest.raises(NotInterior):
        maximal_chord(disk(), lift(0, 0), lift(2, 0))


# ---------------------------------------------------------------- Hilbert metric


def test_interval_log3_both_representations():
    seg = ConvexBody.polytope(np.array([[-1.0, 1.0], [1.0, 1.0]]))
    ell = ConvexBody.ellipsoid([0.0], [[1.0]])
    for body in (seg, ell):
        assert hilbert_distance(body, [0.0, 1.0], [0.5, 1.0]) == pytest.approx(np.log(3.0), abs=1e-10)
        assert hilbert_distance(body, [0.3, 1.0], [0.3, 1.0]) == 0.0


def test_disk_is_twice_klein(rng):
    d = disk()
    for _ in range(100):
        r = np.sqrt(rng.uniform(0, 0.9, 2))
        th = rng.uniform(0, 2 * np.pi, 2)
        p, q = lift(r[0] * np.cos(th[0]), r[0] * np.sin(th[0])), lift(r[1] * np.cos(th[1]), r[1] * np.sin(th[1]))
        assert hilbert_distance(d, p, q) == pytest.approx(2 * klein(p, q), abs=1e-8)


def test_vectorized_distances_agree(rng):
    for body in (disk(), ConvexBody.polytope(SQUARE)):
        pts = np.array([lift(*rng.uniform(-0.6, 0.6, 2)) for _ in range(30)])
        q = lift(0.1, -0.2)
        fast = hilbert_distances(body, pts, q)
        slow = [hilbert_distance(body, p, q) for p in pts]
        assert np.allclose(fast, slow, atol=1e-9)


coords = st.floats(-0.7, 0.7, allow_nan=False)


@given(coords, coords, coords, coords, st.integers(0, 2**31))
def test_distance_projectively_invariant(a, b, c, d, seed):
    sq = ConvexBody.polytope(SQUARE)
    p, q = lift(a, b), lift(c, d)
    g = random_projmap(3, np.random.default_rng(seed))
    d0 = hilbert_distance(sq, p, q)
    d1 = hilbert_distance(sq.transform(g), apply(g, p), apply(g, q))
    assert d1 == pytest.approx(d0, abs=1e-8)


@given(coords, coords, coords, coords, coords, coords)
def test_triangle_inequality(a, b, c, d, e, f):
    body = disk()
    p, q, r = lift(a, b), lift(c, d), lift(e, f)
    assert hilbert_distance(body, p, r) <= hilbert_distance(body, p, q) + hilbert_distance(body, q, r) + 1e-9


# ---------------------------------------------------------------- duality


def test_dual_of_unit_ball_is_unit_ball():
    ball = ConvexBody.ellipsoid(np.zeros(3), np.eye(3))
    dual = dual_body(ball)
    assert dual.kind == "ellipsoid"
    assert np.allclose(dual.center_chart, 0, atol=1e-12)
    assert np.allclose(dual.form, np.eye(3), atol=1e-12)


def test_dual_of_centered_simplex_is_simplex():
    d = dual_body(simplex(3))
    assert d.vertices.shape[0] == 4


def test_cube_octahedron_swap():
    cube = ConvexBody.polytope(np.array([[x, y, z, 1.0] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]))
    oct_ = dual_body(cube)
    assert cube.vertices.shape[0] == 8 and cube.facet_covectors.shape[0] == 6
    assert oct_.vertices.shape[0] == 6 and oct_.facet_covectors.shape[0] == 8


@given(st.integers(0, 2**31))
def test_double_dual_polytope(seed):
    r = np.random.default_rng(seed)
    body = ConvexBody.polytope(np.hstack([r.normal(size=(10, 3)), np.full((10, 1), 4.0)]))
    dd = dual_body(dual_body(body))
    assert vertex_hausdorff(dd.vertices, body.vertices) < 1e-7


@given(st.integers(0, 2**31))
def test_double_dual_ellipsoid(seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(3, 3))
    body = ConvexBody.ellipsoid(r.normal(size=3) * 0.3, a @ a.T + 0.5 * np.eye(3))
    dd = dual_body(dual_body(body))
    assert hausdorff_distance(dd, body, chart=body.chart) < 1e-7


def test_inclusion_examples():
    s = simplex(2)
    ys = s.vertices[:, :2] / s.vertices[:, 2:]
    half = ConvexBody.polytope(np.hstack([0.5 * ys, np.ones((3, 1))]))
    assert is_subset(half, s) and not is_subset(s, half)
    assert dual_inclusion_check(half, s)
    far = ConvexBody.polytope(np.array([[5, 5, 1], [6, 5, 1], [5, 6, 1.0]]))
    assert not is_subset(far, s) and not is_subset(s, far)
    assert dual_inclusion_check(far, s)


def test_nested_ellipsoids_reverse(rng):
    for _ in range(20):
        a = rng.normal(size=(2, 2))
        q = a @ a.T + 0.3 * np.eye(2)
        c = rng.normal(size=2) * 0.2
        outer = ConvexBody.ellipsoid(c, q)
        inner = ConvexBody.ellipsoid(c, q / 0.9)
        assert is_subset(inner, outer) and not is_subset(outer, inner)
        assert is_subset(dual_body(outer), dual_body(inner))


def test_halfspace_route_matches_facet_route():
    cube = ConvexBody.polytope(np.array([[x, y, z, 1.0] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]))
    dual = dual_body(cube)
    route = polytope_from_halfspaces(cube.vertices, dual.chart)
    assert vertex_hausdorff(route.vertices, dual.vertices) < 1e-9


def test_not_properly_convex():
    with pytest.raises(NotProperlyConvex):
        ConvexBody.polytope(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]))


# ---------------------------------------------------------------- joins and neighborhoods


def test_join_examples():
    amb = ConvexBody.polytope(np.array([[-5, -5, 1], [5, -5, 1], [0, 5, 1.0]]))
    pt = ConvexBody.polytope(np.array([[0.0, 1.0, 1.0]]))
    seg = ConvexBody.polytope(np.array([[-1.0, 0.0, 1.0], [1.0, 0.0, 1.0]]))
    assert join(pt, seg, amb).vertices.shape[0] == 3
    assert vertex_hausdorff(join(seg, seg, amb).vertices, seg.vertices) < 1e-12
    square = ConvexBody.polytope(np.array([[x, y, 0.0, 1.0] for x in (-1, 1) for y in (-1, 1)]))
    pyramid = join_point_body([0.0, 0.0, 1.0, 1.0], square)
    assert pyramid.vertices.shape[0] == 5


def test_strict_join_examples():
    e = np.eye(5)
    a = ConvexBody.polytope(e[:1])
    b = ConvexBody.polytope(e[1:2])
    assert strict_join([a, b]).vertices.shape[0] == 2
    tri = ConvexBody.polytope(np.array([e[0], e[1], e[2]]))
    seg = ConvexBody.polytope(np.array([e[3], e[4]]))
    j = strict_join([tri, seg])
    assert j.vertices.shape[0] == 5 and j.intrinsic_dim == 4
    with pytest.raises(NotIndependent):
        strict_join([tri, ConvexBody.polytope(np.array([e[0] + e[1], e[3]]))])


def test_eps_neighborhood_segment_in_disk():
    seg = ConvexBody.polytope(np.array([[-0.5, 0.0, 1.0], [0.5, 0.0, 1.0]]))
    nbhd = eps_neighborhood(seg, disk(), 0.1)
    assert nbhd.full_dimensional
    assert is_subset(seg, nbhd)
    # convexity: the sampled boundary points are hull vertices up to interior seeds
    assert nbhd.vertices.shape[0] > 20
    small = eps_neighborhood(seg, disk(), 1e-4)
    big = eps_neighborhood(seg, disk(), 0.1)
    h_small = hausdorff_distance(small, seg, chart=seg.chart)
    assert h_small < hausdorff_distance(big, seg, chart=seg.chart)
    assert h_small < 1e-3


def test_eps_neighborhood_rejects_flat_faces():
    with pytest.raises(NotStrictlyConvexInput):
        eps_neighborhood(ConvexBody.polytope(0.3 * SQUARE + [0, 0, 0.7]), disk(), 0.1)


def test_strict_convexity_types():
    sq = ConvexBody.polytope(SQUARE)
    assert strict_convexity_at(sq, lift(1, 1)) is BoundaryType.CORNER
    assert strict_convexity_at(sq, lift(1, 0)) is BoundaryType.FLAT_FACE
    assert strict_convexity_at(disk(), lift(0.6, 0.8)) is BoundaryType.STRICT_C1
