import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projends.convex import ConvexBody, hilbert_distance, to_chart
from projends.errors import NotInterior, NotStrictlyConvex, RecenterFailure
from projends.fixtures import LORENTZ3, fixture
from projends.flow import (
    UnitTangent,
    bundle_frame,
    contraction_audit,
    geodesic_flow,
    random_tangents,
    recenter,
    transform_tangent,
)
from projends.holonomy import word_ball
from projends.projective import normalize, random_projmap


def disk():
    return ConvexBody.from_quadric(LORENTZ3, [0.0, 0.0, 1.0])


@given(st.floats(0, 6), st.floats(0, 2 * np.pi))
def test_flow_from_center_follows_tanh(t, theta):
    d = np.array([np.cos(theta), np.sin(theta)])
    u = UnitTangent([0, 0, 1.0], d)
    y = to_chart(geodesic_flow(disk(), u, t).base, [0, 0, 1.0])[0]
    assert np.linalg.norm(y) == pytest.approx(np.tanh(t / 2), abs=1e-12)
    if t > 1e-6:
        assert np.allclose(normalize(y), d, atol=1e-9)


def test_flow_at_zero_is_identity():
    u = UnitTangent([0.2, -0.1, 1.0], [0.6, 0.8])
    assert np.allclose(geodesic_flow(disk(), u, 0.0).base, u.base, atol=1e-15)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_flow_is_a_unit_speed_group(s, t):
    u = UnitTangent([0.1, 0.2, 1.0], [1.0, -0.5])
    a = geodesic_flow(disk(), geodesic_flow(disk(), u, s), t).base
    b = geodesic_flow(disk(), u, s + t).base
    assert np.allclose(a, b, atol=1e-9)
    assert hilbert_distance(disk(), u.base, b) == pytest.approx(abs(s + t), abs=1e-7)


def test_flow_equivariance(rng):
    body = disk()
    u = UnitTangent([0.1, 0.3, 1.0], [0.3, -1.0])
    g = random_projmap(3, rng).mat
    image, gu = transform_tangent(g, body, u)
    lhs = geodesic_flow(image, gu, 1.3).base
    rhs = normalize(g @ geodesic_flow(body, u, 1.3).base)
    if lhs @ rhs < 0:
        lhs = -lhs
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_bundle_frame_horizontal_chord():
    fr = bundle_frame(disk(), UnitTangent([0, 0, 1.0], [1.0, 0.0]))
    assert np.allclose(fr.forward_endpoint, normalize([1, 0, 1.0]))
    assert np.allclose(fr.backward_endpoint, normalize([-1, 0, 1.0]))
    assert fr.v_zero.contains([0, 1.0, 0])
    assert fr.direct_sum_residual() > 0.1


def test_flow_needs_strict_convexity():
    square = ConvexBody.polytope(np.array([[x, y, 1.0] for x in (-1, 1) for y in (-1, 1)]))
    with pytest.raises(NotStrictlyConvex):
        geodesic_flow(square, UnitTangent([0, 0, 1.0], [1, 0]), 1.0)
    with pytest.raises(NotInterior):
        geodesic_flow(disk(), UnitTangent([2, 0, 1.0], [1, 0]), 1.0)


def test_recenter_failure_reported():
    s = word_ball([np.eye(3)], 1)
    far = geodesic_flow(disk(), UnitTangent([0, 0, 1.0], [1, 0]), 9.0).base
    with pytest.raises(RecenterFailure):
        recenter(disk(), s, far, np.array([0, 0, 1.0]), bound=1.0)


def test_contraction_audit_small():
    f = fixture("klein_238")
    s = word_ball(f.generators, 5)
    body = disk()
    audit = contraction_audit(body, s, random_tangents(body, 4, np.random.default_rng(0)), range(6))
    assert audit.passed
    zero_rows = [r for r in audit.rows if r[1] == 0]
    assert all(r[3] == 0.0 for r in zero_rows)
    assert max(audit.slopes["minus"]) <= -0.5
    assert max(abs(x) for x in audit.slopes["zero"]) <= 0.1
    assert audit.to_csv().startswith("u_index,t,space,log_norm\n")
