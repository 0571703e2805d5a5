import math

import numpy as np
import pytest

from leakywire import curves as cv
from leakywire.errors import DegenerateCurveError, DomainError


def _speed(curve, s, h=1e-6):
    return np.linalg.norm(curve.point(s + h) - curve.point(s - h), axis=-1) / (2 * h)


@pytest.mark.parametrize("make", [
    lambda: cv.circle(1.7),
    lambda: cv.parabola(0.8, T=20),
    lambda: cv.circular_arc(2.0, 2.0),
    lambda: cv.spinode(),
    lambda: cv.cusp_family(2, 5),
])
def test_unit_speed(make):
    c = make()
    s = np.linspace(c.s_min + 0.01 * c.length, c.s_max - 0.01 * c.length, 37)
    s = s[np.abs(s - np.array(c.cusps or [np.inf])[:, None]).min(axis=0) > 1e-3]
    assert np.allclose(_speed(c, s), 1.0, atol=1e-7)


def test_circle_geometry():
    c = cv.circle(2.0, center=(1.0, -1.0))
    assert c.kind == cv.LOOP
    assert c.length == pytest.approx(4 * math.pi)
    p = c.point(np.linspace(0, c.length, 50))
    assert np.allclose(np.hypot(p[:, 0] - 1, p[:, 1] + 1), 2.0)
    # loops wrap around
    assert np.allclose(c.point(c.s_min + 0.3), c.point(c.s_min + 0.3 + c.length))
    assert c.geodesic(0.1, c.length - 0.1) == pytest.approx(0.2)


def test_line_and_segment():
    ln = cv.line(10.0, origin=(1, 2), direction=math.pi / 2)
    assert ln.kind == cv.INFINITE and ln.straight
    assert np.allclose(ln.point(3.0), [1, 5])
    with pytest.raises(DomainError):
        ln.point(10.5)
    sg = cv.segment((0, 0), 0.0, 2.0)
    assert sg.length == pytest.approx(2.0) and sg.kind == cv.SEGMENT


def test_angle_corner_and_symmetry():
    beta = math.pi / 3
    a = cv.angle(beta, T=5)
    assert a.corners == [(0.0, beta)] or a.corners == ((0.0, beta),)
    p, q = a.point(2.0), a.point(-2.0)
    assert np.allclose([p[0], p[1]], [-q[0], q[1]])
    cos_between = p @ q / (np.linalg.norm(p) * np.linalg.norm(q))
    assert cos_between == pytest.approx(math.cos(beta))
    assert cv.angle(math.pi).straight


def test_tangent_one_sided_at_corner():
    a = cv.angle(math.pi / 2, T=5)
    left, right = a.tangent(0.0, -1), a.tangent(0.0, 1)
    assert left @ right == pytest.approx(math.cos(math.pi / 2), abs=1e-12)


def test_cusp_family_validation():
    with pytest.raises(DomainError):
        cv.cusp_family(3, 2)
    with pytest.raises(DomainError):
        cv.cusp_family(0, 1)
    assert cv.spinode().name == "spinode"
    assert cv.rhamphoid().name == "rhamphoid"
    assert cv.spinode().cusps


def test_polyline_corners():
    c = cv.polyline([[0, 0], [1, 0], [1, 1]])
    assert c.length == pytest.approx(2.0)
    assert len(c.corners) == 1
    s, beta = c.corners[0]
    assert s == pytest.approx(1.0) and beta == pytest.approx(math.pi / 2)
    sq = cv.polyline([[0, 0], [1, 0], [1, 1], [0, 1]], closed=True)
    assert sq.kind == cv.LOOP and len(sq.corners) == 4 and sq.length == pytest.approx(4.0)


def test_sampled_loop_matches_circle():
    t = np.linspace(0, 2 * math.pi, 257)
    c = cv.sampled(t, np.cos(t), np.sin(t), kind=cv.LOOP)
    assert c.length == pytest.approx(2 * math.pi, rel=1e-7)
    with pytest.raises(DomainError):
        cv.sampled(t[:-1], np.cos(t[:-1]), np.sin(t[:-1]), kind=cv.LOOP)


def test_sampled_rejects_unsorted():
    with pytest.raises(DomainError):
        cv.sampled([0, 2, 1], [0, 1, 2], [0, 0, 0])


def test_degenerate_raw_curve():
    # speed vanishes on a whole interval
    with pytest.raises((DegenerateCurveError, DomainError)):
        cv.from_raw(lambda t: np.stack([0 * t, 0 * t], -1), lambda t: np.stack([0 * t, 0 * t], -1),
                    0.0, 1.0)


def test_restrict_and_chain():
    c = cv.circle(1.0)
    piece = c.restrict(0.0, math.pi)
    assert piece.kind == cv.SEGMENT and piece.length == pytest.approx(math.pi)
    joined = cv.chain([cv.segment((0, 0), 0.0, 1.0), cv.segment((1, 0), math.pi / 2, 1.0)],
                      kind=cv.SEGMENT)
    assert joined.length == pytest.approx(2.0)
    assert len(joined.corners) == 1
    assert joined.corners[0][1] == pytest.approx(math.pi / 2)


def test_restricted_angle_arm_is_straight():
    a = cv.angle(math.pi / 3, T=5)
    assert a.restrict(0.0, 5.0).straight


def test_builtin_lookup():
    assert cv.builtin("circle", R=2.0).length == pytest.approx(4 * math.pi)
    with pytest.raises(DomainError):
        cv.builtin("nonesuch")


def test_samples_exclude_loop_endpoint():
    s, p = cv.circle(1.0).samples(64)
    assert len(s) == 64 and not np.allclose(p[0], p[-1])
