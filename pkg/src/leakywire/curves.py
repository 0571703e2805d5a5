"""Planar curves parametrized by arc length.

Every :class:`Curve` is evaluated through its arc-length parameter ``s``.
Curves given through a non-unit-speed parametrization (the cusp family,
parabolas, sampled CSV data) carry a :class:`RawParametrization` that maps
between the raw parameter ``t`` and ``s``; cusp detection works on the raw
parameter because the arc-length speed is identically one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .constants import TRUNCATION_T
from .errors import DegenerateCurveError, DomainError

LOOP = "loop"
INFINITE = "infinite"
SEGMENT = "segment"
KINDS = (LOOP, INFINITE, SEGMENT)

_GL_T, _GL_W = np.polynomial.legendre.leggauss(12)


def _rot90(v):
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


class RawParametrization:
    """Arc-length map for a curve given as ``t -> func(t)`` with derivative ``deriv``.

    The arc-length origin sits at ``t = 0`` when zero lies in the parameter
    range, otherwise at the start of the range.  ``breaks`` are parameters
    where the speed is not smooth (cusps); table panels never straddle them.
    """

    def __init__(self, func, deriv, t_lo, t_hi, breaks=(), known_cusps=(), panels=2048):
        if not (np.isfinite(t_lo) and np.isfinite(t_hi) and t_hi > t_lo):
            raise DegenerateCurveError("raw parameter range must be finite and non-empty")
        self.func = func
        self.deriv = deriv
        self.t_lo = float(t_lo)
        self.t_hi = float(t_hi)
        self.known_cusps = tuple(float(t) for t in known_cusps)
        self.breaks = tuple(sorted(float(b) for b in breaks if t_lo < b < t_hi))
        knots, cum = self._table(panels)
        _, cum2 = self._table(2 * panels)
        total, total2 = cum[-1], cum2[-1]
        if not (np.isfinite(total) and total > 0):
            raise DegenerateCurveError("curve has zero or non-finite length")
        if abs(total - total2) > 1e-9 * total:
            raise DegenerateCurveError(
                f"arc-length integral did not converge ({total!r} vs {total2!r})")
        t_ref = 0.0 if self.t_lo <= 0.0 <= self.t_hi else self.t_lo
        k = min(int(np.searchsorted(knots, t_ref, side="right")) - 1, len(knots) - 2)
        offset = cum[k] + float(self._partial(knots[k], t_ref)[0])
        self.knots = knots
        self.s_knots = cum - offset
        self.s_lo = float(self.s_knots[0])
        self.s_hi = float(self.s_knots[-1])

    def _table(self, panels):
        knots = np.union1d(np.linspace(self.t_lo, self.t_hi, panels + 1), self.breaks)
        a, b = knots[:-1], knots[1:]
        t = 0.5 * (b - a)[:, None] * _GL_T[None, :] + 0.5 * (a + b)[:, None]
        speed = np.linalg.norm(self.deriv(t.ravel()), axis=-1).reshape(t.shape)
        seg = 0.5 * (b - a) * (speed @ _GL_W)
        return knots, np.concatenate([[0.0], np.cumsum(seg)])

    def speed(self, t):
        return np.linalg.norm(self.deriv(np.asarray(t, dtype=float)), axis=-1)

    def s_of_t(self, t):
        t = np.asarray(t, dtype=float)
        k = np.clip(np.searchsorted(self.knots, t, side="right") - 1, 0, len(self.knots) - 2)
        return (self.s_knots[k] + self._partial(self.knots[k], t).reshape(t.shape))

    def _partial(self, a, t):
        a = np.atleast_1d(a)
        t = np.atleast_1d(t)
        nodes = 0.5 * (t - a)[:, None] * _GL_T[None, :] + 0.5 * (t + a)[:, None]
        sp = np.linalg.norm(self.deriv(nodes.ravel()), axis=-1).reshape(nodes.shape)
        return 0.5 * (t - a) * (sp @ _GL_W)

    def t_of_s(self, s):
        """Invert the arc-length map with a bracketed Newton iteration."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = np.clip(np.searchsorted(self.s_knots, s, side="right") - 1, 0, len(self.knots) - 2)
        lo, hi = self.knots[k].copy(), self.knots[k + 1].copy()
        s0, s1 = self.s_knots[k], self.s_knots[k + 1]
        frac = np.where(s1 > s0, (s - s0) / np.where(s1 > s0, s1 - s0, 1.0), 0.0)
        t = lo + np.clip(frac, 0.0, 1.0) * (hi - lo)
        base = self.knots[k]
        scale = max(abs(self.s_hi - self.s_lo), 1.0)
        for _ in range(60):
            f = s0 + self._partial(base, t) - s
            lo = np.where(f < 0, t, lo)
            hi = np.where(f > 0, t, hi)
            sp = self.speed(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = t - f / sp
            bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
            t_new = np.where(bad, 0.5 * (lo + hi), step)
            done = np.abs(f) <= 1e-15 * scale
            t = np.where(done, t, t_new)
            if np.all(done) or np.all(np.abs(hi - lo) <= 1e-15 * (np.abs(t) + 1.0)):
                break
        return t


@dataclass(eq=False)
class Curve:
    """A planar curve evaluated by arc length on ``[s_min, s_max]``.

    ``corners`` holds ``(s, beta)`` pairs, ``beta`` being the interior angle
    at a tangent discontinuity.  ``cusps`` holds arc-length positions of
    known cusps.  Infinite curves are stored truncated to ``[-T, T]``-like
    ranges; ``kind`` records what the curve models.
    """

    kind: str
    s_min: float
    s_max: float
    func: Callable = field(repr=False)
    tangent_func: Callable = field(repr=False)
    corners: tuple = ()
    cusps: tuple = ()
    source: dict = field(default_factory=dict)
    raw: RawParametrization | None = field(default=None, repr=False)
    raw_range: tuple | None = None
    straight: bool = False
    name: str = "curve"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown curve kind {self.kind!r}")
        if not (self.s_max > self.s_min) or not math.isfinite(self.s_max - self.s_min):
            raise DegenerateCurveError("curve has zero or non-finite length")

    @property
    def length(self) -> float:
        return self.s_max - self.s_min

    @property
    def truncation(self) -> float:
        """Half-length of the stored window (the ``T`` of a truncated infinite curve)."""
        return 0.5 * self.length

    def _check(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == LOOP:
            return self.s_min + np.mod(s - self.s_min, self.length)
        tol = 1e-12 * max(self.length, 1.0)
        if np.any(s < self.s_min - tol) or np.any(s > self.s_max + tol):
            raise DomainError(f"arc parameter outside [{self.s_min}, {self.s_max}]")
        return np.clip(s, self.s_min, self.s_max)

    def point(self, s):
        s = self._check(s)
        return self.func(s)

    def tangent(self, s, side: int = 1):
        """Unit tangent; ``side=-1`` takes the left limit at corners and cusps."""
        s = self._check(s)
        return self.tangent_func(s, side)

    def geodesic(self, s, s2):
        d = np.abs(np.asarray(s, dtype=float) - np.asarray(s2, dtype=float))
        if self.kind == LOOP:
            d = np.mod(d, self.length)
            d = np.minimum(d, self.length - d)
        return d

    def t_of_s(self, s):
        if self.raw is None:
            return np.asarray(s, dtype=float)
        return self.raw.t_of_s(s)

    def s_of_t(self, t):
        if self.raw is None:
            return np.asarray(t, dtype=float)
        return self.raw.s_of_t(t)

    def restrict(self, a: float, b: float, name: str | None = None) -> "Curve":
        """Sub-curve on ``[a, b]`` as an open segment (loops may wrap, b > s_max)."""
        if not b > a:
            raise DomainError("restrict needs a < b")
        if self.kind != LOOP:
            self._check([a, b])
        elif b - a > self.length * (1 + 1e-12):
            raise DomainError("restricted range longer than the loop")
        corners = tuple((s, beta) for s, beta in _unwrapped_corners(self, a, b) if a < s < b)
        cusps = tuple(s for s in _unwrapped(self, self.cusps, a, b) if a < s < b)
        raw_range = None
        if self.raw is not None:
            ta, tb = self.raw.t_of_s([a, b])
            raw_range = (float(ta), float(tb))
        straight = self.straight
        if not straight and self.raw is None and not corners:
            # a corner-free piece of a piecewise-straight curve is recognised here
            p = self.point(np.linspace(a, b, 65))
            d = p[-1] - p[0]
            dev = np.abs(d[0] * (p[:, 1] - p[0, 1]) - d[1] * (p[:, 0] - p[0, 0]))
            straight = bool(dev.max() <= 1e-13 * (b - a) ** 2)
        return Curve(SEGMENT, a, b, self.func if self.kind != LOOP else self.point,
                     self.tangent_func if self.kind != LOOP else self.tangent,
                     corners=corners, cusps=cusps,
                     source={"restricted_from": self.source, "range": [a, b]},
                     raw=self.raw, raw_range=raw_range, straight=straight,
                     name=name or f"{self.name}[{a:.6g},{b:.6g}]")

    def samples(self, n: int):
        """``n`` arc-length-uniform parameters and points (loops omit the endpoint)."""
        if self.kind == LOOP:
            s = self.s_min + self.length * np.arange(n) / n
        else:
            s = np.linspace(self.s_min, self.s_max, n)
        return s, self.point(s)


def _unwrapped(curve, values, a, b):
    if curve.kind != LOOP:
        return list(values)
    out = []
    for v in values:
        for shift in (-curve.length, 0.0, curve.length):
            out.append(v + shift)
    return out


def _unwrapped_corners(curve, a, b):
    if curve.kind != LOOP:
        return list(curve.corners)
    return [(s + sh, beta) for s, beta in curve.corners
            for sh in (-curve.length, 0.0, curve.length)]


# ---------------------------------------------------------------------------
# builtin catalogue


def line(T: float = TRUNCATION_T, origin=(0.0, 0.0), direction: float = 0.0) -> Curve:
    """Straight line through ``origin`` at angle ``direction``, truncated to [-T, T]."""
    o = np.asarray(origin, dtype=float)
    d = np.array([math.cos(direction), math.sin(direction)])

    def func(s):
        s = np.asarray(s, dtype=float)
        return o + s[..., None] * d

    def tan(s, side=1):
        return np.broadcast_to(d, np.shape(s) + (2,)).copy()

    return Curve(INFINITE, -T, T, func, tan, source={"builtin": "line", "params": {
        "T": T, "origin": list(o), "direction": direction}}, straight=True, name="line")


def segment(start, direction: float, length: float, kind: str = SEGMENT, name="segment") -> Curve:
    """Straight segment from ``start`` of the given length; ``kind`` may mark a
    truncated half-line as infinite."""
    o = np.asarray(start, dtype=float)
    d = np.array([math.cos(direction), math.sin(direction)])

    def func(s):
        s = np.asarray(s, dtype=float)
        return o + s[..., None] * d

    def tan(s, side=1):
        return np.broadcast_to(d, np.shape(s) + (2,)).copy()

    return Curve(kind, 0.0, float(length), func, tan, source={"builtin": "segment", "params": {
        "start": list(o), "direction": direction, "length": length}}, straight=True, name=name)


def angle(beta: float, T: float = TRUNCATION_T) -> Curve:
    """Two half-lines meeting at the origin with interior angle ``beta``.

    ``s < 0`` runs along the left ray, ``s > 0`` along the right ray, so the
    points at ``-a`` and ``a`` are mirror images across the bisector.
    """
    if not 0 < beta <= math.pi:
        raise DomainError("angle needs 0 < beta <= pi")
    half = 0.5 * beta
    right = np.array([math.sin(half), math.cos(half)])
    left = np.array([-math.sin(half), math.cos(half)])

    def func(s):
        s = np.asarray(s, dtype=float)
        return np.where(s[..., None] >= 0, s[..., None] * right, -s[..., None] * left)

    def tan(s, side=1):
        s = np.asarray(s, dtype=float)
        on_right = (s > 0) | ((s == 0) & (side > 0))
        return np.where(on_right[..., None], right, -left)

    corners = ((0.0, float(beta)),) if beta < math.pi else ()
    return Curve(INFINITE, -T, T, func, tan, corners=corners,
                 source={"builtin": "angle", "params": {"beta": beta, "T": T}},
                 straight=beta == math.pi, name=f"angle({beta:.6g})")


def circle(R: float = 1.0, center=(0.0, 0.0)) -> Curve:
    if not R > 0:
        raise DomainError("circle radius must be positive")
    c = np.asarray(center, dtype=float)

    def func(s):
        th = np.asarray(s, dtype=float) / R
        return c + R * np.stack([np.cos(th), np.sin(th)], axis=-1)

    def tan(s, side=1):
        th = np.asarray(s, dtype=float) / R
        return np.stack([-np.sin(th), np.cos(th)], axis=-1)

    return Curve(LOOP, 0.0, 2 * math.pi * R, func, tan,
                 source={"builtin": "circle", "params": {"R": R}}, name=f"circle({R:g})")


def circular_arc(R: float = 1.0, sweep: float = math.pi, start_angle: float = 0.0) -> Curve:
    if not (R > 0 and 0 < sweep < 2 * math.pi):
        raise DomainError("circular_arc needs R > 0 and 0 < sweep < 2 pi")

    def func(s):
        th = start_angle + np.asarray(s, dtype=float) / R
        return R * np.stack([np.cos(th), np.sin(th)], axis=-1)

    def tan(s, side=1):
        th = start_angle + np.asarray(s, dtype=float) / R
        return np.stack([-np.sin(th), np.cos(th)], axis=-1)

    return Curve(SEGMENT, 0.0, R * sweep, func, tan, source={"builtin": "circular_arc", "params": {
        "R": R, "sweep": sweep, "start_angle": start_angle}}, name="circular_arc")


def from_raw(func, deriv, t_lo, t_hi, kind=SEGMENT, breaks=(), known_cusps=(),
             source=None, name="raw") -> Curve:
    """Build an arc-length curve from a raw parametrization ``t -> (x, y)``."""
    raw = RawParametrization(func, deriv, t_lo, t_hi, breaks=breaks, known_cusps=known_cusps)

    def f(s):
        s = np.asarray(s, dtype=float)
        return func(raw.t_of_s(s.ravel())).reshape(s.shape + (2,))

    def tan(s, side=1):
        s = np.asarray(s, dtype=float)
        t = raw.t_of_s(s.ravel())
        v = deriv(t)
        sp = np.linalg.norm(v, axis=-1)
        tiny = sp < 1e-12 * max(1.0, float(np.max(sp, initial=1.0)))
        if np.any(tiny):
            eta = 1e-9 * (raw.t_hi - raw.t_lo)
            v[tiny] = deriv(np.clip(t[tiny] + side * eta, raw.t_lo, raw.t_hi))
        return _unit(v).reshape(s.shape + (2,))

    cusps = tuple(float(raw.s_of_t(t)) for t in known_cusps)
    return Curve(kind, raw.s_lo, raw.s_hi, f, tan, cusps=cusps, source=source or {},
                 raw=raw, raw_range=(raw.t_lo, raw.t_hi), name=name)


def cusp_family(n: int, m: int, t_max: float = 1.0) -> Curve:
    """The rational curve ``(t^(2n), t^(2m+1))`` on ``[-t_max, t_max]``; cusp at t = 0."""
    if not (int(n) == n and int(m) == m and m >= n >= 1):
        raise DomainError("cusp_family requires integers m >= n >= 1")
    n, m = int(n), int(m)

    def func(t):
        t = np.asarray(t, dtype=float)
        return np.stack([t ** (2 * n), t ** (2 * m + 1)], axis=-1)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return np.stack([2 * n * t ** (2 * n - 1), (2 * m + 1) * t ** (2 * m)], axis=-1)

    names = {(1, 1): "spinode", (1, 2): "rhamphoid"}
    name = names.get((n, m), f"cusp_family({n},{m})")
    return from_raw(func, deriv, -t_max, t_max, SEGMENT, breaks=(0.0,), known_cusps=(0.0,),
                    source={"builtin": "cusp_family", "params": {"n": n, "m": m, "t_max": t_max}},
                    name=name)


def spinode(t_max: float = 1.0) -> Curve:
    return cusp_family(1, 1, t_max)


def rhamphoid(t_max: float = 1.0) -> Curve:
    return cusp_family(1, 2, t_max)


def parabola(a: float = 1.0, T: float = TRUNCATION_T) -> Curve:
    """``y = a x^2`` truncated to arc-length window [-T, T] around the vertex."""
    def arc(t):
        u = 2 * a * t
        return (u * math.sqrt(1 + u * u) + math.asinh(u)) / (4 * a)

    t_hi = brentq(lambda t: arc(t) - T, 0.0, T)

    def func(t):
        t = np.asarray(t, dtype=float)
        return np.stack([t, a * t * t], axis=-1)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.ones_like(t), 2 * a * t], axis=-1)

    return from_raw(func, deriv, -t_hi, t_hi, INFINITE,
                    source={"builtin": "parabola", "params": {"a": a, "T": T}}, name="parabola")


def polyline(points, closed: bool = False, kind: str | None = None) -> Curve:
    """Piecewise-linear curve through ``points``; interior vertices become corners."""
    P = np.asarray(points, dtype=float)
    if closed and np.allclose(P[0], P[-1]):
        P = P[:-1]
    verts = np.vstack([P, P[:1]]) if closed else P
    seg = np.diff(verts, axis=0)
    seglen = np.linalg.norm(seg, axis=1)
    if len(verts) < 2 or np.any(seglen <= 0):
        raise DegenerateCurveError("polyline needs at least two distinct consecutive points")
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    dirs = seg / seglen[:, None]

    def locate(s, side):
        k = np.searchsorted(cum, s, side="right" if side > 0 else "left") - 1
        return np.clip(k, 0, len(seglen) - 1)

    def func(s):
        s = np.asarray(s, dtype=float)
        k = locate(s, 1)
        return verts[k] + (s - cum[k])[..., None] * dirs[k]

    def tan(s, side=1):
        s = np.asarray(s, dtype=float)
        return dirs[locate(s, side)]

    corners = []
    n_seg = len(seglen)
    joints = range(1, n_seg) if not closed else range(n_seg)
    for j in joints:
        d_in, d_out = dirs[j - 1], dirs[j % n_seg]
        turn = math.atan2(d_in[0] * d_out[1] - d_in[1] * d_out[0], float(d_in @ d_out))
        if abs(turn) > 1e-12:
            corners.append((float(cum[j % n_seg]) if j else 0.0, math.pi - abs(turn)))
    kind = kind or (LOOP if closed else SEGMENT)
    return Curve(kind, 0.0, float(cum[-1]), func, tan, corners=tuple(sorted(corners)),
                 source={"polyline": P.tolist(), "closed": closed},
                 straight=len(corners) == 0 and not closed, name="polyline")


def sampled(t, x, y, kind: str = SEGMENT) -> Curve:
    """Curve through sampled ``(t, x, y)`` rows, interpolated by cubic splines in t."""
    t = np.asarray(t, dtype=float)
    if np.any(np.diff(t) <= 0):
        raise DomainError("sampled curve needs strictly increasing t")
    pts = np.stack([np.asarray(x, float), np.asarray(y, float)], axis=-1)
    if kind == LOOP:
        if not np.allclose(pts[0], pts[-1], atol=1e-9):
            raise DomainError("loop samples must end where they start")
        pts[-1] = pts[0]
        spline = CubicSpline(t, pts, bc_type="periodic")
    else:
        spline = CubicSpline(t, pts)
    dspline = spline.derivative()
    src = {"sampled": {"t": t.tolist(), "x": pts[:, 0].tolist(), "y": pts[:, 1].tolist()}}
    curve = from_raw(lambda u: spline(u), lambda u: dspline(u), t[0], t[-1],
                     SEGMENT if kind == LOOP else kind, source=src, name="sampled")
    if kind == LOOP:
        curve.kind = LOOP
        curve.s_max = curve.s_min + curve.length
    return curve


BUILTINS = {
    "line": line,
    "angle": angle,
    "circle": circle,
    "circular_arc": circular_arc,
    "cusp_family": cusp_family,
    "spinode": spinode,
    "rhamphoid": rhamphoid,
    "parabola": parabola,
    "segment": segment,
}


def builtin(name: str, **params) -> Curve:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise DomainError(f"unknown builtin curve {name!r}; choose from {sorted(BUILTINS)}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# composite curves


def _arc_from(A, T, B):
    """Circular arc leaving ``A`` with unit tangent ``T`` and ending at ``B``."""
    chord = B - A
    Lc = float(np.linalg.norm(chord))
    if Lc == 0:
        raise DegenerateCurveError("arc endpoints coincide")
    theta = math.atan2(T[0] * chord[1] - T[1] * chord[0], float(T @ chord))
    if abs(theta) > math.pi - 1e-9:
        raise DegenerateCurveError("arc would have to turn back on itself")
    k = 2 * math.sin(theta) / Lc
    length = Lc if abs(theta) < 1e-14 else Lc * theta / math.sin(theta)
    N = _rot90(T)

    def func(s):
        s = np.asarray(s, dtype=float)
        ks = k * s
        # sin(ks)/k and (1 - cos(ks))/k without dividing by a small k
        a = s * np.sinc(ks / math.pi)
        b = s * 0.5 * ks * np.sinc(ks / (2 * math.pi)) ** 2
        return A + a[..., None] * T + b[..., None] * N

    def tan(s, side=1):
        ks = k * np.asarray(s, dtype=float)
        return np.cos(ks)[..., None] * T + np.sin(ks)[..., None] * N

    return Curve(SEGMENT, 0.0, length, func, tan, source={"arc": {"k": k}}, name="arc")


def ray(start, direction_vec, length) -> Curve:
    d = _unit(np.asarray(direction_vec, dtype=float))
    return segment(start, math.atan2(d[1], d[0]), length, name="ray")


def chain(parts: Sequence[Curve], kind: str, name: str = "chain", source=None) -> Curve:
    """Join curves end to start into one arc-length curve.

    Joints with a tangent jump are recorded as corners.  For ``kind='loop'``
    the end of the last part must meet the start of the first.
    """
    parts = list(parts)
    lengths = np.array([p.length for p in parts])
    breaks = np.concatenate([[0.0], np.cumsum(lengths)])
    offsets = [p.s_min for p in parts]
    total = float(breaks[-1])

    def locate(s, side):
        k = np.searchsorted(breaks, s, side="right" if side > 0 else "left") - 1
        return np.clip(k, 0, len(parts) - 1)

    def func(s):
        s = np.asarray(s, dtype=float)
        k = locate(s, 1)
        out = np.empty(s.shape + (2,))
        for j, p in enumerate(parts):
            m = k == j
            if np.any(m):
                out[m] = p.func(np.clip(offsets[j] + s[m] - breaks[j], p.s_min, p.s_max))
        return out

    def tan(s, side=1):
        s = np.asarray(s, dtype=float)
        k = locate(s, side)
        out = np.empty(s.shape + (2,))
        for j, p in enumerate(parts):
            m = k == j
            if np.any(m):
                out[m] = p.tangent_func(np.clip(offsets[j] + s[m] - breaks[j], p.s_min, p.s_max), side)
        return out

    corners = []
    for j, p in enumerate(parts):
        corners += [(float(breaks[j] + s - offsets[j]), beta) for s, beta in p.corners]
    joints = list(range(1, len(parts))) + ([0] if kind == LOOP else [])
    for j in joints:
        prev, nxt = parts[j - 1], parts[j]
        if np.linalg.norm(prev.point(prev.s_max) - nxt.point(nxt.s_min)) > 1e-8 * max(total, 1.0):
            raise DegenerateCurveError("chained parts do not meet")
        d_in = prev.tangent(prev.s_max, -1)
        d_out = nxt.tangent(nxt.s_min, 1)
        turn = math.atan2(d_in[0] * d_out[1] - d_in[1] * d_out[0], float(d_in @ d_out))
        if abs(turn) > 1e-9:
            corners.append((float(breaks[j]), math.pi - abs(turn)))
    cusps = []
    for j, p in enumerate(parts):
        cusps += [float(breaks[j] + s - offsets[j]) for s in p.cusps]
    straight = all(p.straight for p in parts) and not corners and kind != LOOP
    return Curve(kind, 0.0, total, func, tan, corners=tuple(sorted(corners)),
                 cusps=tuple(cusps), source=source or {"chain": [p.source for p in parts]},
                 straight=straight, name=name)
