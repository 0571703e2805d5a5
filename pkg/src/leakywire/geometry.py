"""Geometric quantities of a curve that the spectral bounds depend on.

The central one is the chord-arc constant

    c(curve) = inf over pairs of |gamma(s) - gamma(s')| / dist_curve(s, s'),

estimated by a coarse pair grid followed by local refinement around the
running minimizer.  Pairs closer than a diagonal floor are skipped and the
diagonal limit is filled in analytically: 1 at smooth points, sin(beta/2) at
a corner of interior angle beta.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit, minimize_scalar

from . import constants as C
from .curves import INFINITE, LOOP, SEGMENT, Curve, _arc_from, chain, ray
from .errors import DegenerateCurveError, DomainError, ExtensionError

log = logging.getLogger(__name__)


@dataclass
class ArcSamples:
    curve: Curve
    s: np.ndarray
    points: np.ndarray

    @property
    def spacing(self) -> np.ndarray:
        return np.diff(self.s)


def arc_length_reparametrize(curve: Curve, n: int) -> ArcSamples:
    """Sample ``curve`` at ``n`` nodes equally spaced in arc length.

    Loops get spacing ``L/n`` (the endpoint is not repeated); open and
    truncated curves get ``n`` intervals' worth of nodes including both ends,
    i.e. spacing ``length/n`` with ``n + 1`` points.
    """
    if n < 8:
        raise DomainError("arc_length_reparametrize needs n >= 8")
    if not math.isfinite(curve.length) or curve.length <= 0:
        raise DegenerateCurveError("curve has no finite positive length")
    if curve.kind == LOOP:
        s = curve.s_min + curve.length * np.arange(n) / n
    else:
        s = curve.s_min + curve.length * np.arange(n + 1) / n
    pts = curve.point(s)
    if not np.all(np.isfinite(pts)):
        raise DegenerateCurveError("curve evaluation produced non-finite points")
    return ArcSamples(curve, s, pts)


def geodesic_distance(curve: Curve, s, s2):
    """Distance along the curve; the shorter way round on loops."""
    for v in (s, s2):
        v = np.asarray(v, dtype=float)
        tol = 1e-12 * max(curve.length, 1.0)
        if np.any(v < curve.s_min - tol) or np.any(v > curve.s_max + tol):
            raise DomainError("arc parameter outside the curve's domain")
    return curve.geodesic(s, s2)


# ---------------------------------------------------------------------------
# chord-arc constant


@dataclass
class ChordArcResult:
    c: float
    argmin: tuple
    level_estimates: list = field(default_factory=list)
    cusp: bool = False
    self_intersection: bool = False
    limit: str = "pair"          # "pair", "corner", "smooth" or "exact"

    @property
    def effective_c(self) -> float:
        """The constant to feed into bounds: zero when a cusp or crossing was found."""
        return 0.0 if (self.cusp or self.self_intersection) else self.c


def _ratio_field(curve, s1, s2, floor):
    P1 = curve.point(s1)
    P2 = curve.point(s2)
    chord = np.hypot(P1[:, None, 0] - P2[None, :, 0], P1[:, None, 1] - P2[None, :, 1])
    geo = curve.geodesic(s1[:, None], s2[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(geo >= floor, chord / geo, np.inf)
    return ratio, chord, geo


def _polyline_crosses(points, closed):
    """True if any two non-adjacent segments of the polyline properly cross."""
    P = np.vstack([points, points[:1]]) if closed else points
    a, b = P[:-1], P[1:]
    m = len(a)
    if m < 3:
        return False

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - \
               (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    A, B = a[:, None], b[:, None]
    Cc, D = a[None, :], b[None, :]
    # orientation tests with a dead band so collinear samples never count as crossing
    tol = 1e-12 * float(np.ptp(points, axis=0).max()) ** 2

    def sgn(o):
        return np.where(np.abs(o) <= tol, 0.0, np.sign(o))

    o1, o2 = sgn(orient(A, B, Cc)), sgn(orient(A, B, D))
    o3, o4 = sgn(orient(Cc, D, A)), sgn(orient(Cc, D, B))
    cross = (o1 * o2 < 0) & (o3 * o4 < 0)
    i, j = np.indices((m, m))
    adjacent = np.abs(i - j) <= 1
    if closed:
        adjacent |= np.abs(i - j) == m - 1
    return bool(np.any(cross & ~adjacent & (i < j)))


def chord_arc_constant(curve: Curve, m: int = C.CHORD_GRID, levels: int = C.REFINE_LEVELS,
                       diag_floor: float = C.DIAG_FLOOR, window_points: int = 33) -> ChordArcResult:
    """Estimate c(curve) by grid search plus ``levels`` rounds of local refinement.

    Each refinement round lays a ``window_points`` x ``window_points`` grid on a
    window around the running argmin pair; window half-widths start at a
    quarter of the coarse spacing and halve every round.
    """
    if m < 16:
        raise DomainError("chord_arc_constant needs m >= 16")
    L = curve.length
    if curve.straight:
        mid = 0.5 * (curve.s_min + curve.s_max)
        return ChordArcResult(1.0, (mid, mid), [1.0] * (levels + 1), limit="exact")
    floor = diag_floor * L
    s0, pts0 = curve.samples(m)
    ratio, chord, geo = _ratio_field(curve, s0, s0, floor)
    crossing = _polyline_crosses(pts0, curve.kind == LOOP)
    touching = bool(np.any((chord < C.SELF_INTERSECTION_CHORD) &
                           (geo > C.SELF_INTERSECTION_SEPARATION * L)))

    limits = [(1.0, "smooth", (s0[0], s0[0]))]
    limits += [(math.sin(0.5 * beta), "corner", (s, s)) for s, beta in curve.corners]
    lim_val, lim_kind, lim_arg = min(limits, key=lambda t: t[0])

    k = int(np.argmin(ratio))
    i, j = divmod(k, m)
    best = float(ratio[i, j])
    arg = (float(s0[i]), float(s0[j]))
    h0 = L / m
    estimates = [min(best, lim_val)]
    for lev in range(1, levels + 1):
        w = h0 * 0.5 ** (lev + 1)
        off = np.linspace(-w, w, window_points)
        a1, a2 = arg[0] + off, arg[1] + off
        if curve.kind != LOOP:
            a1 = np.unique(np.clip(a1, curve.s_min, curve.s_max))
            a2 = np.unique(np.clip(a2, curve.s_min, curve.s_max))
        r, ch, g = _ratio_field(curve, a1, a2, floor)
        touching |= bool(np.any((ch < C.SELF_INTERSECTION_CHORD) &
                                (g > C.SELF_INTERSECTION_SEPARATION * L)))
        k = int(np.argmin(r))
        ii, jj = divmod(k, r.shape[1])
        if r[ii, jj] < best:
            best = float(r[ii, jj])
            arg = (float(a1[ii]), float(a2[jj]))
        estimates.append(min(best, lim_val))

    if lim_val <= best:
        c, arg, kind = lim_val, lim_arg, lim_kind
    else:
        c, kind = best, "pair"
    cusp = bool(detect_cusps(curve)) if curve.raw is not None else bool(curve.cusps)
    result = ChordArcResult(min(c, 1.0), arg, estimates, cusp=cusp,
                            self_intersection=crossing or touching, limit=kind)
    if result.self_intersection:
        log.info("self-intersection detected on %s; reporting c = 0", curve.name)
        result.c = 0.0
    return result


# ---------------------------------------------------------------------------
# straightness (asymptotic condition) diagnostic


def straightness_deficit(curve: Curve, s: float, s2: float) -> float:
    """``1 - |gamma(s) - gamma(s')| / |s - s'|``, clipped to [0, 1]."""
    if s == s2:
        raise DomainError("straightness_deficit needs s != s'")
    p = curve.point(np.array([s, s2], dtype=float))
    chord = float(np.hypot(*(p[0] - p[1])))
    return float(min(max(1.0 - chord / abs(s - s2), 0.0), 1.0))


@dataclass
class A2Fit:
    d: float
    mu: float
    consistent: bool
    max_deficit: float
    n_pairs: int


def fit_a2(curve: Curve, omega: float = C.A2_OMEGA, n_radii: int = 40, n_ratios: int = 9) -> A2Fit:
    """Fit ``deficit ~ d (1 + |s+s'|^(2 mu))^(-1/2)`` over the sector
    ``omega <= s/s' <= 1/omega`` and report whether ``mu > 1/2``.

    Only meaningful for infinite (truncated) curves.  A curve whose sector
    deficits all vanish is reported with ``d = 0`` and ``mu = inf``.
    """
    if not 0 < omega < 1:
        raise DomainError("omega must lie in (0, 1)")
    if curve.kind != INFINITE:
        raise DomainError("the asymptotic-straightness diagnostic applies to infinite curves")
    T = min(-curve.s_min, curve.s_max)
    radii = np.geomspace(max(1e-2 * T, 1e-3), T * omega, n_radii)
    ratios = np.geomspace(omega, 1.0 / omega, n_ratios)
    ratios = ratios[np.abs(ratios - 1) > 1e-12]
    sp, ss = [], []
    for sign in (1.0, -1.0):
        for r in radii:
            for q in ratios:
                sp.append(sign * r)
                ss.append(sign * r * q)
    sp, ss = np.array(sp), np.array(ss)
    ok = (np.abs(ss) <= T) & (np.abs(sp) <= T)
    sp, ss = sp[ok], ss[ok]
    P, Q = curve.point(ss), curve.point(sp)
    D = np.clip(1 - np.hypot(*(P - Q).T) / np.abs(ss - sp), 0.0, 1.0)
    sigma = np.abs(ss + sp)
    dmax = float(D.max(initial=0.0))
    if dmax < 1e-12:
        return A2Fit(0.0, math.inf, True, dmax, len(D))
    keep = D > 1e-14
    model = lambda x, logd, mu: logd - 0.5 * np.log1p(x ** (2 * mu))
    try:
        (logd, mu), _ = curve_fit(model, sigma[keep], np.log(D[keep]), p0=(math.log(dmax), 1.0),
                                  bounds=([-60.0, 0.0], [10.0, 10.0]))
    except RuntimeError:
        return A2Fit(dmax, 0.0, False, dmax, len(D))
    return A2Fit(float(math.exp(logd)), float(mu), bool(mu > 0.5), dmax, len(D))


# ---------------------------------------------------------------------------
# cusps


def _local_ratio(raw, t, delta):
    lo, hi = max(t - delta, raw.t_lo), min(t + delta, raw.t_hi)
    p = raw.func(np.array([lo, hi]))
    arc = float(raw.s_of_t(hi) - raw.s_of_t(lo))
    return float(np.hypot(*(p[1] - p[0]))) / arc if arc > 0 else 0.0


def detect_cusps(curve: Curve, tol: float = C.CUSP_SPEED_TOL, step: float = C.CUSP_FD_STEP,
                 n_scan: int = 4001) -> list:
    """Raw parameters where the velocity vanishes and the local chord-arc
    ratio collapses as the window shrinks.  Unit-speed curves have none."""
    raw = curve.raw
    if raw is None:
        return []
    t_lo, t_hi = curve.raw_range or (raw.t_lo, raw.t_hi)
    t_lo, t_hi = min(t_lo, t_hi), max(t_lo, t_hi)
    span = t_hi - t_lo

    def fd_speed(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        a, b = np.clip(t - step, raw.t_lo, raw.t_hi), np.clip(t + step, raw.t_lo, raw.t_hi)
        return np.linalg.norm(raw.func(b) - raw.func(a), axis=-1) / (b - a)

    grid = np.linspace(t_lo, t_hi, n_scan)
    sp = fd_speed(grid)
    cand = [k for k in range(1, n_scan - 1) if sp[k] <= sp[k - 1] and sp[k] <= sp[k + 1]]
    found = []
    for k in cand:
        if sp[k] < tol:
            t_star = float(grid[k])
        else:
            res = minimize_scalar(lambda t: float(fd_speed(t)[0]), bounds=(grid[k - 1], grid[k + 1]),
                                  method="bounded", options={"xatol": 1e-14})
            if res.fun >= tol:
                continue
            t_star = float(res.x)
        ratios = [_local_ratio(raw, t_star, f * span) for f in (1e-2, 1e-3, 1e-4)]
        if ratios[2] < ratios[1] < ratios[0] and ratios[2] < 0.1:
            for known in raw.known_cusps:
                if abs(known - t_star) < 1e-5 * span:
                    t_star = known
            if not found or abs(found[-1] - t_star) > 1e-6 * span:
                found.append(t_star)
    return found


# ---------------------------------------------------------------------------
# decompositions and extensions


@dataclass
class Piece:
    curve: Curve
    extension: Curve | None = None
    c: float | None = None


@dataclass
class Decomposition:
    parent: Curve
    pieces: list

    @property
    def N(self) -> int:
        return len(self.pieces)

    @property
    def constants(self) -> list:
        return [p.c for p in self.pieces]


def split_at(curve: Curve, params: Sequence[float]) -> Decomposition:
    """Cut the curve at increasing arc-length parameters."""
    params = [float(p) for p in params]
    if any(b <= a for a, b in zip(params, params[1:])):
        raise DomainError("split parameters must be strictly increasing")
    if any(p < curve.s_min or p > curve.s_max for p in params):
        raise DomainError("split parameter outside the curve's domain")
    if curve.kind == LOOP:
        if not params:
            raise DomainError("a loop needs at least one cut")
        cuts = params + [params[0] + curve.length]
        bounds = list(zip(cuts[:-1], cuts[1:]))
    else:
        inner = [p for p in params if curve.s_min < p < curve.s_max]
        cuts = [curve.s_min] + inner + [curve.s_max]
        bounds = list(zip(cuts[:-1], cuts[1:]))
    pieces = [Piece(curve.restrict(a, b, name=f"{curve.name}#{k}")) for k, (a, b) in enumerate(bounds)]
    return Decomposition(curve, pieces)


def _tangent_rays(piece: Curve, length: float) -> Curve:
    p0, p1 = piece.point(piece.s_min), piece.point(piece.s_max)
    t0, t1 = piece.tangent(piece.s_min, 1), piece.tangent(piece.s_max, -1)
    back = ray(p0 - length * t0, t0, length)
    front = ray(p1, t1, length)
    ext = chain([back, piece, front], INFINITE, name=f"{piece.name}+rays",
                source={"extension": "tangent_rays", "piece": piece.source, "ray_length": length})
    ext.s_min, ext.s_max = -length + piece.s_min, piece.s_max + length
    shift = piece.s_min - length
    f, tf = ext.func, ext.tangent_func
    ext.func = lambda s, f=f: f(np.asarray(s, dtype=float) - shift)
    ext.tangent_func = lambda s, side=1, tf=tf: tf(np.asarray(s, dtype=float) - shift, side)
    ext.corners = tuple((s + shift, b) for s, b in ext.corners)
    ext.cusps = tuple(s + shift for s in ext.cusps)
    return ext


def _close_loop(piece: Curve) -> Curve:
    p0, p1 = piece.point(piece.s_min), piece.point(piece.s_max)
    t0, t1 = piece.tangent(piece.s_min, 1), piece.tangent(piece.s_max, -1)
    w = p1 - p0
    tt = t1 + t0
    a = float(tt @ tt) - 4.0
    b = float(w @ tt)
    cc = float(w @ w)
    if abs(a) < 1e-12:
        if b >= 0:
            raise ExtensionError("cannot close the piece with a biarc", piece=piece.name)
        d = -cc / (2 * b)
    else:
        d = (-b - math.sqrt(b * b - a * cc)) / a
    q1, q0 = p1 + d * t1, p0 - d * t0
    joint = 0.5 * (q1 + q0)
    arc1 = _arc_from(p1, t1, joint)
    tj = arc1.tangent(arc1.s_max)
    arc2 = _arc_from(joint, tj, p0)
    return chain([piece, arc1, arc2], LOOP, name=f"{piece.name}+loop",
                 source={"extension": "close_loop", "piece": piece.source})


def extend_piece(piece: Curve, strategy="tangent_rays", ray_length: float = C.TRUNCATION_T,
                 floor: float = C.EXTENSION_C_FLOOR, **chord_kw):
    """Extend ``piece`` to a curve with positive chord-arc constant.

    ``strategy`` is ``"tangent_rays"``, ``"close_loop"`` or an explicit
    :class:`Curve` containing the piece.  Returns ``(extension, ChordArcResult)``.
    """
    if isinstance(strategy, Curve):
        ext = strategy
        probe = piece.point(np.linspace(piece.s_min, piece.s_max, 17))
        dense = ext.samples(4096)[1]
        gap = np.min(np.linalg.norm(probe[:, None] - dense[None], axis=-1), axis=1)
        if gap.max() > 2 * ext.length / 4096:
            raise ExtensionError("explicit extension does not contain the piece", piece=piece.name)
    elif strategy == "tangent_rays":
        ext = _tangent_rays(piece, ray_length)
    elif strategy == "close_loop":
        try:
            ext = _close_loop(piece)
        except DegenerateCurveError as exc:
            raise ExtensionError(str(exc), piece=piece.name) from exc
    else:
        raise DomainError(f"unknown extension strategy {strategy!r}")
    res = chord_arc_constant(ext, **chord_kw)
    if res.effective_c <= floor:
        raise ExtensionError(
            f"extension of {piece.name} has c = {res.effective_c:.3g} "
            f"(cusp={res.cusp}, self_intersection={res.self_intersection})", piece=piece.name)
    return ext, res


def decompose(curve: Curve, strategy="tangent_rays", **kw) -> Decomposition:
    """Split at corners and cusps and extend every piece."""
    cuts = sorted({s for s, _ in curve.corners} | set(curve.cusps) |
                  {float(curve.s_of_t(t)) for t in detect_cusps(curve)})
    if curve.kind == LOOP and not cuts:
        cuts = [curve.s_min]
    dec = split_at(curve, cuts)
    for p in dec.pieces:
        p.extension, res = extend_piece(p.curve, strategy, **kw)
        p.c = res.effective_c
    return dec
