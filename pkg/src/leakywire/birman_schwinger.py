r"""Nyström discretization of the Birman-Schwinger operator on a curve.

The operator acts on functions on the curve with kernel

.. math::  \frac{\alpha}{2\pi} K_0(\kappa |\gamma(s) - \gamma(s')|),

and :math:`-\kappa^2` is an eigenvalue of the Schrödinger operator exactly
when 1 is an eigenvalue of this integral operator.

Two quadrature rules are provided:

``panel_gauss``
    Gauss-Legendre panels, dyadically graded toward corners, cusps and
    junctions.  Entries between a target node and a *near* source panel are
    replaced by product integrals :math:`\int K(x_i, s)\,\ell_j(s)\,ds`
    against the panel's Lagrange basis, computed with geometrically graded
    sub-quadrature toward the (near-)singular point.  High order; the default.
``log_subtraction``
    Uniform cells with midpoint nodes; only the diagonal is corrected, by
    integrating :math:`-\ln|s - s_i|` over the cell in closed form and the
    smooth remainder by Gauss quadrature.  Low order, but the symmetrized
    matrix is exactly similar to the plain Nyström matrix.

The symmetric matrix handed to eigensolvers is
:math:`B = W^{1/2} A W^{-1/2}` (symmetrized), where :math:`A` is the plain
Nyström matrix acting on nodal values and :math:`W` the quadrature weights.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla
from scipy.optimize import brentq
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from . import constants as C
from .curves import INFINITE, LOOP, Curve
from .errors import AssemblyError, ConvergenceError, DomainError
from .special import kernel_k0

log = logging.getLogger(__name__)

PANEL_GAUSS = "panel_gauss"
LOG_SUBTRACTION = "log_subtraction"

_SUB_Q = 10         # Gauss points per graded sub-interval
_SUB_RATIO = 0.25   # geometric grading ratio toward the singular point
_SUB_LEVELS = 12    # innermost cell 0.25**12 ~ 6e-8 of the panel; Gauss handles the log there
_DENSE_LIMIT = 2000


def _lagrange_matrix(nodes, x):
    """Values of the Lagrange basis on ``nodes`` at points ``x`` (barycentric form)."""
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    bw = 1.0 / diff.prod(axis=1)
    d = x[:, None] - nodes[None, :]
    exact = d == 0
    d[exact] = 1.0
    terms = bw[None, :] / d
    out = terms / terms.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    out[rows] = exact[rows].astype(float)
    return out


def _graded_rule(d):
    """Gauss rule on [0, d] graded geometrically toward 0."""
    g, gw = np.polynomial.legendre.leggauss(_SUB_Q)
    if d <= 0:
        return np.empty(0), np.empty(0)
    dist = d * _SUB_RATIO ** np.arange(_SUB_LEVELS + 1)
    edges = np.concatenate([dist, [0.0]])
    a, b = edges[1:], edges[:-1]
    t = (0.5 * (b - a)[:, None] * g[None, :] + 0.5 * (a + b)[:, None]).ravel()
    w = (0.5 * (b - a)[:, None] * gw[None, :]).ravel()
    return t, w


class _Tables:
    """Cache of product-integration tables on the reference panel [-1, 1].

    Each table holds sub-quadrature abscissae ``x``, their signed offsets from
    the singular point (kept separately so tiny offsets survive rounding) and
    the weight matrix ``W[m, j] = w_m * l_j(x_m)``.
    """

    def __init__(self, order):
        self.ref, self.ref_w = np.polynomial.legendre.leggauss(order)
        self._cache = {}

    def get(self, key):
        if key not in self._cache:
            kind, val = key
            u = self.ref[val] if kind == "self" else val / 128.0
            t1, w1 = _graded_rule(u + 1.0)
            t2, w2 = _graded_rule(1.0 - u)
            off = np.concatenate([-t1, t2])
            w = np.concatenate([w1, w2])
            x = u + off
            self._cache[key] = (x, w[:, None] * _lagrange_matrix(self.ref, x), off)
        return self._cache[key]


@dataclass
class _NearGroup:
    key: tuple
    targets: np.ndarray      # (G,) node indices
    panels: np.ndarray       # (G,) panel indices
    chord: np.ndarray        # (G, M) distances target -> sub-quadrature points
    arc: np.ndarray | None   # (G, M) along-curve distances (single-piece only)


@dataclass(eq=False)
class Discretization:
    """Quadrature nodes and weights on one curve or on the edges of a graph.

    ``domain`` is ``"LoopPeriodic"``, ``"TruncatedLine"``, ``"Segment"`` or
    ``"Graph"``.  Arc-length positions ``nodes`` are local to the piece given
    by ``piece_of``.
    """

    pieces: tuple
    rule: str
    order: int
    nodes: np.ndarray
    piece_of: np.ndarray
    weights: np.ndarray
    points: np.ndarray
    panel_bounds: np.ndarray = field(repr=False)
    panel_piece: np.ndarray = field(repr=False)
    panel_nodes: np.ndarray = field(repr=False)
    near: list = field(default_factory=list, repr=False)
    diag_data: tuple | None = field(default=None, repr=False)
    _chord: np.ndarray | None = field(default=None, repr=False)
    _arc: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def curve(self) -> Curve:
        if len(self.pieces) != 1:
            raise DomainError("discretization spans several pieces")
        return self.pieces[0]

    @property
    def domain(self) -> str:
        if len(self.pieces) > 1:
            return "Graph"
        kind = self.pieces[0].kind
        return {LOOP: "LoopPeriodic", INFINITE: "TruncatedLine"}.get(kind, "Segment")

    @property
    def total_length(self) -> float:
        return float(sum(p.length for p in self.pieces))

    @property
    def chord(self) -> np.ndarray:
        if self._chord is None:
            P = self.points
            self._chord = np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])
            np.fill_diagonal(self._chord, np.inf)
        return self._chord

    @property
    def arc(self) -> np.ndarray:
        """Along-curve distance matrix (single-piece discretizations only)."""
        if self._arc is None:
            curve = self.curve
            self._arc = curve.geodesic(self.nodes[:, None], self.nodes[None, :])
            np.fill_diagonal(self._arc, np.inf)
        return self._arc

    @property
    def max_panel_length(self) -> float:
        return float(np.max(self.panel_bounds[:, 1] - self.panel_bounds[:, 0]))


# ---------------------------------------------------------------------------
# panel layout


def _intervals(piece, ends, levels, end_levels):
    """Split a piece at corners/cusps into intervals with grading levels at each end."""
    cuts = sorted({s for s, _ in piece.corners} | set(piece.cusps))
    if piece.kind == LOOP:
        if not cuts:
            return [(piece.s_min, piece.s_max, 0, 0)]
        cyc = cuts + [cuts[0] + piece.length]
        return [(a, b, levels, levels) for a, b in zip(cyc[:-1], cyc[1:])]
    pts = [piece.s_min] + [c for c in cuts if piece.s_min < c < piece.s_max] + [piece.s_max]
    out = []
    for k, (a, b) in enumerate(zip(pts[:-1], pts[1:])):
        gl = ends[0] if k == 0 else levels
        gr = ends[1] if k == len(pts) - 2 else levels
        out.append((a, b, gl, gr))
    return out


def _end_levels(pieces, levels, end_levels):
    """Grading at piece ends: junctions and finite free ends get ``levels``,
    truncation ends of infinite curves get ``end_levels``."""
    ends = []
    endpoints = [(p.point(p.s_min), p.point(p.s_max)) for p in pieces]
    for k, p in enumerate(pieces):
        if p.kind == LOOP:
            ends.append((0, 0))
            continue
        pair = []
        for side in (0, 1):
            x = endpoints[k][side]
            joined = any(np.linalg.norm(x - endpoints[j][t]) < 1e-9 * max(p.length, 1.0)
                         for j in range(len(pieces)) for t in (0, 1) if j != k)
            if joined:
                pair.append(levels)
            else:
                pair.append(end_levels if p.kind == INFINITE else levels)
        ends.append(tuple(pair))
    return ends


def _allocate(weights, total, minimum):
    """Largest-remainder allocation of ``total`` slots proportional to ``weights``."""
    weights = np.asarray(weights, dtype=float)
    minimum = np.asarray(minimum, dtype=int)
    extra = total - minimum.sum()
    if extra < 0:
        raise DomainError("too few nodes for the requested panel layout")
    share = weights / weights.sum() * extra
    base = np.floor(share).astype(int)
    rem = extra - base.sum()
    order = np.argsort(-(share - base), kind="stable")
    base[order[:rem]] += 1
    return minimum + base


def _panel_layout(pieces, n_panels, levels, end_levels):
    ends = _end_levels(pieces, levels, end_levels)
    ivals = []
    for k, p in enumerate(pieces):
        for a, b, gl, gr in _intervals(p, ends[k], levels, end_levels):
            ivals.append([k, a, b, gl, gr])
    min_slots = np.array([max(1, (iv[3] > 0) + (iv[4] > 0)) for iv in ivals])
    while True:
        graded = sum(iv[3] + iv[4] for iv in ivals)
        if n_panels - graded >= min_slots.sum():
            break
        if graded == 0:
            raise DomainError("too few nodes for the requested panel layout")
        for iv in ivals:
            iv[3], iv[4] = max(iv[3] - 1, 0), max(iv[4] - 1, 0)
        min_slots = np.array([max(1, (iv[3] > 0) + (iv[4] > 0)) for iv in ivals])
    slots = _allocate([iv[2] - iv[1] for iv in ivals], n_panels - graded, min_slots)
    bounds, owner = [], []
    for (k, a, b, gl, gr), m in zip(ivals, slots):
        h = (b - a) / m
        left = [h * 2.0 ** -gl] + [h * 2.0 ** -j for j in range(gl, 0, -1)] if gl else []
        right = ([h * 2.0 ** -j for j in range(1, gr + 1)] + [h * 2.0 ** -gr]) if gr else []
        mid = [h] * (m - (gl > 0) - (gr > 0))
        sizes = np.array(left + mid + right)
        edges = a + np.concatenate([[0.0], np.cumsum(sizes)])
        edges[-1] = b
        bounds += list(zip(edges[:-1], edges[1:]))
        owner += [k] * len(sizes)
    return np.array(bounds), np.array(owner)


# ---------------------------------------------------------------------------


def discretize(curve, n: int = C.N_NODES, rule: str = PANEL_GAUSS, order: int = C.PANEL_ORDER,
               grading_levels: int = C.GRADING_LEVELS,
               end_grading_levels: int = C.END_GRADING_LEVELS) -> Discretization:
    """Build quadrature nodes on a curve or a sequence of curves (graph edges).

    With ``panel_gauss`` the node count is rounded up to a multiple of
    ``order``.
    """
    pieces = (curve,) if isinstance(curve, Curve) else tuple(curve)
    if not pieces:
        raise DomainError("nothing to discretize")
    if n < 16:
        raise DomainError("need at least 16 nodes")
    if rule == PANEL_GAUSS:
        disc = _panel_discretization(pieces, n, order, grading_levels, end_grading_levels)
    elif rule == LOG_SUBTRACTION:
        disc = _cell_discretization(pieces, n)
    else:
        raise DomainError(f"unknown quadrature rule {rule!r}")
    tiny = 1e-13 * disc.total_length
    if np.any(disc.chord < tiny):
        raise AssemblyError("discretization has coincident nodes")
    return disc


def _panel_discretization(pieces, n, order, levels, end_levels):
    n_panels = -(-n // order)
    bounds, owner = _panel_layout(pieces, n_panels, levels, end_levels)
    tables = _Tables(order)
    ref, ref_w = tables.ref, tables.ref_w
    a, b = bounds[:, 0], bounds[:, 1]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    s = (mid[:, None] + half[:, None] * ref[None, :])
    w = half[:, None] * ref_w[None, :]
    P = len(bounds)
    panel_nodes = np.arange(P * order).reshape(P, order)
    piece_of = np.repeat(owner, order)
    nodes = s.ravel()
    points = np.empty((len(nodes), 2))
    for k, p in enumerate(pieces):
        m = piece_of == k
        points[m] = p.point(nodes[m])
    centers = np.empty((P, 2))
    for k, p in enumerate(pieces):
        m = owner == k
        centers[m] = p.point(mid[m])

    single = len(pieces) == 1
    probe_u = np.linspace(-1.0, 1.0, 65)
    pairs = {}
    for j in range(P):
        piece = pieces[owner[j]]
        dist = np.hypot(*(points - centers[j]).T)
        targets = np.flatnonzero(dist < C.NEAR_FACTOR * half[j])
        targets = np.union1d(targets, panel_nodes[j])
        own = (targets >= panel_nodes[j, 0]) & (targets <= panel_nodes[j, -1])
        others = targets[~own]
        keys = [("self", int(i - panel_nodes[j, 0])) for i in targets[own]]
        if len(others):
            probe = piece.point(mid[j] + half[j] * probe_u)
            d2 = ((points[others, None, :] - probe[None]) ** 2).sum(-1)
            kmin = d2.argmin(axis=1)
            for i, km in zip(others, kmin):
                if km in (0, 64):
                    u = -1.0 if km == 0 else 1.0
                else:
                    y0, y1, y2 = d2[others == i][0, km - 1:km + 2]
                    den = y0 - 2 * y1 + y2
                    shift = 0.5 * (y0 - y2) / den if den > 0 else 0.0
                    u = float(np.clip(probe_u[km] + shift * (probe_u[1] - probe_u[0]), -1, 1))
                keys.append(("pt", int(round(u * 128))))
        for i, key in zip(list(targets[own]) + list(others), keys):
            pairs.setdefault(key, []).append((int(i), j))

    near = []
    for key, lst in pairs.items():
        x, _, off = tables.get(key)
        tg = np.array([t for t, _ in lst])
        pn = np.array([p for _, p in lst])
        sub = mid[pn, None] + half[pn, None] * x[None, :]
        chord = np.empty_like(sub)
        for k, p in enumerate(pieces):
            m = owner[pn] == k
            if np.any(m):
                q = p.point(sub[m])
                chord[m] = np.hypot(*(q - points[tg[m], None, :]).transpose(2, 0, 1))
        arc = pieces[0].geodesic(nodes[tg, None], sub) if single else None
        if key[0] == "self":
            # offsets below the resolution of s: use arc length, exact to O(delta^3)
            delta = np.abs(half[pn, None] * off[None, :])
            chord = np.where(delta < 1e-4 * half[pn, None], delta, chord)
            if arc is not None:
                arc = delta
        near.append(_NearGroup(key, tg, pn, chord, arc))
    disc = Discretization(pieces, PANEL_GAUSS, order, nodes, piece_of, w.ravel(), points,
                          bounds, owner, panel_nodes, near)
    disc._tables = tables
    return disc


def _cell_discretization(pieces, n):
    lengths = np.array([p.length for p in pieces])
    counts = _allocate(lengths, n, np.ones(len(pieces), dtype=int))
    nodes, owner, weights, bounds = [], [], [], []
    for k, (p, m) in enumerate(zip(pieces, counts)):
        h = p.length / m
        edges = p.s_min + h * np.arange(m + 1)
        nodes.append(0.5 * (edges[:-1] + edges[1:]))
        owner.append(np.full(m, k))
        weights.append(np.full(m, h))
        bounds += list(zip(edges[:-1], edges[1:]))
    nodes = np.concatenate(nodes)
    owner = np.concatenate(owner)
    weights = np.concatenate(weights)
    points = np.empty((len(nodes), 2))
    for k, p in enumerate(pieces):
        points[owner == k] = p.point(nodes[owner == k])
    # diagonal: offsets u in each half-cell and the distances they map to
    g, gw = np.polynomial.legendre.leggauss(16)
    half = 0.5 * weights
    u = np.concatenate([0.5 * half[:, None] * (g[None, :] - 1),
                        0.5 * half[:, None] * (g[None, :] + 1)], axis=1)
    uw = np.concatenate([0.5 * half[:, None] * gw[None, :]] * 2, axis=1)
    chord = np.empty_like(u)
    for k, p in enumerate(pieces):
        m = owner == k
        q = p.point(nodes[m, None] + u[m])
        chord[m] = np.hypot(*(q - points[m, None, :]).transpose(2, 0, 1))
    idx = np.arange(len(nodes))
    return Discretization(pieces, LOG_SUBTRACTION, 1, nodes, owner, weights, points,
                          np.array(bounds), owner.copy(), idx[:, None], [],
                          diag_data=(u, uw, chord))


# ---------------------------------------------------------------------------
# assembly


@dataclass(eq=False)
class BSMatrix:
    """Symmetrized discrete Birman-Schwinger operator at fixed coupling and kappa."""

    entries: np.ndarray
    alpha: float
    kappa: float
    disc: Discretization = field(repr=False)
    plain: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def nystrom(self) -> np.ndarray:
        """Plain Nyström matrix acting on nodal values (``K W`` form)."""
        if self.plain is None:
            sw = np.sqrt(self.disc.weights)
            self.plain = self.entries / sw[:, None] * sw[None, :]
        return self.plain



def _assemble(disc, alpha, kappa, scale, use_arc):
    if not (kappa > 0 and math.isfinite(kappa)):
        raise DomainError("kappa must be positive")
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    dist = disc.arc if use_arc else disc.chord
    n = disc.n
    A = np.empty((n, n))
    step = max(1, 2 ** 20 // n)    # row blocks keep temporaries small
    for i in range(0, n, step):
        A[i:i + step] = kernel_k0(kappa * scale * dist[i:i + step])
    A *= disc.weights[None, :]
    if disc.rule == PANEL_GAUSS:
        half = 0.5 * (disc.panel_bounds[:, 1] - disc.panel_bounds[:, 0])
        for grp in disc.near:
            _, W, _ = disc._tables.get(grp.key)
            d = grp.arc if use_arc else grp.chord
            vals = kernel_k0(kappa * scale * d)
            E = (vals @ W) * half[grp.panels, None]
            A[grp.targets[:, None], disc.panel_nodes[grp.panels]] = E
    else:
        u, uw, chord = disc.diag_data
        r = np.abs(u) if use_arc else chord
        h = disc.weights
        log_part = -h * (np.log(0.5 * h) - 1.0)
        smooth = ((kernel_k0(kappa * scale * r) + np.log(np.abs(u))) * uw).sum(axis=1)
        np.fill_diagonal(A, log_part + smooth)
    A *= alpha / C.TWO_PI
    sw = np.sqrt(disc.weights)
    B = A * sw[:, None]
    B /= sw[None, :]
    for i in range(0, n, step):
        blk = 0.5 * (B[i:i + step, i:] + B[i:, i:i + step].T)
        B[i:i + step, i:] = blk
        B[i:, i:i + step] = blk.T
    return BSMatrix(B, alpha, kappa, disc, plain=A)


def assemble_bs_matrix(disc: Discretization, alpha: float, kappa: float) -> BSMatrix:
    """Discrete Birman-Schwinger operator with kernel (alpha/2pi) K0(kappa |x - y|)."""
    return _assemble(disc, alpha, kappa, 1.0, use_arc=False)


def assemble_comparison_matrix(c: float, alpha: float, kappa: float, disc: Discretization) -> BSMatrix:
    """Same assembly with kernel (alpha/2pi) K0(kappa c dist_curve(s, s')).

    For ``c <= c(curve)`` this kernel dominates the true one pointwise.
    """
    if not c > 0:
        raise DomainError("comparison constant must be positive")
    disc.curve  # single piece only
    return _assemble(disc, alpha, kappa, c, use_arc=True)


# ---------------------------------------------------------------------------
# eigenvalues


def power_iteration(M: np.ndarray, tol: float = 1e-12, max_iter: int = 20000, seed: int = 0):
    """Largest eigenpair of a symmetric positive semidefinite matrix."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(M.shape[0])
    v /= np.linalg.norm(v)
    rq = 0.0
    for _ in range(max_iter):
        u = M @ v
        rq_new = float(v @ u)
        nrm = np.linalg.norm(u)
        if nrm == 0:
            return 0.0, v
        u /= nrm
        if abs(rq_new - rq) <= tol * max(abs(rq_new), 1.0) and np.linalg.norm(u - v) < 1e-6:
            return rq_new, u
        v, rq = u, rq_new
    raise ConvergenceError("power iteration did not converge", last_value=rq)


def top_eigenpairs(B, k: int = 1):
    """The ``k`` largest eigenvalues (descending) and eigenvectors of a symmetric matrix."""
    M = B.entries if isinstance(B, BSMatrix) else np.asarray(B)
    n = M.shape[0]
    k = min(k, n)
    if n <= _DENSE_LIMIT or k >= n - 1:
        vals, vecs = sla.eigh(M, subset_by_index=[n - k, n - 1])
    else:
        try:
            vals, vecs = eigsh(M, k=k, which="LA", tol=1e-13)
        except ArpackNoConvergence as exc:
            last = float(exc.eigenvalues.max()) if len(exc.eigenvalues) else None
            raise ConvergenceError("Lanczos iteration did not converge", last_value=last) from exc
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def largest_eigenvalue(B, method: str = "auto", tol: float = 1e-12, max_iter: int = 20000):
    """``(mu_max, eigenvector)`` of a symmetric matrix.

    ``method`` is ``"auto"`` (dense for n <= 2000, Lanczos above) or ``"power"``.
    """
    M = B.entries if isinstance(B, BSMatrix) else np.asarray(B)
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix has non-finite entries")
    if method == "power":
        return power_iteration(M, tol=tol, max_iter=max_iter)
    vals, vecs = top_eigenpairs(M, 1)
    v = vecs[:, 0]
    if v.sum() < 0:
        v = -v
    return float(vals[0]), v


def schur_row_bound(B: BSMatrix, disc: Discretization | None = None) -> float:
    """Schur-test bound sqrt(max row integral * max column integral).

    Works on the unsymmetrized kernel-times-weight form: row sums of ``K W``
    integrate the kernel over the source variable, weighted column sums of
    the same matrix integrate over the target variable.
    """
    disc = disc or B.disc
    A = B.nystrom() if isinstance(B, BSMatrix) else np.asarray(B)
    w = disc.weights
    rows = A.sum(axis=1).max()
    cols = ((w[:, None] * A).sum(axis=0) / w).max()
    return float(math.sqrt(rows * cols))


def bs_norm_line_analytic(alpha: float, c: float, kappa: float) -> float:
    """Norm of the comparison operator on an unbounded curve: alpha / (2 c kappa).

    In momentum space the operator multiplies by alpha / (2 sqrt(c^2 kappa^2 + p^2)),
    whose supremum sits at p = 0.
    """
    if not (alpha > 0 and c > 0 and kappa > 0):
        raise DomainError("alpha, c and kappa must be positive")
    return alpha / (2.0 * c * kappa)


@dataclass
class EigenvalueTable:
    kappas: np.ndarray
    mu: np.ndarray          # (len(kappas), top_k), descending within a row

    def to_csv(self, path):
        k = self.mu.shape[1]
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["kappa"] + [f"mu_{j + 1}" for j in range(k)])
            for kap, row in zip(self.kappas, self.mu):
                wr.writerow([f"{kap:.17g}"] + [f"{v:.17g}" for v in row])


def eigenvalue_curve(disc: Discretization, alpha: float, kappas: Sequence[float],
                     top_k: int = C.TOP_K) -> EigenvalueTable:
    """Top ``top_k`` Birman-Schwinger eigenvalues at every kappa of the grid."""
    kappas = np.asarray(kappas, dtype=float)
    if np.any(np.diff(kappas) <= 0):
        raise DomainError("kappa grid must be strictly increasing")
    rows = [top_eigenpairs(assemble_bs_matrix(disc, alpha, k), top_k)[0] for k in kappas]
    return EigenvalueTable(kappas, np.array(rows))


# ---------------------------------------------------------------------------
# bound states


@dataclass
class BoundState:
    kappa: float
    branch: int
    residual: float
    bracket: tuple
    eigenvector: np.ndarray = field(repr=False)
    multiplicity: int = 1

    @property
    def lam(self) -> float:
        return -self.kappa ** 2

    def to_record(self) -> dict:
        return {"kappa": self.kappa, "lambda": self.lam, "branch": self.branch,
                "residual": self.residual}


class StateList(list):
    """List of bound states with the search diagnostics attached."""

    def __init__(self, states=(), diagnostics=()):
        super().__init__(states)
        self.diagnostics = list(diagnostics)


def find_bound_states(disc: Discretization, alpha: float, kappa_min: float, kappa_max: float,
                      top_k: int = C.TOP_K, root_tol: float = C.ROOT_TOL,
                      kappa_xtol: float = C.KAPPA_XTOL) -> StateList:
    """Solve mu_j(kappa) = 1 on each of the top ``top_k`` eigenvalue branches.

    Every branch decreases strictly in kappa, so each has at most one root on
    the bracket; it is located with Brent's safeguarded bisection.  States are
    returned sorted by eigenvalue lambda = -kappa^2, ascending.
    """
    if not 0 < kappa_min < kappa_max:
        raise DomainError("need 0 < kappa_min < kappa_max")
    cache = {}

    def eig(kappa):
        if kappa not in cache:
            cache[kappa] = top_eigenpairs(assemble_bs_matrix(disc, alpha, kappa), top_k)
        return cache[kappa]

    lo_vals, hi_vals = eig(kappa_min)[0], eig(kappa_max)[0]
    states, diag = [], []
    for j in range(min(top_k, disc.n)):
        if lo_vals[j] <= 1.0:
            diag.append(f"branch {j + 1}: mu({kappa_min:.6g}) = {lo_vals[j]:.6g} <= 1, no crossing")
            continue
        if hi_vals[j] >= 1.0:
            diag.append(f"branch {j + 1}: mu({kappa_max:.6g}) = {hi_vals[j]:.6g} >= 1, "
                        "root lies beyond kappa_max")
            continue
        root = brentq(lambda k: eig(k)[0][j] - 1.0, kappa_min, kappa_max,
                      xtol=kappa_xtol * 1e-2, rtol=4 * np.finfo(float).eps, maxiter=200)
        vals, vecs = eig(root)
        resid = abs(vals[j] - 1.0)
        if resid > root_tol:
            raise ConvergenceError(f"branch {j + 1} root residual {resid:.3g}", last_value=vals[j])
        u = vecs[:, j] / np.sqrt(disc.weights)
        u /= math.sqrt(float(disc.weights @ u ** 2))
        states.append(BoundState(float(root), j + 1, float(resid),
                                 (float(kappa_min), float(kappa_max)), u))
    # degenerate levels show up as neighbouring branches crossing at the same kappa
    states.sort(key=lambda st: -st.kappa)
    for st in states:
        st.multiplicity = sum(abs(o.kappa - st.kappa) <= 1e-7 * st.kappa for o in states)
    if not states:
        diag.append("no branch crosses 1 on the bracket")
    return StateList(states, diag)
