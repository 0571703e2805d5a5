"""Closed-form lower bounds on the spectrum and their numerical verification.

For a curve with chord-arc constant ``c > 0`` the spectrum of
``-Laplace - alpha delta_curve`` lies above ``-alpha**2 / (4 c**2)``.  A curve
cut into ``N`` pieces whose extensions have constants ``c_i`` obeys
``-N * sum(alpha**2 / (4 c_i**2))``, and the same formula applies to a graph
whose ``N`` edges meet only at their ends.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import jsonschema
import numpy as np

from . import constants as C
from .birman_schwinger import PANEL_GAUSS, discretize, find_bound_states
from .curves import INFINITE, LOOP, Curve, segment
from .errors import (BoundUndefinedError, DomainError, ExtensionError,
                     GraphBoundUnavailable)
from .geometry import chord_arc_constant, decompose, extend_piece, fit_a2

log = logging.getLogger(__name__)

SINGLE, COMPOSITE, GRAPH = "Single", "Composite", "Graph"


def _check_alpha(alpha):
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError("coupling alpha must be positive")


def single_bound(alpha: float, c: float) -> float:
    """Lower bound -alpha^2 / (4 c^2) for a curve with chord-arc constant ``c``."""
    _check_alpha(alpha)
    if not c > 0:
        raise BoundUndefinedError(f"chord-arc constant {c} is not positive (cusp or self-intersection)")
    return -alpha ** 2 / (4.0 * c ** 2)


def composite_bound(alpha: float, c_list: Sequence[float]) -> float:
    """Lower bound -N sum_i alpha^2 / (4 c_i^2) for a curve cut into N extended pieces."""
    _check_alpha(alpha)
    c = np.asarray(list(c_list), dtype=float)
    if c.size == 0:
        raise BoundUndefinedError("composite bound needs at least one piece")
    if not np.all(c > 0):
        raise BoundUndefinedError("every piece needs a positive chord-arc constant")
    return float(-c.size * np.sum(alpha ** 2 / (4.0 * c ** 2)))


@dataclass(frozen=True)
class EssentialSpectrum:
    threshold: float
    diagnostic_only: bool = False


def essential_spectrum(kind: str, alpha: float, a2_ok: bool = True) -> EssentialSpectrum:
    """Bottom of the essential spectrum.

    Bounded curves give 0.  Unbounded, asymptotically straight curves give
    -alpha^2/4; without a verified straightening rate the value is returned
    with ``diagnostic_only`` set, since only the discrete bound is then proven.
    """
    _check_alpha(alpha)
    if kind == INFINITE:
        return EssentialSpectrum(-alpha ** 2 / 4.0, diagnostic_only=not a2_ok)
    return EssentialSpectrum(0.0)


# ---------------------------------------------------------------------------
# graphs


@dataclass(eq=False)
class LeakyGraph:
    """Edges meeting only at shared endpoints.

    Edges of kind ``infinite`` are truncated half-lines; their far end is a
    truncation point, not a vertex.
    """

    vertices: np.ndarray
    edges: list
    strategies: list | None = None
    name: str = "graph"

    def __post_init__(self):
        self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if not self.edges:
            raise DomainError("a graph needs at least one edge")
        if self.strategies is None:
            self.strategies = ["tangent_rays"] * len(self.edges)
        if len(self.strategies) != len(self.edges):
            raise DomainError("one extension strategy per edge")
        self._check_ends()
        self._check_crossings()

    @property
    def N(self) -> int:
        return len(self.edges)

    def _is_vertex(self, p, scale):
        return np.min(np.linalg.norm(self.vertices - p, axis=1)) <= 1e-9 * scale

    def _check_ends(self):
        for k, e in enumerate(self.edges):
            if e.kind == LOOP:
                raise DomainError(f"edge {k} is a closed loop")
            ends = [e.point(e.s_min), e.point(e.s_max)]
            hits = [self._is_vertex(p, max(e.length, 1.0)) for p in ends]
            if not hits[0] or not (hits[1] or e.kind == INFINITE):
                raise DomainError(f"edge {k} does not end at graph vertices")

    def _check_crossings(self, m: int = 400):
        samples = [e.point(np.linspace(e.s_min, e.s_max, m)) for e in self.edges]
        spacing = [e.length / (m - 1) for e in self.edges]
        for i in range(self.N):
            for j in range(i + 1, self.N):
                h = max(spacing[i], spacing[j])
                # ignore points within a few spacings of a shared vertex
                keep_i = np.ones(m, bool)
                keep_j = np.ones(m, bool)
                for v in self.vertices:
                    near_i = np.linalg.norm(samples[i] - v, axis=1) < 4 * h
                    near_j = np.linalg.norm(samples[j] - v, axis=1) < 4 * h
                    if near_i.any() and near_j.any():
                        keep_i &= ~near_i
                        keep_j &= ~near_j
                a, b = samples[i][keep_i], samples[j][keep_j]
                if len(a) and len(b):
                    d = np.linalg.norm(a[:, None] - b[None], axis=-1).min()
                    if d < h:
                        raise DomainError(f"edges {i} and {j} meet away from a shared vertex")


def star_graph(n_edges: int = 3, T: float = C.TRUNCATION_T, angles=None,
               center=(0.0, 0.0)) -> LeakyGraph:
    """Star of straight half-lines (truncated at length ``T``) leaving one vertex;
    equally spaced unless ``angles`` is given."""
    if angles is None:
        if n_edges < 1:
            raise DomainError("star needs at least one edge")
        angles = 2 * np.pi * np.arange(n_edges) / n_edges
    edges = [segment(center, float(a), T, kind=INFINITE, name=f"edge{k}")
             for k, a in enumerate(angles)]
    return LeakyGraph([center], edges, name=f"star{len(edges)}")


# ---------------------------------------------------------------------------
# reports


REPORT_SCHEMA = {
    "type": "object",
    "required": ["alpha", "ess_threshold", "bound", "bound_kind", "pieces", "states"],
    "properties": {
        "curve": {"type": "string"},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "ess_threshold": {"type": "number", "maximum": 0},
        "ess_diagnostic_only": {"type": "boolean"},
        "bound": {"type": "number", "maximum": 0},
        "bound_kind": {"enum": [SINGLE, COMPOSITE, GRAPH]},
        "pieces": {
            "type": "array",
            "items": {"type": "object", "required": ["c", "extension"],
                      "properties": {"c": {"type": "number", "exclusiveMinimum": 0},
                                     "extension": {"type": "string"}}},
        },
        "candidates": {
            "type": "array",
            "items": {"type": "object", "required": ["bound_kind", "bound", "pass"],
                      "properties": {"bound_kind": {"enum": [SINGLE, COMPOSITE, GRAPH]},
                                     "bound": {"type": "number"},
                                     "pass": {"type": "boolean"}}},
        },
        "states": {
            "type": "array",
            "items": {"type": "object", "required": ["lambda", "kappa", "residual", "pass"],
                      "properties": {"lambda": {"type": "number", "maximum": 0},
                                     "kappa": {"type": "number", "exclusiveMinimum": 0},
                                     "residual": {"type": "number", "minimum": 0},
                                     "pass": {"type": "boolean"}}},
        },
    },
}


def validate_report(record: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``record`` is not a valid report."""
    jsonschema.validate(record, REPORT_SCHEMA)


@dataclass
class Candidate:
    bound_kind: str
    bound: float
    passed: bool = True


@dataclass
class SpectralReport:
    curve: str
    alpha: float
    ess_threshold: float
    bound: float
    bound_kind: str
    pieces: list = field(default_factory=list)       # [(c, extension name)]
    states: list = field(default_factory=list)
    verdict: list = field(default_factory=list)
    candidates: list = field(default_factory=list)
    ess_diagnostic_only: bool = False
    kappa_range: tuple = (None, None)

    @property
    def N(self) -> int:
        return len(self.pieces)

    @property
    def constants(self) -> list:
        return [c for c, _ in self.pieces]

    @property
    def passed(self) -> bool:
        return all(self.verdict)

    def to_json(self) -> dict:
        return {
            "curve": self.curve,
            "alpha": self.alpha,
            "ess_threshold": self.ess_threshold,
            "ess_diagnostic_only": self.ess_diagnostic_only,
            "bound": self.bound,
            "bound_kind": self.bound_kind,
            "pieces": [{"c": c, "extension": ext} for c, ext in self.pieces],
            "candidates": [{"bound_kind": cd.bound_kind, "bound": cd.bound, "pass": cd.passed}
                           for cd in self.candidates],
            "states": [dict(st.to_record(), **{"pass": ok})
                       for st, ok in zip(self.states, self.verdict)],
        }


def graph_bound(graph: LeakyGraph, alpha: float, **extend_kw) -> SpectralReport:
    """Composite bound over the graph edges, each extended by its strategy."""
    _check_alpha(alpha)
    pieces = []
    for k, (edge, strategy) in enumerate(zip(graph.edges, graph.strategies)):
        try:
            ext, res = extend_piece(edge, strategy, **extend_kw)
        except ExtensionError as exc:
            raise GraphBoundUnavailable(f"edge {k}: {exc}", edge=k) from exc
        pieces.append((res.effective_c, ext.name))
    bound = composite_bound(alpha, [c for c, _ in pieces])
    ess = essential_spectrum(INFINITE if any(e.kind == INFINITE for e in graph.edges) else LOOP,
                             alpha)
    return SpectralReport(graph.name, alpha, ess.threshold, bound, GRAPH, pieces,
                          candidates=[Candidate(GRAPH, bound)])


def _curve_candidates(curve, alpha, strategy):
    """Direct and composite bounds that apply to ``curve``, with the pieces used."""
    cands, pieces = [], {}
    res = chord_arc_constant(curve)
    if res.effective_c > 0:
        cands.append(Candidate(SINGLE, single_bound(alpha, res.effective_c)))
        pieces[SINGLE] = [(res.effective_c, curve.name)]
    cuts = curve.corners or curve.cusps or res.cusp
    if cuts:
        try:
            dec = decompose(curve, strategy)
            cands.append(Candidate(COMPOSITE, composite_bound(alpha, dec.constants)))
            pieces[COMPOSITE] = [(p.c, p.extension.name) for p in dec.pieces]
        except (ExtensionError, BoundUndefinedError) as exc:
            log.info("composite bound unavailable: %s", exc)
    if not cands:
        raise BoundUndefinedError(
            f"{curve.name}: no bound (c = {res.c:.3g}, cusp={res.cusp}, "
            f"self_intersection={res.self_intersection})")
    return cands, pieces


def verify_report(target, alpha: float, n: int = C.N_NODES, rule: str = PANEL_GAUSS,
                  top_k: int = C.TOP_K, kappa_min: float | None = None,
                  kappa_max: float | None = None, strategy="tangent_rays",
                  slack: float = C.VERDICT_SLACK) -> SpectralReport:
    """Bound, essential spectrum and computed bound states for a curve or graph.

    When several bounds apply they are all listed in ``candidates``; the
    largest one is operative.  A state passes when ``lam >= bound - slack``.
    """
    _check_alpha(alpha)
    if isinstance(target, LeakyGraph):
        report = graph_bound(target, alpha)
        edges = target.edges
        unbounded = any(e.kind == INFINITE for e in edges)
        disc = discretize(edges, n, rule=rule)
    elif isinstance(target, Curve):
        cands, pieces = _curve_candidates(target, alpha, strategy)
        best = max(cands, key=lambda cd: cd.bound)
        unbounded = target.kind == INFINITE
        a2_ok = fit_a2(target).consistent if unbounded else True
        ess = essential_spectrum(target.kind, alpha, a2_ok)
        report = SpectralReport(target.name, alpha, ess.threshold, best.bound, best.bound_kind,
                                pieces[best.bound_kind], candidates=cands,
                                ess_diagnostic_only=ess.diagnostic_only)
        disc = discretize(target, n, rule=rule)
    else:
        raise DomainError("target must be a Curve or a LeakyGraph")

    if kappa_min is None:
        kappa_min = (1.0 + 2e-3) * alpha / 2 if unbounded else 1e-3 * alpha
    if kappa_max is None:
        # reach past the bound so that a violation would be seen
        kappa_max = 1.25 * math.sqrt(-report.bound)
    states = find_bound_states(disc, alpha, kappa_min, kappa_max, top_k=top_k)
    for msg in states.diagnostics:
        log.info("%s", msg)
    report.kappa_range = (kappa_min, kappa_max)
    report.states = list(states)
    report.verdict = [st.lam >= report.bound - slack for st in states]
    for cd in report.candidates:
        cd.passed = all(st.lam >= cd.bound - slack for st in states)
    return report
