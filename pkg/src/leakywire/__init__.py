"""Spectral lower bounds and bound states for leaky quantum wires.

The operator ``-Laplace - alpha delta_curve`` in the plane is studied through
the chord-arc constant of the curve and a Nyström discretization of its
Birman-Schwinger operator.
"""
__version__ = "0.1.0"

from .errors import (AssemblyError, BoundUndefinedError, ConfigError, ConvergenceError,
                     DegenerateCurveError, DomainError, ExtensionError,
                     GraphBoundUnavailable, LeakyWireError)
from .special import k0_eval, k0_integral_check, macdonald_k0
from .curves import (Curve, angle, builtin, circle, cusp_family, line, parabola, polyline,
                     rhamphoid, sampled, segment, spinode)
from .geometry import (arc_length_reparametrize, chord_arc_constant, decompose, detect_cusps,
                       extend_piece, fit_a2, geodesic_distance, split_at)
from .birman_schwinger import (BSMatrix, BoundState, Discretization, assemble_bs_matrix,
                               assemble_comparison_matrix, bs_norm_line_analytic, discretize,
                               eigenvalue_curve, find_bound_states, largest_eigenvalue,
                               schur_row_bound)
from .bounds import (LeakyGraph, SpectralReport, composite_bound, essential_spectrum,
                     graph_bound, single_bound, star_graph, verify_report)

__all__ = [name for name in dir() if not name.startswith("_")]
