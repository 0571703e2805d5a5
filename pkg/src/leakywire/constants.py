"""Default numerical settings.

Every tunable default used by the solvers and the CLI lives here so runs are
reproducible from a config file plus this module.
"""
import math

# discretization
N_NODES = 512
PANEL_ORDER = 16
TRUNCATION_T = 100.0
GRADING_LEVELS = 8          # dyadic panel levels toward corners and junctions
END_GRADING_LEVELS = 2      # toward free / truncation ends
NEAR_FACTOR = 3.0           # source panel is "near" a target within this many half-lengths

# chord-arc constant
CHORD_GRID = 128
REFINE_LEVELS = 6
DIAG_FLOOR = 1e-4           # times the curve length
SELF_INTERSECTION_CHORD = 1e-9
SELF_INTERSECTION_SEPARATION = 1e-2  # times the curve length
EXTENSION_C_FLOOR = 1e-6

# cusp detection
CUSP_SPEED_TOL = 1e-8
CUSP_FD_STEP = 1e-6

# bound states
TOP_K = 4
KAPPA_GRID_POINTS = 64
ROOT_TOL = 1e-8             # on |mu(kappa) - 1|
KAPPA_XTOL = 1e-10
VERDICT_SLACK = 1e-6

# straightness diagnostic
A2_OMEGA = 0.5

EULER_GAMMA = 0.57721566490153286061
TWO_PI = 2.0 * math.pi
