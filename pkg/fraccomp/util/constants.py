# Defaults table. Every output file embeds the resolved values of this table,
# see `FCConfig.resolved`.

# Package name used as logger prefix and in output headers
PACKAGE_NAME = "fraccomp"

# Special functions:
# Series stop: |term| < SERIES_REL_STOP * |sum| for SERIES_STOP_RUN consecutive terms
SERIES_REL_STOP = 1e-17
SERIES_STOP_RUN = 3
SERIES_MAX_TERMS = 2000
# Largest series term summed in double precision
SERIES_MAX_TERM = 1e2
# Larger terms up to 10^SERIES_EXTENDED_MAX_DIGITS are summed with SERIES_GUARD_DIGITS extra digits
SERIES_EXTENDED_MAX_DIGITS = 40
SERIES_GUARD_DIGITS = 25
# Absolute tolerance of the integral representation of stable densities
ZOLOTAREV_TOL = 1e-13

# Laplace inversion:
TALBOT_NODES = 32
TALBOT_MIN_NODES = 8
TALBOT_SCALE = 1.0
# Contour scales tried in turn when the configured one is ill-conditioned
TALBOT_SCALE_LADDER = (2.0, 4.0)
# Maximum admissible rounding error estimate of one Talbot sum
TALBOT_TOL = 1e-8
STEHFEST_NODES = 14
STEHFEST_MAX_NODES = 18
# Hyperbolic contour for sector-bounded transforms: mu t, log of the discretisation and
# truncation target, used share of the sector opening, node cap
HYPERBOLA_MU_T = 4.0
HYPERBOLA_DECAY = 45.0
HYPERBOLA_SECTOR_LOWER = 0.2
HYPERBOLA_SECTOR_UPPER = 0.9
HYPERBOLA_MAX_NODES = 4000
# Real-axis kernels with some order > 1: terms, decimal digits of the moment-matched
# weights and of the evaluation
PSEUDO_NODES = 48
PSEUDO_MAX_NODES = 64
WEIGHTS_DPS = 200
PSEUDO_DPS = 60
# Digits kept beyond the node count when evaluating real-axis sums
PSEUDO_GUARD_DIGITS = 12

# Caputo derivative:
CAPUTO_MAX_ORDER = 3.0
HORIZON_TAIL_TOL = 1e-8

# Kernels:
# Floor of x in u = nu t l(x, t) / x
SUBORDINATOR_X_FLOOR = 1e-8
MASS_TOL = 1e-6

# Composition quadrature:
GAUSS_NODES = 16
PANEL_TOL = 1e-10
PANEL_STOP_RUN = 3
S_MAX = 1e4
# Geometric panel growth factor
PANEL_GROWTH = 1.5
# First panel edge relative to the decay scale
PANEL_START = 1e-12

# Spatial solver:
SPECTRAL_CUTOFF = 1e-12
ALIAS_TOL = 1e-8
MIN_GRID_POINTS = 1024
# Largest spectral grid, finer cutoffs are clipped with an AliasWarning
MAX_GRID_POINTS = 2 ** 20
# Evaluation points per block of the dense inverse transform
SYNTHESIS_CHUNK = 256
PERIOD_FACTOR = 64.0
MIN_PERIOD = 64.0
MIN_SOLVE_TIME = 1e-3
IMAG_RESIDUE_TOL = 1e-8

# Monte Carlo:
MC_MIN_SAMPLES = 10_000
MC_CHUNK = 8192
MC_TABLE_POINTS = 4096
MC_TABLE_XMIN = 1e-4
MC_TABLE_XMAX = 1e6
POISSON_INVERSION_MAX_RATE = 30.0
OSCILLATION_BOUND = 50.0

# Output:
FLOAT_FORMAT = "%.17g"
RESULTS_DIR = "results/"
# Exit statuses of the command line
EXIT_INVALID = 2
EXIT_NUMERICAL = 3
LOG_DIR = "logs/"
THREADS_ENV = "FRACCOMP_THREADS"
LOG_LEVEL_ENV = "FRACCOMP_LOG_LEVEL"
LOG_DIR_ENV = "FRACCOMP_LOG_DIR"

# Keys of the table above that a job spec may override in its "precision" section
PRECISION_KEYS = {
    "talbot_nodes": TALBOT_NODES,
    "talbot_scale": TALBOT_SCALE,
    "talbot_tol": TALBOT_TOL,
    "stehfest_nodes": STEHFEST_NODES,
    "pseudo_nodes": PSEUDO_NODES,
    "gauss_nodes": GAUSS_NODES,
    "panel_tol": PANEL_TOL,
    "s_max": S_MAX,
    "spectral_cutoff": SPECTRAL_CUTOFF,
    "min_grid_points": MIN_GRID_POINTS,
    "min_solve_time": MIN_SOLVE_TIME,
    "mass_tol": MASS_TOL,
    "oscillation_bound": OSCILLATION_BOUND,
}
