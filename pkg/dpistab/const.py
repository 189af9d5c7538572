"""Constants file."""

PROG_NAME = "dpistab"
VERSION = "0.3.1"

# environment
ENV_MAX_ITER = "DPISTAB_MAX_ITER"

# scalar iteration
DEFAULT_MAX_ITER = 100_000
DEFAULT_BLOWUP = 1e10
DEFAULT_TOLERANCE = 1e-12
RETRY_BUDGET_FACTOR = 10
PIVOT_EPS = 1e-14

# combinatorics
DEFAULT_MAX_ORDER = 64

# series
SERIES_MAX_TERMS = 10_000
SERIES_REL_TOL = 1e-15
BISECT_XTOL = 1e-12
BISECT_MAXITER = 200

# amplitude cascades
AMPLITUDE_BLOWUP = 1e12
AMPLITUDE_RTOL = 1e-12
AMPLITUDE_STREAK = 10

# borders
BORDER_RESOLUTION = 1e-3
POISSON_RESOLUTION = 5e-4
POISSON_BRACKETS = {"picard": (1e-3, 1.0), "march": (0.4, 0.6)}
POISSON_MAX_ITER = 10_000
# amplitude of the alternating mode added to the initial Poisson profile
POISSON_SEED = 1e-8

# residual formulas, evaluated over ``v``
DEFAULT_POISSON_RESIDUAL_FORMULA = "v + v ** 2"
LINEAR_POISSON_RESIDUAL_FORMULA = "v"

# labels
SCHEME_EXPLICIT = "explicit"
SCHEME_IMPLICIT = "implicit"
SCHEMES = (SCHEME_EXPLICIT, SCHEME_IMPLICIT)

PDE_SCHEME_PICARD = "picard"
PDE_SCHEME_MARCH = "march"
PDE_SCHEMES = (PDE_SCHEME_PICARD, PDE_SCHEME_MARCH)

STATUS_CONVERGED = "converged"
STATUS_DIVERGED = "diverged"
STATUS_MAXITER = "maxiter"
STATUS_SINGULAR = "singular"

VERDICT_STABLE = "stable"
VERDICT_UNSTABLE = "unstable"
VERDICT_UNDECIDED = "undecided"

# cli
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
MANIFEST_FILENAME = "manifest.json"
