# Condition checks: default sampling of (0, inf)
U_RANGE = (1e-6, 1e6)
U_SAMPLES = 10_000
MIN_U_SAMPLES = 1_000

# Verdict tolerance on the (C_p) residual, relative to the residual's scale
RESIDUAL_TOL = 1e-12

# Merged power coefficients this close to cancellation count as exact ties
COEFF_TIE_TOL = 1e-9

# Admissible-parameter search grids (hierarchy_check, auto mode)
EPSILON_GRID = (0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0)
GAMMA_GRID = (0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)

# Guard in the reaction step cap u / (|f(u)| + EPS0)
EPS0 = 1e-300

# Osgood tail integration
OSGOOD_TAIL_TOL = 1e-8
OSGOOD_HORIZON = 1e12

# Tabulated sources: quadrature relative tolerance for F
TABLE_QUAD_RTOL = 1e-10

# p > 2 eigensolver preconditioner floor (relative to the mean face weight)
PRECOND_FLOOR = 1e-3

# Blow-up extrapolation
EXTRAPOLATION_MIN_SAMPLES = 5
EXTRAPOLATION_MIN_GROWTH = 5.0
EXTRAPOLATION_MAX_REL_RESIDUAL = 0.05

# Emitted CSV floats (17 significant digits for byte-identical reruns)
FLOAT_FORMAT = "%.17g"

RUN_COLUMNS = ["t", "supnorm", "J", "I", "Iprime", "Idoubleprime", "H", "residual"]
EVENT_COLUMNS = ["t", "event"]
EIG_COLUMNS = ["lambda", "p", "n", "residual", "iterations"]
CHECK_COLUMNS = [
    "condition", "satisfied", "residual_min", "worst_u", "certificate",
    "u_min", "u_max", "samples", "alpha", "beta", "gamma", "lambda1p",
]
SWEEP_COLUMNS = ["outcome", "T_num", "Tstar_upper", "J0", "min_H", "condition_verdict", "error"]
