from .grid import build_grid, integrate_power, integrate_composed, sup_norm
from .plap import apply_plap, gradient_energy, flux_pairing
from .eigen import first_eigenpair, rayleigh_quotient, analytic_eigenvalue_1d
