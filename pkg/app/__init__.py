"""
p-Laplacian blow-up laboratory.

Discrete p-Laplacian operators and eigenpairs, blow-up condition checks on
the nonlinearity, concavity-method functionals and an adaptive solver for
u_t = div(|grad u|^{p-2} grad u) + f(u) with Dirichlet data.
"""

__version__ = "0.1.0"
