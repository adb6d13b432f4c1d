"""Useful constants."""

# Tolerances shared across the package.
sym_tol = 1e-12         # max |m - m.T| accepted as symmetric
zero_eig = 1e-9         # |mu| below this is the null space
distinct_tol = 1e-6     # eigenvalue grouping for multiplicities
tie_tol = 1e-12         # sign convention: near-equal magnitudes
critical_tol = 1e-10    # |gamma^2 - 4 omega^2| below this is critical
resonance_tol = 1e-9    # |Omega - omega| below this is exact resonance
jacobi_tol = 1e-14      # off-diagonal norm threshold (relative)
jacobi_sweeps = 100
balance_tol = 1e-9      # |sum(p)| accepted as balanced
