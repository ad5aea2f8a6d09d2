#!/usr/bin/env python3
"""One Hamiltonian, many metrics.

Builds Theta = sum_n theta_n |n>><<n| for two weight choices at a
sub-critical coupling, shows both intertwine H and H^dagger while being
different matrices, and shows the refusal past the critical coupling.
"""

import numpy as np

from ptwell import NonConstructibleError, biorthogonalize, build_metric, square_well
from ptwell import verify_pseudo_hermiticity, verify_quasi_hermiticity

m = square_well(4)
xi = 1.0
basis = biorthogonalize(m, xi)
print("eigenvalues", np.round(basis.eigenvalues.real, 12))
print("biorthogonality defect", f"{basis.biorthogonality_defect():.1e}")
print("pseudo-Hermiticity defect", verify_pseudo_hermiticity(basis.H))
print("Dirac metric residual", f"{verify_quasi_hermiticity(basis.H, np.eye(3)):.3f}")

for w in ((1, 1, 1), (2, 1, 1), (1, 5, 0.2)):
    theta = build_metric(basis, w)
    print(f"\ntheta_n = {w}")
    print(np.array2string(theta.theta, precision=4, suppress_small=True))
    print(f"  residual {verify_quasi_hermiticity(basis.H, theta):.1e}, "
          f"eigenvalues {np.round(theta.eigenvalues(), 4)}")

try:
    build_metric(biorthogonalize(m, 2.0))
except NonConstructibleError as exc:
    print("\nxi = 2:", exc)
