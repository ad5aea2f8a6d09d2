#!/usr/bin/env python3
"""Three independent routes to the same real spectrum (even N, square well).

1. roots of the characteristic polynomial (tridiagonal recurrence),
2. zeros of the 2x2 matching determinant built from Chebyshev polynomials,
3. zeros of the determinant of the real pentadiagonal embedding.
"""

import numpy as np

from ptwell import spectrum
from ptwell.realform import real_system_roots, verify_matrix_chebyshev
from ptwell.secular import model_for, secular_roots

n = 3  # N = 10
m = model_for(n, "even")
for xi in (0.0, 0.08, 0.16):  # xi_crit(10) = 0.178
    F = np.sort(spectrum(m, xi).eigenvalues.real)
    sec = secular_roots(n, xi, "even")
    real = real_system_roots(n, xi)
    print(f"N = {m.N}, xi = {xi}")
    print("  charpoly   ", np.array2string(F, precision=10))
    print(f"  matching    max deviation {np.max(np.abs(sec - F)):.1e}")
    print(f"  real form   max deviation {np.max(np.abs(real - F)):.1e}")
    res = max(verify_matrix_chebyshev(n, f, xi) for f in F if abs(f) > 1e-9 or xi > 0)
    print(f"  c_k = U_k(X/2) c_0 recurrence residual {res:.1e}")
