#!/usr/bin/env python3
"""The N = 10, ell = 1/2 quadruplet near its merger.

Locates the coupling where the middle pair of y = F^2 merges and prints
y at the two published probe couplings and around the computed merger.
"""

import numpy as np

from ptwell import exceptional_points, shifted_well, spectrum
from ptwell.spectral import squared_levels

m = shifted_well(10, "1/2")
(ep,) = exceptional_points(m, (0.4, 0.6), tol=1e-13)
print(f"merger of the middle pair at xi* = {ep.xi:.13f} (bracket width {ep.width:.0e})")
for xi in (ep.bracket[0] - 4e-9, ep.bracket[0], ep.bracket[1], 0.50209209, 0.502092091):
    y = squared_levels(spectrum(m, xi).eigenvalues)
    print(f"xi = {xi:.13f}  y = " + "  ".join(f"{v.real:.9f}{v.imag:+.3e}i" for v in y))
