#!/usr/bin/env python3
"""Mergers of real eigenvalue pairs for the N = 8 wells with a field-free centre.

For each breakpoint ell the coupling xi is swept, the points where the
number of real levels drops are located, and for ell = 1/2 the later
landing of a complex pair on the imaginary axis is found as well.
"""

import numpy as np

from ptwell import exceptional_points, imaginary_axis_crossing, shifted_well, sweep

for ell, hi in (("5/8", 2.0), ("3/8", 1.0), ("1/2", 2.0)):
    m = shifted_well(8, ell)
    print(f"--- N = 8, ell = {ell} ---")
    t = sweep(m, np.linspace(0.0, hi, 201))
    for i, before, after in t.events():
        print(f"  sweep: real count {before} -> {after} between xi = {t.xi[i - 1]:.3f} and {t.xi[i]:.3f}")
    for ep in exceptional_points(m, (0.0, hi)):
        F = ", ".join(f"{f.real:+.8f}" for f in ep.F_star)
        print(f"  xi* = {ep.xi:.10f}  (Z* = {ep.Z:.6f})  merging at F* = {F}")

m = shifted_well(8, "1/2")
rep = imaginary_axis_crossing(m, (2.0, 4.0))
F = ", ".join(f"{f.imag:+.8f}i" for f in rep.F_star)
print(f"--- N = 8, ell = 1/2: complex pair reaches the imaginary axis at xi = {rep.xi:.10f}, F = {F}")

m = shifted_well(6, "1/2")
(ep,) = exceptional_points(m, (0.0, 3.0))
print(f"--- N = 6, ell = 1/2: triple merger at F = 0, xi* = {ep.xi:.10f} vs sqrt(3/2) = {np.sqrt(1.5):.10f}")
