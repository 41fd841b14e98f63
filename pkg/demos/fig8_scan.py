"""Potential flow with gamma = -3/4 above V = 0.019 V0 and 5/3 below.

The upstream Mach number is not fixed by the construction, so scan it.
"""

import numpy as np

from shockpolar.polar_potential import normal_shock_V
from shockpolar.scenarios import counterexample_fig8, scan_fig8

M0s = np.geomspace(1.5, 50.0, 25)
test = scan_fig8(M0s)
ctrl = scan_fig8(M0s, control=True)
print(f"{'M0':>8} {'V_n':>10}  {'two-segment':<15} {'gamma = 5/3':<15} events (V/V0)")
for (M0, rep), (_, crep) in zip(test, ctrl):
    V_n = normal_shock_V(counterexample_fig8(M0).upstream())
    locs = [f"{e.location:.4g}" for e in rep.events]
    print(f"{M0:8.3f} {V_n:10.4g}  {rep.verdict.value:<15} {crep.verdict.value:<15} {', '.join(locs)}")
