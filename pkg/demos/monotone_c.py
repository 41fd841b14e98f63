"""Non-convex polar from an eos whose sound speed never decreases.

c_v = 3R/2 below T1 = 10.3 T0, constant sound speed on [T1, 1.05 T1], matched
c_v above; upstream M0 = 45. The reversal is faint, so the detector is run
at several resolutions.
"""

import numpy as np

from shockpolar import analysis, get_scenario

sc = get_scenario("monotone-c")
T = np.geomspace(sc.eos.T_min, 100.0, 20001)
c2 = sc.eos.sound_speed_sq(T)
print(f"sound speed nondecreasing on {T.size} samples: {bool(np.all(np.diff(c2) >= -1e-12 * c2[1:]))}")

for n in (64, 256, 512, 2048, 8192):
    rep = analysis.convexity(sc.sample(n), "u", refine=True)
    locs = [round(e.location, 4) for e in rep.events]
    # near the noise floor a fine grid splits the reversed stretch into pieces
    spans = rep.reversed_spans
    hull = (round(min(a for a, _ in spans), 4), round(max(b for _, b in spans), 4)) if spans else None
    print(f"n = {n:5d}: {rep.verdict.value:<15} events at T/T0 = {locs}, "
          f"reversed within {hull} ({len(spans)} piece(s))")

ctrl = get_scenario("monotone-c-control")
print(f"zero-width control: {analysis.convexity(ctrl.sample(512), 'u', refine=True).verdict.value}")
