"""How the fig7 verdicts depend on the unstated plateau heat capacity.

The borderline branch on [5.3, T_hi] is fixed by e_T continuity with the
lower plateau, so ``cv_lo`` (and the upper knot) are the only free choices.
Along a borderline branch e_T grows without bound as 4 C R T -> 1, so a
larger plateau pushes that blow-up below T_hi and the eos is rejected.
Every valid combination probed here is non-convex in both planes. The
default ``cv_lo = 1.5`` (the monatomic value) is the largest probed plateau
that still reaches T_hi = 5.6.
"""

from shockpolar.analysis import Verdict, convexity
from shockpolar.errors import ShockPolarError
from shockpolar.scenarios import counterexample_fig7

print(f"{'cv_lo':>6} {'T_hi':>5} {'C':>10} {'T_n':>8}  {'u':<15} {'j':<15} events in window")
for T_hi in (5.5, 5.6, 5.7):
    for cv_lo in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0):
        try:
            sc = counterexample_fig7(cv_lo=cv_lo, T_hi=T_hi)
            curve = sc.sample(512)
        except ShockPolarError:
            print(f"{cv_lo:6.2f} {T_hi:5.2f}  invalid: 4 C R T reaches 1 below T_hi")
            continue
        u = convexity(curve, "u", refine=True)
        j = convexity(curve, "j", refine=True)
        inside = [round(e.location, 4) for e in u.events if 5.3 <= e.location <= T_hi]
        mark = "  <- default" if (cv_lo, T_hi) == (1.5, 5.6) else ""
        both = u.verdict is Verdict.NON_CONVEX and j.verdict is Verdict.NON_CONVEX
        print(f"{cv_lo:6.2f} {T_hi:5.2f} {sc.params['C']:10.6f} {curve.T_ratio[0]:8.4f}  "
              f"{u.verdict.value:<15} {j.verdict.value:<15} {inside}{'' if both else '  (not both)'}{mark}")
