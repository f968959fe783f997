"""Uniform convergence without the action identity.

The three-segment polylines converge uniformly to phi(x) = min(x, 1/2), and
the orbit of 1 is 1/(n+1).  Applying phi to the first iterate freezes the
point at 1/2, so phi^m o f_1 stays about 1/2 away from f_1^(m+1) at x = 1.
Still, 0 is a fixed point of phi sitting in the omega-limit set.
"""

from ndslab import ConvergentFamily, Family, Space, System, iterate
from ndslab.verify import check_action, find_fixed_point

I = Space.interval(0, 1)
sys = System(I, ConvergentFamily(Family(I, "example3")), label="three-segment")

for n in (1, 2, 5, 10, 100):
    print(f"f_1^{n}(1) = {float(iterate(sys, 1.0, n)[0]):.6f}   1/(n+1) = {1 / (n + 1):.6f}")

rep = check_action(sys, m_max=200, grid=[1.0], N=1, eps=1e-2, tail_start=8, anchor=1)
print(f"anchored action: passed={rep.passed}, smallest tail defect {rep.extras['min_tail_defect']:.4f}")

y, res, _ = find_fixed_point(sys, 1.0)
print(f"fixed point candidate {y[0]:.3g}, residual {res}")
