"""Continuous maps, discontinuous limit.

With f_n(x) = x^n the n-iterate is x^(n!).  After eight steps every grid
point below 1 has collapsed to (numerically) zero while 1 stays put, so the
tail profile jumps at the right endpoint and the iterates are not
equicontinuous.
"""

from ndslab import ConvergentFamily, Family, Space, System
from ndslab.analysis import equicontinuity, pointwise_limit_profile
from ndslab.space import grid

I = Space.interval(0, 1)
power = System(I, ConvergentFamily(Family(I, "power")), label="power")

prof = pointwise_limit_profile(power, grid(I, 101), N=8, window=1)
for x, v in list(zip(prof.grid.tolist(), prof.values))[-4:]:
    print(f"x = {x:<5} tail value {v.tolist()[0]:.3g}")
print("max jump between neighbours:", prof.max_jump)

eq = equicontinuity(power, grid(I, 101), [0.01, 0.05, 0.2], N=8)
for delta, eps in eq.table:
    print(f"delta = {delta:<5} observed spread {eps:.6f}")
