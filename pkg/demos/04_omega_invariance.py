"""Omega-limit sets are mapped onto themselves by the limit map.

Two cases: a contraction family whose orbits creep toward 1/2 at rate
about 0.2/n, and the golden-mean rotation whose orbit fills the circle.
The contraction defect is small but not zero at any feasible horizon: the
orbit after 11000 steps still sits about 2e-5 above the fixed point.
"""

import math

from ndslab import Catalog, ConvergentFamily, Family, PeriodicTail, Space, System
from ndslab.verify import check_kempf

I = Space.interval(0, 1)
contraction = System(I, ConvergentFamily(Family(I, "affine_decay", [0.5, 0.25, 0.1])), label="contraction")
rep = check_kempf(contraction, 0.1)
print(f"contraction: omega estimate {rep.extras['omega']}, defect {rep.max_defect:.3g}")

C = Space.circle(1.0)
rot = Catalog(C, "rotation", [(math.sqrt(5) - 1) / 2])
golden = System(C, PeriodicTail([rot]), limit=rot, label="golden")
rep = check_kempf(golden, 0.0, keep=100_000, eps=1e-3, tol=2e-3)
print(f"golden rotation: {rep.extras['centers']} centers, defect {rep.max_defect:.3g}")
