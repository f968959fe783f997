"""Composition identities hold bit for bit.

The period-two block [1 - x, x^2] is iterated three ways: directly, through
a shifted tail, and through the period map g = f_2 o f_1.  Induced systems
along k_n = 2n and k = (2, 3, 5, 8) are compared with the base iterates.
"""

from ndslab import Catalog, PeriodicTail, Space, System, iterate
from ndslab.verify import check_induced, check_periodic, check_split

I = Space.interval(0, 1)
block = System(I, PeriodicTail([Catalog(I, "affine", [-1, 1]), Catalog(I, "power", [2])]), label="block")

x = 0.3
for n in range(6):
    print(f"f_1^{n}({x}) = {float(iterate(block, x, n)[0]):.17g}")

for rep in (
    check_split(block, k_max=8, n_max=64),
    check_periodic(block, l_max=16),
    check_induced(block, {"form": "linear", "param": 2}),
    check_induced(block, [2, 3, 5, 8]),
):
    extra = f" additive={rep.extras['gamma_additive']}" if "gamma_additive" in rep.extras else ""
    print(f"{rep.check_name:<16} passed={rep.passed} max_defect={rep.max_defect}{extra}")
