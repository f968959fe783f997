import numpy as np
import pytest

from ndslab import Catalog, ConfigError, ConvergentFamily, Family, PeriodicTail, PointSet, Space, System
from ndslab.analysis import (
    ConstantView, IteratesView, MapsView, asymptotic_report, equicontinuity, omega_limit,
    pointwise_limit_profile, uniform_limit, zero_map,
)
from ndslab.space import grid, hausdorff
from ndslab.system import trajectory

from oracles import GOLDEN

I = Space.interval(0.0, 1.0)


def test_omega_contraction(contraction):
    om = omega_limit(contraction, 0.1, burn_in=1000, keep=10000, eps=1e-3)
    assert len(om.centers) == 1
    assert hausdorff(I, om.centers, [0.5]) <= 1e-3


def test_omega_identity():
    sys = System(I, PeriodicTail([Catalog(I, "identity")]))
    assert omega_limit(sys, 0.37, burn_in=10, keep=50).centers.tolist() == [0.37]


def test_omega_golden_rotation_fills_circle():
    C = Space.circle(1.0)
    sys = System(C, PeriodicTail([Catalog(C, "rotation", [GOLDEN])]))
    om = omega_limit(sys, 0.0, burn_in=1000, keep=100_000, eps=0.01)
    assert hausdorff(C, om.centers, grid(C, 64)) <= 0.02


def test_omega_window_is_the_orbit_tail(contraction):
    om = omega_limit(contraction, 0.3, burn_in=20, keep=30, eps=1e-9)
    pts = trajectory(contraction, 0.3, 50).points[21:]
    assert np.array_equal(om.cloud, pts)
    with pytest.raises(ConfigError):
        omega_limit(contraction, 0.3, keep=0)


def test_power_profile_small_grid(power_family):
    prof = pointwise_limit_profile(power_family, grid(I, 11), N=8, window=1)
    for x, v in zip(prof.grid.tolist(), prof.values):
        want = 1.0 if x == 1.0 else 0.0
        assert v.tolist() == [want]
    assert prof.max_jump == pytest.approx(1.0)


def test_power_profile_oracle(power_family):
    # f_1^8(x) = x^(8!), iterated by hand
    for x in (0.5, 0.9, 0.99):
        y = x
        for n in range(1, 9):
            y = y**n
        prof = pointwise_limit_profile(power_family, PointSet(I, [x]), N=8, window=1)
        assert prof.values[0].tolist() == [y]


def test_profile_window_precondition(power_family):
    with pytest.raises(ConfigError):
        pointwise_limit_profile(power_family, grid(I, 11), N=3, window=4)


def test_asymptotic_same_sequence(contraction):
    v = MapsView(contraction)
    rep = asymptotic_report(v, v, grid(I, 21), N=30, eps=1e-3)
    assert not rep.uniform_defect.any()
    assert rep.decision_pointwise and rep.decision_uniform


def test_asymptotic_uniap_shadow(contraction):
    phi = contraction.limit
    rep = asymptotic_report(
        IteratesView(contraction, post=phi), IteratesView(contraction, offset=1),
        grid(I, 101), N=200, eps=1e-2, tail_start=100,
    )
    n = np.arange(1, 201)
    assert np.allclose(rep.uniform_defect, 0.1 / (n + 2), atol=1e-12, rtol=0)
    assert rep.decision_uniform


def test_asymptotic_decisions_follow_tail(power_family):
    rep = asymptotic_report(MapsView(power_family), ConstantView(zero_map(I)), grid(I, 11), N=20, eps=0.5)
    assert not rep.decision_uniform
    assert rep.pointwise_at.tolist() == [True] * 10 + [False]


def test_uniform_limit_power_vs_zero(power_family):
    sys = System(I, power_family.seq, limit=zero_map(I))
    ul = uniform_limit(sys, grid(I, 101), N=50)
    assert np.all(ul.sup_defect == 1.0)
    assert not ul.converges


def test_uniform_limit_contraction(contraction):
    ul = uniform_limit(contraction, grid(I, 101), N=200)
    n = np.arange(1, 201)
    assert np.allclose(ul.sup_defect, 0.1 / (n + 1), atol=1e-15, rtol=0)
    assert ul.converges


def test_equicontinuity_power(power_family):
    rep = equicontinuity(power_family, grid(I, 101), [0.01, 0.05, 0.2], N=8)
    eps = [e for _, e in rep.table]
    assert eps[0] >= 0.9
    assert eps == sorted(eps)


def test_equicontinuity_contraction(contraction):
    rep = equicontinuity(contraction, grid(I, 101), [0.01, 0.1, 0.5], N=50)
    eps = [e for _, e in rep.table]
    assert eps == sorted(eps)
    # iterates are 1/2-Lipschitz
    for d, e in rep.table:
        assert e <= 0.5 * d + 1e-12
    assert rep.verdict_hint


def test_equicontinuity_deltas_validated(contraction):
    with pytest.raises(ConfigError):
        equicontinuity(contraction, grid(I, 11), [0.5, 0.1], N=5)


def test_tent_family_limit():
    sys = System(I, ConvergentFamily(Family(I, "tent_decay", [0.5])))
    ul = uniform_limit(sys, grid(I, 101), N=400, tol=2e-3)
    assert ul.sup_defect[-1] == pytest.approx(0.5 / 401)
