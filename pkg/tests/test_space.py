import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ndslab import EmptySetError, PointSet, Space, ConfigError, DomainError
from ndslab.space import covering_radius, distance, epsilon_cluster, grid, hausdorff

from oracles import greedy_net_bf, hausdorff_bf

unit = st.floats(0.0, 1.0, allow_nan=False)


def test_distance_examples():
    assert distance(Space.interval(0, 1), 0.2, 0.7) == pytest.approx(0.5, abs=1e-15)
    assert distance(Space.circle(1.0), 0.05, 0.95) == pytest.approx(0.1, abs=1e-15)
    box = Space.box([0, 0], [1, 1], metric="chebyshev")
    assert distance(box, [0, 0], [0.3, 0.5]) == 0.5


def test_distance_outside_domain():
    with pytest.raises(DomainError):
        distance(Space.interval(0, 1), 0.5, 1.5)


def test_circle_canonicalizes():
    C = Space.circle(1.0)
    assert distance(C, 1.25, 0.25) == 0.0
    assert distance(C, -0.1, 0.1) == pytest.approx(0.2)


@given(unit, unit, unit)
def test_interval_metric_axioms(a, b, c):
    I = Space.interval(0, 1)
    assert distance(I, a, a) == 0
    assert distance(I, a, b) == distance(I, b, a)
    assert distance(I, a, c) <= distance(I, a, b) + distance(I, b, c) + 1e-15


@given(unit, unit, unit)
def test_circle_metric_axioms(a, b, c):
    C = Space.circle(1.0)
    dab = distance(C, a, b)
    assert 0 <= dab <= 0.5
    assert dab == distance(C, b, a)
    assert distance(C, a, c) <= dab + distance(C, b, c) + 1e-15


def test_hausdorff_examples():
    I = Space.interval(0, 1)
    assert hausdorff(I, [0.1, 0.9], [0.1, 0.9]) == 0
    assert hausdorff(I, [0.0], [1.0]) == 1
    assert hausdorff(I, [0.0, 1.0], [0.5]) == 0.5


def test_hausdorff_empty():
    I = Space.interval(0, 1)
    with pytest.raises(EmptySetError):
        hausdorff(I, [], [0.5])


@settings(max_examples=60)
@given(st.lists(unit, min_size=1, max_size=30), st.lists(unit, min_size=1, max_size=30),
       st.sampled_from(["interval", "circle"]))
def test_hausdorff_matches_bruteforce(A, B, kind):
    space = Space.interval(0, 1) if kind == "interval" else Space.circle(1.0)
    if kind == "circle":
        A = [a % 1.0 for a in A]
        B = [b % 1.0 for b in B]
    got = hausdorff(space, A, B, chunk=7)
    assert got == pytest.approx(hausdorff_bf(kind, A, B), abs=1e-15)
    assert got == hausdorff(space, B, A)


def test_hausdorff_box_bruteforce():
    rng = np.random.default_rng(3)
    box = Space.box([0, 0], [1, 1])
    A, B = rng.random((40, 2)), rng.random((25, 2))
    D = np.sqrt(((A[:, None, :] - B[None, :, :]) ** 2).sum(-1))
    want = max(D.min(1).max(), D.min(0).max())
    assert hausdorff(box, A, B, chunk=5) == pytest.approx(want, abs=1e-15)


def test_grid_examples():
    assert grid(Space.interval(0, 1), 3).tolist() == [0, 0.5, 1]
    assert grid(Space.circle(1.0), 4).tolist() == [0, 0.25, 0.5, 0.75]
    g = grid(Space.box([0, 0], [1, 1]), 2)
    assert len(g) == 4
    assert sorted(map(tuple, g.coords.tolist())) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(ConfigError):
        grid(Space.interval(0, 1), 1)


def test_cluster_examples():
    I = Space.interval(0, 1)
    assert epsilon_cluster(I, [0.5, 0.5000001, 0.9], 0.01).tolist() == [0.5, 0.9]
    assert len(epsilon_cluster(I, grid(I, 101), 2.0)) == 1
    assert epsilon_cluster(I, [0, 0.4, 0.8], 0.5).tolist() == [0, 0.8]


@settings(max_examples=60)
@given(st.lists(unit, min_size=1, max_size=60), st.floats(1e-3, 0.5),
       st.sampled_from(["interval", "circle"]))
def test_cluster_matches_greedy_oracle(cloud, eps, kind):
    space = Space.interval(0, 1) if kind == "interval" else Space.circle(1.0)
    cloud = [c % 1.0 for c in cloud] if kind == "circle" else cloud
    # a raw list is scanned in the given order, a PointSet in sorted order
    assert epsilon_cluster(space, cloud, eps).tolist() == greedy_net_bf(kind, cloud, eps)
    stored = PointSet(space, cloud).tolist()
    assert epsilon_cluster(space, PointSet(space, cloud), eps).tolist() == greedy_net_bf(kind, stored, eps)


@settings(max_examples=40)
@given(st.lists(unit, min_size=1, max_size=60), st.floats(1e-3, 0.5))
def test_cluster_is_an_eps_net(cloud, eps):
    I = Space.interval(0, 1)
    net = epsilon_cluster(I, cloud, eps)
    c = net.coords[:, 0]
    assert all(np.min(np.abs(c - x)) < eps for x in cloud)
    if len(c) > 1:
        assert np.min(np.diff(np.sort(c))) >= eps


def test_cluster_box_matches_quadratic_scan():
    rng = np.random.default_rng(11)
    box = Space.box([0, 0], [1, 1])
    cloud = PointSet(box, rng.random((300, 2)))
    eps = 0.1
    centers = []
    for p in cloud.coords:
        if all(np.linalg.norm(p - c) >= eps for c in centers):
            centers.append(p)
    got = epsilon_cluster(box, cloud, eps)
    assert np.array_equal(got.coords, PointSet(box, centers).coords)


def test_pointset_sorted_and_deduplicated():
    I = Space.interval(0, 1)
    s = PointSet(I, [0.3, 0.1, 0.3, 0.1 + 1e-14])
    assert s.tolist() == [0.1, 0.3]
    assert s == PointSet(I, [0.1, 0.3])


def test_covering_radius():
    I = Space.interval(0, 1)
    assert covering_radius(grid(I, 101)) == pytest.approx(0.005)
    assert covering_radius(grid(Space.circle(1.0), 4)) == pytest.approx(0.125)
    assert covering_radius(PointSet(I, [0.5])) == pytest.approx(0.5)
