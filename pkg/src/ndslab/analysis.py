"""Orbit-limit analytics on finite windows.

Every verdict here is quantified by an explicit ``(eps, tail)`` pair: a
sequence "converges" when all its terms past ``tail_start`` are within
``eps``.  Nothing claims an infinite-n statement.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .maps import Catalog
from .space import PointSet, epsilon_cluster, hausdorff
from .system import orbit_array, trajectory


# --------------------------------------------------------------------------
# sequence views: n -> a map, evaluated on a batch for n = 1..N


class MapsView:
    """``n -> f_n``, the raw maps of a system."""

    def __init__(self, sys):
        self.sys = sys
        self.label = f"f_n[{sys.label}]"

    def series(self, X, N):
        return np.stack([self.sys.nth_map(n).apply(X) for n in range(1, N + 1)])


class IteratesView:
    """``n -> post o f_1^(n + offset)``; ``post`` defaults to nothing."""

    def __init__(self, sys, offset=0, post=None):
        self.sys = sys
        self.offset = int(offset)
        self.post = post
        self.label = f"{'post o ' if post is not None else ''}f_1^(n+{offset})[{sys.label}]"

    def series(self, X, N):
        orb = orbit_array(self.sys, X, N + self.offset)[1 + self.offset:]
        if self.post is not None:
            orb = np.stack([self.post.apply(Y) for Y in orb])
        return orb


class ConstantView:
    """``n -> g`` for one fixed map."""

    def __init__(self, m):
        self.map = m
        self.label = repr(m)

    def series(self, X, N):
        Y = self.map.apply(X)
        return np.broadcast_to(Y, (N,) + Y.shape)


def _grid_coords(space, grid):
    if isinstance(grid, PointSet):
        return grid.coords
    return space.canonicalize(space.as_points(grid))


# --------------------------------------------------------------------------
# omega-limit sets


@dataclass
class OmegaEstimate:
    """eps-net of the orbit points with index in ``(burn_in, burn_in + keep]``."""

    centers: PointSet
    burn_in: int
    keep: int
    eps: float
    source: tuple
    cloud: np.ndarray = field(repr=False, default=None)

    def to_dict(self):
        return {
            "centers": self.centers.tolist(),
            "burn_in": self.burn_in,
            "keep": self.keep,
            "eps": self.eps,
            "source": {"system": self.source[0], "x0": list(map(float, self.source[1]))},
        }


def omega_limit(sys, x, burn_in=1000, keep=10000, eps=1e-3):
    if keep < 1:
        raise ConfigError("keep must be >= 1")
    if burn_in < 0:
        raise ConfigError("burn_in must be >= 0")
    if not eps > 0:
        raise ConfigError("eps must be positive")
    tr = trajectory(sys, x, burn_in + keep)
    window = tr.points[burn_in + 1:]
    centers = epsilon_cluster(sys.space, PointSet(sys.space, window), eps)
    return OmegaEstimate(centers, burn_in, keep, float(eps), (sys.label, tr.x0), cloud=window)


# --------------------------------------------------------------------------
# pointwise limit behaviour


@dataclass
class LimitProfile:
    grid: PointSet
    values: list
    max_jump: float
    window: int
    N: int

    def to_dict(self):
        return {
            "N": self.N,
            "window": self.window,
            "max_jump": self.max_jump,
            "grid": self.grid.tolist(),
            "values": [v.tolist() for v in self.values],
        }


def _adjacent_pairs(space, X):
    """Index pairs of grid points at the minimal nonzero spacing."""
    D = space.pairwise(X, X)
    iu = np.triu_indices(len(X), k=1)
    d = D[iu]
    if len(d) == 0:
        return []
    h = d[d > 0].min()
    sel = d <= h * (1 + 1e-9)
    return list(zip(iu[0][sel].tolist(), iu[1][sel].tolist()))


def pointwise_limit_profile(sys, grid, N, window, eps=1e-3):
    """Cluster ``{f_1^n(x) : N - window < n <= N}`` for every grid point."""
    if not 1 <= window <= N:
        raise ConfigError("need 1 <= window <= N")
    grid = grid if isinstance(grid, PointSet) else PointSet(sys.space, grid)
    orb = orbit_array(sys, grid.coords, N)
    tail = orb[N - window + 1:]
    space = sys.space
    values = [epsilon_cluster(space, tail[:, i, :], eps) for i in range(len(grid))]
    jump = 0.0
    for i, j in _adjacent_pairs(space, grid.coords):
        jump = max(jump, hausdorff(space, values[i], values[j]))
    return LimitProfile(grid=grid, values=values, max_jump=jump, window=window, N=N)


# --------------------------------------------------------------------------
# asymptotic sequences


@dataclass
class AsymptoticsReport:
    per_x_defect: np.ndarray  # (grid points, N), column n-1 holds step n
    uniform_defect: np.ndarray  # (N,)
    decision_pointwise: bool
    decision_uniform: bool
    pointwise_at: np.ndarray  # per grid point verdict
    eps: float
    tail_start: int
    density_uniform: float  # fraction of n <= N with uniform defect < eps
    density_pointwise: np.ndarray

    def to_dict(self):
        return {
            "eps": self.eps,
            "tail_start": self.tail_start,
            "decision_pointwise": self.decision_pointwise,
            "decision_uniform": self.decision_uniform,
            "density_uniform": self.density_uniform,
            "pointwise_at": self.pointwise_at.tolist(),
            "uniform_defect": self.uniform_defect.tolist(),
        }


def asymptotic_report(view_a, view_b, grid, N, eps, tail_start=None, space=None):
    """Compare two map sequences on a grid for ``n = 1..N``.

    The ultrafilter version of asymptoticity is not decidable; instead the
    report carries the density of indices where the defect is below ``eps``.
    """
    space = space or (grid.space if isinstance(grid, PointSet) else view_a.sys.space)
    X = _grid_coords(space, grid)
    tail_start = N // 2 if tail_start is None else int(tail_start)
    D = space.dist(view_a.series(X, N), view_b.series(X, N))  # (N, m)
    uniform = D.max(axis=1)
    tail = np.arange(1, N + 1) > tail_start
    ok_at = np.all(D[tail] < eps, axis=0)
    return AsymptoticsReport(
        per_x_defect=D.T.copy(),
        uniform_defect=uniform,
        decision_pointwise=bool(ok_at.all()),
        decision_uniform=bool(np.all(uniform[tail] < eps)),
        pointwise_at=ok_at,
        eps=float(eps),
        tail_start=tail_start,
        density_uniform=float(np.mean(uniform < eps)),
        density_pointwise=np.mean(D < eps, axis=0),
    )


# --------------------------------------------------------------------------
# uniform limits


@dataclass
class UniformLimit:
    sup_defect: np.ndarray  # entry n-1: max over grid of d(f_n(x), limit(x))
    converges: bool
    eps_at_tail: float
    tol: float

    def to_dict(self):
        return {
            "converges": self.converges,
            "eps_at_tail": self.eps_at_tail,
            "tol": self.tol,
            "sup_defect": self.sup_defect.tolist(),
        }


def declared_limit(sys):
    if sys.limit is None:
        raise ConfigError(f"system {sys.label!r} has no declared limit")
    return sys.limit


def uniform_limit(sys, grid, N, tol=1e-2):
    """Grid sup-distance between ``f_n`` and the declared limit; last quartile decides."""
    phi = declared_limit(sys)
    X = _grid_coords(sys.space, grid)
    target = phi.apply(X)
    sup = np.array([sys.space.dist(sys.nth_map(n).apply(X), target).max() for n in range(1, N + 1)])
    tail = sup[(3 * N) // 4:]
    eps_tail = float(tail.max())
    return UniformLimit(sup_defect=sup, converges=eps_tail < tol, eps_at_tail=eps_tail, tol=float(tol))


# --------------------------------------------------------------------------
# equicontinuity


@dataclass
class EquicontinuityReport:
    table: list  # (delta, eps_observed), sorted by delta
    family_label: str
    verdict_hint: bool

    def to_dict(self):
        return {
            "family": self.family_label,
            "verdict_hint": self.verdict_hint,
            "table": [{"delta": d, "eps_observed": e} for d, e in self.table],
        }


def equicontinuity(sys, grid, deltas, N, post=None):
    """Observed modulus of continuity of ``{post o f_1^n : 1 <= n <= N}`` on a grid.

    ``eps_observed(delta)`` is the largest ``d(g(x), g(y))`` over family members
    and grid pairs with ``d(x, y) <= delta`` (up to the point tolerance 1e-12).
    """
    deltas = [float(d) for d in deltas]
    if not deltas or any(d <= 0 for d in deltas) or deltas != sorted(deltas):
        raise ConfigError("deltas must be positive and sorted ascending")
    space = sys.space
    X = _grid_coords(space, grid)
    D0 = space.pairwise(X, X)
    iu = np.triu_indices(len(X), k=1)
    d0 = D0[iu]
    sel = d0 <= deltas[-1] + 1e-12
    ii, jj, d0 = iu[0][sel], iu[1][sel], d0[sel]
    spread = np.zeros(len(d0))
    view = IteratesView(sys, post=post)
    for Y in view.series(X, N):
        spread = np.maximum(spread, space.dist(Y[ii], Y[jj]))
    table = []
    for d in deltas:
        m = d0 <= d + 1e-12
        table.append((d, float(spread[m].max()) if m.any() else 0.0))
    lo, hi = table[0][1], table[-1][1]
    label = f"{'phi o ' if post is not None else ''}f_1^n, n<={N} [{sys.label}]"
    return EquicontinuityReport(table=table, family_label=label, verdict_hint=bool(hi == 0.0 or lo < hi))


def zero_map(space, value=0.0):
    return Catalog(space, "constant", [value])
