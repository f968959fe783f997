"""Compact metric domains, point sets, Hausdorff distance and epsilon-nets.

Points are stored as float arrays: a single point has shape ``(d,)`` and a
batch of points has shape ``(m, d)``.  Interval and circle spaces have
``d == 1``.
"""

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._io import csv_text
from .errors import ConfigError, DomainError, EmptySetError

#: Two points closer than this are the same point.
POINT_TOL = 1e-12

_METRICS = ("euclidean", "chebyshev", "arc")


@dataclass(frozen=True)
class Space:
    """A compact metric domain: an interval, a box or a circle."""

    kind: str
    lo: tuple
    hi: tuple
    metric: str

    def __post_init__(self):
        if self.kind not in ("interval", "box", "circle"):
            raise ConfigError(f"unknown space kind {self.kind!r}")
        if self.metric not in _METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}")
        if (self.metric == "arc") != (self.kind == "circle"):
            raise ConfigError("the arc metric is used exactly for circles")
        if len(self.lo) != len(self.hi) or not self.lo:
            raise ConfigError("bounds must have matching positive length")
        for a, b in zip(self.lo, self.hi):
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                raise ConfigError(f"degenerate bounds [{a}, {b}]")

    @classmethod
    def interval(cls, lo=0.0, hi=1.0):
        return cls("interval", (float(lo),), (float(hi),), "euclidean")

    @classmethod
    def box(cls, lo, hi, metric="euclidean"):
        lo = tuple(float(v) for v in np.atleast_1d(lo))
        hi = tuple(float(v) for v in np.atleast_1d(hi))
        return cls("box", lo, hi, metric)

    @classmethod
    def circle(cls, circumference=1.0):
        if not circumference > 0:
            raise ConfigError("circumference must be positive")
        return cls("circle", (0.0,), (float(circumference),), "arc")

    @property
    def dim(self):
        return len(self.lo)

    @property
    def circumference(self):
        return self.hi[0] if self.kind == "circle" else None

    @property
    def diameter(self):
        if self.kind == "circle":
            return self.hi[0] / 2
        span = np.subtract(self.hi, self.lo)
        if self.metric == "chebyshev":
            return float(span.max())
        return float(np.sqrt(np.sum(span * span)))

    # -- points -----------------------------------------------------------

    def as_points(self, x):
        """Return ``x`` as a float array of shape ``(m, d)`` (no validation)."""
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        elif arr.ndim == 1:
            arr = arr.reshape(-1, 1) if self.dim == 1 else arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise DomainError(f"expected points of dimension {self.dim}, got shape {np.shape(x)}")
        return arr

    def canonicalize(self, X):
        """Validate a ``(m, d)`` array and return canonical representatives.

        Circle coordinates are reduced modulo the circumference.  Interval and
        box coordinates within ``POINT_TOL`` of a bound are snapped onto it;
        anything further out raises :class:`DomainError`.
        """
        X = np.asarray(X, dtype=float)
        if not np.all(np.isfinite(X)):
            raise DomainError("non-finite coordinate")
        if self.kind == "circle":
            c = self.hi[0]
            Y = np.mod(X, c)
            return np.where(Y >= c, Y - c, Y)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        if np.any(X < lo - POINT_TOL) or np.any(X > hi + POINT_TOL):
            bad = X[np.any((X < lo - POINT_TOL) | (X > hi + POINT_TOL), axis=1)][0]
            raise DomainError(f"point {bad.tolist()} outside {self}")
        if np.any(X < lo) or np.any(X > hi):
            X = np.clip(X, lo, hi)
        return X

    def excursion(self, X):
        """How far each point of ``X`` lies outside the domain (0 inside)."""
        X = np.asarray(X, dtype=float)
        if self.kind == "circle":
            return np.zeros(X.shape[0])
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        out = np.maximum(np.maximum(lo - X, X - hi), 0.0)
        if self.metric == "chebyshev" or self.dim == 1:
            return out.max(axis=1)
        return np.sqrt(np.sum(out * out, axis=1))

    def point(self, x):
        """Canonical single point of shape ``(d,)``."""
        X = self.as_points(x)
        if X.shape[0] != 1:
            raise DomainError("expected a single point")
        return self.canonicalize(X)[0]

    # -- metric -----------------------------------------------------------

    def dist(self, A, B):
        """Elementwise distance between broadcastable point arrays (last axis = coords)."""
        diff = np.abs(np.asarray(A, dtype=float) - np.asarray(B, dtype=float))
        if self.kind == "circle":
            c = self.hi[0]
            diff = np.mod(diff, c)
            return np.minimum(diff, c - diff)[..., 0]
        if self.dim == 1:
            return diff[..., 0]
        if self.metric == "chebyshev":
            return diff.max(axis=-1)
        return np.sqrt(np.sum(diff * diff, axis=-1))

    def pairwise(self, A, B):
        """Distance matrix of shape ``(len(A), len(B))``."""
        A = np.asarray(A, dtype=float)
        B = np.asarray(B, dtype=float)
        return self.dist(A[:, None, :], B[None, :, :])

    def _scalar_dist(self):
        """Pure-python distance on coordinate tuples, same arithmetic as :meth:`dist`."""
        if self.kind == "circle":
            c = self.hi[0]

            def d(a, b):
                t = abs(a[0] - b[0]) % c
                return min(t, c - t)
        elif self.dim == 1:
            def d(a, b):
                return abs(a[0] - b[0])
        elif self.metric == "chebyshev":
            def d(a, b):
                return max(abs(u - v) for u, v in zip(a, b))
        else:
            def d(a, b):
                return float(np.sqrt(np.sum((np.subtract(a, b)) ** 2)))
        return d


def _lex_order(X):
    return np.lexsort(X.T[::-1])


def _greedy_net(space, X, eps, presorted=False):
    """Indices of the greedy first-seen eps-net of the rows of ``X``.

    A row becomes a center iff its distance to every earlier center is
    ``>= eps``.  Centers are bucketed on an eps-grid so each row only looks
    at neighbouring cells; the selection is identical to the quadratic scan.
    """
    n, dim = X.shape
    if n == 0:
        return []
    dist = space._scalar_dist()
    if dim == 1 and presorted:
        # centers stay sorted, so only the last one (and the first, across
        # the circle seam) can be near the next point
        xs = X[:, 0].tolist()
        centers = [0]
        wrap = space.kind == "circle"
        for i in range(1, n):
            r = (xs[i],)
            if dist(r, (xs[centers[-1]],)) >= eps and not (wrap and dist(r, (xs[centers[0]],)) < eps):
                centers.append(i)
        return centers
    rows = [tuple(r) for r in X.tolist()]
    ncell = None
    if space.kind == "circle":
        ncell = math.ceil(space.hi[0] / eps)
        if ncell < 3:
            ncell = 0
    if ncell == 0 or not math.isfinite(float(np.max(np.abs(X))) / eps) or np.max(np.abs(X)) / eps > 2**62:
        centers = []
        for i, r in enumerate(rows):
            if all(dist(r, rows[j]) >= eps for j in centers):
                centers.append(i)
        return centers
    cells = np.floor(X / eps).astype(np.int64)
    if ncell:
        cells = np.minimum(cells, ncell - 1)
    cells = [tuple(c) for c in cells.tolist()]
    offsets = list(itertools.product((-1, 0, 1), repeat=dim))
    buckets = {}
    centers = []
    for i, (r, cell) in enumerate(zip(rows, cells)):
        near = False
        seen = set()
        for off in offsets:
            key = tuple(c + o for c, o in zip(cell, off))
            if ncell:
                key = (key[0] % ncell,)
            if key in seen:
                continue
            seen.add(key)
            for j in buckets.get(key, ()):
                if dist(r, rows[j]) < eps:
                    near = True
                    break
            if near:
                break
        if not near:
            centers.append(i)
            buckets.setdefault(cell, []).append(i)
    return centers


class PointSet:
    """Finite set of points of a space, sorted lexicographically and free of duplicates.

    Points closer than ``POINT_TOL`` collapse onto the lexicographically
    first one.
    """

    __slots__ = ("space", "coords")

    def __init__(self, space, points):
        X = space.canonicalize(space.as_points(points)) if np.size(points) else np.empty((0, space.dim))
        X = X[_lex_order(X)] if len(X) else X
        keep = _greedy_net(space, X, POINT_TOL, presorted=True)
        coords = X[keep]
        coords.setflags(write=False)
        self.space = space
        self.coords = coords

    def __len__(self):
        return self.coords.shape[0]

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        return f"PointSet({len(self)} points in {self.space.kind})"

    def __eq__(self, other):
        if not isinstance(other, PointSet) or other.space != self.space or len(other) != len(self):
            return NotImplemented if not isinstance(other, PointSet) else False
        return bool(np.all(self.space.dist(self.coords, other.coords) < POINT_TOL))

    __hash__ = None

    def tolist(self):
        if self.space.dim == 1:
            return self.coords[:, 0].tolist()
        return self.coords.tolist()

    def to_csv(self):
        header = [f"x{i}" for i in range(self.space.dim)]
        return csv_text(header, ([float(v) for v in row] for row in self.coords))


def distance(space, a, b):
    """Distance between two points of ``space``."""
    a = space.as_points(a)
    b = space.as_points(b)
    if a.shape != (1, space.dim) or b.shape != (1, space.dim):
        raise DomainError("distance takes two single points")
    a = space.canonicalize(a)
    b = space.canonicalize(b)
    return float(space.dist(a, b)[0])


def _coords(space, S):
    if isinstance(S, PointSet):
        if S.space != space:
            raise DomainError("point set belongs to a different space")
        return S.coords
    return space.canonicalize(space.as_points(S))


def hausdorff(space, A, B, chunk=2048):
    """Exact Hausdorff distance by exhaustive pairwise distances."""
    A = _coords(space, A)
    B = _coords(space, B)
    if len(A) == 0 or len(B) == 0:
        raise EmptySetError("hausdorff distance of an empty set")
    a_to_b = np.full(len(A), np.inf)
    b_to_a = np.full(len(B), np.inf)
    for s in range(0, len(A), chunk):
        D = space.pairwise(A[s:s + chunk], B)
        a_to_b[s:s + chunk] = D.min(axis=1)
        b_to_a = np.minimum(b_to_a, D.min(axis=0))
    return float(max(a_to_b.max(), b_to_a.max()))


def grid(space, resolution):
    """Deterministic uniform grid with ``resolution`` points per axis."""
    if int(resolution) != resolution or resolution < 2:
        raise ConfigError(f"grid resolution must be an integer >= 2, got {resolution}")
    return _grid(space, int(resolution))


@functools.lru_cache(maxsize=64)
def _grid(space, resolution):
    if space.kind == "circle":
        c = space.hi[0]
        return PointSet(space, c * np.arange(resolution) / resolution)
    axes = [np.linspace(lo, hi, resolution) for lo, hi in zip(space.lo, space.hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return PointSet(space, np.stack([m.ravel() for m in mesh], axis=1))


def epsilon_cluster(space, cloud, eps):
    """Greedy eps-net of ``cloud`` taken in its stored order.

    Every cloud point ends up within ``eps`` of a center and centers are
    pairwise at least ``eps`` apart.
    """
    if not eps > 0:
        raise ConfigError("eps must be positive")
    X = _coords(space, cloud)
    if len(X) == 0:
        raise EmptySetError("cannot cluster an empty cloud")
    return PointSet(space, X[_greedy_net(space, X, eps, presorted=isinstance(cloud, PointSet))])


def covering_radius(pointset):
    """Smallest r such that every point of the space is within r of the set.

    Exact for interval and circle sets, and for tensor-product grids in a box.
    """
    space = pointset.space
    X = pointset.coords
    if len(X) == 0:
        raise EmptySetError("empty point set")
    if space.kind == "circle":
        c = space.hi[0]
        xs = np.sort(X[:, 0])
        gaps = np.diff(np.append(xs, xs[0] + c))
        return float(gaps.max() / 2)

    def axis_radius(vals, lo, hi):
        vals = np.unique(vals)
        inner = np.diff(vals).max() / 2 if len(vals) > 1 else 0.0
        return float(max(inner, vals[0] - lo, hi - vals[-1]))

    if space.dim == 1:
        return axis_radius(X[:, 0], space.lo[0], space.hi[0])
    axes = [np.unique(X[:, i]) for i in range(space.dim)]
    if np.prod([len(a) for a in axes]) != len(X):
        raise ConfigError("covering radius in a box needs a tensor-product grid")
    radii = np.array([axis_radius(a, lo, hi) for a, lo, hi in zip(axes, space.lo, space.hi)])
    if space.metric == "chebyshev":
        return float(radii.max())
    return float(np.sqrt(np.sum(radii * radii)))
