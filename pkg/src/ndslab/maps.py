"""Continuous self-maps of a space: polylines, closed-form catalog maps, compositions.

Every map evaluates a whole batch of points at once (``apply`` on an
``(m, d)`` array).  Evaluation never simplifies algebraically: a composition
calls its parts one after another, so two routes through the same sequence
of maps give bit-identical results.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .space import PointSet, grid


class MapRep:
    """Base class.  Subclasses implement ``_raw`` on canonical input arrays."""

    space = None

    def apply(self, X):
        """Evaluate on a ``(m, d)`` array of points of ``self.space``."""
        return self._raw(self.space.canonicalize(X))

    def __call__(self, x):
        return eval_map(self, x)

    @property
    def lipschitz(self):
        raise NotImplementedError

    def breakpoints(self):
        return np.empty((0, self.space.dim))

    def to_spec(self):
        raise NotImplementedError


class PiecewiseLinear(MapRep):
    """Polyline on an interval through ``points = [(x0, y0), ..., (xk, yk)]``.

    ``x0`` and ``xk`` must be the interval endpoints.  A point in
    ``[x_i, x_{i+1})`` is evaluated on segment ``i``; the right endpoint uses
    the last segment.
    """

    def __init__(self, space, points):
        if space.kind != "interval":
            raise DomainError("polylines are defined on intervals only")
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ConfigError("polyline needs at least two (x, y) breakpoints")
        xs, ys = pts[:, 0].copy(), pts[:, 1].copy()
        if np.any(np.diff(xs) <= 0):
            raise ConfigError("polyline breakpoints must be strictly increasing")
        if xs[0] != space.lo[0] or xs[-1] != space.hi[0]:
            raise ConfigError("polyline must start and end at the interval endpoints")
        xs.setflags(write=False)
        ys.setflags(write=False)
        self.space = space
        self.xs = xs
        self.ys = ys

    def _raw(self, X):
        x = X[:, 0]
        idx = np.searchsorted(self.xs, x, side="right") - 1
        idx = np.clip(idx, 0, len(self.xs) - 2)
        x0, x1 = self.xs[idx], self.xs[idx + 1]
        t = (x - x0) / (x1 - x0)
        # convex form is exact at both segment ends
        return ((1.0 - t) * self.ys[idx] + t * self.ys[idx + 1])[:, None]

    @property
    def lipschitz(self):
        return float(np.max(np.abs(np.diff(self.ys) / np.diff(self.xs))))

    def breakpoints(self):
        return self.xs[:, None]

    def to_spec(self):
        return {"form": "pwl", "points": [[float(x), float(y)] for x, y in zip(self.xs, self.ys)]}

    def __repr__(self):
        return f"PiecewiseLinear({len(self.xs)} breakpoints)"


def _tent(x):
    return 1.0 - np.abs(2.0 * x - 1.0)


# name -> (arity, evaluator(X, params, space), lipschitz(params), allowed on circle)
_CATALOG = {
    "identity": (0, lambda X, p, s: X.copy(), lambda p: 1.0, True),
    "constant": (1, lambda X, p, s: np.full_like(X, p[0]), lambda p: 0.0, True),
    "affine": (2, lambda X, p, s: p[0] * X + p[1], lambda p: abs(p[0]), False),
    "affine_clamped": (2, lambda X, p, s: np.clip(p[0] * X + p[1], s.lo, s.hi), lambda p: abs(p[0]), False),
    "power": (1, lambda X, p, s: np.power(X, p[0]), lambda p: p[0] if p[0] >= 1 else np.inf, False),
    "tent": (0, lambda X, p, s: _tent(X), lambda p: 2.0, False),
    "logistic": (1, lambda X, p, s: p[0] * X * (1.0 - X), lambda p: abs(p[0]), False),
    "logistic_clamped": (1, lambda X, p, s: np.clip(p[0] * X * (1.0 - X), s.lo, s.hi), lambda p: abs(p[0]), False),
    "rotation": (1, lambda X, p, s: X + p[0], lambda p: 1.0, True),
}

CATALOG_NAMES = tuple(_CATALOG)


class Catalog(MapRep):
    """Closed-form map applied coordinatewise.

    ``constant c``, ``affine a*x+b``, ``power x**k``, ``tent``,
    ``logistic r*x*(1-x)``, ``rotation x+alpha`` (circle only), ``identity``,
    and the ``*_clamped`` variants that clip the result onto the domain.
    Maps that can leave the domain are not clamped silently; use
    :func:`self_map_check`.
    """

    def __init__(self, space, name, params=()):
        if name not in _CATALOG:
            raise ConfigError(f"unknown catalog map {name!r}")
        arity, fn, lip, circle_ok = _CATALOG[name]
        params = tuple(float(v) for v in params)
        if len(params) != arity:
            raise ConfigError(f"catalog map {name!r} takes {arity} parameters, got {len(params)}")
        if space.kind == "circle" and not circle_ok:
            raise DomainError(f"catalog map {name!r} is not a circle map")
        if name == "rotation" and space.kind != "circle":
            raise DomainError("rotation is defined on circles")
        if name == "power" and params[0] <= 0:
            raise ConfigError("power exponent must be positive")
        self.space = space
        self.name = name
        self.params = params
        self._fn = fn
        self._lip = float(lip(params))

    def _raw(self, X):
        Y = self._fn(X, self.params, self.space)
        if self.space.kind == "circle":
            Y = self.space.canonicalize(Y)
        return Y

    @property
    def lipschitz(self):
        return self._lip

    def to_spec(self):
        return {"form": "catalog", "name": self.name, "params": list(self.params)}

    def __repr__(self):
        return f"Catalog({self.name}{list(self.params) if self.params else ''})"


class Composition(MapRep):
    """``parts[0] o parts[1] o ... o parts[-1]``: the last part is applied first."""

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise ConfigError("composition of an empty list")
        space = parts[0].space
        for p in parts:
            if p.space != space:
                raise DomainError("composed maps live on different spaces")
        self.space = space
        self.parts = parts

    def apply(self, X):
        for part in reversed(self.parts):
            X = part.apply(X)
        return X

    def _raw(self, X):
        return self.apply(X)

    @property
    def lipschitz(self):
        out = 1.0
        for p in self.parts:
            out *= p.lipschitz
        return out

    def breakpoints(self):
        return self.parts[-1].breakpoints()

    def to_spec(self):
        return {"form": "compose", "parts": [p.to_spec() for p in self.parts]}

    def __repr__(self):
        return f"Composition({len(self.parts)} parts)"


def identity(space):
    return Catalog(space, "identity")


def eval_map(m, x):
    """Image of a single point (shape ``(d,)``) or a batch (shape ``(m, d)``)."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 0 or (X.ndim == 1 and m.space.dim > 1) or (X.ndim == 1 and X.shape[0] == 1)
    Y = m.apply(m.space.as_points(x))
    if single:
        return Y[0]
    return Y


def compose(parts):
    """Composition node; ``compose([g, f])`` evaluates ``g(f(x))``."""
    return Composition(parts)


def lipschitz_bound(m):
    return m.lipschitz


@dataclass(frozen=True)
class SelfMapReport:
    ok: bool
    worst_point: np.ndarray
    worst_excursion: float


def self_map_check(m, space=None, resolution=101):
    """Evaluate ``m`` on a grid plus its breakpoints and report excursions out of the domain."""
    space = space or m.space
    X = grid(space, resolution).coords
    bp = m.breakpoints()
    if len(bp):
        X = np.concatenate([X, bp])
    Y = m.apply(X)
    exc = space.excursion(Y)
    i = int(np.argmax(exc))
    worst = float(exc[i])
    return SelfMapReport(ok=worst == 0.0, worst_point=X[i].copy(), worst_excursion=worst)


def map_from_spec(space, spec):
    """Build a map from its JSON description."""
    if not isinstance(spec, dict) or "form" not in spec:
        raise ConfigError("map spec must be an object with a 'form' key")
    form = spec["form"]
    if form == "pwl":
        return PiecewiseLinear(space, spec["points"])
    if form == "catalog":
        return Catalog(space, spec["name"], spec.get("params", ()))
    if form == "compose":
        return Composition([map_from_spec(space, p) for p in spec["parts"]])
    raise ConfigError(f"unknown map form {form!r}")


def image_set(m, pointset):
    """``m`` applied to every point of a set, as a new (deduplicated) set."""
    return PointSet(m.space, m.apply(pointset.coords))
