"""Nonautonomous systems: map sequences, iterates, orbits and system transforms.

Indices start at 1: ``seq.map(1)`` is the first map and the n-iterate is
``f_n o ... o f_1`` with the 0-iterate equal to the identity.  Trajectory
arrays are indexed from 0, so ``trajectory(...).points[n]`` is the n-iterate
of the initial point.  (In the difference-equation indexing ``x_1 = x`` this
is ``x_{n+1}``.)
"""

import threading
from dataclasses import dataclass

import numpy as np

from . import parallel
from .errors import ConfigError, DomainError
from .maps import Catalog, Composition, PiecewiseLinear, identity, self_map_check

# --------------------------------------------------------------------------
# index sequences for induced systems


class Gamma:
    """Strictly increasing positive index sequence ``n -> k_n`` (1-based).

    Either a finite list of values or a closed form: ``("linear", a)`` gives
    ``k_n = a*n`` and ``("geometric", b)`` gives ``k_n = b**(n-1)``.
    """

    def __init__(self, values=None, form=None):
        if (values is None) == (form is None):
            raise ConfigError("gamma needs exactly one of values or a closed form")
        self.values = None
        self.form = None
        if values is not None:
            values = [int(v) for v in values]
            if not values or values[0] < 1:
                raise ConfigError("gamma values must be positive")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ConfigError("gamma not increasing")
            self.values = tuple(values)
        else:
            kind, param = form[0], int(form[1])
            if kind == "linear" and param >= 1:
                pass
            elif kind == "geometric" and param >= 2:
                pass
            else:
                raise ConfigError(f"invalid closed-form gamma {form!r}")
            self.form = (kind, param)

    @property
    def length(self):
        """Number of defined terms (``None`` when infinite)."""
        return None if self.values is None else len(self.values)

    def __call__(self, n):
        if n == 0:
            return 0
        if n < 0:
            raise IndexError(n)
        if self.values is not None:
            if n > len(self.values):
                raise IndexError(f"gamma has only {len(self.values)} terms")
            return self.values[n - 1]
        kind, p = self.form
        return p * n if kind == "linear" else p ** (n - 1)

    def additive(self, horizon=16):
        """``k_n + k_m == k_{n+m}`` for every ``n, m >= 1`` with ``n + m <= horizon``."""
        top = horizon if self.length is None else min(horizon, self.length)
        return all(self(n) + self(m) == self(n + m) for n in range(1, top) for m in range(1, top - n + 1))

    def to_spec(self):
        if self.values is not None:
            return {"values": list(self.values)}
        return {"form": self.form[0], "param": self.form[1]}

    def __repr__(self):
        return f"Gamma({self.values if self.values is not None else self.form})"


# --------------------------------------------------------------------------
# map families n -> f_n


def _example3(space, n):
    if n <= 2:
        # f_2 reuses the f_1 polyline: the generic n-th polyline degenerates at n = 2
        return PiecewiseLinear(space, [(0.0, 0.0), (0.5, 1.0 / 3.0), (1.0, 0.5)])
    return PiecewiseLinear(space, [(0.0, 0.0), (1.0 / n, 1.0 / (n + 1)), (0.5, 0.5), (1.0, 0.5)])


def _example3_limit(space):
    return PiecewiseLinear(space, [(0.0, 0.0), (0.5, 0.5), (1.0, 0.5)])


# name -> (arity, generator(space, params, n), limit(space, params) or None)
_FAMILIES = {
    "constant_reciprocal": (
        0,
        lambda s, p, n: Catalog(s, "constant", [1.0 / (n + 1)]),
        lambda s, p: Catalog(s, "constant", [0.0]),
    ),
    "power": (0, lambda s, p, n: Catalog(s, "power", [float(n)]), None),
    "example3": (0, lambda s, p, n: _example3(s, n), lambda s, p: _example3_limit(s)),
    "affine_decay": (
        3,
        lambda s, p, n: Catalog(s, "affine", [p[0], p[1] + p[2] / (n + 1)]),
        lambda s, p: Catalog(s, "affine", [p[0], p[1]]),
    ),
    "tent_decay": (
        1,
        lambda s, p, n: Composition([Catalog(s, "affine", [1.0 - p[0] / (n + 1), 0.0]), Catalog(s, "tent")]),
        lambda s, p: Catalog(s, "tent"),
    ),
    "rotation_decay": (
        2,
        lambda s, p, n: Catalog(s, "rotation", [p[0] + p[1] / (n + 1)]),
        lambda s, p: Catalog(s, "rotation", [p[0]]),
    ),
}

FAMILY_NAMES = tuple(_FAMILIES)


class Family:
    """Indexed family ``n -> f_n`` with per-index memoization.

    ``constant_reciprocal``: f_n = 1/(n+1); ``power``: f_n(x) = x**n;
    ``example3``: three-segment polylines converging to ``min(x, 1/2)``;
    ``affine_decay(a, b, c)``: f_n(x) = a*x + b + c/(n+1);
    ``tent_decay(c)``: f_n = (1 - c/(n+1)) * tent;
    ``rotation_decay(alpha, c)``: rotation by alpha + c/(n+1).
    """

    def __init__(self, space, name, params=()):
        if name not in _FAMILIES:
            raise ConfigError(f"unknown family {name!r}")
        arity, gen, lim = _FAMILIES[name]
        params = tuple(float(v) for v in params)
        if len(params) != arity:
            raise ConfigError(f"family {name!r} takes {arity} parameters, got {len(params)}")
        self.space = space
        self.name = name
        self.params = params
        self._gen = gen
        self._lim = lim
        self._memo = {}
        self._lock = threading.Lock()

    def __call__(self, n):
        m = self._memo.get(n)
        if m is None:
            with self._lock:
                m = self._memo.get(n)
                if m is None:
                    m = self._gen(self.space, self.params, n)
                    self._memo[n] = m
        return m

    def natural_limit(self):
        return None if self._lim is None else self._lim(self.space, self.params)

    def to_spec(self):
        return {"family": self.name, "params": list(self.params)}


# --------------------------------------------------------------------------
# sequence rules


class MapSequence:
    space = None

    def map(self, n):
        raise NotImplementedError


class Explicit(MapSequence):
    """Listed maps, continued by ``tail``: ``None``, ``"repeat_last"``, ``"cycle"`` or a :class:`Family`."""

    def __init__(self, maps, tail=None):
        maps = tuple(maps)
        if not maps:
            raise ConfigError("explicit sequence needs at least one map")
        if not (tail in (None, "none", "repeat_last", "cycle") or isinstance(tail, Family)):
            raise ConfigError(f"unknown tail rule {tail!r}")
        self.space = maps[0].space
        self.maps = maps
        self.tail = None if tail == "none" else tail

    def map(self, n):
        if n < 1:
            raise IndexError(n)
        if n <= len(self.maps):
            return self.maps[n - 1]
        if self.tail is None:
            raise IndexError(f"explicit sequence has only {len(self.maps)} maps")
        if self.tail == "repeat_last":
            return self.maps[-1]
        if self.tail == "cycle":
            return self.maps[(n - 1) % len(self.maps)]
        return self.tail(n)

    def to_spec(self):
        tail = self.tail if isinstance(self.tail, (str, type(None))) else self.tail.to_spec()
        return {"rule": "explicit", "maps": [m.to_spec() for m in self.maps], "tail": tail or "none"}


class PeriodicTail(MapSequence):
    """``f_1, ..., f_k, f_1, ..., f_k, ...``"""

    def __init__(self, block):
        block = tuple(block)
        if not block:
            raise ConfigError("periodic block is empty")
        self.space = block[0].space
        self.block = block

    @property
    def period(self):
        return len(self.block)

    def map(self, n):
        if n < 1:
            raise IndexError(n)
        return self.block[(n - 1) % len(self.block)]

    def to_spec(self):
        return {"rule": "periodic", "block": [m.to_spec() for m in self.block]}


class ConvergentFamily(MapSequence):
    def __init__(self, family, declared_limit=None):
        self.space = family.space
        self.family = family
        self.declared_limit = declared_limit if declared_limit is not None else family.natural_limit()

    def map(self, n):
        if n < 1:
            raise IndexError(n)
        return self.family(n)

    def to_spec(self):
        spec = {"rule": "family", **self.family.to_spec()}
        if self.declared_limit is not None:
            spec["limit"] = self.declared_limit.to_spec()
        return spec


class Shifted(MapSequence):
    """The n-th map is ``base.map(n + k - 1)``."""

    def __init__(self, base, k):
        if int(k) != k or k < 1:
            raise ConfigError("shift k must be a positive integer")
        self.space = base.space
        self.base = base
        self.k = int(k)

    def map(self, n):
        if n < 1:
            raise IndexError(n)
        return self.base.map(n + self.k - 1)

    def to_spec(self):
        return {"rule": "shifted", "base": self.base.to_spec(), "k": self.k}


class Induced(MapSequence):
    """The n-th map is ``f_{k_n} o ... o f_{k_{n-1}+1}`` with ``k_0 = 0``."""

    def __init__(self, base, gamma):
        if not isinstance(gamma, Gamma):
            gamma = Gamma(values=gamma)
        self.space = base.space
        self.base = base
        self.gamma = gamma
        self._memo = {}
        self._lock = threading.Lock()

    def map(self, n):
        if n < 1:
            raise IndexError(n)
        m = self._memo.get(n)
        if m is None:
            lo, hi = self.gamma(n - 1), self.gamma(n)
            parts = [self.base.map(i) for i in range(hi, lo, -1)]
            with self._lock:
                m = self._memo.setdefault(n, Composition(parts))
        return m

    def to_spec(self):
        return {"rule": "induced", "base": self.base.to_spec(), "gamma": self.gamma.to_spec()}


class Conjugated(MapSequence):
    """The n-th map is ``h o base.map(n) o h_inv``."""

    def __init__(self, base, h, h_inv):
        self.space = h.space
        self.base = base
        self.h = h
        self.h_inv = h_inv
        self._memo = {}

    def map(self, n):
        m = self._memo.get(n)
        if m is None:
            m = self._memo.setdefault(n, Composition([self.h, self.base.map(n), self.h_inv]))
        return m

    def to_spec(self):
        return {"rule": "conjugated", "base": self.base.to_spec(), "h": self.h.to_spec(), "h_inv": self.h_inv.to_spec()}


# --------------------------------------------------------------------------
# systems


class System:
    """A space together with a map sequence.

    Each map is checked with :func:`self_map_check` the first time the
    system hands it out.  ``limit`` is an optional declared uniform limit of
    the sequence; for :class:`ConvergentFamily` it defaults to the family's
    declared limit.
    """

    def __init__(self, space, seq, label="", limit=None, validation_resolution=101):
        if seq.space != space:
            raise DomainError("sequence maps live on a different space")
        self.space = space
        self.seq = seq
        self.label = label
        if limit is None:
            limit = getattr(seq, "declared_limit", None)
        if limit is not None and limit.space != space:
            raise DomainError("declared limit lives on a different space")
        self.limit = limit
        self.validation_resolution = validation_resolution
        self._checked = {}

    def __repr__(self):
        return f"System({self.label or type(self.seq).__name__} on {self.space.kind})"

    def nth_map(self, n):
        m = self.seq.map(n)
        if id(m) not in self._checked:
            self._validate(m, n)
        return m

    def _validate(self, m, n):
        # compositions are self-maps once their parts are
        if isinstance(m, Composition):
            for part in m.parts:
                if id(part) not in self._checked:
                    self._validate(part, n)
        else:
            rep = self_map_check(m, self.space, self.validation_resolution)
            if not rep.ok:
                raise DomainError(
                    f"{self.label or 'system'}: map f_{n} leaves the domain by "
                    f"{rep.worst_excursion:g} at {rep.worst_point.tolist()}"
                )
        self._checked[id(m)] = m

    def advance(self, X, start, steps):
        """Apply ``f_{start+1}, ..., f_{start+steps}`` to a ``(m, d)`` batch."""
        for n in range(start + 1, start + steps + 1):
            X = self.nth_map(n).apply(X)
        return X


def _batch(sys, x):
    X = np.asarray(x, dtype=float)
    single = X.ndim == 0 or (X.ndim == 1 and (sys.space.dim > 1 or X.shape[0] == 1))
    return sys.space.canonicalize(sys.space.as_points(x)), single


def nth_map(sys, n):
    if n < 1:
        raise ConfigError("map index starts at 1")
    return sys.nth_map(n)


def iterate(sys, x, n):
    """``f_n(...f_1(x)...)`` for a point or a batch; ``n = 0`` returns ``x``."""
    if n < 0:
        raise ConfigError("iterate count must be >= 0")
    X, single = _batch(sys, x)
    Y = parallel.sweep(lambda C: sys.advance(C, 0, n), X)
    return Y[0] if single else Y


def iterate_map(sys, n):
    """The n-iterate as a map (a composition node, identity for ``n = 0``)."""
    if n == 0:
        return identity(sys.space)
    return Composition([sys.nth_map(i) for i in range(n, 0, -1)])


@dataclass
class Trajectory:
    x0: np.ndarray
    points: np.ndarray
    N: int

    def to_csv(self):
        from ._io import csv_text

        d = self.points.shape[1]
        rows = ([n, *[float(v) for v in p]] for n, p in enumerate(self.points))
        return csv_text(["n", *[f"x{i}" for i in range(d)]], rows)


def orbit_array(sys, X, N, start=0):
    """Stack of ``N + 1`` batches: entry ``i`` is the batch after ``i`` further steps."""
    X = np.asarray(X, dtype=float)
    return parallel.sweep(lambda C: _orbit_chunk(sys, C, N, start), X, axis=1)


def _orbit_chunk(sys, X, N, start):
    out = np.empty((N + 1,) + X.shape)
    out[0] = X
    for i in range(1, N + 1):
        X = sys.nth_map(start + i).apply(X)
        out[i] = X
    return out


def trajectory(sys, x, N):
    x0 = sys.space.point(x)
    pts = orbit_array(sys, x0[None, :], int(N))[:, 0, :]
    return Trajectory(x0=x0, points=pts, N=int(N))


def shift(sys, k):
    """System whose n-th map is ``f_{n+k-1}``; ``shift(sys, 1)`` behaves as ``sys``."""
    return System(sys.space, Shifted(sys.seq, k), label=f"{sys.label}[shift {k}]", limit=sys.limit)


def induce(sys, gamma, horizon=16):
    """Induced system along ``gamma``; ``result.gamma_additive`` reports additivity up to ``horizon``."""
    if not isinstance(gamma, Gamma):
        if isinstance(gamma, dict):
            gamma = gamma_from_spec(gamma)
        else:
            gamma = Gamma(values=gamma)
    out = System(sys.space, Induced(sys.seq, gamma), label=f"{sys.label}[induced]")
    out.gamma = gamma
    out.gamma_additive = gamma.additive(horizon)
    return out


def gamma_from_spec(spec):
    if isinstance(spec, (list, tuple)):
        return Gamma(values=spec)
    if "values" in spec:
        return Gamma(values=spec["values"])
    if "form" in spec:
        return Gamma(form=(spec["form"], spec["param"]))
    raise ConfigError("gamma spec needs 'values' or 'form'")


def periodic_reduce(sys):
    """``(g, residues)`` with ``g = f_k o ... o f_1`` and ``residues[j] = f_j o ... o f_1``."""
    seq = sys.seq
    if not isinstance(seq, PeriodicTail):
        raise ConfigError("periodic_reduce needs a periodic sequence")
    k = seq.period
    maps = [sys.nth_map(i) for i in range(1, k + 1)]
    g = Composition(maps[::-1])
    residues = [identity(sys.space)] + [Composition(maps[:j][::-1]) for j in range(1, k)]
    return g, residues


def star_iterate(sys, n, m):
    """Finite star product of the n- and m-iterates: the ``(n + m)``-iterate.

    This is generally not the composition of the two iterates.
    """
    return iterate_map(sys, n + m)
