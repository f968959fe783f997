"""Finite, machine-checkable versions of the iterate identities and limit theorems.

Each check returns a :class:`VerdictReport`.  The three composition
identities (split, periodic, induced) are exact: both sides apply the same
maps in the same order, so the tolerance is 0.  Limit statements are
checked on an explicit tail window with an explicit ``eps``.
"""

from dataclasses import dataclass, field

import numpy as np

from ._io import csv_text
from .analysis import declared_limit, omega_limit, uniform_limit
from .errors import ConfigError, DomainError
from .space import PointSet, covering_radius, grid as make_grid, hausdorff
from .system import Gamma, PeriodicTail, gamma_from_spec, induce, orbit_array, periodic_reduce, shift, trajectory

SCHEMA_VERSION = 1


@dataclass
class VerdictReport:
    check_name: str
    passed: bool
    max_defect: float
    tolerance: float
    defect_series: list = None  # rows whose last entry is the defect
    series_columns: tuple = ("n", "defect")
    config_echo: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def series_csv(self):
        if self.defect_series is None:
            return None
        return csv_text(self.series_columns, self.defect_series)

    def to_dict(self, series_csv_path=None):
        return {
            "schema": SCHEMA_VERSION,
            "check": self.check_name,
            "passed": self.passed,
            "max_defect": self.max_defect,
            "tolerance": self.tolerance,
            "series_csv_path": series_csv_path,
            "config": self.config_echo,
            "extras": self.extras,
        }


def _verdict(name, series, tol, config, columns=("n", "defect"), extras=None):
    worst = max((row[-1] for row in series), default=0.0)
    return VerdictReport(
        check_name=name,
        passed=bool(worst <= tol),
        max_defect=float(worst),
        tolerance=float(tol),
        defect_series=series,
        series_columns=tuple(columns),
        config_echo=config,
        extras=extras or {},
    )


def _grid(space, grid):
    if isinstance(grid, PointSet):
        return grid
    if isinstance(grid, (int, np.integer)):
        return make_grid(space, int(grid))
    return PointSet(space, grid)


# --------------------------------------------------------------------------
# exact composition identities


def check_split(sys, k_max=8, n_max=64, grid=101):
    """``f_1^n = (shifted system by k)^(n-k+1) o f_1^(k-1)`` for ``2 <= k <= k_max``, ``k <= n <= n_max``."""
    if not 2 <= k_max <= n_max:
        raise ConfigError("need 2 <= k_max <= n_max")
    G = _grid(sys.space, grid)
    X = G.coords
    direct = orbit_array(sys, X, n_max)
    series = []
    for k in range(2, k_max + 1):
        shifted = shift(sys, k)
        Y = direct[k - 1]
        for n in range(k, n_max + 1):
            Y = shifted.nth_map(n - k + 1).apply(Y)
            series.append((k, n, float(sys.space.dist(Y, direct[n]).max())))
    config = {"system": sys.label, "k_max": k_max, "n_max": n_max, "grid_points": len(G)}
    return _verdict("check_split", series, 0.0, config, columns=("k", "n", "defect"))


def check_periodic(sys, l_max=16, grid=101):
    """``f_1^(kl+j) = (f_j o ... o f_1) o (f_k o ... o f_1)^l`` for ``l <= l_max``, ``j < k``."""
    if not isinstance(sys.seq, PeriodicTail):
        raise ConfigError("check_periodic needs a periodic system")
    g, residues = periodic_reduce(sys)
    k = len(residues)
    G = _grid(sys.space, grid)
    direct = orbit_array(sys, G.coords, k * l_max + k - 1)
    series = []
    P = G.coords
    for l in range(l_max + 1):
        for j in range(k):
            rhs = residues[j].apply(P)
            series.append((l, j, float(sys.space.dist(rhs, direct[k * l + j]).max())))
        P = g.apply(P)
    config = {"system": sys.label, "period": k, "l_max": l_max, "grid_points": len(G)}
    return _verdict("check_periodic", series, 0.0, config, columns=("l", "j", "defect"))


def check_induced(sys, gamma, n_max=10, grid=101, horizon=16):
    """n-iterate of the induced system equals the ``k_n``-iterate of the base."""
    if not isinstance(gamma, Gamma):
        gamma = gamma_from_spec(gamma)
    ind = induce(sys, gamma, horizon)
    n_eff = n_max if gamma.length is None else min(n_max, gamma.length)
    G = _grid(sys.space, grid)
    lhs = orbit_array(ind, G.coords, n_eff)
    base = orbit_array(sys, G.coords, gamma(n_eff))
    series = [(n, float(sys.space.dist(lhs[n], base[gamma(n)]).max())) for n in range(1, n_eff + 1)]
    config = {"system": sys.label, "gamma": gamma.to_spec(), "n_max": n_max, "horizon": horizon, "grid_points": len(G)}
    extras = {"gamma_additive": ind.gamma_additive, "n_effective": n_eff}
    return _verdict("check_induced", series, 0.0, config, extras=extras)


# --------------------------------------------------------------------------
# limit statements for systems converging uniformly to a declared limit


def check_uniap(sys, grid=101, N=200, eps=1e-2, tail_start=None):
    """``d(phi(f_1^n x), f_1^(n+1) x)`` is bounded by the sup distance between ``phi`` and ``f_(n+1)``.

    The sup is estimated on the grid; ``slack = (Lip(phi) + Lip(f_(n+1))) * r``
    with ``r`` the covering radius of the grid makes the inequality rigorous.
    When the sequence converges on the tail, the left side must also be
    ``<= eps`` for ``n > tail_start``.  The defect is the amount by which
    either condition is violated, so the tolerance is 0.
    """
    phi = declared_limit(sys)
    space = sys.space
    G = _grid(space, grid)
    X = G.coords
    tail_start = N // 2 if tail_start is None else int(tail_start)
    radius = covering_radius(G)
    orbit = orbit_array(sys, X, N + 1)
    phiX = phi.apply(X)
    ul = uniform_limit(sys, G, N + 1, tol=eps)
    series = []
    lhs_all, rhs_all, slack_all = [], [], []
    for n in range(1, N + 1):
        f_next = sys.nth_map(n + 1)
        lhs = float(space.dist(phi.apply(orbit[n]), orbit[n + 1]).max())
        rhs = float(space.dist(phiX, f_next.apply(X)).max())
        slack = (phi.lipschitz + f_next.lipschitz) * radius
        viol = max(0.0, lhs - rhs - slack)
        if ul.converges and n > tail_start:
            viol = max(viol, lhs - eps)
        series.append((n, lhs, rhs, slack, viol))
        lhs_all.append(lhs)
        rhs_all.append(rhs)
        slack_all.append(slack)
    lhs_a, rhs_a, slack_a = map(np.array, (lhs_all, rhs_all, slack_all))
    extras = {
        "margin_with_slack": float(np.max(lhs_a - rhs_a - slack_a)),
        "margin_without_slack": float(np.max(lhs_a - rhs_a)),
        "covering_radius": radius,
        "lipschitz_limit": phi.lipschitz,
        "converges": ul.converges,
        "eps_at_tail": ul.eps_at_tail,
        "tail_max_lhs": float(lhs_a[tail_start:].max()) if tail_start < N else 0.0,
    }
    config = {"system": sys.label, "N": N, "eps": eps, "tail_start": tail_start, "grid_points": len(G)}
    return _verdict("check_uniap", series, 0.0, config, columns=("n", "lhs", "rhs", "slack", "defect"), extras=extras)


def _phi_power(phi, P, m):
    for _ in range(m):
        P = phi.apply(P)
    return P


def check_action(sys, m_max=2, grid=101, N=200, eps=1e-2, tail_start=None, anchor=None):
    """``phi^m o f_1^n`` against ``f_1^(n+m)`` on a tail window.

    Unanchored: every ``m <= m_max`` and ``tail_start < n <= N``.
    Anchored at ``n = anchor``: ``tail_start < m <= m_max`` with ``n`` fixed;
    this variant is expected to fail for systems like the three-segment
    polyline family started at 1.
    """
    phi = declared_limit(sys)
    space = sys.space
    G = _grid(space, grid)
    X = G.coords
    series = []
    if anchor is None:
        tail_start = N // 2 if tail_start is None else int(tail_start)
        orbit = orbit_array(sys, X, N + m_max)
        ns = list(range(tail_start + 1, N + 1))
        stacked = orbit[tail_start + 1:N + 1]
        shape = stacked.shape
        P = stacked.reshape(-1, shape[-1])
        for m in range(m_max + 1):
            Q = P.reshape(shape)
            for i, n in enumerate(ns):
                series.append((m, n, float(space.dist(Q[i], orbit[n + m]).max())))
            P = phi.apply(P)
        columns = ("m", "n", "defect")
    else:
        anchor = int(anchor)
        tail_start = m_max // 2 if tail_start is None else int(tail_start)
        orbit = orbit_array(sys, X, anchor + m_max)
        P = _phi_power(phi, orbit[anchor], tail_start + 1)
        for m in range(tail_start + 1, m_max + 1):
            series.append((m, anchor, float(space.dist(P, orbit[anchor + m]).max())))
            P = phi.apply(P)
        columns = ("m", "n", "defect")
    defects = [r[-1] for r in series]
    extras = {"min_tail_defect": float(min(defects)) if defects else 0.0}
    config = {
        "system": sys.label, "m_max": m_max, "N": N, "eps": eps,
        "tail_start": tail_start, "anchor": anchor, "grid_points": len(G),
    }
    return _verdict("check_action", series, eps, config, columns=columns, extras=extras)


def check_kempf(sys, x, burn_in=1000, keep=10000, eps=1e-3, tol=5e-3):
    """Hausdorff distance between the omega-limit estimate and its image under ``phi``."""
    phi = declared_limit(sys)
    om = omega_limit(sys, x, burn_in, keep, eps)
    image = PointSet(sys.space, phi.apply(om.centers.coords))
    defect = hausdorff(sys.space, image, om.centers)
    config = {"system": sys.label, "x": om.source[1].tolist(), "burn_in": burn_in, "keep": keep, "eps": eps}
    extras = {"centers": len(om.centers), "image_points": len(image)}
    if len(om.centers) <= 64:
        extras["omega"] = om.centers.tolist()
    return _verdict("check_kempf", [(0, defect)], tol, config, extras=extras)


def find_fixed_point(sys, x, burn_in=1000, keep=10000, eps=1e-3, tol=1e-6, polish=64):
    """Point of the omega-limit estimate closest to being fixed by ``phi``.

    Candidates are the cluster centers plus the orbit point ``x_n`` of the
    window minimizing ``d(x_n, x_(n+1))``.  Each candidate is followed for up
    to ``polish`` steps under ``phi``, which maps the omega-limit set onto
    itself.  The residual is ``d(phi(y), y)`` at the best point ``y``.
    Returns ``(y, residual, report)``.
    """
    phi = declared_limit(sys)
    space = sys.space
    om = omega_limit(sys, x, burn_in, keep, eps)
    window = om.cloud
    if len(window) > 1:
        steps = space.dist(window[:-1], window[1:])
        q = int(np.argmin(steps))
        step_min = float(steps[q])
        cands = np.concatenate([om.centers.coords, window[q:q + 1]])
    else:
        q, step_min = 0, float("nan")
        cands = om.centers.coords
    raw = space.dist(phi.apply(cands), cands)
    best_raw = float(raw.min())
    best, best_r, best_j = None, np.inf, 0
    P = cands
    for j in range(polish + 1):
        Q = phi.apply(P)
        r = space.dist(Q, P)
        i = int(np.argmin(r))
        if r[i] < best_r:
            best, best_r, best_j = P[i].copy(), float(r[i]), j
        if best_r == 0.0:
            break
        P = Q
    config = {"system": sys.label, "x": om.source[1].tolist(), "burn_in": burn_in, "keep": keep, "eps": eps, "polish": polish}
    extras = {
        "fixed_point": best.tolist(),
        "residual_before_polish": best_raw,
        "polish_steps": best_j,
        "orbit_step_min": step_min,
        "orbit_step_argmin_n": burn_in + 1 + q,
    }
    report = _verdict("find_fixed_point", [(0, best_r)], tol, config, extras=extras)
    return best, best_r, report


def check_periodic_point(sys, x, n_max=64, eps=1e-2, burn_in=1000):
    """Smallest ``n <= n_max`` with ``x_T`` returning within ``eps`` after ``n`` steps.

    ``x_T`` is the orbit point after ``burn_in`` steps.  The return is
    confirmed on ``phi`` itself: ``d(phi^n(x_T), x_T)`` must be within
    ``eps`` plus the drift bound ``sum_i Lip(phi)^(n-i) d(phi(x_(T+i-1)), x_(T+i))``.
    """
    phi = declared_limit(sys)
    space = sys.space
    pts = trajectory(sys, x, burn_in + n_max).points
    z = pts[burn_in:burn_in + 1]
    L = phi.lipschitz
    one_step = space.dist(phi.apply(pts[burn_in:-1]), pts[burn_in + 1:])
    scan = []
    found = None
    best = np.inf
    drift = 0.0
    P = z
    for n in range(1, n_max + 1):
        P = phi.apply(P)
        drift = L * drift + float(one_step[n - 1])
        ret = float(space.dist(z, pts[burn_in + n:burn_in + n + 1])[0])
        phi_ret = float(space.dist(P, z)[0])
        e = max(ret, phi_ret - drift)
        scan.append({"n": n, "orbit_return": ret, "phi_return": phi_ret, "drift_bound": drift})
        best = min(best, e)
        if found is None and e <= eps:
            found = n
            best = e
            break
    config = {"system": sys.label, "x": pts[0].tolist(), "n_max": n_max, "eps": eps, "burn_in": burn_in}
    extras = {"period": found, "scan": scan if len(scan) <= 64 else scan[:64]}
    return VerdictReport(
        check_name="check_periodic_point",
        passed=found is not None,
        max_defect=float(best),
        tolerance=float(eps),
        defect_series=None,
        config_echo=config,
        extras=extras,
    )


def check_conjugacy(sys_x, sys_y, h, grid=101, N=100, tol=1e-9):
    """Orbit transport ``h(f_1^n x) = g_1^n(h x)`` on a grid, ``n <= N``."""
    if h.space != sys_x.space:
        raise DomainError("h must be defined on the space of the first system")
    G = _grid(sys_x.space, grid)
    X = G.coords
    HX = sys_y.space.canonicalize(h.apply(X))
    ox = orbit_array(sys_x, X, N)
    oy = orbit_array(sys_y, HX, N)
    series = []
    gen_max = 0.0
    for n in range(1, N + 1):
        hx = sys_y.space.canonicalize(h.apply(ox[n]))
        series.append((n, float(sys_y.space.dist(hx, oy[n]).max())))
        gen = sys_y.space.dist(
            sys_y.space.canonicalize(h.apply(sys_x.nth_map(n).apply(X))),
            sys_y.nth_map(n).apply(HX),
        )
        gen_max = max(gen_max, float(gen.max()))
    config = {"system_x": sys_x.label, "system_y": sys_y.label, "h": h.to_spec(), "N": N, "tol": tol, "grid_points": len(G)}
    return _verdict("check_conjugacy", series, tol, config, extras={"generator_defect": gen_max})
