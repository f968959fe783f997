"""Scenario files: JSON descriptions of a system plus an ordered task list.

A scenario looks like::

    {
      "name": "contraction",
      "description": "...",
      "space": {"kind": "interval", "lo": 0, "hi": 1},
      "sequence": {"rule": "family", "family": "affine_decay", "params": [0.5, 0.25, 0.1]},
      "limit": {"form": "catalog", "name": "affine", "params": [0.5, 0.25]},
      "tasks": [{"task": "check_uniap", "N": 200}]
    }

Reports are written as ``NN_<task>.json`` (plus ``NN_<task>.csv`` series)
under ``<out>/<name>/``; ``summary.json`` carries wall times and is the only
file whose content varies between runs.
"""

import json
import os
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import analysis, verify
from ._io import dumps
from .errors import ConfigError, NDSError
from .maps import Composition, map_from_spec
from .space import PointSet, Space, grid as make_grid
from .system import (
    ConvergentFamily,
    Conjugated,
    Explicit,
    Family,
    Induced,
    PeriodicTail,
    Shifted,
    System,
    gamma_from_spec,
    iterate_map,
    star_iterate,
    trajectory,
)

SCHEMA_VERSION = 1

# ---------------------------------------------------------------------------
# builders


def space_from_spec(spec, loc="space"):
    if not isinstance(spec, dict):
        raise ConfigError("space must be an object", loc)
    kind = spec.get("kind")
    try:
        if kind == "interval":
            return Space.interval(spec.get("lo", 0.0), spec.get("hi", 1.0))
        if kind == "box":
            return Space.box(spec["lo"], spec["hi"], spec.get("metric", "euclidean"))
        if kind == "circle":
            return Space.circle(spec.get("circumference", 1.0))
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}", loc) from None
    except ConfigError as exc:
        raise ConfigError(str(exc), loc) from None
    raise ConfigError(f"unknown space kind {kind!r}", loc)


def _map(space, spec, loc):
    try:
        return map_from_spec(space, spec)
    except (NDSError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed map spec ({exc})", loc) from None


def sequence_from_spec(space, spec, loc="sequence"):
    if not isinstance(spec, dict) or "rule" not in spec:
        raise ConfigError("sequence must be an object with a 'rule'", loc)
    rule = spec["rule"]
    try:
        if rule == "periodic":
            return PeriodicTail([_map(space, m, f"{loc}.block[{i}]") for i, m in enumerate(spec["block"])])
        if rule == "explicit":
            maps = [_map(space, m, f"{loc}.maps[{i}]") for i, m in enumerate(spec["maps"])]
            tail = spec.get("tail", "none")
            if isinstance(tail, dict):
                tail = Family(space, tail["family"], tail.get("params", ()))
            return Explicit(maps, tail)
        if rule == "family":
            fam = Family(space, spec["family"], spec.get("params", ()))
            limit = _map(space, spec["limit"], f"{loc}.limit") if "limit" in spec else None
            return ConvergentFamily(fam, limit)
        if rule == "shifted":
            return Shifted(sequence_from_spec(space, spec["base"], f"{loc}.base"), spec["k"])
        if rule == "induced":
            gamma = gamma_from_spec(spec["gamma"])
            return Induced(sequence_from_spec(space, spec["base"], f"{loc}.base"), gamma)
        if rule == "conjugated":
            base = sequence_from_spec(space, spec["base"], f"{loc}.base")
            return Conjugated(base, _map(space, spec["h"], f"{loc}.h"), _map(space, spec["h_inv"], f"{loc}.h_inv"))
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}", loc) from None
    except ConfigError as exc:
        if exc.location:
            raise
        raise ConfigError(str(exc), loc) from None
    raise ConfigError(f"unknown sequence rule {rule!r}", loc)


def system_from_spec(spec, label="", loc=""):
    """System from an object with ``space``, ``sequence`` and optional ``limit``."""
    pre = f"{loc}." if loc else ""
    space = space_from_spec(spec.get("space"), f"{pre}space")
    seq = sequence_from_spec(space, spec.get("sequence"), f"{pre}sequence")
    limit = _map(space, spec["limit"], f"{pre}limit") if spec.get("limit") is not None else None
    return System(space, seq, label=label or spec.get("name", ""), limit=limit)


# ---------------------------------------------------------------------------
# task table: name -> (defaults, is_check)

_REQ = object()

TASKS = {
    "trajectory": ({"x": _REQ, "N": _REQ}, False),
    "star_iterate": ({"n": _REQ, "m": _REQ, "grid": 33}, False),
    "omega_limit": ({"x": _REQ, "burn_in": 1000, "keep": 10000, "eps": 1e-3}, False),
    "pointwise_limit_profile": ({"grid": 101, "N": _REQ, "window": 1, "eps": 1e-3}, False),
    "asymptotic_report": ({"a": _REQ, "b": _REQ, "grid": 101, "N": _REQ, "eps": 1e-2, "tail_start": None}, False),
    "uniform_limit": ({"grid": 101, "N": 200, "tol": 1e-2}, False),
    "equicontinuity": ({"grid": 101, "deltas": _REQ, "N": _REQ, "post": None}, False),
    "check_split": ({"k_max": 8, "n_max": 64, "grid": 101}, True),
    "check_periodic": ({"l_max": 16, "grid": 101}, True),
    "check_induced": ({"gamma": _REQ, "n_max": 10, "grid": 101, "horizon": 16}, True),
    "check_uniap": ({"grid": 101, "N": 200, "eps": 1e-2, "tail_start": None}, True),
    "check_action": ({"m_max": 2, "grid": 101, "N": 200, "eps": 1e-2, "tail_start": None, "anchor": None}, True),
    "check_kempf": ({"x": _REQ, "burn_in": 1000, "keep": 10000, "eps": 1e-3, "tol": 5e-3}, True),
    "find_fixed_point": ({"x": _REQ, "burn_in": 1000, "keep": 10000, "eps": 1e-3, "tol": 1e-6, "polish": 64}, True),
    "check_periodic_point": ({"x": _REQ, "n_max": 64, "eps": 1e-2, "burn_in": 1000}, True),
    "check_conjugacy": ({"other": _REQ, "h": _REQ, "grid": 101, "N": 100, "tol": 1e-9}, True),
}

_VIEWS = ("maps", "iterates", "iterates_next", "phi_iterates")


@dataclass
class Task:
    name: str
    params: dict
    is_check: bool


@dataclass
class Scenario:
    name: str
    description: str
    spec: dict
    system: System
    tasks: list
    output: str = None

    @property
    def space(self):
        return self.system.space


def _check_static(name, p, loc, system):
    """Preconditions that can be checked without running anything."""

    def positive_int(key, minimum=1):
        v = p.get(key)
        if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < minimum):
            raise ConfigError(f"{key} must be an integer >= {minimum}", f"{loc}.{key}")

    for key in ("N", "n_max", "k_max", "l_max", "keep", "m_max", "horizon", "window", "polish"):
        positive_int(key, 0 if key in ("polish",) else 1)
    for key in ("burn_in", "n", "m"):
        positive_int(key, 0)
    for key in ("eps", "tol"):
        if key in p and p[key] is not None and not (isinstance(p[key], (int, float)) and p[key] >= 0):
            raise ConfigError(f"{key} must be a nonnegative number", f"{loc}.{key}")
    if name == "check_split" and not 2 <= p["k_max"] <= p["n_max"]:
        raise ConfigError("need 2 <= k_max <= n_max", loc)
    if name == "check_periodic" and not isinstance(system.seq, PeriodicTail):
        raise ConfigError("check_periodic needs a periodic sequence", loc)
    if name == "check_induced":
        try:
            p["gamma"] = gamma_from_spec(p["gamma"])
        except ConfigError as exc:
            raise ConfigError(str(exc), f"{loc}.gamma") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed gamma ({exc})", f"{loc}.gamma") from None
    if name == "check_conjugacy":
        p["other"] = system_from_spec(p["other"], label="other", loc=f"{loc}.other")
        p["h"] = _map(system.space, p["h"], f"{loc}.h")
    if name == "asymptotic_report":
        for key in ("a", "b"):
            v = p[key]
            if not (v in _VIEWS or (isinstance(v, dict) and "constant" in v)):
                raise ConfigError(f"unknown view {v!r}", f"{loc}.{key}")
    if name == "equicontinuity":
        d = p["deltas"]
        if not isinstance(d, list) or not d or any(not x > 0 for x in d) or d != sorted(d):
            raise ConfigError("deltas must be positive and ascending", f"{loc}.deltas")
    if name in ("check_uniap", "check_action", "check_kempf", "find_fixed_point", "check_periodic_point", "uniform_limit"):
        if system.limit is None:
            raise ConfigError(f"{name} needs a declared limit", loc)
    if name == "pointwise_limit_profile" and p["window"] > p["N"]:
        raise ConfigError("window must be <= N", loc)


def parse_scenario(text):
    """Validated :class:`Scenario` from UTF-8 JSON (bytes or str)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"scenario is not UTF-8 ({exc})") from None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON ({exc})") from None
    if not isinstance(spec, dict):
        raise ConfigError("scenario must be a JSON object")
    name = spec.get("name")
    if not isinstance(name, str) or not name:
        raise ConfigError("scenario needs a nonempty name", "name")
    system = system_from_spec(spec, label=name)
    raw_tasks = spec.get("tasks", [])
    if not isinstance(raw_tasks, list):
        raise ConfigError("tasks must be a list", "tasks")
    tasks = []
    for i, entry in enumerate(raw_tasks):
        loc = f"tasks[{i}]"
        if not isinstance(entry, dict) or "task" not in entry:
            raise ConfigError("task entry needs a 'task' key", loc)
        tname = entry["task"]
        if tname not in TASKS:
            raise ConfigError(f"unknown task {tname!r}", loc)
        defaults, is_check = TASKS[tname]
        unknown = set(entry) - set(defaults) - {"task"}
        if unknown:
            raise ConfigError(f"unknown parameters {sorted(unknown)}", loc)
        params = {k: entry.get(k, v) for k, v in defaults.items()}
        missing = [k for k, v in params.items() if v is _REQ]
        if missing:
            raise ConfigError(f"missing parameters {missing}", loc)
        _check_static(tname, params, loc, system)
        tasks.append(Task(tname, params, is_check))
    return Scenario(
        name=name,
        description=spec.get("description", ""),
        spec=spec,
        system=system,
        tasks=tasks,
        output=spec.get("output"),
    )


def load_scenario(path):
    return parse_scenario(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# running


@dataclass
class TaskOutcome:
    index: int
    task: str
    status: str  # passed | failed | report-only | error
    wall_time: float
    artifacts: list = field(default_factory=list)
    message: str = ""


@dataclass
class RunSummary:
    scenario: str
    outcomes: list
    out_dir: str

    @property
    def passed(self):
        return all(o.status in ("passed", "report-only") for o in self.outcomes)

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "scenario": self.scenario,
            "passed": self.passed,
            "exit_code": self.exit_code,
            "tasks": [
                {
                    "index": o.index,
                    "task": o.task,
                    "status": o.status,
                    "wall_time": round(o.wall_time, 6),
                    "artifacts": o.artifacts,
                    **({"message": o.message} if o.message else {}),
                }
                for o in self.outcomes
            ],
        }


def _grid_arg(space, g):
    if isinstance(g, int):
        return make_grid(space, g)
    return PointSet(space, g)


def _view(system, spec):
    if spec == "maps":
        return analysis.MapsView(system)
    if spec == "iterates":
        return analysis.IteratesView(system)
    if spec == "iterates_next":
        return analysis.IteratesView(system, offset=1)
    if spec == "phi_iterates":
        return analysis.IteratesView(system, post=analysis.declared_limit(system))
    return analysis.ConstantView(analysis.zero_map(system.space, spec["constant"]))


def _run_task(system, task, tol_override):
    """Returns ``(status, body, csv_text)``."""
    p = dict(task.params)
    if tol_override is not None and "tol" in p:
        p["tol"] = tol_override
    name = task.name
    space = system.space
    if name.startswith("check_") or name == "find_fixed_point":
        if name == "check_split":
            rep = verify.check_split(system, p["k_max"], p["n_max"], _grid_arg(space, p["grid"]))
        elif name == "check_periodic":
            rep = verify.check_periodic(system, p["l_max"], _grid_arg(space, p["grid"]))
        elif name == "check_induced":
            rep = verify.check_induced(system, p["gamma"], p["n_max"], _grid_arg(space, p["grid"]), p["horizon"])
        elif name == "check_uniap":
            rep = verify.check_uniap(system, _grid_arg(space, p["grid"]), p["N"], p["eps"], p["tail_start"])
        elif name == "check_action":
            rep = verify.check_action(
                system, p["m_max"], _grid_arg(space, p["grid"]), p["N"], p["eps"], p["tail_start"], p["anchor"]
            )
        elif name == "check_kempf":
            rep = verify.check_kempf(system, p["x"], p["burn_in"], p["keep"], p["eps"], p["tol"])
        elif name == "find_fixed_point":
            _, _, rep = verify.find_fixed_point(system, p["x"], p["burn_in"], p["keep"], p["eps"], p["tol"], p["polish"])
        elif name == "check_periodic_point":
            rep = verify.check_periodic_point(system, p["x"], p["n_max"], p["eps"], p["burn_in"])
        elif name == "check_conjugacy":
            rep = verify.check_conjugacy(system, p["other"], p["h"], _grid_arg(space, p["grid"]), p["N"], p["tol"])
        return ("passed" if rep.passed else "failed"), rep, rep.series_csv()

    body = {"schema": SCHEMA_VERSION, "task": name, "config": _echo(p)}
    csv = None
    if name == "trajectory":
        tr = trajectory(system, p["x"], p["N"])
        body["result"] = {"x0": tr.x0.tolist(), "N": tr.N, "last": tr.points[-1].tolist()}
        csv = tr.to_csv()
    elif name == "star_iterate":
        G = _grid_arg(space, p["grid"])
        star = star_iterate(system, p["n"], p["m"]).apply(G.coords)
        comp = Composition([iterate_map(system, p["n"]), iterate_map(system, p["m"])]).apply(G.coords)
        body["result"] = {
            "max_star_vs_compose": float(space.dist(star, comp).max()),
            "star": star[:, 0].tolist() if space.dim == 1 else star.tolist(),
            "compose": comp[:, 0].tolist() if space.dim == 1 else comp.tolist(),
        }
    elif name == "omega_limit":
        body["result"] = analysis.omega_limit(system, p["x"], p["burn_in"], p["keep"], p["eps"]).to_dict()
    elif name == "pointwise_limit_profile":
        body["result"] = analysis.pointwise_limit_profile(
            system, _grid_arg(space, p["grid"]), p["N"], p["window"], p["eps"]
        ).to_dict()
    elif name == "asymptotic_report":
        rep = analysis.asymptotic_report(
            _view(system, p["a"]), _view(system, p["b"]), _grid_arg(space, p["grid"]), p["N"], p["eps"], p["tail_start"]
        )
        body["result"] = rep.to_dict()
        csv = _series_csv(rep.uniform_defect)
    elif name == "uniform_limit":
        ul = analysis.uniform_limit(system, _grid_arg(space, p["grid"]), p["N"], p["tol"])
        body["result"] = ul.to_dict()
        csv = _series_csv(ul.sup_defect)
    elif name == "equicontinuity":
        post = analysis.declared_limit(system) if p["post"] == "phi" else None
        body["result"] = analysis.equicontinuity(system, _grid_arg(space, p["grid"]), p["deltas"], p["N"], post).to_dict()
    return "report-only", body, csv


def _series_csv(values):
    from ._io import csv_text

    return csv_text(["n", "defect"], ((n, float(v)) for n, v in enumerate(values, start=1)))


def _echo(p):
    out = {}
    for k, v in p.items():
        if isinstance(v, System):
            out[k] = v.label
        elif hasattr(v, "to_spec"):
            out[k] = v.to_spec()
        else:
            out[k] = v
    return out


def default_out_dir(scenario=None):
    if scenario is not None and scenario.output:
        return scenario.output
    return os.environ.get("NDSLAB_OUT", "ndslab_out")


def run_scenario(scenario, out_dir=None, tol=None, write=True):
    """Run every task in order, write reports, return a :class:`RunSummary`."""
    base = Path(out_dir if out_dir is not None else default_out_dir(scenario))
    target = base / scenario.name
    if write:
        target.mkdir(parents=True, exist_ok=True)
    outcomes = []
    for i, task in enumerate(scenario.tasks):
        stem = f"{i:02d}_{task.name}"
        t0 = time.perf_counter()
        artifacts = []
        try:
            status, result, csv = _run_task(scenario.system, task, tol)
            message = ""
        except (NDSError, ValueError, IndexError, FloatingPointError) as exc:
            status, result, csv = "error", None, None
            message = f"{type(exc).__name__}: {exc}"
        wall = time.perf_counter() - t0
        if write:
            csv_name = f"{stem}.csv" if csv is not None else None
            if status == "error":
                body = {"schema": SCHEMA_VERSION, "task": task.name, "error": message}
            elif isinstance(result, verify.VerdictReport):
                body = result.to_dict(csv_name)
            else:
                body = result
                body["series_csv_path"] = csv_name
            (target / f"{stem}.json").write_text(dumps(body))
            artifacts.append(f"{stem}.json")
            if csv_name:
                (target / csv_name).write_text(csv)
                artifacts.append(csv_name)
        outcomes.append(TaskOutcome(i, task.name, status, wall, artifacts, message))
    summary = RunSummary(scenario.name, outcomes, str(target))
    if write:
        (target / "summary.json").write_text(dumps(summary.to_dict()))
    return summary


# ---------------------------------------------------------------------------
# shipped fixtures


def _fixture_files():
    root = resources.files("ndslab") / "scenarios"
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def list_fixtures():
    """``(name, description)`` for every shipped scenario."""
    out = []
    for p in _fixture_files():
        spec = json.loads(p.read_text(encoding="utf-8"))
        out.append((spec["name"], spec.get("description", "")))
    return out


def fixture_path(name):
    for p in _fixture_files():
        if p.name == f"{name}.json":
            return Path(str(p))
    raise ConfigError(f"no shipped fixture named {name!r}")


def load_fixture(name):
    return load_scenario(fixture_path(name))
