"""Command line entry point: ``ndslab run | fixtures | report``."""

import argparse
import json
import sys
from pathlib import Path

from . import parallel
from .errors import ConfigError
from .scenario import fixture_path, list_fixtures, load_scenario, run_scenario


def _resolve(path):
    p = Path(path)
    if p.exists():
        return p
    # bare fixture names are accepted too
    return fixture_path(p.stem)


def cmd_run(args):
    if args.threads is not None and args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    scenario = load_scenario(_resolve(args.scenario))
    with parallel.threads(args.threads or parallel.get_threads()):
        summary = run_scenario(scenario, out_dir=args.out, tol=args.tol)
    for o in summary.outcomes:
        line = f"  [{o.index:02d}] {o.task:<26} {o.status:<12} {o.wall_time:8.3f}s"
        if o.message:
            line += f"  {o.message}"
        print(line)
    print(f"{scenario.name}: {'PASS' if summary.passed else 'FAIL'} -> {summary.out_dir}")
    return summary.exit_code


def cmd_fixtures(args):
    for name, desc in list_fixtures():
        print(f"{name:<24} {desc}")
    return 0


def cmd_report(args):
    root = Path(args.dir)
    found = sorted(root.glob("summary.json")) or sorted(root.glob("*/summary.json"))
    if not found:
        print(f"no summary.json under {root}", file=sys.stderr)
        return 2
    code = 0
    for path in found:
        s = json.loads(path.read_text())
        print(f"{s['scenario']}: {'PASS' if s['passed'] else 'FAIL'}")
        for t in s["tasks"]:
            detail = ""
            rep = path.parent / t["artifacts"][0] if t["artifacts"] else None
            if rep is not None and rep.exists():
                body = json.loads(rep.read_text())
                if "max_defect" in body:
                    detail = f"max_defect={body['max_defect']} tol={body['tolerance']}"
            if t.get("message"):
                detail = t["message"]
            print(f"  [{t['index']:02d}] {t['task']:<26} {t['status']:<12} {detail}")
        code = max(code, s["exit_code"])
    return code


def build_parser():
    parser = argparse.ArgumentParser(prog="ndslab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", help="scenario JSON path or shipped fixture name")
    run.add_argument("--out", default=None, help="output directory (default: $NDSLAB_OUT or ./ndslab_out)")
    run.add_argument("--tol", type=float, default=None, help="override the tolerance of tasks that take one")
    run.add_argument("--threads", type=int, default=None, help="worker threads; never changes outputs")
    run.set_defaults(func=cmd_run)
    fx = sub.add_parser("fixtures", help="list shipped scenarios")
    fx.set_defaults(func=cmd_fixtures)
    rp = sub.add_parser("report", help="pretty-print run summaries")
    rp.add_argument("dir")
    rp.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
