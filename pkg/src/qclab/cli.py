"""Command-line front end.

Every command parses a scene, builds an ``ExperimentPlan`` and hands it to
``run``, which only dispatches to library operations and writes output.
Exit status: 0 on pass/success, 1 on a fail verdict, 2 on usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import acceptance, checks
from .directions import farthest_direction
from .flow import FlowConfig, FlowError, gradient_curve, join_in_subset, radial_curve, tangent_curve
from .scene import Scene, SceneError, load_scene, parse_point
from .spaces import StepTooLarge

OUT_ENV = "QCLAB_OUT_DIR"
COMMANDS = ("check", "trace-gradient", "trace-radial", "join", "tangent", "farthest", "suite")
CHECK_CRITERIA = ("all",) + checks.QC_CRITERIA + ("extremal", "suspension", "intersection", "fixed")


class UsageError(ValueError):
    pass


@dataclass
class ExperimentPlan:
    command: str
    scene: Scene | None
    parameters: dict = field(default_factory=dict)

    def validate(self) -> None:
        p = self.parameters
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command != "suite" and self.scene is None:
            raise UsageError(f"{self.command} needs --scene")
        if p.get("budget") is not None and p["budget"] < 1:
            raise UsageError("--budget must be positive")
        if p.get("step") is not None and not p["step"] > 0:
            raise UsageError("--step must be positive")
        if self.command == "check" and p["criterion"] not in CHECK_CRITERIA:
            raise UsageError(f"--criterion must be one of {', '.join(CHECK_CRITERIA)}")
        if self.command in ("trace-gradient", "trace-radial", "join", "tangent", "farthest") and not p.get("from"):
            raise UsageError(f"{self.command} needs --from")
        if self.command == "trace-gradient" and not (p.get("to") or p.get("to_pole")):
            raise UsageError("trace-gradient needs --to or --to-pole")
        if self.command == "join" and not p.get("to"):
            raise UsageError("join needs --to")
        if self.command in ("trace-radial", "tangent") and p.get("direction") is None:
            raise UsageError(f"{self.command} needs --direction")
        if self.command == "farthest" and not (p.get("to") or p.get("directions")):
            raise UsageError("farthest needs --to or --directions")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _out_path(plan: ExperimentPlan, suffix: str) -> Path | None:
    out = plan.parameters.get("out")
    if out:
        return Path(out)
    base = os.environ.get(OUT_ENV)
    if base:
        tag = plan.scene.name if plan.scene else f"seed{plan.parameters.get('seed')}"
        return Path(base) / f"{plan.command}-{tag}{suffix}"
    return None


def _emit(plan: ExperimentPlan, text: str, suffix: str) -> None:
    sys.stdout.write(text)
    path = _out_path(plan, suffix)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _labels(space) -> list[str]:
    kind = space.describe()["kind"]
    if kind == "spindle":
        return ["s", "phi"]
    if kind == "cone":
        return ["r", "phi"]
    return [f"x{i}" for i in range(space.dim + (1 if kind == "sphere" else 0))]


def _direction(space, p, text):
    """A direction at p: a number (circle) or a comma-separated vector."""
    from .scene import number

    parts = [t for t in str(text).strip("() ").split(",") if t.strip()]
    if len(parts) == 1:
        return number(parts[0])
    v = np.array([number(t) for t in parts])
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_check(plan: ExperimentPlan) -> int:
    p, sc = plan.parameters, plan.scene
    budget, seed = p["budget"], p["seed"]
    crit = p["criterion"]
    F = sc.subset(p.get("subset"))
    if crit == "all":
        reports = checks.run_quasiconvex_checks(sc.space, F, budget, seed)
    elif crit in checks.CHECKERS:
        reports = [checks.CHECKERS[crit](sc.space, F, budget, seed)]
    elif crit == "extremal":
        reports = [checks.check_extremal(sc.space, F, budget, seed)]
    elif crit == "suspension":
        reports = [checks.verify_suspension_structure(sc.space, F, budget, seed)]
    elif crit == "intersection":
        if not p.get("with"):
            raise UsageError("--criterion intersection needs --with SUBSET")
        reports = [checks.verify_intersection(sc.space, F, sc.subset(p["with"]), budget, seed)]
    else:
        name = p.get("isometry")
        if name not in sc.isometries:
            raise UsageError(f"--isometry must be one of {', '.join(sc.isometries)}")
        reports = [checks.verify_fixed_point_set(sc.space, sc.isometries[name], budget, seed)]
    _emit(plan, "".join(r.to_json() + "\n" for r in reports), ".jsonl")
    return 1 if any(r.verdict == "fail" for r in reports) else 0


def _flow_cfg(plan: ExperimentPlan) -> FlowConfig:
    p = plan.parameters
    kw = {"step": p["step"]}
    if p.get("max_steps"):
        kw["max_steps"] = p["max_steps"]
    return FlowConfig(**kw)


def _curve_out(plan: ExperimentPlan, curve) -> int:
    space = plan.scene.space
    head = f"# terminal_reason={curve.terminal_reason} samples={len(curve)} meta={json.dumps(checks._plain(curve.meta))}\n"
    _emit(plan, head + curve.to_table(",", _labels(space)), ".csv")
    return 0


def _cmd_trace_gradient(plan: ExperimentPlan) -> int:
    p, sp = plan.parameters, plan.scene.space
    base = parse_point(sp, p.get("to_pole") or p["to"])
    start = parse_point(sp, p["from"])
    return _curve_out(plan, gradient_curve(sp, base, start, _flow_cfg(plan)))


def _cmd_trace_radial(plan: ExperimentPlan) -> int:
    p, sp = plan.parameters, plan.scene.space
    x = parse_point(sp, p["from"])
    return _curve_out(plan, radial_curve(sp, x, _direction(sp, x, p["direction"]), _flow_cfg(plan)))


def _cmd_join(plan: ExperimentPlan) -> int:
    p, sc = plan.parameters, plan.scene
    F = sc.subset(p.get("subset"))
    a, b = parse_point(sc.space, p["from"]), parse_point(sc.space, p["to"])
    eps = p.get("epsilon")
    if eps is None:
        eps = checks.estimate_join_epsilon(sc.space, p["budget"], p["seed"])["epsilon"]
    return _curve_out(plan, join_in_subset(sc.space, F, a, b, eps, _flow_cfg(plan)))


def _cmd_tangent(plan: ExperimentPlan) -> int:
    p, sc = plan.parameters, plan.scene
    F = sc.subset(p.get("subset"))
    x = parse_point(sc.space, p["from"])
    return _curve_out(plan, tangent_curve(sc.space, F, x, _direction(sc.space, x, p["direction"]), _flow_cfg(plan)))


def _cmd_farthest(plan: ExperimentPlan) -> int:
    from .directions import DirectionSet

    p, sp = plan.parameters, plan.scene.space
    x = parse_point(sp, p["from"])
    sigma = sp.direction_space(x)
    if p.get("to"):
        A = sp.directions_to(x, parse_point(sp, p["to"]))
    else:
        A = DirectionSet.finite(sigma, [_direction(sp, x, d) for d in p["directions"].split(";")])
    far = farthest_direction(sigma, A)
    rec = {"at": x, "directions": A.describe(), "farthest": far.direction, "value": far.value,
           "unique": far.unique, "gradient_speed": -float(np.cos(far.value))}
    _emit(plan, json.dumps(checks._plain(rec)) + "\n", ".json")
    return 0


def _scene_suite(plan: ExperimentPlan) -> int:
    """Rows (subset, criterion) of a scene against its expected label."""
    p, sc = plan.parameters, plan.scene
    want = sc.expected.get("quasiconvex")
    lines, ok = [], True
    for key, F in sc.subsets.items():
        for r in checks.run_quasiconvex_checks(sc.space, F, p["budget"], p["seed"]):
            good = want is None or r.verdict == want or r.verdict == "suspect"
            ok &= good
            lines.append(f"[{'PASS' if good else 'FAIL'}] {key} {r.criterion}: verdict {r.verdict}"
                         f" (expected {want or 'any'})")
    _emit(plan, "\n".join(lines) + "\n", ".txt")
    return 0 if ok else 1


def _cmd_suite(plan: ExperimentPlan) -> int:
    p = plan.parameters
    if plan.scene is not None:
        return _scene_suite(plan)
    seed = p["seed"]
    only = p.get("only")

    def progress(res):
        if isinstance(res, acceptance.CriterionResult):
            print(res.line(), file=sys.stderr, flush=True)

    if only:
        numbers = sorted(int(x) for x in only.split(","))
        bad = [n for n in numbers if n not in acceptance.CRITERIA and n != 12]
        if bad:
            raise UsageError(f"unknown criteria {bad}")
        res = acceptance.run_criteria(seed, [n for n in numbers if n != 12], progress)
        if 12 in numbers:
            res.append(acceptance.criterion_12(seed, res if len(res) == len(acceptance.CRITERIA) else None))
    else:
        res = acceptance.run_suite(seed, progress)
    _emit(plan, acceptance.suite_text(res), ".txt")
    return 0 if all(r.passed for r in res) else 1


DISPATCH = {
    "check": _cmd_check,
    "trace-gradient": _cmd_trace_gradient,
    "trace-radial": _cmd_trace_radial,
    "join": _cmd_join,
    "tangent": _cmd_tangent,
    "farthest": _cmd_farthest,
    "suite": _cmd_suite,
}


def run(plan: ExperimentPlan) -> int:
    plan.validate()
    return DISPATCH[plan.command](plan)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qclab", description="Quasi-convex subset experiments in model spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(s, scene_required=True):
        s.add_argument("--scene", required=scene_required, help="preset name or YAML file")
        s.add_argument("--subset", help="subset name within the scene")
        s.add_argument("--budget", type=int, default=2000)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--step", type=float, default=1e-2)
        s.add_argument("--max-steps", type=int, dest="max_steps")
        s.add_argument("--out", help=f"output file (default: ${OUT_ENV}/<command>-<scene>)")

    s = sub.add_parser("check", help="run checkers on a subset")
    common(s)
    s.add_argument("--criterion", default="all", choices=CHECK_CRITERIA)
    s.add_argument("--with", dest="with_", metavar="SUBSET", help="second subset for intersections")
    s.add_argument("--isometry", help="isometry for the fixed point check")

    s = sub.add_parser("trace-gradient", help="gradient curve of dist_p")
    common(s)
    s.add_argument("--from", dest="from_", required=True, metavar="POINT")
    s.add_argument("--to", metavar="POINT", help="the point p of dist_p")
    s.add_argument("--to-pole", dest="to_pole", choices=("z1", "z2"))

    s = sub.add_parser("trace-radial", help="radial curve from a point")
    common(s)
    s.add_argument("--from", dest="from_", required=True, metavar="POINT")
    s.add_argument("--direction", required=True)

    s = sub.add_parser("join", help="join two points inside a subset")
    common(s)
    s.add_argument("--from", dest="from_", required=True, metavar="POINT")
    s.add_argument("--to", required=True, metavar="POINT")
    s.add_argument("--epsilon", type=float)

    s = sub.add_parser("tangent", help="curve in a subset tangent to a direction")
    common(s)
    s.add_argument("--from", dest="from_", required=True, metavar="POINT")
    s.add_argument("--direction", required=True)

    s = sub.add_parser("farthest", help="farthest direction from a direction set")
    common(s)
    s.add_argument("--from", dest="from_", required=True, metavar="POINT")
    s.add_argument("--to", metavar="POINT", help="use the directions toward this point")
    s.add_argument("--directions", help="explicit directions separated by ';'")

    s = sub.add_parser("suite", help="acceptance matrix, or a scene's expected verdicts")
    common(s, scene_required=False)
    s.set_defaults(seed=1)
    s.add_argument("--only", help="comma-separated criterion numbers")
    return ap


def plan_from_args(args: argparse.Namespace) -> ExperimentPlan:
    params = {k.rstrip("_"): v for k, v in vars(args).items() if k not in ("command", "scene")}
    scene = load_scene(args.scene) if getattr(args, "scene", None) else None
    return ExperimentPlan(args.command, scene, params)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        plan = plan_from_args(args)
        return run(plan)
    except (UsageError, SceneError) as exc:
        print(f"qclab: error: {exc}", file=sys.stderr)
        return 2
    except (FlowError, StepTooLarge, ValueError) as exc:
        print(f"qclab: {args.command} failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
