"""Scene files: one model space, named subsets and isometries, in YAML.

Schema::

    name: sphere_greatcircle
    space: {kind: sphere, dim: 2, radius: 1}
    subset: F                    # default subset for commands
    subsets:
      F: {type: great_subsphere, basis: [[1, 0, 0], [0, 0, 1]]}
    isometries: [reflection]     # names of built-in isometries (optional)
    expected: {quasiconvex: pass}

Numbers may be written as plain decimals or as arithmetic in ``pi``
(``pi/3``, ``2*pi``, ``sqrt(2)/2``).  Subset types: ``great_subsphere``,
``latitude_circle``, ``points``, ``affine``, ``union``, ``rays``,
``spindle_latitude``, ``tilted_great_circle``, ``fixed``, ``whole``, ``empty``.
"""
from __future__ import annotations

import ast
import math
import operator
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .spaces import Cone, Isometry, ModelSpace, Spindle, builtin_isometries, make_space
from .subsets import (
    AffineSubspace,
    EmptySet,
    FinitePoints,
    GreatSubsphere,
    LatitudeCircle,
    RaySet,
    SpindleLatitude,
    SubsetSpec,
    TiltedGreatCircle,
    Union,
    WholeSpace,
    fixed_point_set,
)


class SceneError(ValueError):
    pass


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "tau": 2 * math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "cos": math.cos, "sin": math.sin, "acos": math.acos, "atan": math.atan}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
            and len(node.args) == 1):
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise SceneError(f"unsupported expression: {ast.dump(node)}")


def number(x) -> float:
    """A float from a YAML scalar; strings are evaluated as arithmetic in pi."""
    if isinstance(x, bool):
        raise SceneError(f"expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(x)
        except ValueError:
            pass
        try:
            return float(_eval(ast.parse(x.strip(), mode="eval")))
        except SyntaxError as exc:
            raise SceneError(f"cannot parse number {x!r}") from exc
    raise SceneError(f"expected a number, got {x!r}")


def numbers(x) -> np.ndarray:
    if isinstance(x, (list, tuple)):
        return np.array([numbers(v) for v in x], dtype=np.float64)
    return np.float64(number(x))


_POINT_RE = re.compile(r"^\(?\s*(.*?)\s*\)?$")


def parse_point(space: ModelSpace, text: str) -> np.ndarray:
    """Parse ``"(s=1.0,phi=0)"``, ``"(r=1,phi=pi/2)"``, ``"(0.6, 0, 0.8)"`` or a
    named point (``z1``, ``z2``, ``apex``, ``origin``)."""
    t = text.strip()
    low = t.lower()
    if isinstance(space, Spindle) and low in ("z1", "z2"):
        return space.z1() if low == "z1" else space.z2()
    if isinstance(space, Cone) and low == "apex":
        return space.point([0.0, 0.0])
    if low == "origin":
        return np.zeros(space.dim if hasattr(space, "dim") else 2)
    body = _POINT_RE.match(t).group(1)
    parts = [p.strip() for p in body.split(",") if p.strip()]
    if not parts:
        raise SceneError(f"empty point {text!r}")
    if all("=" in p for p in parts):
        kv = {k.strip(): number(v) for k, v in (p.split("=", 1) for p in parts)}
        if isinstance(space, Spindle) and set(kv) == {"s", "phi"}:
            return space.point([kv["s"], kv["phi"]])
        if isinstance(space, Cone) and set(kv) == {"r", "phi"}:
            return space.point([kv["r"], kv["phi"]])
        raise SceneError(f"coordinates {sorted(kv)} do not fit {space.describe()['kind']}")
    return space.point([number(p) for p in parts])


def build_subset(space: ModelSpace, spec: dict, isometries: dict[str, Isometry], name: str) -> SubsetSpec:
    kind = spec.get("type")
    try:
        if kind == "great_subsphere":
            return GreatSubsphere(space, numbers(spec["basis"]), name)
        if kind == "latitude_circle":
            return LatitudeCircle(space, numbers(spec.get("axis", [0, 0, 1])), number(spec["s0"]), name)
        if kind == "points":
            return FinitePoints(space, [space.point(p) for p in numbers(spec["points"])], name)
        if kind == "affine":
            return AffineSubspace(space, numbers(spec["point"]), numbers(spec["basis"]), name)
        if kind == "union":
            parts = [build_subset(space, p, isometries, f"{name}[{i}]") for i, p in enumerate(spec["parts"])]
            special = [space.point(p) for p in numbers(spec.get("special", []))]
            return Union(parts, name, special=special)
        if kind == "rays":
            return RaySet(space, numbers(spec["angles"]), name)
        if kind == "spindle_latitude":
            return SpindleLatitude(space, number(spec.get("s0", "pi/2")), name)
        if kind == "tilted_great_circle":
            return TiltedGreatCircle(space, numbers(spec["normal"]), name)
        if kind == "fixed":
            F = fixed_point_set(space, isometries[spec["isometry"]])
            F.description = name
            return F
        if kind == "whole":
            F = WholeSpace(space)
            F.description = name
            return F
        if kind == "empty":
            return EmptySet(space)
    except KeyError as exc:
        raise SceneError(f"subset {name!r}: missing field {exc}") from exc
    raise SceneError(f"subset {name!r}: unknown type {kind!r}")


@dataclass
class Scene:
    name: str
    space: ModelSpace
    subsets: dict[str, SubsetSpec]
    isometries: dict[str, Isometry]
    default_subset: str | None = None
    expected: dict = field(default_factory=dict)

    def subset(self, name: str | None = None) -> SubsetSpec:
        key = name or self.default_subset
        if key is None:
            raise SceneError(f"scene {self.name!r} has no default subset")
        if key not in self.subsets:
            raise SceneError(f"scene {self.name!r} has no subset {key!r}")
        return self.subsets[key]


def scene_from_dict(data: dict, name: str = "scene") -> Scene:
    if not isinstance(data, dict) or "space" not in data:
        raise SceneError("scene needs a 'space' entry")
    sd = {k: (number(v) if k in ("radius", "theta", "length") else v) for k, v in data["space"].items()}
    try:
        space = make_space(sd)
    except (KeyError, ValueError) as exc:
        raise SceneError(str(exc)) from exc
    avail = {g.name: g for g in builtin_isometries(space)}
    wanted = data.get("isometries") or []
    for g in wanted:
        if g not in avail:
            raise SceneError(f"unknown isometry {g!r}; built-ins are {sorted(avail)}")
    isos = {g: avail[g] for g in wanted} if wanted else avail
    sname = data.get("name", name)
    subsets = {k: build_subset(space, v, avail, f"{sname}.{k}") for k, v in (data.get("subsets") or {}).items()}
    default = data.get("subset") or (next(iter(subsets)) if subsets else None)
    return Scene(sname, space, subsets, isos, default, dict(data.get("expected") or {}))


def preset_names() -> list[str]:
    root = resources.files("qclab") / "scenes"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_scene(ref: str) -> Scene:
    """Load a scene by preset name or file path."""
    path = Path(ref)
    if path.suffix in (".yaml", ".yml") or path.exists():
        if not path.exists():
            raise SceneError(f"no scene file {ref!r}")
        text = path.read_text()
        name = path.stem
    else:
        res = resources.files("qclab") / "scenes" / f"{ref}.yaml"
        if not res.is_file():
            raise SceneError(f"unknown scene {ref!r}; presets are {', '.join(preset_names())}")
        text = res.read_text()
        name = ref
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SceneError(f"scene {ref!r} is not valid YAML: {exc}") from exc
    return scene_from_dict(data, name)
