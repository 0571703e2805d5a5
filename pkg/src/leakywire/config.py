"""Run configuration: a flat YAML document with one nested curve record.

Example::

    command: bound
    alpha: 1.0
    n: 512
    curve:
      kind: builtin
      name: angle
      params: {beta: 1.0471975511965976, T: 60}

Curve records (``curve.kind``):

``builtin``   ``name`` from the builtin catalogue plus ``params``.
``polyline``  ``points`` (list of [x, y]), ``closed`` (bool), optional ``type``.
``csv``       ``path`` to a file with header ``t,x,y`` and ``type``
              (loop, segment or infinite); a relative path is resolved
              against the config file.
``star``      graph of ``edges`` half-lines from the origin, optional ``angles``.
``graph``     ``vertices``, ``edges`` as index pairs joined by straight
              segments, optional ``rays`` as [vertex, angle] half-lines.

A CSV file can also be passed as the whole config; it is read as a sampled
curve with default settings.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np
import yaml

from . import constants as C
from .bounds import LeakyGraph, star_graph
from .curves import INFINITE, LOOP, SEGMENT, builtin, polyline, sampled, segment
from .errors import ConfigError, LeakyWireError

COMMANDS = ("cconst", "spectrum", "bound", "sweep", "selftest-k0")
SWEEP_PARAMS = ("beta", "alpha", "kappa", "n")
FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    command: str = "bound"
    curve: dict | None = None
    alpha: float = 1.0
    n: int = C.N_NODES
    T: float = C.TRUNCATION_T
    rule: str = "panel_gauss"
    kappa_min: float | None = None
    kappa_max: float | None = None
    kappa_points: int = C.KAPPA_GRID_POINTS
    top_k: int = C.TOP_K
    levels: int = C.REFINE_LEVELS
    strategy: str = "tangent_rays"
    sweep: dict | None = None
    out: str | None = None
    format: str = "json"
    base_dir: Path = field(default_factory=Path.cwd, repr=False)
    lines: dict = field(default_factory=dict, repr=False)

    def fail(self, key, msg):
        line = self.lines.get(key)
        where = f"line {line}, " if line else ""
        raise ConfigError(f"{where}field '{key}': {msg}")

    def validate(self):
        if self.command not in COMMANDS:
            self.fail("command", f"must be one of {', '.join(COMMANDS)}")
        if not (isinstance(self.alpha, (int, float)) and self.alpha > 0 and math.isfinite(self.alpha)):
            self.fail("alpha", "must be a positive number")
        if not (isinstance(self.n, int) and self.n >= 16):
            self.fail("n", "must be an integer >= 16")
        if not self.T > 0:
            self.fail("T", "must be positive")
        if self.rule not in ("panel_gauss", "log_subtraction"):
            self.fail("rule", "must be panel_gauss or log_subtraction")
        for key in ("kappa_min", "kappa_max"):
            v = getattr(self, key)
            if v is not None and not (isinstance(v, (int, float)) and v > 0):
                self.fail(key, "must be a positive number")
        if self.kappa_min is not None and self.kappa_max is not None \
                and not self.kappa_min < self.kappa_max:
            self.fail("kappa_max", "must exceed kappa_min")
        if not (isinstance(self.top_k, int) and self.top_k >= 1):
            self.fail("top_k", "must be a positive integer")
        if not (isinstance(self.kappa_points, int) and self.kappa_points >= 2):
            self.fail("kappa_points", "must be an integer >= 2")
        if self.format not in FORMATS:
            self.fail("format", "must be csv or json")
        if self.command != "selftest-k0" and self.curve is None:
            self.fail("curve", "a curve record is required")
        if self.command == "sweep":
            self._validate_sweep()
        return self

    def _validate_sweep(self):
        sw = self.sweep
        if not isinstance(sw, dict):
            self.fail("sweep", "a mapping with 'parameter' and 'values' is required")
        if sw.get("parameter") not in SWEEP_PARAMS:
            self.fail("sweep", f"parameter must be one of {', '.join(SWEEP_PARAMS)}")
        inner = sw.get("command", "cconst" if sw["parameter"] == "beta" else "bound")
        if inner not in ("cconst", "spectrum", "bound"):
            self.fail("sweep", "command must be cconst, spectrum or bound")
        if sw["parameter"] == "kappa":
            inner = "spectrum"
        try:
            values = sweep_values(sw)
        except (TypeError, ValueError) as exc:
            self.fail("sweep", f"bad values ({exc})")
        if len(values) == 0:
            self.fail("sweep", "no values to sweep")
        if sw["parameter"] == "n" and not all(float(v).is_integer() and v >= 16 for v in values):
            self.fail("sweep", "node counts must be integers >= 16")
        if sw["parameter"] in ("alpha", "kappa") and not np.all(values > 0):
            self.fail("sweep", "values must be positive")
        if sw["parameter"] == "beta" and (self.curve or {}).get("name") != "angle":
            self.fail("sweep", "beta sweeps need the builtin angle curve")
        sw["command"] = inner


def sweep_values(sw: dict) -> np.ndarray:
    """Sorted, de-duplicated sweep values from ``values`` or ``start/stop/num``."""
    if "values" in sw:
        vals = np.asarray([_number(v) for v in sw["values"]], dtype=float)
    else:
        vals = np.linspace(_number(sw["start"]), _number(sw["stop"]), int(sw["num"]))
    return np.unique(vals)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub,
           ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    raise ValueError("unsupported expression")


def _number(v):
    """Numbers, or arithmetic in ``pi`` such as ``pi/6`` or ``2*pi/3``."""
    if isinstance(v, bool):
        raise ValueError(f"not a number: {v!r}")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return _eval(ast.parse(v, mode="eval").body)
        except (SyntaxError, ValueError, ZeroDivisionError):
            pass
    raise ValueError(f"not a number: {v!r}")


def _key_lines(text):
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value}


def load_config(path) -> RunConfig:
    """Read a YAML config (or a bare ``t,x,y`` CSV curve) and validate it."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if path.suffix.lower() == ".csv":
        return RunConfig(curve={"kind": "csv", "path": str(path.resolve()), "type": "loop"},
                         base_dir=path.parent).validate()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}: " if mark else ""
        raise ConfigError(f"{where}malformed YAML ({getattr(exc, 'problem', exc)})") from exc
    return config_from_dict(data or {}, base_dir=path.parent, lines=_key_lines(text))


def config_from_dict(data: dict, base_dir=None, lines=None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of keys to values")
    names = {f.name for f in fields(RunConfig)} - {"base_dir", "lines"}
    lines = lines or {}
    unknown = set(data) - names
    if unknown:
        key = sorted(unknown)[0]
        line = lines.get(key)
        raise ConfigError(f"{'line %d, ' % line if line else ''}unknown field '{key}'")
    cfg = RunConfig(**data, lines=lines)
    if base_dir is not None:
        cfg.base_dir = Path(base_dir)
    for key in ("alpha", "T", "kappa_min", "kappa_max"):
        v = getattr(cfg, key)
        if v is not None:
            try:
                setattr(cfg, key, _number(v))
            except ValueError:
                cfg.fail(key, "must be a number")
    return cfg.validate()


def build_target(cfg: RunConfig, **overrides):
    """Curve or graph described by ``cfg.curve``; ``overrides`` update builtin params."""
    rec = dict(cfg.curve or {})
    kind = rec.get("kind", "builtin")
    try:
        if kind == "builtin":
            params = {k: _number(v) if isinstance(v, str) else v
                      for k, v in (rec.get("params") or {}).items()}
            params.update(overrides)
            name = rec.get("name")
            if name in ("line", "angle", "parabola") and "T" not in params:
                params["T"] = cfg.T
            return builtin(name, **params)
        if kind == "polyline":
            return polyline(np.asarray(rec["points"], dtype=float), closed=bool(rec.get("closed")),
                            kind=rec.get("type", LOOP if rec.get("closed") else SEGMENT))
        if kind == "csv":
            p = Path(rec["path"])
            if not p.is_absolute():
                p = cfg.base_dir / p
            t, x, y = _read_txy(p)
            return sampled(t, x, y, kind=rec.get("type", LOOP))
        if kind == "star":
            angles = rec.get("angles")
            if angles is not None:
                angles = [_number(a) for a in angles]
            return star_graph(int(rec.get("edges", 3)), T=cfg.T, angles=angles)
        if kind == "graph":
            verts = np.asarray(rec["vertices"], dtype=float)
            edges = []
            for i, j in rec.get("edges", []):
                d = verts[j] - verts[i]
                edges.append(segment(verts[i], math.atan2(d[1], d[0]), float(np.hypot(*d)),
                                     name=f"edge{len(edges)}"))
            for v, ang in rec.get("rays", []):
                edges.append(segment(verts[v], _number(ang), cfg.T, kind=INFINITE,
                                     name=f"edge{len(edges)}"))
            return LeakyGraph(verts, edges, name="graph")
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, LeakyWireError) as exc:
        cfg.fail("curve", f"{type(exc).__name__}: {exc}")
    cfg.fail("curve", f"unknown curve kind {kind!r}")


def _read_txy(path):
    try:
        data = np.genfromtxt(path, delimiter=",", names=True)
    except OSError as exc:
        raise ConfigError(f"cannot read curve samples: {exc}") from exc
    if data.dtype.names is None or not {"t", "x", "y"} <= set(data.dtype.names):
        raise ConfigError(f"{path}: CSV header must contain t,x,y")
    return data["t"], data["x"], data["y"]
