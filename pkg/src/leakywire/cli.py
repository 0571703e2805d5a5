"""Command-line front end.

::

    leakywire bound --config circle.yaml --out report.json
    leakywire sweep --config angles.yaml --out c.csv --format csv
    leakywire selftest-k0

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 bound undefined (a cusp or self-intersection makes c vanish).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .birman_schwinger import (assemble_bs_matrix, discretize, eigenvalue_curve,
                               largest_eigenvalue)
from .bounds import LeakyGraph, validate_report, verify_report
from .config import COMMANDS, RunConfig, build_target, config_from_dict, load_config, sweep_values
from .errors import BoundUndefinedError, ConfigError, LeakyWireError
from .geometry import chord_arc_constant
from .special import k0_integral_check

log = logging.getLogger("leakywire")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_BOUND = 0, 2, 3, 4

K0_CHECK_CASES = [(1.0, 1.0), (2.0, 0.5), (10.0, 1.0), (0.1, 1.0), (0.5, 0.25), (50.0, 0.8)]
K0_CHECK_TOL = 1e-8


# ---------------------------------------------------------------------------
# output helpers


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2) + "\n"


def _sibling(out, suffix):
    return None if out is None else str(Path(out).with_suffix(suffix))


def _kappa_range(cfg, report):
    lo, hi = report.kappa_range
    return cfg.kappa_min or lo, cfg.kappa_max or hi


# ---------------------------------------------------------------------------
# commands


def _cconst(cfg, target):
    if isinstance(target, LeakyGraph):
        raise ConfigError("field 'curve': cconst needs a single curve")
    res = chord_arc_constant(target, levels=cfg.levels)
    return {"curve": target.name, "c": res.c, "effective_c": res.effective_c,
            "argmin": list(res.argmin), "cusp": res.cusp,
            "self_intersection": res.self_intersection, "levels": res.level_estimates}


def _report(cfg, target, alpha=None, n=None):
    return verify_report(target, alpha or cfg.alpha, n=n or cfg.n, rule=cfg.rule,
                         top_k=cfg.top_k, kappa_min=cfg.kappa_min, kappa_max=cfg.kappa_max,
                         strategy=cfg.strategy)


def _spectrum(cfg, target):
    report = _report(cfg, target)
    lo, hi = _kappa_range(cfg, report)
    pieces = target.edges if isinstance(target, LeakyGraph) else target
    disc = discretize(pieces, cfg.n, rule=cfg.rule)
    table = eigenvalue_curve(disc, cfg.alpha, np.geomspace(lo, hi, cfg.kappa_points), cfg.top_k)
    return report, table


def run_cconst(cfg):
    rec = _cconst(cfg, build_target(cfg))
    print(f"c = {rec['c']:.12g} at s = ({rec['argmin'][0]:.6g}, {rec['argmin'][1]:.6g})")
    if rec["cusp"] or rec["self_intersection"]:
        print(f"cusp={rec['cusp']} self_intersection={rec['self_intersection']}: effective c = 0")
    if cfg.out:
        if cfg.format == "json":
            _write(_json_text(rec), cfg.out)
        else:
            _write(_csv_text(["c", "effective_c", "s1", "s2"],
                             [[rec["c"], rec["effective_c"], *map(float, rec["argmin"])]]), cfg.out)
    return EXIT_OK


def run_spectrum(cfg):
    report, table = _spectrum(cfg, build_target(cfg))
    states = [st.to_record() for st in report.states]
    if cfg.format == "json":
        _write(_json_text({"alpha": cfg.alpha, "states": states}), cfg.out)
        csv_out = _sibling(cfg.out, ".csv")
    else:
        csv_out = cfg.out
        _write(_json_text({"alpha": cfg.alpha, "states": states}), _sibling(cfg.out, ".json"))
    if csv_out is None:
        return EXIT_OK
    table.to_csv(csv_out)
    return EXIT_OK


def run_bound(cfg):
    report = _report(cfg, build_target(cfg))
    rec = report.to_json()
    validate_report(rec)
    if cfg.format == "json":
        _write(_json_text(rec), cfg.out)
    else:
        rows = [[s["kappa"], s["lambda"], s["residual"], int(s["pass"])] for s in rec["states"]]
        _write(f"# bound={report.bound!r} kind={report.bound_kind} "
               f"ess_threshold={report.ess_threshold!r}\n"
               + _csv_text(["kappa", "lambda", "residual", "pass"], rows), cfg.out)
    return EXIT_OK if report.passed else EXIT_NUMERIC


def run_sweep(cfg):
    sw = cfg.sweep
    param, inner = sw["parameter"], sw["command"]
    values = sweep_values(sw)
    rows = []
    if param == "kappa":
        target = build_target(cfg)
        pieces = target.edges if isinstance(target, LeakyGraph) else target
        disc = discretize(pieces, cfg.n, rule=cfg.rule)
        header = ["kappa", "mu_max"]
        for k in values:
            rows.append([float(k), largest_eigenvalue(assemble_bs_matrix(disc, cfg.alpha, k))[0]])
    else:
        for v in values:
            alpha, n, over = cfg.alpha, cfg.n, {}
            if param == "beta":
                over = {"beta": float(v)}
            elif param == "alpha":
                alpha = float(v)
            else:
                n = int(v)
            target = build_target(cfg, **over)
            if inner == "cconst":
                header = [param, "c", "s1", "s2"]
                rec = _cconst(cfg, target)
                rows.append([float(v), rec["effective_c"], *map(float, rec["argmin"])])
            else:
                rep = _report(cfg, target, alpha=alpha, n=n)
                lam0 = rep.states[0].lam if rep.states else math.nan
                header = [param, "bound", "ground_lambda", "n_states"]
                rows.append([float(v), rep.bound, lam0, len(rep.states)])
    if cfg.format == "json":
        _write(_json_text([dict(zip(header, r)) for r in rows]), cfg.out)
    else:
        _write(_csv_text(header, rows), cfg.out)
    return EXIT_OK


def run_selftest_k0(cfg):
    rows = []
    for kappa, c in K0_CHECK_CASES:
        value = k0_integral_check(kappa, c)
        exact = math.pi / (kappa * c)
        rows.append([kappa, c, value, exact, value - exact])
    if cfg.format == "json":
        keys = ["kappa", "c", "value", "expected", "residual"]
        _write(_json_text([dict(zip(keys, r)) for r in rows]), cfg.out)
    else:
        _write(_csv_text(["kappa", "c", "value", "expected", "residual"], rows), cfg.out)
    worst = max(abs(r[-1]) for r in rows)
    return EXIT_OK if worst <= K0_CHECK_TOL else EXIT_NUMERIC


RUNNERS = {"cconst": run_cconst, "spectrum": run_spectrum, "bound": run_bound,
           "sweep": run_sweep, "selftest-k0": run_selftest_k0}


def run(cfg: RunConfig) -> int:
    """Execute one validated configuration and return the exit status."""
    return RUNNERS[cfg.command](cfg)


# ---------------------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(prog="leakywire",
                                description="Spectral bounds for leaky wires.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    helps = {"cconst": "chord-arc constant of a curve",
             "spectrum": "bound states and the eigenvalue-curve table",
             "bound": "spectral report with lower bounds and verdicts",
             "sweep": "repeat a command over one parameter",
             "selftest-k0": None}
    for name in COMMANDS:
        kw = {"help": helps[name]} if helps[name] else {}
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--config", help="YAML config or t,x,y CSV curve")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--threads", type=int, help="BLAS thread limit")
        sp.add_argument("--verbose", "-v", action="store_true")
    vp = sub.add_parser("validate-report", help="check a report JSON against its schema")
    vp.add_argument("path")
    vp.add_argument("--verbose", "-v", action="store_true")
    return p


def _validate_file(path):
    try:
        validate_report(json.loads(Path(path).read_text()))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # jsonschema.ValidationError
        print(f"invalid report: {getattr(exc, 'message', exc)}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{path}: valid")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "validate-report":
        return _validate_file(args.path)
    try:
        if args.config:
            cfg = load_config(args.config)
        elif args.command == "selftest-k0":
            cfg = config_from_dict({"command": "selftest-k0", "format": "csv"})
        else:
            raise ConfigError("--config is required for this command")
        cfg.command = args.command
        if args.out:
            cfg.out = args.out
        if args.format:
            cfg.format = args.format
        cfg.validate()
        with threadpool_limits(limits=args.threads):
            return run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BoundUndefinedError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except LeakyWireError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
