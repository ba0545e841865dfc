"""``scaleorder`` command-line interface.

Every command writes one JSON document (sorted keys, no NaN) to stdout or to
``--output``; ``simulate --format csv`` and ``grid-dump`` write CSV instead.
A relative ``--output`` path is resolved against ``$SCALEORDER_OUTPUT_DIR``
when that variable is set.

Exit codes
----------
0  every requested check holds
1  some check fails
2  some check is inconclusive (and none fails)
3  a theorem's conclusion was refuted although its hypotheses held
4  usage, parse or domain error
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .baseline import ConditionFunctions
from .errors import DomainError, SpecError, TheoremContradiction
from .falsify import DROPPABLE, THEOREMS, falsify
from .majorization import relation
from .oracle import model_ks_distance, sample_max
from .orders import DEFAULT_TOL, Grid, check_lr, check_rh, check_st, verify_conditions
from .scale_model import (
    OutlierModel,
    ScaleModel,
    TwoBaselineModel,
    max_cdf,
    max_log_cdf,
    max_log_pdf,
    max_log_reverse_hazard,
    max_pdf,
    max_reverse_hazard,
)
from .specs import parse_baseline, parse_grid, parse_outlier, parse_vector
from .theorems import applicable_theorems, condition_grid

__all__ = ["EXIT", "UsageError", "build_parser", "main"]

EXIT = {"holds": 0, "fails": 1, "inconclusive": 2, "contradiction": 3, "usage": 4}
OUTPUT_DIR_ENV = "SCALEORDER_OUTPUT_DIR"
ORDERS = ("st", "rh", "lr")
_CHECKS = {"st": check_st, "rh": check_rh, "lr": check_lr}


class UsageError(Exception):
    """Bad command line or config; maps to exit code 4."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _typed(parse: Callable) -> Callable:
    """Wrap a spec parser so argparse reports its message (with position)."""

    def convert(text: str):
        try:
            return parse(text)
        except (SpecError, DomainError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    convert.__name__ = parse.__name__.replace("parse_", "")
    return convert


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (np.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2**64): {text!r}")
    return value


def _orders(text: str) -> tuple[str, ...]:
    if text.strip() == "all":
        return ORDERS
    out = []
    pos = 0
    for tok in text.split(","):
        name = tok.strip()
        if name not in ORDERS:
            raise argparse.ArgumentTypeError(
                f"unknown order {name!r} (at position {pos} in {text!r}); use st, rh, lr or all"
            )
        if name not in out:
            out.append(name)
        pos += len(tok) + 1
    return tuple(out)


_baseline = _typed(parse_baseline)
_vector = _typed(parse_vector)
_outlier = _typed(parse_outlier)
_grid = _typed(parse_grid)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scaleorder", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")

    def common(p, grid=True):
        p.add_argument("--config", metavar="FILE", help="flat key=value file of defaults")
        p.add_argument("--output", metavar="PATH", help="write the report here")
        if grid:
            p.add_argument("--grid", type=_grid, metavar="TMIN,TMAX,POINTS,log|lin")
            p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)

    p = sub.add_parser("compare", help="certify st/rh/lr orders between two systems")
    common(p)
    p.add_argument("--baseline", type=_baseline, help="baseline F")
    p.add_argument("--baseline2", type=_baseline, help="baseline G of the q outlier-model components")
    p.add_argument("--lambda", dest="lam", type=_vector, help="scales of X")
    p.add_argument("--theta", type=_vector, help="scales of Y")
    p.add_argument("--outlier", type=_outlier, help="X as p=..,lambda1=..,q=..,lambda=..")
    p.add_argument("--outlier-theta", type=_outlier, help="Y in the same format")
    p.add_argument("--order", type=_orders, default=ORDERS, help="st,rh,lr or all")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("verify-conditions", help="check the three baseline shape conditions")
    common(p)
    p.add_argument("--baseline", type=_baseline)
    p.set_defaults(handler=cmd_verify_conditions)

    p = sub.add_parser("majorize", help="majorization relations between two vectors")
    common(p, grid=False)
    p.add_argument("--x", type=_vector)
    p.add_argument("--y", type=_vector)
    p.set_defaults(handler=cmd_majorize)

    p = sub.add_parser("simulate", help="Monte Carlo sample of the parallel-system lifetime")
    common(p, grid=False)
    p.add_argument("--baseline", type=_baseline)
    p.add_argument("--lambda", dest="lam", type=_vector)
    p.add_argument("--n", type=_count, default=10000, help="number of draws")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--streams", type=_count, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("falsify", help="randomized search for theorem counterexamples")
    common(p, grid=False)
    p.add_argument("--theorem", choices=THEOREMS)
    p.add_argument("--trials", type=_count, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--drop", help="hypothesis to drop (explore mode)")
    p.add_argument("--points", type=_count, default=2000)
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    p.set_defaults(handler=cmd_falsify)

    p = sub.add_parser("grid-dump", help="CSV of baseline or system functions on a grid")
    common(p)
    p.add_argument("--baseline", type=_baseline)
    p.add_argument("--lambda", dest="lam", type=_vector, help="dump the system max instead")
    p.set_defaults(handler=cmd_grid_dump)
    return parser


# -- config handling ---------------------------------------------------------


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    out = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        out[key.strip().lstrip("-").replace("_", "-")] = value.strip()
    return out


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)  # pragma: no cover


def _apply_config(sub: argparse.ArgumentParser, config: dict[str, str], path: str) -> None:
    by_flag = {
        opt.lstrip("-"): action
        for action in sub._actions
        for opt in action.option_strings
        if opt.startswith("--")
    }
    defaults = {}
    for key, text in config.items():
        action = by_flag.get(key)
        if action is None or key in ("config", "help"):
            raise UsageError(f"{path}: unknown key {key!r} for {sub.prog}")
        try:
            value = action.type(text) if action.type else text
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{path}: {key}: {exc}") from None
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"{path}: {key}: invalid choice {value!r}")
        defaults[action.dest] = value
    sub.set_defaults(**defaults)


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("scaleorder: a command is required (see --help)")
    if args.config:
        sub = _subparser(parser, args.command)
        _apply_config(sub, read_config(args.config), args.config)
        args = parser.parse_args(argv)
    return args


def _require(args, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--" + {"lam": "lambda"}.get(name, name).replace("_", "-")
            raise UsageError(f"scaleorder {args.command}: {flag} is required")


# -- output ------------------------------------------------------------------


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, output: str | None, stdout) -> None:
    if output is None:
        stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _combine(outcomes) -> str:
    outcomes = list(outcomes)
    if "fails" in outcomes:
        return "fails"
    if "inconclusive" in outcomes:
        return "inconclusive"
    return "holds"


# -- commands ----------------------------------------------------------------


def _models(args):
    """Build ``(X, Y)`` from either vector or outlier flags."""
    _require(args, "baseline")
    vectors = args.lam is not None or args.theta is not None
    outliers = args.outlier is not None or args.outlier_theta is not None
    if vectors and outliers:
        raise UsageError("scaleorder compare: use --lambda/--theta or --outlier/--outlier-theta, not both")
    if outliers:
        _require(args, "outlier", "outlier_theta")
        (p, l1, q, lam), (p2, l1s, q2, lam2) = args.outlier, args.outlier_theta
        if (p, q) != (p2, q2):
            raise UsageError("scaleorder compare: --outlier and --outlier-theta need the same p and q")
        if args.baseline2 is not None:
            return (
                TwoBaselineModel(args.baseline, args.baseline2, p, l1, q, lam).expand(),
                TwoBaselineModel(args.baseline, args.baseline2, p, l1s, q, lam2).expand(),
            )
        return (
            OutlierModel(args.baseline, p, l1, q, lam).expand(),
            OutlierModel(args.baseline, p, l1s, q, lam2).expand(),
        )
    _require(args, "lam", "theta")
    if args.baseline2 is not None:
        raise UsageError("scaleorder compare: --baseline2 requires --outlier/--outlier-theta")
    if len(args.lam) != len(args.theta):
        raise UsageError(
            f"scaleorder compare: --lambda has {len(args.lam)} entries but --theta has "
            f"{len(args.theta)}"
        )
    return ScaleModel.single(args.baseline, args.lam), ScaleModel.single(args.baseline, args.theta)


def _model_dict(model: ScaleModel) -> dict:
    return {
        "components": [{"baseline": b.spec(), "lambda": v} for b, v in model.components],
        "n": model.n,
    }


def cmd_compare(args) -> tuple[dict, int]:
    x, y = _models(args)
    grid = args.grid or Grid.for_models(x, y)
    cgrid = condition_grid(x, y, grid)
    baselines = sorted(set(x.baselines) | set(y.baselines), key=lambda b: b.spec())
    reports = {b: verify_conditions(b, cgrid, args.tol) for b in baselines}
    verdicts = {order: _CHECKS[order](x, y, grid, args.tol) for order in args.order}
    report = {
        "command": "compare",
        "x": _model_dict(x),
        "y": _model_dict(y),
        "grid": grid.to_dict(),
        "tolerance": args.tol,
        "majorization": relation(x.lambdas, y.lambdas).to_dict(),
        "conditions": {b.spec(): r.to_dict() for b, r in reports.items()},
        "orders": {k: v.to_dict() for k, v in verdicts.items()},
    }
    try:
        conclusions = applicable_theorems(x, y, reports, grid, args.tol)
    except TheoremContradiction as exc:
        report["theorems"] = [exc.conclusion.to_dict()]
        report["outcome"] = "contradiction"
        report["error"] = str(exc)
        return report, EXIT["contradiction"]
    report["theorems"] = [c.to_dict() for c in conclusions]
    outcome = _combine(v.outcome for v in verdicts.values())
    report["outcome"] = outcome
    return report, EXIT[outcome]


def cmd_verify_conditions(args) -> tuple[dict, int]:
    _require(args, "baseline")
    grid = args.grid or Grid(1e-3, 50.0)
    cr = verify_conditions(args.baseline, grid, args.tol)
    outcome = _combine(
        v.outcome for v in (cr.psi_decreasing, cr.chi_increasing, cr.eta_increasing)
    )
    return {"command": "verify-conditions", "report": cr.to_dict(), "outcome": outcome}, EXIT[outcome]


def cmd_majorize(args) -> tuple[dict, int]:
    _require(args, "x", "y")
    if len(args.x) != len(args.y):
        raise UsageError(
            f"scaleorder majorize: --x has {len(args.x)} entries but --y has {len(args.y)}"
        )
    rel = relation(args.x, args.y)
    return {"command": "majorize", "x": list(args.x), "y": list(args.y), **rel.to_dict()}, 0


def cmd_simulate(args) -> tuple[dict | str, int]:
    _require(args, "baseline", "lam")
    model = ScaleModel.single(args.baseline, args.lam)
    batch = sample_max(model, args.n, args.seed, args.streams)
    if args.format == "csv":
        return batch.to_csv(), 0
    return {
        "command": "simulate",
        "model": batch.model,
        "seed": batch.seed,
        "streams": batch.streams,
        "summary": batch.summary(),
        "sup_distance": model_ks_distance(batch, model),
    }, 0


def cmd_falsify(args) -> tuple[dict, int]:
    _require(args, "theorem")
    if args.drop is not None and args.drop not in DROPPABLE[args.theorem]:
        allowed = ", ".join(DROPPABLE[args.theorem]) or "none"
        raise UsageError(f"scaleorder falsify: cannot drop {args.drop!r}; droppable: {allowed}")
    rep = falsify(args.theorem, args.trials, args.seed, drop=args.drop, points=args.points, tol=args.tol)
    code = EXIT["contradiction"] if rep.found else 0
    return {"command": "falsify", **rep.to_dict()}, code


def _csv(columns: dict[str, np.ndarray]) -> str:
    names = list(columns)
    rows = [",".join(names)]
    for row in zip(*columns.values()):
        rows.append(",".join(repr(float(v)) for v in row))
    return "\n".join(rows) + "\n"


def cmd_grid_dump(args) -> tuple[str, int]:
    _require(args, "baseline")
    b = args.baseline
    if args.lam is not None:
        model = ScaleModel.single(b, args.lam)
        grid = args.grid or Grid.for_models(model)
        t = grid.nodes
        cols = {
            "t": t,
            "cdf": max_cdf(model, t),
            "pdf": max_pdf(model, t),
            "reverse_hazard": max_reverse_hazard(model, t),
            "log_cdf": max_log_cdf(model, t),
            "log_pdf": max_log_pdf(model, t),
            "log_reverse_hazard": max_log_reverse_hazard(model, t),
        }
    else:
        grid = args.grid or Grid(1e-3, 50.0)
        t = grid.nodes
        psi, eta, chi = ConditionFunctions(b).values(t)
        cols = {
            "t": t,
            "cdf": b.cdf(t),
            "pdf": b.pdf(t),
            "reverse_hazard": b.reverse_hazard(t),
            "psi": psi,
            "eta": eta,
            "chi": chi,
        }
    header = f"# baseline={b.spec()} grid={grid.t_min!r},{grid.t_max!r},{grid.points},{grid.spacing}\n"
    return header + _csv(cols), 0


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        result, code = args.handler(args)
        text = result if isinstance(result, str) else dumps(result)
        _emit(text, args.output, stdout)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT["usage"]
    except (SpecError, DomainError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT["usage"]
    except OSError as exc:
        stderr.write(f"error: cannot write output: {exc}\n")
        return EXIT["usage"]
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
