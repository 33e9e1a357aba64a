"""Command-line front end.

Every run echoes its fully resolved configuration (defaults filled in,
seed included) in the report header, so any randomized command can be
reproduced exactly from its own output.  Exit codes: 0 on success, 1 on
a verification invariant failure, 2 on input/schema errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys

import numpy as np

from . import __version__
from .applications import demo_states, monogamy_check, sepp_feasible
from .cost import one_shot_cost_pure, smoothed_cost_pure_upper
from .majorization import nielsen_convertible
from .measures import get_measure, registered_ids
from .roof import OptimizerConfig, convex_roof, extension_measure
from .states import (
    DensityMatrix,
    PureState,
    StateValidationError,
    TripartiteState,
    random_density,
    random_pure,
    random_tripartite,
)
from .stateio import StateFileError, load_state, save_state
from .verify import run_all
from .wootters import wootters_concurrence

TABLE_DIGITS = 6
JSON_DIGITS = 12


class CliError(Exception):
    def __init__(self, message, code=2):
        super().__init__(message)
        self.code = code


def _fmt(value, digits):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def _json_ready(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(f"{value:.{JSON_DIGITS}g}")
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    return str(value)


def emit(command, config, rows, fmt, stream=None):
    """Render a report: resolved config header plus result rows."""
    stream = stream or sys.stdout
    if fmt == "json":
        doc = {"command": command, "config": _json_ready(config), "results": _json_ready(rows)}
        json.dump(doc, stream, indent=2)
        stream.write("\n")
        return
    if fmt == "csv":
        for key in sorted(config):
            stream.write(f"# {key} = {_fmt(config[key], JSON_DIGITS)}\n")
        if rows:
            writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _fmt(v, JSON_DIGITS) for k, v in row.items()})
        return
    stream.write(f"== entroof {command} ==\n")
    for key in sorted(config):
        stream.write(f"# {key} = {_fmt(config[key], JSON_DIGITS)}\n")
    if rows:
        keys = list(rows[0].keys())
        cells = [[_fmt(row.get(k, ""), TABLE_DIGITS) for k in keys] for row in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        stream.write("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip() + "\n")
        for c in cells:
            stream.write("  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip() + "\n")


def _optimizer_config(args) -> OptimizerConfig:
    """Resolve optimizer budgets: defaults < config file < CLI flags."""
    values = {"restarts": 10, "max_ensemble_size": None, "max_iterations": 40, "seed": 0}
    if getattr(args, "config", None):
        parser = configparser.ConfigParser()
        read = parser.read(args.config)
        if not read:
            raise CliError(f"config file not found: {args.config}")
        if parser.has_section("optimizer"):
            section = parser["optimizer"]
            for key in ("restarts", "max_ensemble_size", "max_iterations", "seed"):
                if key in section:
                    values[key] = section.getint(key)
    for key in ("restarts", "max_ensemble_size", "max_iterations", "seed"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return OptimizerConfig(
        restarts=values["restarts"],
        max_ensemble_size=values["max_ensemble_size"],
        max_iterations=values["max_iterations"],
        seed=values["seed"],
    )


def _load(path):
    try:
        return load_state(path)
    except StateFileError as exc:
        raise CliError(str(exc)) from exc


def _require_bipartite(state, path):
    if isinstance(state, TripartiteState):
        raise CliError(f"{path}: expected a bipartite state, got tripartite dims {state.dims}")
    return state


def cmd_measure(args):
    state = _require_bipartite(_load(args.state), args.state)
    try:
        measure = get_measure(args.measure)
    except KeyError as exc:
        raise CliError(str(exc)) from exc
    config = {"command": "measure", "state": args.state, "measure": args.measure}
    if isinstance(state, PureState):
        value = measure.evaluate(state.schmidt_vector())
        kind = "pure"
    else:
        if state.purity() > 1.0 - 1e-10:
            value = measure.evaluate(state.as_pure().schmidt_vector())
            kind = "pure (rank-1 matrix)"
        elif args.measure == "concurrence" and (state.dim_a, state.dim_b) == (2, 2):
            value = wootters_concurrence(state)
            kind = "mixed (closed form)"
        else:
            raise CliError(
                f"measure {args.measure!r} on a mixed state has no closed form here; "
                "use 'extend' or 'roof'"
            )
    return config, [{"measure": args.measure, "value": value, "input": kind}]


def cmd_extend(args, kind="extension"):
    state = _require_bipartite(_load(args.state), args.state)
    if isinstance(state, PureState):
        state = state.density()
    try:
        measure = get_measure(args.measure)
    except KeyError as exc:
        raise CliError(str(exc)) from exc
    cfg = _optimizer_config(args)
    runner = extension_measure if kind == "extension" else convex_roof
    res = runner(state, measure, cfg)
    config = {
        "command": "extend" if kind == "extension" else "roof",
        "state": args.state,
        "measure": args.measure,
        "restarts": cfg.restarts,
        "max_ensemble_size": cfg.max_ensemble_size if cfg.max_ensemble_size is not None else state.rank() ** 2,
        "max_iterations": cfg.max_iterations,
        "seed": cfg.seed,
    }
    rows = [
        {
            "value": res.value,
            "converged": res.converged,
            "evaluations": res.evaluations,
            "ensemble_size": len(res.best_ensemble),
            "best_size": res.best_size,
            "best_restart": res.best_restart,
        }
    ]
    return config, rows


def cmd_roof(args):
    return cmd_extend(args, kind="roof")


def cmd_convert_check(args):
    src = _require_bipartite(_load(args.source), args.source)
    dst = _require_bipartite(_load(args.target), args.target)
    if isinstance(src, DensityMatrix):
        src = src.as_pure()
    if isinstance(dst, DensityMatrix):
        dst = dst.as_pure()
    ok = nielsen_convertible(src, dst)
    config = {"command": "convert-check", "source": args.source, "target": args.target}
    rows = [
        {
            "convertible": ok,
            "source_schmidt": np.array2string(src.schmidt_vector(), precision=6),
            "target_schmidt": np.array2string(dst.schmidt_vector(), precision=6),
        }
    ]
    return config, rows


def cmd_cost(args):
    state = _require_bipartite(_load(args.state), args.state)
    if isinstance(state, DensityMatrix):
        state = state.as_pure()
    res = one_shot_cost_pure(state)
    config = {
        "command": "cost",
        "state": args.state,
        "eps": args.eps,
        "grid": args.grid,
        "seed": args.seed if args.seed is not None else 0,
    }
    row = {"r_min": res.r_min, "log_cost": res.log_cost}
    if args.eps is not None:
        row["smoothed_upper"] = smoothed_cost_pure_upper(
            state, args.eps, grid=args.grid, seed=config["seed"]
        )
    return config, [row]


def cmd_example_sepp(args):
    source, p1, p2, mixture = demo_states()
    report = sepp_feasible(3, mixture, grid=args.grid)
    config = {"command": "example-sepp", "grid": args.grid}
    rows = [
        {"quantity": "robustness source (rank-3 max entangled)", "value": 2.0},
        {
            "quantity": "robustness member 1",
            "value": get_measure("robustness").evaluate(p1.schmidt_vector()),
        },
        {
            "quantity": "robustness member 2",
            "value": get_measure("robustness").evaluate(p2.schmidt_vector()),
        },
        {"quantity": "mixture robustness upper bound", "value": report.r_target_upper},
        {"quantity": "sepp feasible", "value": report.sepp_feasible},
        {"quantity": "schmidt number source", "value": report.schmidt_source},
        {"quantity": "schmidt number target", "value": report.schmidt_target},
        {"quantity": "span-search margin (4th singular value)", "value": report.margin},
    ]
    return config, rows


def cmd_monogamy(args):
    state = _load(args.state)
    if not isinstance(state, TripartiteState):
        raise CliError(f"{args.state}: monogamy check needs a tripartite pure state")
    verdict = monogamy_check(state, tol_eq=args.tol_eq, tol_zero=args.tol_zero)
    config = {
        "command": "monogamy",
        "state": args.state,
        "tol_eq": args.tol_eq,
        "tol_zero": args.tol_zero,
    }
    rows = [
        {
            "c_a_bc": verdict.c_a_bc,
            "c_ab": verdict.c_ab,
            "c_ac": verdict.c_ac,
            "equality_holds": verdict.equality_holds,
            "verdict": verdict.verdict,
            "note": verdict.note,
        }
    ]
    return config, rows


def cmd_verify(args):
    results = run_all(seed=args.seed if args.seed is not None else 0, quick=args.quick)
    config = {
        "command": "verify",
        "seed": args.seed if args.seed is not None else 0,
        "quick": args.quick,
    }
    rows = [
        {"check": r.name, "status": "PASS" if r.passed else "FAIL", "slack": r.slack, "detail": r.detail}
        for r in results
    ]
    failed = [r for r in results if not r.passed]
    return config, rows, (1 if failed else 0)


def cmd_random(args):
    dims = args.dims
    if len(dims) not in (2, 3) or any(d < 1 for d in dims):
        raise CliError("--dims takes 2 or 3 positive integers")
    seed = args.seed if args.seed is not None else 0
    if len(dims) == 3:
        if args.rank is not None:
            raise CliError("tripartite random states are pure; do not pass --rank")
        state = random_tripartite(tuple(dims), seed)
    elif args.rank is None:
        state = random_pure(dims[0], dims[1], seed)
    else:
        try:
            state = random_density(dims[0], dims[1], args.rank, seed)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    config = {
        "command": "random",
        "dims": list(dims),
        "rank": args.rank,
        "seed": seed,
        "out": args.out,
    }
    if args.out:
        save_state(args.out, state, comment=f"seeded random state (seed {seed})")
        rows = [{"written": args.out}]
    else:
        from .stateio import state_to_dict

        rows = [{"state": json.dumps(state_to_dict(state))}]
    return config, rows


def _add_optimizer_flags(sub):
    sub.add_argument("--restarts", type=int, default=None, help="seeded starts at the base ensemble size")
    sub.add_argument("--max-ensemble-size", dest="max_ensemble_size", type=int, default=None)
    sub.add_argument("--max-iterations", dest="max_iterations", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--config", default=None, help="INI file with an [optimizer] section")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entroof",
        description="Entanglement measures for bipartite states: pure-state "
        "measures, pre-image extension and convex-roof estimates, LOCC "
        "convertibility, one-shot cost, and verification suites.",
    )
    parser.add_argument("--version", action="version", version=f"entroof {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("measure", help="evaluate a pure-state measure (or the exact 2x2 concurrence)")
    p.add_argument("--state", required=True)
    p.add_argument("--measure", required=True, help=f"one of {', '.join(registered_ids())} or e_k:<k>")
    p.set_defaults(func=cmd_measure)

    p = subs.add_parser("extend", help="estimate the pre-image extension value")
    p.add_argument("--state", required=True)
    p.add_argument("--measure", required=True)
    _add_optimizer_flags(p)
    p.set_defaults(func=cmd_extend)

    p = subs.add_parser("roof", help="estimate the convex roof")
    p.add_argument("--state", required=True)
    p.add_argument("--measure", required=True)
    _add_optimizer_flags(p)
    p.set_defaults(func=cmd_roof)

    p = subs.add_parser("convert-check", help="deterministic LOCC convertibility of pure states")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_convert_check)

    p = subs.add_parser("cost", help="one-shot entanglement cost of a pure state")
    p.add_argument("--state", required=True)
    p.add_argument("--eps", type=float, default=None, help="also report a smoothed-cost upper bound")
    p.add_argument("--grid", type=int, default=2000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_cost)

    p = subs.add_parser("example-sepp", help="print the bundled SEPP-vs-LOCC demonstration table")
    p.add_argument("--grid", type=int, default=1000)
    p.set_defaults(func=cmd_example_sepp)

    p = subs.add_parser("monogamy", help="monogamy verdict for a (2,2,d) pure state")
    p.add_argument("--state", required=True)
    p.add_argument("--tol-eq", dest="tol_eq", type=float, default=1e-3)
    p.add_argument("--tol-zero", dest="tol_zero", type=float, default=5e-2)
    p.set_defaults(func=cmd_monogamy)

    p = subs.add_parser("verify", help="run the cross-module property suites")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--quick", action="store_true", help="smaller sample sizes")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("random", help="generate a seeded random state file")
    p.add_argument("--dims", type=int, nargs="+", required=True)
    p.add_argument("--rank", type=int, default=None, help="mixed state of this rank (omit for pure)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_random)

    for sub in subs.choices.values():
        sub.add_argument("--format", choices=("table", "csv", "json"), default="table")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (StateFileError, StateValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if len(result) == 3:
        config, rows, code = result
    else:
        config, rows = result
        code = 0
    config.setdefault("format", args.format)
    emit(config["command"], config, rows, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
