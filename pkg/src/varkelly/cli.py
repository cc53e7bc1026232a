"""Command-line interface: solve, curve, simulate, compare, ingest.

stdout carries machine-readable data (JSON, or headerless CSV for
curve); stderr carries one-line diagnostics. Numbers are printed with 12
significant digits so output diffs catch numerical regressions.

Exit codes: 0 success (including a no-bet recommendation), 2 invalid
input, 3 solver non-convergence, 4 game not favorable, 5 degenerate
trade data.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import ingest, kelly, montecarlo
from .distributions import from_spec
from .errors import (
    DegenerateSampleError,
    EmptyFileError,
    InfiniteMeanError,
    NonConvergenceError,
    NotFavorableError,
    TradeParseError,
)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NO_CONVERGENCE = 3
EXIT_NOT_FAVORABLE = 4
EXIT_DEGENERATE_DATA = 5

SIGNIFICANT_DIGITS = 12


def _fmt(x: float) -> str:
    return f"{x:.{SIGNIFICANT_DIGITS}g}"


def _round_floats(obj):
    """Round every float in a JSON-ready structure to 12 significant digits.

    Non-finite values (overflowed bankrolls) become strings so the
    output stays standard JSON.
    """
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {key: _round_floats(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(value) for value in obj]
    return obj


def _to_json(payload: dict) -> str:
    return json.dumps(_round_floats(payload), indent=2) + "\n"


def _load_dist(args):
    if args.dist is not None:
        spec = json.loads(args.dist)
    else:
        with open(args.dist_file, encoding="utf-8") as handle:
            spec = json.load(handle)
    dist = from_spec(spec)
    report = dist.validate()
    if not report.ok:
        raise ValueError("invalid distribution: " + "; ".join(report.violations))
    return dist


def _game(args) -> kelly.GameSpec:
    return kelly.GameSpec(p=args.p, dist=_load_dist(args))


def _run_solve(args) -> str:
    game = _game(args)
    solution = kelly.solve_kelly(game, tol=args.tol)
    return _to_json(
        {
            "status": solution.status,
            "f_hat": solution.f_hat,
            "growth": solution.growth,
            "residual": solution.residual,
            "f_star_mean": solution.f_star_mean,
            "jensen_gap": solution.jensen_gap,
            "edge": kelly.edge(game).edge,
        }
    )


def _run_curve(args) -> str:
    if args.m < 2:
        raise ValueError(f"curve needs m >= 2 grid steps, got {args.m}")
    curve = kelly.growth_curve(_game(args), args.m)
    rows = [f"{_fmt(f)},{_fmt(g)}" for f, g in zip(curve.fractions, curve.growth_rates)]
    return "\n".join(rows) + "\n"


def _run_simulate(args) -> str:
    cfg = montecarlo.SimConfig(
        n_rounds=args.n_rounds, n_paths=args.n_paths, f=args.f, seed=args.seed, x0=args.x0
    )
    result = montecarlo.simulate(_game(args), cfg)
    return _to_json(
        {
            "f": cfg.f,
            "n_rounds": cfg.n_rounds,
            "n_paths": cfg.n_paths,
            "seed": cfg.seed,
            "x0": cfg.x0,
            "mean_growth": result.mean_growth,
            "std_growth": result.std_growth,
            "min_final": result.min_final,
            "max_final": result.max_final,
            "growth_rates": [float(g) for g in result.growth_rates],
        }
    )


def _run_compare(args) -> str:
    comparison = kelly.jensen_compare(_game(args))
    return _to_json(
        {"f_hat": comparison.f_hat, "f_star": comparison.f_star, "gap": comparison.gap}
    )


def _run_ingest(args) -> str:
    records = ingest.load_trades(args.csv)
    summary = ingest.build_empirical(records, bins=args.bins)
    return _to_json(
        {
            "p_hat": summary.p_hat,
            "dist_spec": summary.dist.to_spec(),
            "n_wins": summary.n_wins,
            "n_losses": summary.n_losses,
        }
    )


def _add_dist_flags(sub):
    sub.add_argument("--p", type=float, required=True, help="win probability in (0, 1)")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--dist", help="distribution spec as inline JSON")
    source.add_argument("--dist-file", help="path to a JSON distribution spec")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varkelly",
        description="Growth-optimal bet sizing for games with a random win payoff.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="optimal betting fraction for a game")
    _add_dist_flags(solve)
    solve.add_argument("--tol", type=float, default=kelly.DEFAULT_TOL, help="bisection tolerance")
    solve.set_defaults(handler=_run_solve)

    curve = sub.add_parser(
        "curve", parents=[common], help="growth rate sampled on a fraction grid (CSV)"
    )
    _add_dist_flags(curve)
    curve.add_argument("--m", type=int, required=True, help="grid steps (rows = m + 1)")
    curve.set_defaults(handler=_run_curve)

    simulate = sub.add_parser(
        "simulate", parents=[common], help="Monte Carlo playout at a fixed fraction"
    )
    _add_dist_flags(simulate)
    simulate.add_argument("--f", type=float, required=True, help="betting fraction in [0, 1)")
    simulate.add_argument("--n-rounds", type=int, required=True, help="rounds per path")
    simulate.add_argument("--n-paths", type=int, required=True, help="independent paths")
    simulate.add_argument("--seed", type=int, default=0, help="random seed")
    simulate.add_argument("--x0", type=float, default=1.0, help="initial bankroll")
    simulate.set_defaults(handler=_run_simulate)

    compare = sub.add_parser(
        "compare", parents=[common], help="optimal fraction vs. the fixed-payoff fraction at the mean"
    )
    _add_dist_flags(compare)
    compare.set_defaults(handler=_run_compare)

    ingest_cmd = sub.add_parser(
        "ingest", parents=[common], help="estimate a game from a trade-log CSV"
    )
    ingest_cmd.add_argument("csv", help="CSV of outcome,payoff rows")
    ingest_cmd.add_argument("--bins", type=int, default=None, help="bin payoffs into a histogram")
    ingest_cmd.set_defaults(handler=_run_ingest)
    return parser


def _diagnose(exc: Exception, code: int) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own diagnostics
        return int(exc.code or 0)
    try:
        output = args.handler(args)
    except NonConvergenceError as exc:
        return _diagnose(exc, EXIT_NO_CONVERGENCE)
    except NotFavorableError as exc:
        return _diagnose(exc, EXIT_NOT_FAVORABLE)
    except DegenerateSampleError as exc:
        return _diagnose(exc, EXIT_DEGENERATE_DATA)
    except (
        ValueError,
        TypeError,
        KeyError,
        OSError,
        json.JSONDecodeError,
        TradeParseError,
        EmptyFileError,
        InfiniteMeanError,
    ) as exc:
        return _diagnose(exc, EXIT_INVALID_INPUT)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(output)
    else:
        sys.stdout.write(output)
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
