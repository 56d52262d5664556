"""Command-line front end.

Exit codes: 0 success, 1 computed but failed (certificate, inequality or
comparison), 2 usage error, 3 numerically inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

from . import io as rio
from .beliefs import GameParameter
from .errors import (DomainError, InconclusiveError, NoContractionError, RepgameError,
                     UnsupportedModeError)
from .precision import ENV_VAR, Precision, to_float

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

P1_CHOICES = ("sigma_star", "uniform", "greedy", "perturbed")
P2_CHOICES = ("always_L", "always_R", "uniform", "tau_star", "x_automaton", "counter")


class UsageError(Exception):
    pass


def _emit(args, payload: Any, rows: Optional[List[Dict[str, Any]]] = None, columns=None) -> None:
    if args.output == "csv":
        text = rio.csv_text(rows if rows is not None else [payload], columns)
    else:
        text = rio.dumps(payload) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _param(args) -> GameParameter:
    try:
        return GameParameter.make(args.p, args.precision)
    except (DomainError, UnsupportedModeError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_value(args) -> int:
    from .sigma_star import value_ladder, value_matrix

    P = _param(args)
    out: Dict[str, Any] = {"p": P.precision.format(P.p), "precision": str(P.precision), "method": args.method}
    lv = None
    if args.method in ("ladder", "both"):
        lv = value_ladder(P, tol=args.tol)
        out.update(v=lv.v, inverse=lv.inverse, terms=lv.terms, tail_bound=lv.tail_bound,
                   v_text=P.precision.format(lv.v))
    if args.method in ("matrix", "both"):
        n = lv.terms if lv is not None else value_ladder(P, tol=args.tol).terms
        inv = value_matrix(P, n)
        out.update(matrix_inverse=inv, matrix_v=1 / inv, matrix_terms=n)
        if lv is None:
            out.update(v=1 / inv, inverse=inv, terms=n, v_text=P.precision.format(1 / inv))
    if args.method == "both":
        out["discrepancy"] = abs(to_float(out["matrix_inverse"] - lv.inverse))
    _emit(args, out)
    return EXIT_OK


def _sweep_row(p: float) -> Dict[str, Any]:
    from .sigma_star import value_ladder

    return {
        "p": p,
        "v_sigma_star": to_float(value_ladder(p).v),
        "upper_bound_p_over_4p_minus_1": p / (4 * p - 1),
        "lower_bound_quarter": 0.25,
    }


def sweep_grid(p_min: float, p_max: float, step: float) -> List[float]:
    if step <= 0:
        raise UsageError("--step must be positive")
    if p_max < p_min:
        raise UsageError("--p-max must not be below --p-min")
    n = int((p_max - p_min) / step + 1e-9) + 1
    return [round(p_min + i * step, 12) for i in range(n)]


def cmd_sweep(args) -> int:
    grid = sweep_grid(args.p_min, args.p_max, args.step)
    for p in grid:
        if not (0.5 <= p < 1):
            raise UsageError(f"p={p} outside [1/2, 1)")
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_row, grid))   # map keeps input order
    else:
        rows = [_sweep_row(p) for p in grid]
    if args.output == "json":
        _emit(args, {"rows": rows})
    else:
        _emit(args, None, rows, ["p", "v_sigma_star", "upper_bound_p_over_4p_minus_1", "lower_bound_quarter"])
    return EXIT_OK


def cmd_respond(args) -> int:
    from .response import solve_response

    P = _param(args)
    try:
        sol = solve_response(P, tol=args.tol, grid=args.grid, depth=args.depth)
    except NoContractionError as exc:
        _emit(args, {"p": to_float(P.p), "error": str(exc), "passed": False})
        return EXIT_FAILED
    _emit(args, sol.to_dict())
    return EXIT_OK if sol.inequality_report.passed else EXIT_FAILED


def cmd_certify(args) -> int:
    from . import pressure as pr

    if args.auto or (args.p is None):
        if args.p_min is None or args.p_max is None:
            raise UsageError("range certification needs --p-min and --p-max (or --p)")
        if args.scheme == "nine_b":
            cert = pr.certify_nine_interval_b(args.p_min, args.p_max, samples=args.samples)
            _emit(args, cert.to_dict())
            return EXIT_OK if cert.passed else EXIT_FAILED
        cov = pr.certify_range(args.p_min, args.p_max, samples=args.samples, auto_depth=args.depth)
        _emit(args, cov.to_dict())
        if not cov.covered:
            sys.stderr.write("uncovered: " + ", ".join(f"[{a:.12g}, {b:.12g}]" for a, b in cov.gaps) + "\n")
            return EXIT_FAILED
        return EXIT_OK
    P = _param(args)
    fn = {
        "three": pr.certify_three_interval,
        "nine_a": pr.certify_nine_interval_a,
        "auto": lambda P: pr.certify_auto(P, args.depth, precision=args.precision or "bigfloat:256"),
        "nine_b": lambda P: pr.certify_nine_interval_b(to_float(P.p), to_float(P.p), samples=1),
    }[args.scheme]
    try:
        cert = fn(P)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, cert.to_dict())
    return EXIT_OK if cert.passed else EXIT_FAILED


def cmd_perturb(args) -> int:
    from .perturbation import PerturbationConfig, lemma_margin, margin_curve

    if args.eps is None and not args.eps_grid:
        raise UsageError("perturb needs --eps or --eps-grid")
    P = _param(args)
    if args.eps_grid:
        try:
            eps = [float(e) for e in args.eps_grid.split(",")]
        except ValueError as exc:
            raise UsageError(f"bad --eps-grid: {exc}") from exc
        curve = margin_curve(P, args.k0, eps, args.terms)
        rows = [{"epsilon": e, "margin": m} for e, m in curve]
        if args.output == "csv":
            _emit(args, None, rows, ["epsilon", "margin"])
        else:
            _emit(args, {"p": to_float(P.p), "k0": args.k0, "curve": rows})
        return EXIT_OK
    try:
        cfg = PerturbationConfig(args.k0, args.eps, args.terms)
        rep = lemma_margin(P, cfg, strict=False)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, rep.to_dict())
    if rep.verdict == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK if rep.verdict in ("better", "equal") else EXIT_FAILED


def _build_p1(name: str, args, P):
    from . import simulator as sim

    if name == "sigma_star":
        return sim.build_sigma_star(P, args.depth)
    if name == "uniform":
        return sim.build_uniform_p1()
    if name == "greedy":
        return sim.build_greedy()
    if args.k0 is None or args.eps is None:
        raise UsageError("--p1 perturbed needs --k0 and --eps")
    return sim.build_perturbed(P, args.k0, args.eps, max(args.depth, args.k0 + 1))


def _build_p2(name: str, args, P):
    from . import simulator as sim
    from .response import solve_response

    if name == "always_L":
        return sim.build_constant_p2(1.0)
    if name == "always_R":
        return sim.build_constant_p2(0.0)
    if name == "uniform":
        return sim.build_constant_p2(0.5)
    if name == "tau_star":
        return sim.build_tau_star(P)
    if name == "counter":
        return sim.build_counter()
    return sim.build_x_automaton(P, solve_response(P), args.depth)


def cmd_simulate(args) -> int:
    from . import simulator as sim

    pf = float(args.p)
    if not (0.5 <= pf <= 1):
        raise UsageError("--p must lie in [1/2, 1]")
    needs_P = args.p1 in ("sigma_star", "perturbed") or args.p2 in ("tau_star", "x_automaton") or (
        args.against in ("tau_star", "x_automaton"))
    P = _param(args) if needs_P else pf
    s1 = _build_p1(args.p1, args, P)
    s2 = _build_p2(args.p2, args, P)
    if args.against:
        rep = sim.payoff_independence_test(pf, s1, (s2, _build_p2(args.against, args, P)),
                                           args.rounds, args.seed, args.replicates)
        if args.output == "csv":
            _emit(args, None, [t.to_row() for t in rep.traces])
        else:
            _emit(args, rep.to_dict())
        return EXIT_OK
    tr = sim.play(pf, s1, s2, args.rounds, args.seed, args.replicates, args.workers)
    _emit(args, tr.to_row())
    return EXIT_OK


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    # show defaults, except for unset optional values
    def _get_help_string(self, action):
        if action.default is None or action.default is False:
            return action.help
        return super()._get_help_string(action)


def _common(output: str = "json") -> argparse.ArgumentParser:
    # fresh per subcommand: parents share action objects, so defaults would leak
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", default=None,
                        help=f"float64 | bigfloat[:BITS] | rational; unset means ${ENV_VAR}, then float64")
    common.add_argument("--output", choices=("json", "csv"), default=output,
                        help="output format")
    common.add_argument("--out", default=None, help="write to this file instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:

    parser = argparse.ArgumentParser(prog="repgame", description=(
        "Values, strategies and optimality certificates for the two-state repeated game "
        "with a switching hidden state."))
    parser.add_argument("--config", default=None, help="JSON file whose keys mirror the command flags")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = _HelpFormatter

    p = sub.add_parser("value", parents=[_common()], formatter_class=fmt, help="long-run value of the ladder strategy")
    p.add_argument("--p", required=True, help="switching parameter in [1/2, 1)")
    p.add_argument("--tol", type=float, default=1e-12, help="series truncation tolerance")
    p.add_argument("--method", choices=("ladder", "matrix", "both"), default="ladder", help="summation route")
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("sweep", parents=[_common("csv")], formatter_class=fmt, help="value curve and the two bounds over a p grid (CSV)")
    p.add_argument("--p-min", type=float, default=0.5, help="first p")
    p.add_argument("--p-max", type=float, default=0.9, help="last p (inclusive)")
    p.add_argument("--step", type=float, default=0.01, help="grid step")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("respond", parents=[_common()], formatter_class=fmt, help="Player 2's response x(theta) and the inequality report")
    p.add_argument("--p", required=True, help="switching parameter")
    p.add_argument("--tol", type=float, default=1e-13, help="series truncation tolerance")
    p.add_argument("--grid", type=int, default=2000, help="uniform grid points on [1-p, p]")
    p.add_argument("--depth", type=int, default=60, help="orbit points added to the grid")
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("certify", parents=[_common()], formatter_class=fmt, help="pressure certificates")
    p.add_argument("--p", default=None, help="single parameter")
    p.add_argument("--p-min", type=float, default=None, help="range start")
    p.add_argument("--p-max", type=float, default=None, help="range end")
    p.add_argument("--scheme", choices=("three", "nine_a", "nine_b", "auto"), default="auto", help="partition scheme")
    p.add_argument("--auto", action="store_true", help="chain all schemes over [--p-min, --p-max]")
    p.add_argument("--depth", type=int, default=60, help="orbit depth for the generic scheme")
    p.add_argument("--samples", type=int, default=101, help="samples per range check")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("perturb", parents=[_common()], formatter_class=fmt, help="compare the shaded ladder strategy with the ladder")
    p.add_argument("--p", required=True, help="switching parameter")
    p.add_argument("--k0", type=int, required=True, help="rung of the shaded belief")
    p.add_argument("--eps", default=None, help="shading epsilon")
    p.add_argument("--eps-grid", default=None, help="comma-separated epsilons; prints the margin curve")
    p.add_argument("--terms", type=int, default=None, help="w truncation")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("simulate", parents=[_common("csv")], formatter_class=fmt, help="Monte-Carlo play between two strategies")
    p.add_argument("--p", required=True, help="switching parameter")
    p.add_argument("--p1", choices=P1_CHOICES, default="sigma_star", help="Player 1 strategy")
    p.add_argument("--p2", choices=P2_CHOICES, default="always_L", help="Player 2 strategy")
    p.add_argument("--against", choices=P2_CHOICES, default=None,
                   help="second Player 2 strategy: run the payoff-independence test")
    p.add_argument("--rounds", type=int, default=10**6, help="rounds per replicate")
    p.add_argument("--replicates", type=int, default=1, help="independent replicates")
    p.add_argument("--seed", type=int, default=0, help="root seed")
    p.add_argument("--workers", type=int, default=1, help="threads for replicates")
    p.add_argument("--depth", type=int, default=200, help="automaton depth")
    p.add_argument("--k0", type=int, default=None, help="rung for --p1 perturbed")
    p.add_argument("--eps", type=float, default=None, help="shading for --p1 perturbed")
    p.set_defaults(func=cmd_simulate)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config) as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in cfg.items() if k != "command"}
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**defaults)
            for a in sp._actions:
                if a.dest in defaults:
                    a.required = False


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_USAGE if exc.code else EXIT_OK
        if getattr(args, "precision", None):
            Precision.parse(args.precision)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except UnsupportedModeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except InconclusiveError as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except RepgameError as exc:
        sys.stderr.write(f"failed: {exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
