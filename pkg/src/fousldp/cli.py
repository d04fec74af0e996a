"""Command-line interface.

Subcommands cover every analytic and Monte Carlo operation:

* ``rate``: rate-function tables over a grid of levels;
* ``tail``: sharp tail approximations, branch-tagged;
* ``saddle``: time-varying saddlepoint diagnostics;
* ``simulate``: path simulation with optional per-path CSV dumps;
* ``mc``: Monte Carlo tail comparisons;
* ``clt``: central-limit validation;
* ``oracle``: Legendre, Gamma-contour and Bessel cross-checks.

All numeric output is CSV with a header row, full-precision scientific
notation and a locale-independent decimal point, so identical invocations
produce byte-identical files. A JSON config file may supply any long-form
option; explicit command-line flags win over config values.

Exit codes: 0 success, 2 invalid parameter values, 3 numerical failure,
64 usage errors (unknown subcommand or flag).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import energy, mle, special, validate
from .model import DomainError, ModelParams
from .sim import RngSpec, make_grid, simulate_martingale_batch, simulate_martingale_path

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; the contract here is 64
    def error(self, message):
        raise _UsageError(message)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17e}"
    if x is None:
        return ""
    return str(x)


def _emit(rows: list[dict], out: Optional[str]) -> None:
    if not rows:
        return
    header = list(rows[0].keys())
    lines = [",".join(header)]
    lines += [",".join(_fmt(r[k]) for k in header) for r in rows]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> ModelParams:
    return ModelParams(theta=args.theta, hurst=args.hurst)


def _c_list(args) -> list[float]:
    if args.c is None:
        raise _UsageError("at least one --c value is required")
    return list(args.c)


def _cmd_rate(args) -> int:
    params = _params(args)
    rows = []
    for c in _c_list(args):
        if args.target == "energy":
            rate = energy.rate_energy(params, c)
            branch = energy.classify_branch(params, c, args.T).name if c > 0 else "INFINITE"
        else:
            rate = mle.rate_mle(params, c)
            branch = mle.classify_mle(params, c, args.T).name
        rows.append({"target": args.target, "c": c, "rate": rate, "branch": branch})
    _emit(rows, args.out)
    return EXIT_OK


def _cmd_tail(args) -> int:
    params = _params(args)
    rows = []
    for c in _c_list(args):
        if args.target == "energy":
            approx = energy.tail_energy(params, c, args.T, with_order1=args.order1)
        else:
            approx = mle.tail_mle(params, c, args.T)
        rows.append(
            {
                "target": args.target,
                "c": c,
                "T": args.T,
                "branch": approx.branch.name,
                "lower_tail": approx.lower_tail,
                "rate": approx.rate,
                "log_prefactor": approx.log_prefactor,
                "t_power": approx.t_power,
                "order1": approx.order1,
                "value": approx.value(args.T),
            }
        )
    _emit(rows, args.out)
    return EXIT_OK


def _cmd_saddle(args) -> int:
    params = _params(args)
    rows = []
    for c in _c_list(args):
        sol = energy.saddle_solve(params, c, args.T)
        rows.append(
            {
                "c": c,
                "T": args.T,
                "a_T": sol.a_T,
                "phi_T": sol.phi_T,
                "scale": sol.scale,
                "a0": sol.a_coeffs[0],
                "a1": sol.a_coeffs[1],
                "a2": sol.a_coeffs[2],
                "phi0": sol.phi_coeffs[0],
                "phi1": sol.phi_coeffs[1],
                "phi2": sol.phi_coeffs[2],
                "expansion": sol.a_expansion(args.T),
            }
        )
    _emit(rows, args.out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    params = _params(args)
    grid = make_grid(args.T, args.grid_n)
    if args.dump_paths:
        rows = []
        for rep in range(args.replicates):
            path = simulate_martingale_path(params, grid, RngSpec(args.seed, rep))
            dump = [
                {"t": t, "M": m, "Y": y, "Q": q, "S": s}
                for t, m, y, q, s in zip(path.grid.nodes, path.M, path.Y, path.Q, path.S)
            ]
            _emit(dump, f"{args.out or 'path'}_{rep}.csv")
            rows.append(
                {"replicate": rep, "S_T": path.s_terminal, "theta_hat": path.theta_hat}
            )
        _emit(rows, args.out)
        return EXIT_OK
    res = simulate_martingale_batch(params, grid, args.seed, args.replicates)
    rows = [
        {"replicate": i, "S_T": float(s), "theta_hat": float(th)}
        for i, (s, th) in enumerate(zip(res.s_terminal, res.theta_hat))
    ]
    _emit(rows, args.out)
    return EXIT_OK


def _cmd_mc(args) -> int:
    params = _params(args)
    rows = []
    for c in _c_list(args):
        rep = validate.mc_tail(
            params,
            args.target,
            c,
            args.T,
            args.replicates,
            args.seed,
            grid_n=args.grid_n,
            with_order1=args.order1,
        )
        rows.append(
            {
                "label": rep.label,
                "estimate": rep.estimate,
                "std_error": rep.std_error,
                "replicates": rep.replicates,
                "closed_form": rep.closed_form,
                "z_score": rep.z_score,
                "underpowered": rep.underpowered,
                "seed": rep.seed,
            }
        )
    _emit(rows, args.out)
    return EXIT_OK


def _cmd_clt(args) -> int:
    params = _params(args)
    e_rep, m_rep = validate.clt_test(
        params, args.T, args.replicates, args.seed, grid_n=args.grid_n
    )
    rows = [
        {
            "label": r.label,
            "ks_statistic": r.statistic,
            "n": r.n,
            "crit_1pct": r.crit_1pct,
            "crit_5pct": r.crit_5pct,
            "below_1pct": r.below_1pct,
        }
        for r in (e_rep, m_rep)
    ]
    _emit(rows, args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    params = None
    rows = []
    if args.kind == "legendre":
        params = _params(args)
        for c in _c_list(args):
            r = validate.legendre_oracle(params, args.target, c)
            rows.append(
                {
                    "label": r.label,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "abs_err": r.abs_err,
                    "rel_err": r.rel_err,
                    "note": r.note,
                }
            )
    elif args.kind == "gamma-contour":
        r = validate.gamma_contour_oracle(
            args.shape, args.nu, args.gamma_freq, args.sigma2, args.T, args.ell, args.p
        )
        rows.append(
            {
                "label": r.label,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "abs_err": r.abs_err,
                "rel_err": r.rel_err,
                "note": r.note,
            }
        )
    else:  # bessel
        import mpmath as mp

        for z in np.geomspace(0.01, 500.0, 40):
            for nu in (0.25, -0.75, 0.6, -0.4):
                mine = special.bessel_i(nu, float(z))
                ref = float(mp.besseli(nu, mp.mpf(float(z))))
                rows.append(
                    {
                        "label": f"bessel nu={nu} z={float(z):.6g}",
                        "lhs": mine,
                        "rhs": ref,
                        "abs_err": abs(mine - ref),
                        "rel_err": abs(mine - ref) / abs(ref),
                        "note": "",
                    }
                )
    _emit(rows, args.out)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="fousldp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_T=True):
        p.add_argument("--theta", type=float, required=False)
        p.add_argument("--hurst", type=float, required=False)
        if need_T:
            p.add_argument("--T", type=float, default=100.0)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("rate", help="rate function table")
    common(p)
    p.add_argument("--target", choices=("energy", "mle"), required=True)
    p.add_argument("--c", type=float, action="append")
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("tail", help="sharp tail approximations")
    common(p)
    p.add_argument("--target", choices=("energy", "mle"), required=True)
    p.add_argument("--c", type=float, action="append")
    p.add_argument("--order1", action="store_true")
    p.set_defaults(func=_cmd_tail)

    p = sub.add_parser("saddle", help="saddlepoint diagnostics (energy)")
    common(p)
    p.add_argument("--c", type=float, action="append")
    p.set_defaults(func=_cmd_saddle)

    p = sub.add_parser("simulate", help="simulate paths")
    common(p)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--grid-n", dest="grid_n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-paths", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("mc", help="Monte Carlo tail comparison")
    common(p)
    p.add_argument("--target", choices=("energy", "mle"), required=True)
    p.add_argument("--c", type=float, action="append")
    p.add_argument("--replicates", type=int, default=100_000)
    p.add_argument("--grid-n", dest="grid_n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order1", action="store_true")
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("clt", help="central limit validation")
    common(p)
    p.add_argument("--replicates", type=int, default=5000)
    p.add_argument("--grid-n", dest="grid_n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_clt)

    p = sub.add_parser("oracle", help="numerical cross-checks")
    common(p)
    p.add_argument("--kind", choices=("legendre", "gamma-contour", "bessel"),
                   required=True)
    p.add_argument("--target", choices=("energy", "mle"), default="energy")
    p.add_argument("--c", type=float, action="append")
    p.add_argument("--shape", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--gamma-freq", dest="gamma_freq", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=_cmd_oracle)

    return parser


def _apply_config(args: argparse.Namespace, argv: Sequence[str]) -> None:
    # config supplies defaults; flags explicitly present on the command
    # line keep their parsed values
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise _UsageError("config file must contain a JSON object")
    explicit = {tok.split("=", 1)[0].lstrip("-").replace("-", "_")
                for tok in argv if tok.startswith("--")}
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise _UsageError(f"unknown config key {key!r}")
        if attr not in explicit:
            setattr(args, attr, value)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments and execute a subcommand; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    needs_model = args.command != "oracle" or args.kind == "legendre"
    if needs_model and (args.theta is None or args.hurst is None):
        print("error: --theta and --hurst are required", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, DomainError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    raise SystemExit(run())
