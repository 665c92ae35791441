"""Command-line front end.

Subcommands: constants, gain-table, sample, validate.  Output goes to
stdout or --out as CSV (default, '#'-prefixed metadata lines) or JSON.
Output bytes are deterministic for a fixed invocation; timing is
reported on stderr only.

Exit codes: 0 success, 1 usage error, 2 domain/dimension error,
3 validation suite failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .params import (
    ChannelDims,
    ConfluenceError,
    DimensionError,
    DomainError,
    RegimeError,
    derive,
)
from .capacity import asymptotic_gain_constant, bstm_constant, gain_ratio, ustm_constant
from .randmat import (
    RNG_ALGORITHM,
    RngHandle,
    sample_isotropic_unitary,
    sample_matrix_beta,
    sample_wishart,
)
from .bstm import noiseless_sv_sample, sample_gain, sample_input
from .suites import SUITES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VALIDATION = 3

_ERRORS = (DimensionError, DomainError, RegimeError, ConfluenceError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _config_echo(args) -> dict:
    cfg = {}
    for key, val in vars(args).items():
        if key.startswith("_") or key == "func":
            continue
        cfg[key] = val
    cfg["out"] = cfg.get("out") or "-"
    return cfg


def _emit(args, columns, rows, warnings_list=()) -> None:
    config = _config_echo(args)
    tool = f"ncmimo {__version__}"
    if args.format == "json":
        payload = {
            "meta": {"tool": tool, "rng": RNG_ALGORITHM, "config": config,
                     "columns": list(columns), "warnings": list(warnings_list)},
            "rows": [[v for v in row] for row in rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [
            f"# tool: {tool}",
            f"# rng: {RNG_ALGORITHM}",
            f"# config: {json.dumps(config, sort_keys=True)}",
            ",".join(columns),
        ]
        lines.extend(",".join(_cell(v) for v in row) for row in rows)
        lines.extend(f"# warning: {w}" for w in warnings_list)
        text = "\n".join(lines) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_constants(args) -> int:
    dp = derive(ChannelDims(T=args.T, M=args.M, N=args.N))
    b = bstm_constant(dp)
    u = ustm_constant(dp)
    climit = asymptotic_gain_constant(args.T, args.M)
    scale = 1.0 / math.log(2.0) if args.bits else 1.0
    columns = ["T", "M", "N", "prelog", "c_bstm", "c_ustm", "c_gap", "c_gain_limit"]
    row = [args.T, args.M, args.N, b.prelog, b.constant * scale, u.constant * scale,
           (b.constant - u.constant) * scale, climit * scale]
    for name, val in b.terms:
        columns.append(f"bstm_{name}")
        row.append(val * scale)
    for name, val in u.terms:
        columns.append(f"ustm_{name}")
        row.append(val * scale)
    _emit(args, columns, [row])
    return EXIT_OK


def cmd_gain_table(args) -> int:
    rows = []
    warnings_list = []
    for T in args.T_list:
        for N in args.N_list:
            M = args.M if args.M is not None else min(T // 2, N)
            try:
                dp = derive(ChannelDims(T=T, M=M, N=N))
                g = gain_ratio(dp, args.snr_db)
                rows.append([T, N, M, g])
            except _ERRORS as exc:
                rows.append([T, N, M, None])
                warnings_list.append(f"T={T} N={N} M={M}: {exc}")
    _emit(args, ["T", "N", "M", "gain"], rows, warnings_list)
    return EXIT_OK


def _require(args, names) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n, None) is None]
    if missing:
        args._parser.error(
            f"kind '{args.kind}' requires {', '.join(missing)}")


def _matrix_columns(r: int, c: int) -> list[str]:
    cols = []
    for i in range(r):
        for j in range(c):
            cols.extend((f"re_{i}_{j}", f"im_{i}_{j}"))
    return cols


def _matrix_rows(z: np.ndarray) -> list[list]:
    k, r, c = z.shape
    out = []
    for idx in range(k):
        row: list = [idx]
        flat = z[idx].reshape(-1)
        for v in flat:
            row.extend((float(v.real), float(v.imag)))
        out.append(row)
    return out


def cmd_sample(args) -> int:
    if args.count < 1:
        args._parser.error("--count must be a positive integer")
    rng = RngHandle(args.seed)
    count = args.count
    kind = args.kind
    if kind in ("gain", "input", "noiseless-sv"):
        _require(args, ["T", "M", "N"])
        dp = derive(ChannelDims(T=args.T, M=args.M, N=args.N))
        if kind == "gain":
            d = sample_gain(dp, rng, count=count, ustm=args.ustm)
            columns = ["draw"] + [f"d{i + 1}" for i in range(dp.M)]
            rows = [[i] + [float(v) for v in d[i]] for i in range(count)]
        elif kind == "noiseless-sv":
            sv = noiseless_sv_sample(dp, rng, count=count)
            columns = ["draw"] + [f"sv{i + 1}" for i in range(dp.M)]
            rows = [[i] + [float(v) for v in sv[i]] for i in range(count)]
        else:
            x = sample_input(dp, rng, count=count, ustm=args.ustm)
            columns = ["draw"] + _matrix_columns(dp.T, dp.M)
            rows = _matrix_rows(x)
    elif kind == "unitary":
        _require(args, ["T", "M"])
        if not args.T >= args.M >= 1:
            raise DomainError(f"unitary sampling needs T >= M >= 1, got T={args.T}, M={args.M}")
        q = sample_isotropic_unitary(args.T, args.M, rng, count=count)
        columns = ["draw"] + _matrix_columns(args.T, args.M)
        rows = _matrix_rows(q)
    elif kind == "wishart":
        _require(args, ["m", "n"])
        w = sample_wishart(args.m, args.n, args.scale, rng, count=count)
        columns = ["draw"] + _matrix_columns(args.m, args.m)
        rows = _matrix_rows(w)
    else:  # beta
        _require(args, ["m", "p", "n"])
        c = sample_matrix_beta(args.m, args.p, args.n, rng, count=count)
        columns = ["draw"] + _matrix_columns(args.m, args.m)
        rows = _matrix_rows(c)
    _emit(args, columns, rows)
    return EXIT_OK


def cmd_validate(args) -> int:
    reports = SUITES[args.suite](n=args.n, seed=args.seed)
    columns = ["suite", "name", "statistic", "threshold", "p_value", "passed",
               "n_samples", "seed"]
    rows = [[args.suite, r.name, r.statistic, r.threshold, r.p_value, r.passed,
             r.n_samples, r.seed] for r in reports]
    _emit(args, columns, rows)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VALIDATION


def _add_common(sub) -> None:
    sub.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output format (default csv)")
    sub.add_argument("--out", default=None,
                     help="output path; '-' or omitted writes to stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="ncmimo",
                     description="High-SNR noncoherent block-fading MIMO toolkit")
    parser.add_argument("--version", action="version", version=f"ncmimo {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("constants", help="capacity expansion constants for one (T, M, N)")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--bits", action="store_true",
                   help="report constants in bits instead of nats")
    _add_common(p)
    p.set_defaults(func=cmd_constants)

    p = subs.add_parser("gain-table", help="relative rate gain over a (T, N) grid")
    p.add_argument("--T-list", dest="T_list", type=_int_list, required=True,
                   help="comma-separated block lengths")
    p.add_argument("--N-list", dest="N_list", type=_int_list, required=True,
                   help="comma-separated receive antenna counts")
    p.add_argument("--snr-db", dest="snr_db", type=float, default=30.0)
    p.add_argument("--M", type=int, default=None,
                   help="transmit antennas; default min(floor(T/2), N) per cell")
    _add_common(p)
    p.set_defaults(func=cmd_gain_table)

    p = subs.add_parser("sample", help="draw from the random-matrix building blocks")
    p.add_argument("--kind", required=True,
                   choices=("gain", "input", "unitary", "wishart", "beta", "noiseless-sv"))
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--ustm", action="store_true",
                   help="force the constant equal-gain diagonal")
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = subs.add_parser("validate", help="run a statistical or numerical check suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--n", type=int, default=None,
                   help="sample count / case count override (suite-specific default)")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    for action in subs.choices.values():
        action.set_defaults(_parser=action)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except _ERRORS as exc:
        print(f"ncmimo: error: {exc}", file=sys.stderr)
        code = EXIT_DOMAIN
    finally:
        elapsed = time.perf_counter() - t0
        print(f"[ncmimo] wall clock: {elapsed:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
