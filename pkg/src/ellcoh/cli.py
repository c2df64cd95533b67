"""
Command line interface ``ellcoh``.

    ellcoh moduli --n 3 --level 5 [--equivariant] [--format json|csv|latex] [--out PATH]
    ellcoh config-space --n 3 [--equivariant] [...]
    ellcoh modular-dims --level 5 --kmax 20
    ellcoh gamma-h1 --level 5 --kmax 20 [--generators FILE]
    ellcoh selftest [--nmax 4]
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__

__all__ = ["main", "build_parser"]


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="number of marked points")
    p.add_argument("--equivariant", action="store_true", help="also output S_n multiplicities")
    p.add_argument("--format", choices=("json", "csv", "latex"), default="json")
    p.add_argument("--out", help="write to this file instead of standard output")
    p.add_argument("--workers", type=int, default=None, help="processes for block computations")
    p.add_argument("--no-cache", action="store_true", help="bypass the result cache")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellcoh", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moduli", help="cohomology of M_{1,n}(N)")
    _add_output(p)
    p.add_argument("--level", type=int, required=True)

    p = sub.add_parser("config-space", help="cohomology of F(E, n)")
    _add_output(p)

    p = sub.add_parser("modular-dims", help="dimensions of modular forms and of W(k, N)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--kmax", type=int, default=20)

    p = sub.add_parser("gamma-h1", help="H^1(Gamma(N), V_k) from a free presentation")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--generators", help="presentation file (default: shipped data)")

    p = sub.add_parser("selftest", help="run quick consistency checks")
    p.add_argument("--nmax", type=int, default=4)
    return parser


def _positive(name: str, value: int) -> None:
    if value < 1:
        raise SystemExit(f"ellcoh: --{name} must be >= 1")


def _run_record(args, kind: str) -> int:
    from .assembler import config_space, mhdg
    from .emit import cached, emit

    _positive("n", args.n)
    if kind == "moduli":
        _positive("level", args.level)
        rec = cached(kind, args.n, args.level, args.equivariant,
                     lambda: mhdg(args.n, args.level, args.equivariant, args.workers),
                     use_cache=not args.no_cache)
    else:
        rec = cached(kind, args.n, None, args.equivariant,
                     lambda: config_space(args.n, args.equivariant, args.workers),
                     use_cache=not args.no_cache)
    text = emit(rec, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _modular_dims(args) -> int:
    from .modular import dims, gamma_data, w_dims

    _positive("level", args.level)
    gd = gamma_data(args.level)
    print(f"level {gd.N}: index {gd.mu}, projective index {gd.mu_bar}, "
          f"cusps {gd.cusps}, genus {gd.genus}")
    print(f"{'k':>3} {'s_k+2':>6} {'g_k+2':>6} {'W':>5} {'low':>5} {'high':>5}")
    for k in range(args.kmax + 1):
        s, g = dims(k + 2, args.level)
        wd = w_dims(k, args.level)
        print(f"{k:>3} {s:>6} {g:>6} {wd.total:>5} {wd.w_low:>5} {wd.w_high:>5}")
    return 0


def _gamma_h1(args) -> int:
    from .gamma import h1_dim, load_presentation, parabolic_h1_dim
    from .modular import w_dims

    pres = load_presentation(args.generators or args.level)
    if pres.N != args.level:
        raise SystemExit(f"ellcoh: presentation is for level {pres.N}, not {args.level}")
    print(f"level {pres.N}: {pres.rank} free generators, {len(pres.cusp_words)} cusps")
    print(f"{'k':>3} {'h1':>5} {'par':>5} {'W':>5} {'2s':>5}")
    ok = True
    for k in range(args.kmax + 1):
        h, par, wd = h1_dim(pres, k), parabolic_h1_dim(pres, k), w_dims(k, pres.N)
        ok &= (h, par) == (wd.total, wd.w_low)
        print(f"{k:>3} {h:>5} {par:>5} {wd.total:>5} {wd.w_low:>5}")
    return 0 if ok else 1


def _selftest(args) -> int:
    from .selftest import run

    return 0 if run(args.nmax, out=sys.stdout) else 1


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="ellcoh: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command in ("moduli", "config-space"):
        return _run_record(args, args.command)
    if args.command == "modular-dims":
        return _modular_dims(args)
    if args.command == "gamma-h1":
        return _gamma_h1(args)
    return _selftest(args)


if __name__ == "__main__":
    sys.exit(main())
