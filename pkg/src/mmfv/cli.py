"""Command-line interface: `solver run <config>` and `solver bench <suite>`."""

from __future__ import annotations

import argparse
import sys

from .bench import SuiteSpec, run_suite
from .config import load_config
from .driver import run
from .errors import SolverError


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="override the RNG seed")
    p.add_argument(
        "--threads", type=int, default=None,
        help="worker hint; results are bitwise identical at any setting",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solver",
        description="Finite-volume rezoning moving-mesh solver (quadrilateral meshes, "
        "evolved geometric moments, hybrid WENO).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single configuration file")
    p_run.add_argument("config", help="path to a run configuration file")
    p_run.add_argument("--csv", default=None, help="override the error-table CSV path")
    _add_common(p_run)

    p_bench = sub.add_parser("bench", help="run a benchmark suite")
    p_bench.add_argument("suite", choices=["tpe", "sine", "shock", "consistency"])
    p_bench.add_argument("--out", default="bench_out", help="output directory")
    p_bench.add_argument("--scale", choices=["desk", "paper"], default="desk")
    p_bench.add_argument("--trials", type=int, default=5)
    p_bench.add_argument("--include-dmr", action="store_true",
                         help="also run the (slow) double Mach reflection")
    _add_common(p_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            if args.seed is not None:
                cfg.seed = args.seed
            if args.csv:
                cfg.error_csv = args.csv
            res = run(cfg)
            print(f"steps={res.steps} runtime={res.runtime_s:.3f}s "
                  f"levels_mean={res.levels_mean:.2f}")
            if res.l1 is not None:
                print(f"L1={res.l1:.6e} Linf={res.linf:.6e}")
            return 0
        spec = SuiteSpec(
            suite=args.suite, scale=args.scale, trials=args.trials,
            out_dir=args.out, include_dmr=args.include_dmr,
        )
        if args.seed is not None:
            spec.seed = args.seed
        report = run_suite(spec)
        print(f"suite '{args.suite}' finished; artifacts under {args.out}/")
        if isinstance(report, dict):
            for key, val in sorted(report.items(), key=lambda kv: str(kv[0])):
                if isinstance(val, dict):
                    val = {k: v for k, v in val.items() if not hasattr(v, "shape")}
                print(f"  {key}: {val}")
        return 0
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
