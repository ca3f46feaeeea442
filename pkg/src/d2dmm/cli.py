"""``simulate`` command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, load_config
from .harness import SweepSpec, compare_with_oracle, format_results, run_sweep, write_results

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser():
    p = argparse.ArgumentParser(
        prog="simulate",
        description="Monte Carlo simulation of D2D underlay RB sharing in a 28 GHz cell.",
    )
    p.add_argument("--config", required=True, help="key = value scenario file")
    p.add_argument("--drops", type=int, help="drops per sweep point (default: config 'drops')")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--sweep", help="axis=v1,v2,... with axis in n_dt, n_ut, ber")
    p.add_argument(
        "--oracle-compare",
        type=int,
        metavar="MAX_SPACE",
        help="also solve drops with (N+1)^M <= MAX_SPACE exhaustively and report the gap",
    )
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config {args.config}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.seed is not None:
            cfg = cfg.replace(seed=args.seed)
        drops = cfg.drops if args.drops is None else args.drops
        if args.sweep:
            sweep = SweepSpec.parse(args.sweep, drops)
        else:
            sweep = SweepSpec("n_dt", [cfg.n_dt], drops)
        table = run_sweep(cfg, sweep, workers=args.workers)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.out:
        try:
            write_results(table, args.out)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(format_results(table))

    if args.oracle_compare is not None:
        for value in sweep.values:
            cmp = compare_with_oracle(sweep.apply(cfg, value), drops, args.oracle_compare)
            print(
                f"oracle {sweep.axis}={value}: compared={cmp.compared} skipped={cmp.skipped} "
                f"mean_ratio={cmp.mean_ratio:.6f} worst_ratio={cmp.worst_ratio:.6f} "
                f"dominance_violations={cmp.dominance_violations}",
                file=sys.stderr if not args.out else sys.stdout,
            )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
