"""Fixed owners, growing DT pool, one curve per BER (D2D/system rate and satisfaction ratio)."""

import argparse
import logging

from d2dmm.config import ScenarioConfig, load_config
from d2dmm.harness import SweepSpec, format_results, run_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--config", help="base scenario (default: built-in Table II values)")
    p.add_argument("--owners", type=int, default=16)
    p.add_argument("--pool", default="16,32,48,64", help="DT pool sizes")
    p.add_argument("--ber", default="0.001,0.01,0.1")
    p.add_argument("--drops", type=int, default=500)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="dt_sweep.csv")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    base = load_config(args.config) if args.config else ScenarioConfig()
    base = base.replace(n_rb=args.owners, n_ut=args.owners, n_dt=args.owners)
    pool = [int(v) for v in args.pool.split(",")]
    rows = []
    for ber in (float(b) for b in args.ber.split(",")):
        cfg = base.replace(ber_s=ber, ber_d=ber)
        rows += run_sweep(cfg, SweepSpec("n_dt", pool, args.drops), workers=args.workers)
    text = format_results(rows)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(text, end="")


if __name__ == "__main__":
    main()
