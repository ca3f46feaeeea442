"""Fixed RB count and DT population, growing number of cellular UTs (the rest are promoted DTs)."""

import argparse
import logging

from d2dmm.config import ScenarioConfig, load_config
from d2dmm.harness import SweepSpec, format_results, run_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--config")
    p.add_argument("--rbs", type=int, default=16)
    p.add_argument("--dts", type=int, default=48)
    p.add_argument("--uts", default="4,8,12,16")
    p.add_argument("--ber", default="0.001,0.01,0.1")
    p.add_argument("--drops", type=int, default=500)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="ut_sweep.csv")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    base = load_config(args.config) if args.config else ScenarioConfig()
    base = base.replace(n_rb=args.rbs, n_ut=args.rbs, n_dt=args.dts)
    uts = [int(v) for v in args.uts.split(",")]
    rows = []
    for ber in (float(b) for b in args.ber.split(",")):
        cfg = base.replace(ber_s=ber, ber_d=ber)
        rows += run_sweep(cfg, SweepSpec("n_ut", uts, args.drops), workers=args.workers)
    text = format_results(rows)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(text, end="")


if __name__ == "__main__":
    main()
