"""Heuristic sum rate as a fraction of the exhaustive optimum on small drops."""

import argparse

from d2dmm.config import ScenarioConfig
from d2dmm.harness import compare_with_oracle


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--drops", type=int, default=100)
    p.add_argument("--max-space", type=int, default=10**5)
    args = p.parse_args()
    print("n_rb n_ut n_dt  compared  mean_ratio  worst_ratio  violations")
    for n_rb, n_ut, n_dt in [(2, 2, 4), (3, 3, 5), (3, 1, 7), (4, 4, 6), (4, 2, 8)]:
        cfg = ScenarioConfig(n_rb=n_rb, n_ut=n_ut, n_dt=n_dt, seed=n_rb * 100 + n_dt)
        c = compare_with_oracle(cfg, args.drops, args.max_space)
        print(f"{n_rb:4d} {n_ut:4d} {n_dt:4d}  {c.compared:8d}  {c.mean_ratio:10.4f}  "
              f"{c.worst_ratio:11.4f}  {c.dominance_violations:10d}")


if __name__ == "__main__":
    main()
