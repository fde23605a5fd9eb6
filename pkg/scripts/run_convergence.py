#!/usr/bin/env python3
"""Reward-versus-episode curves: train one agent per seed on the desk config.

Writes one metrics CSV per seed under --out-dir, then prints first/last
window means so the trend is visible without plotting.
"""

import argparse
import csv
import sys
from pathlib import Path

from sagin_sfc.cli import main as cli_main


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/desk.yaml")
    ap.add_argument("--agent", default="ddqn")
    ap.add_argument("--episodes", type=int, default=500)
    ap.add_argument("--seeds", default="1,2,3,4,5")
    ap.add_argument("--out-dir", default="runs/convergence")
    ap.add_argument("--window", type=int, default=50)
    args = ap.parse_args(argv)

    seeds = [int(s) for s in args.seeds.split(",")]
    for seed in seeds:
        rc = cli_main([
            "run", "--config", args.config, "--agent", args.agent,
            "--episodes", str(args.episodes), "--seed", str(seed),
            "--out-dir", args.out_dir,
        ])
        if rc != 0:
            return rc

    w = args.window
    print(f"\nseed  first-{w} mean reward  last-{w} mean reward")
    for seed in seeds:
        path = Path(args.out_dir) / f"metrics_{args.agent}_seed{seed}.csv"
        with open(path) as fh:
            rows = list(csv.DictReader(fh))
        rewards = [float(r["mean_reward"]) for r in rows]
        first = sum(rewards[:w]) / max(len(rewards[:w]), 1)
        last = sum(rewards[-w:]) / max(len(rewards[-w:]), 1)
        print(f"{seed:>4}  {first:>19.3f}  {last:>18.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
