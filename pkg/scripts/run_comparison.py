#!/usr/bin/env python3
"""Four-agent comparison on identical instances across seeds.

Thin wrapper over `sagin-sfc compare`; writes per-cell metrics CSVs and an
aggregate comparison.json with mean +/- stdev completed chains and node
utilization per agent.
"""

import argparse
import sys

from sagin_sfc.cli import main as cli_main


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/desk.yaml")
    ap.add_argument("--agents", default="ddqn,dqn,qlearning,sarsa")
    ap.add_argument("--episodes", type=int, default=500)
    ap.add_argument("--seeds", default="1,2,3,4,5")
    ap.add_argument("--out-dir", default="runs/comparison")
    args = ap.parse_args(argv)

    return cli_main([
        "compare", "--config", args.config, "--agents", args.agents,
        "--episodes", str(args.episodes), "--seeds", args.seeds,
        "--out-dir", args.out_dir,
    ])


if __name__ == "__main__":
    sys.exit(run())
