#!/usr/bin/env python3
"""Node utilization versus offered load: sweep the chain count.

Trains the same agent at several workload sizes across seeds and prints the
mean final utilization and completed count per size. More offered chains
should keep compute nodes busier.
"""

import argparse
import json
import sys
from pathlib import Path

from sagin_sfc.cli import main as cli_main


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/desk.yaml")
    ap.add_argument("--agent", default="ddqn")
    ap.add_argument("--episodes", type=int, default=500)
    ap.add_argument("--seeds", default="1,2,3,4,5")
    ap.add_argument("--counts", default="5,10,20")
    ap.add_argument("--out-dir", default="runs/utilization")
    args = ap.parse_args(argv)

    counts = [int(c) for c in args.counts.split(",")]
    results = {}
    for count in counts:
        out = Path(args.out_dir) / f"sfcs{count}"
        rc = cli_main([
            "compare", "--config", args.config, "--agents", args.agent,
            "--episodes", str(args.episodes), "--seeds", args.seeds,
            "--out-dir", str(out), "--set", f"workload.count={count}",
        ])
        if rc != 0:
            return rc
        doc = json.loads((out / "comparison.json").read_text())
        results[count] = doc["summary"][args.agent]

    print("\nchains  utilization (mean±std)  completed (mean±std)")
    for count in counts:
        s = results[count]
        print(f"{count:>6}  {s['utilization_mean']:.4f} ± {s['utilization_std']:.4f}"
              f"       {s['completed_mean']:.2f} ± {s['completed_std']:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
