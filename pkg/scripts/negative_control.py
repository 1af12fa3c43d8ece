"""Witness values on random classical-memory dynamics; all must be non-negative."""
import argparse
import json

from gravwitness.cli import locc_summary

ap = argparse.ArgumentParser()
ap.add_argument("--seed", type=int, default=42)
ap.add_argument("--count", type=int, default=50)
ap.add_argument("--memory-dim", type=int, default=2)
args = ap.parse_args()
print(json.dumps(locc_summary(args.seed, args.count, run_sdp=True, memory_dim=args.memory_dim), indent=2))
