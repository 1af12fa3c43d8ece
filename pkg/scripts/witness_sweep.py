"""Optimal witness value versus g*tau, with and without trace-preservation slack.

    python3 scripts/witness_sweep.py --steps 40 --out sweep.csv
"""
import argparse
import csv
import time

import numpy as np

from gravwitness.sdp import sweep
from gravwitness.witness import closed_form_witness

ap = argparse.ArgumentParser()
ap.add_argument("--steps", type=int, default=27)
ap.add_argument("--out", default="witness_sweep.csv")
ap.add_argument("--plain", action="store_true", help="also run the slack-free program")
args = ap.parse_args()

grid = np.linspace(0.0, np.pi / 2, args.steps)
t0 = time.time()
rows = sweep(grid)
plain = sweep(grid, tp_slack=False) if args.plain else [None] * len(rows)
with open(args.out, "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["theta", "w_star", "w_star_plain", "analytical_normalized", "status"])
    for r, q in zip(rows, plain):
        w.writerow([f"{r.theta:.17g}", f"{r.w_star:.17g}", "" if q is None else f"{q.w_star:.17g}",
                    f"{closed_form_witness(r.theta, 1 / 8):.17g}", r.status])
best = min(rows, key=lambda r: r.w_star)
print(f"{len(rows)} points in {time.time() - t0:.1f}s; minimum w* = {best.w_star:.6f} at theta = {best.theta:.4f}")
