"""Sweep the augmentation size and record the resulting endmember accuracy.

Runs the full extraction pipeline on one synthetic instance at a fixed noise
level, varying lam from 0% to 2.5% of n in 0.5% steps, and reports the MRSA
score of the estimate against the ground-truth dictionary W.

Emits CSV rows: lam, lam_pct, score.
"""

import argparse
import csv
import sys
import time

from conered import (
    HsiMatrix,
    RedicConfig,
    assemble,
    mrsa_score,
    random_separable,
    redic,
)


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=20)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--nu", type=float, default=0.5)
    ap.add_argument("--tau", type=int, default=3)
    ap.add_argument("--p", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="sweep_augmentation.csv")
    return ap.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    inst = random_separable(args.d, args.n, args.r, seed=args.seed)
    a = assemble(inst, args.nu)
    w_ref = HsiMatrix(inst.w)
    start = time.monotonic()
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lam", "lam_pct", "score"])
        for step in range(6):  # 0% .. 2.5% of n
            pct = 0.5 * step
            lam = round(args.n * pct / 100.0)
            cfg = RedicConfig(
                r=args.r, lam=lam, tau=args.tau, p=args.p, seed=args.seed
            )
            est = redic(a, cfg)
            score = mrsa_score(w_ref, HsiMatrix(est.w_hat)).score
            writer.writerow([lam, f"{pct:.1f}", f"{score:.4f}"])
            print(f"lam={lam} ({pct:.1f}%) score={score:.4f}", file=sys.stderr)
    print(f"wrote {args.out} in {time.monotonic() - start:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
