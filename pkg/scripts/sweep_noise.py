"""Sweep noise intensity and record how well the retained columns cover W.

For each noise level nu in [0, 1.5] (step 0.1) this builds a synthetic
instance, reduces it, runs the split-and-merge reduction, and reports the
distance between the retained columns (optionally augmented with lam random
extra columns, averaged over draws) and the ground-truth dictionary W.

Emits CSV rows: nu, lam, k_size, recon_error, l1_distance, mrsa_distance.
"""

import argparse
import csv
import sys
import time

import numpy as np

from conered import (
    IndexSet,
    assemble,
    dict_distance,
    drs,
    random_separable,
    reconstruction_error,
)
from conered.dimred import reduce_dimension


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=20)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--p", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument(
        "--lam",
        default="0,2,4",
        help="comma-separated augmentation sizes (columns added to K)",
    )
    ap.add_argument("--draws", type=int, default=50)
    ap.add_argument("--out", default="sweep_noise.csv")
    return ap.parse_args(argv)


def mean_distances(a, k, lam, draws, w, rng):
    outside = np.setdiff1d(np.arange(a.shape[1]), k.indices)
    if lam == 0 or outside.size == 0:
        return (
            dict_distance(a, k, w, metric="l1"),
            dict_distance(a, k, w, metric="mrsa"),
        )
    lam = min(lam, outside.size)
    l1_vals = []
    mrsa_vals = []
    for _ in range(draws):
        extra = rng.choice(outside, size=lam, replace=False)
        s = IndexSet.from_iterable(np.concatenate([k.indices, extra]))
        l1_vals.append(dict_distance(a, s, w, metric="l1"))
        mrsa_vals.append(dict_distance(a, s, w, metric="mrsa"))
    return float(np.mean(l1_vals)), float(np.mean(mrsa_vals))


def main(argv=None) -> int:
    args = parse_args(argv)
    lams = [int(v) for v in args.lam.split(",") if v.strip()]
    inst = random_separable(args.d, args.n, args.r, seed=args.seed)
    rng = np.random.default_rng(args.seed + 1)
    start = time.monotonic()
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["nu", "lam", "k_size", "recon_error", "l1_distance", "mrsa_distance"]
        )
        for nu in np.arange(0.0, 1.51, 0.1):
            a = assemble(inst, float(nu))
            ap_mat = reduce_dimension(a.values, args.r)
            k = drs(ap_mat, args.p, seed=args.seed)
            err = reconstruction_error(ap_mat, k)
            for lam in lams:
                l1_d, mrsa_d = mean_distances(
                    a.values, k, lam, args.draws, inst.w, rng
                )
                writer.writerow(
                    [f"{nu:.1f}", lam, len(k), f"{err:.3e}",
                     f"{l1_d:.6f}", f"{mrsa_d:.6f}"]
                )
            print(
                f"nu={nu:.1f} |K|={len(k)} recon={err:.2e}",
                file=sys.stderr,
            )
    print(f"wrote {args.out} in {time.monotonic() - start:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
