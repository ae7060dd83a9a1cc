"""Compare the closed-form e-basis kernels with brute-force counts over F_q."""

import argparse

from mirabolic.verify import KINDS, oracle_verify


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--q", type=int, nargs="+", default=[2])
    ap.add_argument("--sample", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--kinds", default=",".join(KINDS))
    args = ap.parse_args()
    for q in args.q:
        r = oracle_verify(args.n, args.d, q, args.sample, args.seed, args.kinds.split(","), args.jobs)
        for f in r["failures"]:
            print(f["kind"], f["h"], f["right"])
            for t in f["terms"]:
                print("    ", t["label"], "formula", t["formula"], "count", t["count"])
        print(f"q={q}: {r['mismatches']} mismatches out of {r['checked']}")


if __name__ == "__main__":
    main()
