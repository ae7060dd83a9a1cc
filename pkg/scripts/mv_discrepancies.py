"""Compare the case-by-case action formulas on MV with the kernel route through the Xi^1 dictionary."""

import argparse
import json

from mirabolic.mv import compare_printed


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="2x2,3x2,2x3,3x3", help="comma-separated n x d")
    ap.add_argument("--examples", action="store_true", help="print the first mismatching keys")
    args = ap.parse_args()
    for nd in args.sizes.split(","):
        n, d = (int(x) for x in nd.split("x"))
        for side, variants in (("left", ("row_h", "row_h1")), ("right", ("row_h",))):
            for variant in variants:
                r = compare_printed(n, d, side, variant)
                print(f"n={n} d={d} {side:5s} {variant:5s} {r['mismatches']:4d}/{r['checked']:4d}  {r['by_generator']}")
                if args.examples:
                    for ex in r["examples"]:
                        print("    " + json.dumps(ex, sort_keys=True))


if __name__ == "__main__":
    main()
