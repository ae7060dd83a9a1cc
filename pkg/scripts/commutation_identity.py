"""Evaluate both sides of the identity for [D]_{(t+1,t+1)} for every admissible diagonal D."""

import argparse

from mirabolic.schur import commutation_identity_check


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="2x2,2x3,3x2,3x3")
    args = ap.parse_args()
    for nd in args.sizes.split(","):
        n, d = (int(x) for x in nd.split("x"))
        for t in range(1, n):
            recs = [r for r in commutation_identity_check(n, d, t) if not r["skipped"]]
            ok = sum(r["passed"] for r in recs)
            print(f"n={n} d={d} t={t}: {ok}/{len(recs)} admissible D satisfy the identity")
            for r in recs:
                if not r["passed"]:
                    print(f"    D={r['D']} first difference {r['first_difference']}")
                    break


if __name__ == "__main__":
    main()
