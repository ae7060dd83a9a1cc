"""Run every relation battery and print one line per relation family."""

import argparse

from mirabolic.hecke import hecke_relation_suite
from mirabolic.mv import mu_battery
from mirabolic.schur import relation_suite
from mirabolic.stabilization import mu_window_check


def line(tag, r):
    extra = " (supplementary)" if r.get("supplementary") else ""
    first = r["failures"][0] if r["failures"] else ""
    print(f"{tag:22s} {r['relation']:3s} {'pass' if r['passed'] else 'FAIL'}{extra} {first}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--window", type=int, default=3)
    args = ap.parse_args()
    for n, d in ((2, 2), (2, 3), (3, 2), (3, 3)):
        for r in relation_suite(n, d):
            line(f"schur n={n} d={d}", r)
    for d in (2, 3, 4):
        for r in hecke_relation_suite(d):
            line(f"hecke d={d}", r)
    for n, d in ((2, 2), (3, 2)):
        for r in mu_battery(n, d):
            line(f"mv n={n} d={d}", r)
    for n in (2, 3):
        for r in mu_window_check(n, args.window)["relations"]:
            line(f"window n={n} W={args.window}", r)


if __name__ == "__main__":
    main()
