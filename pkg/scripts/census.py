"""Count structures per size and kind, and clans/points per structure.

    python scripts/census.py --max-size 5
"""
import argparse
import time

from cjslab.clans import enumerate_abstract_points, enumerate_clans
from cjslab.decider import KINDS, structures_of_size


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=5)
    ap.add_argument("--kinds", nargs="+", default=list(KINDS), choices=KINDS)
    args = ap.parse_args()

    print(f"{'size':>4} " + " ".join(f"{k:>16}" for k in args.kinds) + f" {'max clans':>10} {'max points':>10}")
    for k in range(1, args.max_size + 1):
        t0 = time.perf_counter()
        counts = [len(structures_of_size(k, kind)) for kind in args.kinds]
        cjs = structures_of_size(k, "cjs")
        mc = max((len(enumerate_clans(S)) for S in cjs), default=0)
        mp = max((len(enumerate_abstract_points(S)) for S in cjs), default=0)
        print(f"{k:>4} " + " ".join(f"{c:>16}" for c in counts) + f" {mc:>10} {mp:>10}"
              f"   ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
