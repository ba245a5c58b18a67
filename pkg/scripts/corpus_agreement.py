"""Run reference, generated and DCJS-restricted deciding over a formula corpus.

    python scripts/corpus_agreement.py --random 500 --seed 1 --vars x y
"""
import argparse
import random
import time
from collections import Counter

from cjslab.decider import decide, decide_restricted_dcjs, random_formula, small_corpus
from cjslab.logic import render


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, default=200, help="number of random formulas")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--vars", nargs="+", default=["x", "y"])
    ap.add_argument("--no-small", action="store_true", help="skip the exhaustive small corpus")
    ap.add_argument("--max-reference-size", type=int, default=7,
                    help="skip reference mode when the size bound exceeds this")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    corpus = [] if args.no_small else small_corpus(args.vars)
    corpus += [random_formula(rng, args.vars, args.depth) for _ in range(args.random)]
    verdicts = Counter()
    mismatches = []
    t0 = time.perf_counter()
    for f in corpus:
        gen = decide(f, mode="generated")
        dc = decide_restricted_dcjs(f, mode="generated")
        ref = decide(f, mode="reference", max_reference_size=args.max_reference_size)
        # an over-cap reference run is inconclusive and simply not compared
        ref_v = gen.verdict if ref.verdict == "inconclusive" else ref.verdict
        verdicts[gen.verdict] += 1
        if not ref_v == gen.verdict == dc.verdict:
            mismatches.append((render(f), ref.verdict, gen.verdict, dc.verdict))
    print(f"formulas: {len(corpus)}  verdicts: {dict(verdicts)}  time: {time.perf_counter() - t0:.1f}s")
    print(f"mismatches: {len(mismatches)}")
    for m in mismatches[:20]:
        print("  ", *m)


if __name__ == "__main__":
    main()
