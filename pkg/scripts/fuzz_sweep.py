"""Fuzz the implications over several seeds and tabulate the counts.

Each row is one seed; a nonzero ``breaches`` column prints the smallest
offending instance so it can be replayed with ``table_from_text``.
"""
import argparse
import time

from pmfix.fuzz import FuzzOptions, fuzz_implications
from pmfix.report import to_text

COLUMNS = ("spaces", "skipped", "maps", "eq6_pass", "ciric_pass", "a_pass", "b_pass",
           "ab_pass", "fixed_point_found")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--max-points", type=int, default=6)
    ap.add_argument("--threads", type=int, default=None, help="defaults to PMFIX_THREADS")
    args = ap.parse_args()
    opts = FuzzOptions(max_points=args.max_points)
    print("\t".join(("seed",) + COLUMNS + ("breaches", "seconds")))
    for seed in args.seeds:
        t0 = time.perf_counter()
        rep = fuzz_implications(seed, args.trials, opts, args.threads)
        counts = [str(getattr(rep.counts, c)) for c in COLUMNS]
        print("\t".join([str(seed)] + counts
                        + [str(rep.implication_breaches), f"{time.perf_counter() - t0:.1f}"]))
        if rep.counterexample is not None:
            print(to_text(rep.counterexample))


if __name__ == "__main__":
    main()
