"""Run every catalog example through the checkers and the solver.

Prints one block per example: condition verdicts, the smallest grid alpha
for (A), solver status per sampled start, and the pipeline verdict.  With
``--dump DIR`` it also writes orbit dumps (``q x_q size step``) for plotting.
"""
import argparse
from pathlib import Path

from pmfix import catalog
from pmfix.conditions import alpha_grid, check_condition_A, check_condition_B, find_alpha
from pmfix.orbits import orbit, orbit_dump
from pmfix.report import fmt_num
from pmfix.solver import solve_fixed_point, theorem1_pipeline


def run(entry, T, label, dump_dir, Q):
    a = check_condition_A(entry.space, T, None, entry.alpha, Q)
    b = check_condition_B(entry.space, T, None, entry.epsilon1)
    best = find_alpha(entry.space, T, grid=alpha_grid(0.01), Q=Q)
    print(f"== {label}")
    print(f"  A(alpha={fmt_num(entry.alpha)}): {a.verdict}"
          f"  smallest passing grid alpha: {'none' if best is None else fmt_num(best)}")
    print(f"  B(epsilon1={fmt_num(entry.epsilon1)}): {b.verdict}")
    for x0 in entry.space.sample:
        r = solve_fixed_point(entry.space, T, x0)
        cand = "-" if r.candidate is None else fmt_num(r.candidate)
        print(f"  start {fmt_num(x0):>5}: {r.status:<22} candidate {cand:<5} "
              f"iterations {r.iterations_used}")
        if dump_dir is not None:
            path = dump_dir / f"{label}_x0={fmt_num(x0)}.tsv"
            path.write_text(orbit_dump(entry.space, orbit(T, x0, Q)))
    rep = theorem1_pipeline(entry.space, T, alpha=entry.alpha, epsilon1=entry.epsilon1, Q=Q)
    cand = "none" if rep.candidate is None else fmt_num(rep.candidate)
    print(f"  pipeline: {rep.verdict} (implication {rep.implication}) candidate {cand}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dump", type=Path, help="directory for orbit dumps")
    ap.add_argument("--Q", type=int, default=30)
    args = ap.parse_args()
    if args.dump:
        args.dump.mkdir(parents=True, exist_ok=True)
    for entry in catalog.CATALOG.values():
        run(entry, entry.map, entry.id, args.dump, args.Q)
    e3 = catalog.get("example3")
    run(e3, e3.map.power(2), "example3_squared", args.dump, args.Q)


if __name__ == "__main__":
    main()
