"""``pmfix`` command-line front end.

Exit codes:
  0   success (condition pass, fixed point found, fuzz clean)
  1   condition failed with a witness, axioms failed, or an implication breach
  2   condition (B) not settled within ``q_cap``
  3   NonConvergent
  4   ConvergedButNotFixed
  5   FixedPointOutsideUp
  64  usage error
  65  config parse or validation error
  70  runtime domain or evaluation error
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from . import catalog
from .conditions import (CIRIC, DEFAULT_EPS_GRID, DEFAULT_Q_CAP, EQ6, NOT_FOUND,
                         check_condition_A, check_condition_B, check_contract)
from .dsl import load_space_config
from .errors import ConfigError, DomainError, EvalError, GenerationExhausted
from .fuzz import fuzz_implications
from .orbits import orbit, orbit_diagnostics, orbit_dump
from .report import fmt_num, to_json, to_text
from .solver import (FOUND, NON_CONVERGENT, NOT_FIXED, OUTSIDE_UP, SolveOptions,
                     solve_fixed_point, theorem1_pipeline)
from .spaces import space_summary, verify_axioms

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NOT_FOUND = 2
EXIT_USAGE = 64
EXIT_CONFIG = 65
EXIT_RUNTIME = 70

SOLVE_EXIT = {FOUND: 0, NON_CONVERGENT: 3, NOT_FIXED: 4, OUTSIDE_UP: 5}
VERBS = ("verify", "conditions", "solve", "pipeline", "fuzz", "catalog", "orbit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {s}")
    return v


def _unit_float(s):
    v = float(s)
    if not 0 <= v < 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1): {s}")
    return v


def _count(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {s}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {s}")
    return v


def _point(s):
    v = float(s)
    if v != v or v in (float("inf"), float("-inf")):
        raise argparse.ArgumentTypeError(f"not a finite number: {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="pmfix", description="Fixed points in partial metric spaces.",
                  allow_abbrev=False)
    sub = top.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    def verb(name, help_, target=True):
        p = sub.add_parser(name, help=help_, allow_abbrev=False)
        if target:
            p.add_argument("target", nargs="?", help="catalog id (see `pmfix catalog`)")
            p.add_argument("--config", metavar="PATH", help=".pmspec file instead of a catalog id")
            p.add_argument("--tol", type=_positive_float)
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        return p

    def cond_opts(p):
        p.add_argument("--alpha", type=_unit_float)
        p.add_argument("--epsilon1", type=_positive_float)
        p.add_argument("--Q", type=_count)
        p.add_argument("--q-cap", type=_count)
        p.add_argument("--power", type=_count)

    def solve_opts(p):
        p.add_argument("--max-iter", type=_count)
        p.add_argument("--tail", type=_count)

    verb("verify", "check the axioms on the sample and estimate the minimal size")
    p = verb("conditions", "check conditions (A) and (B) on the sample")
    cond_opts(p)
    p.add_argument("--contract", choices=(EQ6, CIRIC), help="also check a two-point contraction")
    p = verb("solve", "iterate from a start and classify the limit")
    p.add_argument("--x0", type=_point, required=True)
    p.add_argument("--power", type=_count)
    solve_opts(p)
    p = verb("pipeline", "conditions (A), (B) and the uniqueness probe")
    cond_opts(p)
    solve_opts(p)
    p = verb("orbit", "dump q, x_q, p(x_q,x_q), p(x_q,x_q+1) as tab-separated rows")
    p.add_argument("--x0", type=_point, required=True)
    p.add_argument("--Q", type=_count)
    p.add_argument("--power", type=_count)
    p.add_argument("--alpha", type=_unit_float, help="print diagnostics with the pairwise bound")
    p = verb("fuzz", "random finite instances against the implications", target=False)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--trials", type=_count, default=1000)
    verb("catalog", "list built-in spaces", target=False)
    return top


@dataclass
class Target:
    space: object
    map: object
    sample: object
    params: dict


def _resolve_target(args) -> Target:
    if args.config and args.target:
        raise UsageError("give either a catalog id or --config, not both")
    if args.config:
        spec = load_space_config(args.config)
        return Target(spec.space, spec.map, spec.sample, dict(spec.params))
    if not args.target:
        raise UsageError("missing target: a catalog id or --config PATH")
    try:
        e = catalog.get(args.target)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    return Target(e.space, e.map, e.space.sample, {"alpha": e.alpha, "epsilon1": e.epsilon1})


def _param(args, t: Target, key, default):
    v = getattr(args, key, None)
    if v is not None:
        return v
    return t.params.get(key, default)


def _solve_options(args, t: Target) -> SolveOptions:
    defaults = SolveOptions()
    try:
        return SolveOptions(max_iter=_param(args, t, "max_iter", defaults.max_iter),
                            tol=_param(args, t, "tol", defaults.tol),
                            tail=_param(args, t, "tail", defaults.tail))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _mapped(args, t: Target):
    k = getattr(args, "power", None)
    return t.map.power(k) if k else t.map


def _emit(args, obj, tail_line: Optional[str] = None):
    if args.json:
        sys.stdout.write(to_json(obj))
    else:
        sys.stdout.write(to_text(obj))
        if tail_line:
            sys.stdout.write(tail_line + "\n")


def _cmd_catalog(args):
    rows = [{"id": e.id, "alpha": e.alpha, "epsilon1": e.epsilon1, "note": e.note}
            for e in catalog.CATALOG.values()]
    if args.json:
        sys.stdout.write(to_json({"catalog": rows}))
    else:
        for r in rows:
            sys.stdout.write(f"{r['id']}\t{r['note']}\n")
    return EXIT_OK


def _cmd_verify(args):
    t = _resolve_target(args)
    tol = _param(args, t, "tol", 1e-9)
    axioms = verify_axioms(t.space, t.sample, tol)
    summary = space_summary(t.space, t.sample, tol)
    verdict = "pass" if axioms.passed else "fail"
    _emit(args, {"axioms": axioms, "summary": summary, "verdict": verdict})
    return EXIT_OK if axioms.passed else EXIT_FAIL


def _cmd_conditions(args):
    t = _resolve_target(args)
    T = _mapped(args, t)
    tol = _param(args, t, "tol", 1e-9)
    alpha = _param(args, t, "alpha", 0.75)
    a = check_condition_A(t.space, T, t.sample, alpha, _param(args, t, "Q", 30), tol)
    b = check_condition_B(t.space, T, t.sample, _param(args, t, "epsilon1", 0.5),
                          DEFAULT_EPS_GRID, _param(args, t, "q_cap", DEFAULT_Q_CAP), tol)
    out = {"condition_A": a, "condition_B": b}
    failed = not a.passed
    if args.contract:
        c = check_contract(t.space, T, t.sample, alpha, args.contract, tol)
        out["contract"] = c
        failed = failed or not c.passed
    _emit(args, out)
    if failed:
        return EXIT_FAIL
    return EXIT_NOT_FOUND if b.verdict == NOT_FOUND else EXIT_OK


def _cmd_solve(args):
    t = _resolve_target(args)
    res = solve_fixed_point(t.space, _mapped(args, t), args.x0, _solve_options(args, t), t.sample)
    _emit(args, res)
    return SOLVE_EXIT[res.status]


def _cmd_pipeline(args):
    t = _resolve_target(args)
    rep = theorem1_pipeline(t.space, _mapped(args, t), t.sample,
                            alpha=_param(args, t, "alpha", 0.75),
                            epsilon1=_param(args, t, "epsilon1", 0.5),
                            opts=_solve_options(args, t), Q=_param(args, t, "Q", 30),
                            q_cap=_param(args, t, "q_cap", DEFAULT_Q_CAP))
    cand = "none" if rep.candidate is None else fmt_num(rep.candidate)
    _emit(args, rep, f"verdict: {rep.verdict} candidate: {cand}")
    return EXIT_FAIL if rep.breach else EXIT_OK


def _cmd_orbit(args):
    t = _resolve_target(args)
    orb = orbit(_mapped(args, t), args.x0, _param(args, t, "Q", 30))
    if args.alpha is not None or args.json:
        tol = _param(args, t, "tol", 1e-9)
        diag = orbit_diagnostics(t.space, orb, args.alpha, tol=tol)
        _emit(args, {"points": orb.points, "diagnostics": diag})
    else:
        sys.stdout.write(orbit_dump(t.space, orb))
    return EXIT_OK


def _cmd_fuzz(args):
    rep = fuzz_implications(args.seed, args.trials)
    _emit(args, rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "verify": _cmd_verify, "conditions": _cmd_conditions, "solve": _cmd_solve,
    "pipeline": _cmd_pipeline, "orbit": _cmd_orbit, "fuzz": _cmd_fuzz, "catalog": _cmd_catalog,
}


def run(argv=None) -> int:
    """Parse ``argv``, run the command, and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        where = getattr(_safe_args(argv), "config", None) or "<config>"
        print(f"{where}:{exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, EvalError, GenerationExhausted) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def _safe_args(argv):
    try:
        return build_parser().parse_args(argv)
    except UsageError:
        return None


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
