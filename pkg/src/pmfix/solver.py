"""Picard iteration with fixed-point certificates.

A fixed point is recognised through the partial-metric identity criterion
``p(x, Tx) = p(x, x) = p(Tx, Tx)`` rather than by comparing coordinates,
since points of positive size are never at distance 0 from themselves.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .conditions import (DEFAULT_EPS_GRID, DEFAULT_Q_CAP, ConditionAReport, ConditionBReport,
                         check_condition_A, check_condition_B)
from .orbits import Orbit, SelfMap, detect_period, is_a_cauchy, orbit_diagnostics
from .spaces import (DEFAULT_TOL, PMetricSpace, SampleSet, eval_pmetric, rho_reference,
                     same_point)

FOUND = "FixedPointFound"
OUTSIDE_UP = "FixedPointOutsideUp"
NOT_FIXED = "ConvergedButNotFixed"
NON_CONVERGENT = "NonConvergent"

UNIQUE = "unique-in-Up"
MULTIPLE = "multiple"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SolveOptions:
    """Iteration controls.

    ``limit_tol`` bounds the extrapolated tail value used to recognise orbits
    that converge too slowly for ``tol`` to be reached within ``max_iter``.
    """

    max_iter: int = 1000
    tol: float = DEFAULT_TOL
    tail: int = 50
    require_up_membership: bool = True
    rho_reference: Optional[float] = None
    limit_tol: float = 1e-6

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.tail < 1 or self.max_iter < self.tail + 2:
            raise ValueError("need max_iter >= tail + 2 and tail >= 1")


@dataclass(frozen=True)
class SolveResult:
    start: float
    status: str
    candidate: Optional[float]
    candidate_size: Optional[float]
    residual: float
    r_x: Optional[float]
    cauchy_deviation: float
    iterations_used: int
    period_hint: Optional[int]
    rho_reference: float
    orbit: Orbit = field(repr=False, compare=False)

    @property
    def found(self) -> bool:
        return self.status == FOUND


def p1_residual(space: PMetricSpace, T: SelfMap, z) -> float:
    """``max(|p(z,Tz) - p(z,z)|, |p(z,Tz) - p(Tz,Tz)|)``; zero exactly at fixed points."""
    tz = T(z)
    pzt = eval_pmetric(space, z, tz)
    return float(max(abs(pzt - eval_pmetric(space, z, z)), abs(pzt - eval_pmetric(space, tz, tz))))


def _p1_holds(space, x, y, tol):
    vals = (eval_pmetric(space, x, y), eval_pmetric(space, x, x), eval_pmetric(space, y, y))
    return max(vals) - min(vals) <= tol


def _extrapolate(qs: Sequence[int], values: Sequence[float]) -> float:
    """Value at ``q -> infinity`` of a quadratic fit in ``1/q``."""
    u = 1.0 / np.asarray(qs, dtype=float)
    v = np.asarray([float(e) for e in values])
    if np.ptp(v) == 0:
        return float(v[0])
    return float(np.polyfit(u, v, 2)[-1])


def _vanishes(qs, values, opts: SolveOptions) -> bool:
    mono = all(b <= a + opts.tol for a, b in zip(values, values[1:]))
    return mono and abs(_extrapolate(qs, values)) <= opts.limit_tol


def _classify(space, T, z, rho, opts):
    res = p1_residual(space, T, z)
    size = eval_pmetric(space, z, z)
    if res > opts.tol:
        return NOT_FIXED, res, size
    if opts.require_up_membership and size > rho + opts.tol:
        return OUTSIDE_UP, res, size
    return FOUND, res, size


def solve_fixed_point(space: PMetricSpace, T: SelfMap, x0, opts: Optional[SolveOptions] = None,
                      sample: Optional[SampleSet] = None) -> SolveResult:
    """Iterate ``T`` from ``x0`` and classify the outcome.

    The identity criterion is monitored on consecutive iterates.  Once it has
    held for ``tail`` steps (or the orbit is stationary), the last iterate is
    matched against the sample: a sampled point indistinguishable from it is
    the candidate.  With no sampled match, iteration continues until it is
    exactly stationary (the stationary iterate is the candidate) or the budget
    runs out (``NonConvergent``: the limit is not identified).  Without a trigger the tail
    is examined for a sampled limit point; a limit that is not fixed gives
    ``ConvergedButNotFixed``, no limit gives ``NonConvergent``.
    """
    opts = opts or SolveOptions()
    sample = sample or space.sample
    tol = opts.tol
    rho = rho_reference(space, sample) if opts.rho_reference is None else opts.rho_reference

    pts = [x0]
    space.check_point(x0)
    streak = 0
    for _ in range(opts.max_iter):
        x = pts[-1]
        y = T(x)
        pts.append(y)
        streak = streak + 1 if _p1_holds(space, x, y, tol) else 0
        if streak > opts.tail or (streak and x == y):
            break
    orb = Orbit(tuple(pts))
    used = len(pts) - 1

    if streak:
        last = pts[-1]
        matches = _sample_matches(space, sample, last, tol)
        if not matches:
            # an unsampled limit is only trusted once the iteration is exactly stationary
            while len(pts) <= opts.max_iter and pts[-1] != pts[-2]:
                pts.append(T(pts[-1]))
            orb = Orbit(tuple(pts))
            used = len(pts) - 1
            last = pts[-1]
            matches = _sample_matches(space, sample, last, tol)
            if not matches and last == pts[-2]:
                matches = [last]
        size_last = eval_pmetric(space, last, last)
        window = min(opts.tail, len(orb) - 1)
        cauchy = is_a_cauchy(space, orb, size_last, window, tol)
        period = detect_period(pts[-window:])
        if not matches:
            return SolveResult(x0, NON_CONVERGENT, None, None, float("nan"), size_last,
                               cauchy.deviation, used, period, rho, orb)
        ranked = sorted(matches, key=lambda z: (p1_residual(space, T, z) > tol,
                                                float(eval_pmetric(space, last, z)), z))
        z = ranked[0]
        status, res, size = _classify(space, T, z, rho, opts)
        return SolveResult(x0, status, z, size, res, size_last, cauchy.deviation, used,
                           period, rho, orb)

    diag = orbit_diagnostics(space, orb, tail=opts.tail, tol=tol)
    qs = list(range(len(pts) - opts.tail, len(pts)))
    limit = None
    if diag.r_x_estimate is not None and _is_cauchy_tail(space, pts, qs, diag.r_x_estimate, opts):
        for z in sample:
            sz = eval_pmetric(space, z, z)
            if abs(sz - diag.r_x_estimate) > tol:
                continue
            gaps = [eval_pmetric(space, pts[q], z) - sz for q in qs]
            if _vanishes(qs, gaps, opts):
                limit = z
                break
    if limit is None:
        return SolveResult(x0, NON_CONVERGENT, None, None, float("nan"), diag.r_x_estimate,
                           diag.cauchy.deviation, used, diag.period_hint, rho, orb)
    status, res, size = _classify(space, T, limit, rho, opts)
    return SolveResult(x0, status, limit, size, res, diag.r_x_estimate, diag.cauchy.deviation,
                       used, diag.period_hint, rho, orb)


def _sample_matches(space, sample, last, tol):
    """Sampled points that the identity criterion cannot tell apart from ``last``."""
    size_last = eval_pmetric(space, last, last)
    out = []
    for z in sample:
        sz = eval_pmetric(space, z, z)
        if eval_pmetric(space, last, z) - sz <= tol and abs(size_last - sz) <= tol:
            out.append(z)
    return out


def _is_cauchy_tail(space, pts, qs, a, opts) -> bool:
    """Tail sup-deviation ``max_{q' >= q} |p(x_q, x_q') - a|`` must extrapolate to 0."""
    half = qs[: max(3, len(qs) // 2)]
    devs = [max(abs(eval_pmetric(space, pts[q], pts[r]) - a) for r in qs if r >= q) for q in half]
    return _vanishes(half, devs, opts)


@dataclass(frozen=True)
class UniquenessReport:
    starts: tuple
    results: tuple
    candidates: tuple
    pairwise_p: tuple
    rho_reference: float
    verdict: str


def uniqueness_probe(space: PMetricSpace, T: SelfMap, starts: Iterable,
                     opts: Optional[SolveOptions] = None,
                     sample: Optional[SampleSet] = None) -> UniquenessReport:
    """Solve from every start of (estimated) minimal size and compare the fixed points found."""
    opts = opts or SolveOptions()
    sample = sample or space.sample
    rho = rho_reference(space, sample) if opts.rho_reference is None else opts.rho_reference
    opts = replace(opts, rho_reference=rho)
    starts = sorted(starts)
    if not starts:
        raise ValueError("starts must be nonempty")
    up = tuple(s for s in starts if abs(eval_pmetric(space, s, s) - rho) <= opts.tol)
    results = tuple(solve_fixed_point(space, T, s, opts, sample) for s in up)
    cands = []
    for r in results:
        if r.found and not any(same_point(r.candidate, c) for c in cands):
            cands.append(r.candidate)
    cands.sort()
    pair = tuple(tuple(float(eval_pmetric(space, a, b)) for b in cands) for a in cands)
    flat = [v for row in pair for v in row]
    if any(v > rho + opts.tol for v in flat):
        verdict = MULTIPLE
    elif results and all(r.found for r in results) and all(abs(v - rho) <= opts.tol for v in flat):
        verdict = UNIQUE
    else:
        verdict = INCONCLUSIVE
    return UniquenessReport(tuple(starts), results, tuple(cands), pair, rho, verdict)


@dataclass(frozen=True)
class PipelineReport:
    space: str
    map: str
    condition_A: ConditionAReport
    condition_B: ConditionBReport
    uniqueness: UniquenessReport
    implication: str
    verdict: str
    candidate: Optional[float]

    @property
    def breach(self) -> bool:
        return self.implication == "breach"


def theorem1_pipeline(space: PMetricSpace, T: SelfMap, sample: Optional[SampleSet] = None,
                      alpha: float = 0.75, epsilon1: float = 0.5,
                      opts: Optional[SolveOptions] = None, Q: int = 30,
                      eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
                      q_cap: int = DEFAULT_Q_CAP) -> PipelineReport:
    """Check (A) and (B), then look for the unique fixed point of minimal size.

    If both conditions pass on the sample but no unique minimal-size fixed
    point turns up, the result is an ``IMPLICATION-BREACH``.
    """
    opts = opts or SolveOptions()
    sample = sample or space.sample
    rho = rho_reference(space, sample) if opts.rho_reference is None else opts.rho_reference
    opts = replace(opts, rho_reference=rho)
    a_rep = check_condition_A(space, T, sample, alpha, Q, opts.tol)
    b_rep = check_condition_B(space, T, sample, epsilon1, eps_grid, q_cap, opts.tol, rho)
    u_rep = uniqueness_probe(space, T, sample, opts, sample)

    candidate = None
    if u_rep.verdict == UNIQUE:
        verdict, candidate = "unique-fixed-point-in-Up", u_rep.candidates[0]
    elif u_rep.verdict == MULTIPLE:
        verdict = "multiple-fixed-points-in-Up"
    elif not u_rep.candidates:
        verdict = "no-fixed-point-in-Up"
    else:
        verdict = "inconclusive"
    if a_rep.passed and b_rep.passed:
        implication = "holds" if candidate is not None else "breach"
    else:
        implication = "vacuous"
    if implication == "breach":
        verdict = "IMPLICATION-BREACH"
    return PipelineReport(space.name, T.name, a_rep, b_rep, u_rep, implication, verdict, candidate)

