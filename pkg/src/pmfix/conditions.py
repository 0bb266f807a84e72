"""Finite checks of the orbit conditions (A) and (B) and two pairwise contractions.

Every verdict is "on the sample": (A) is checked for the sampled starts up
to a finite depth, and (B) can only report that no suitable iterate was
found below ``q_cap``, never that none exists.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .orbits import SelfMap, orbit
from .spaces import DEFAULT_TOL, PMetricSpace, SampleSet, eval_pmetric, rho_reference

DEFAULT_EPS_GRID = (0.5, 0.1, 0.01)
DEFAULT_Q_CAP = 200
EQ6 = "eq6"
CIRIC = "ciric"

PASS = "pass"
FAIL = "fail"
NOT_FOUND = "not-found-within-cap"


@dataclass(frozen=True)
class AWitness:
    x: float
    q: int
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ConditionAReport:
    alpha: float
    Q: int
    sample: str
    verdict: str
    witnesses: tuple

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


def check_condition_A(space: PMetricSpace, T: SelfMap, points: Optional[SampleSet] = None,
                      alpha: float = 0.75, Q: int = 30,
                      tol: float = DEFAULT_TOL) -> ConditionAReport:
    """Compare ``p(T x, T^{q+1} x)`` with ``max{alpha p(x, T^j x) (j <= q+1), p(x, x)}``.

    One orbit per start serves every depth ``q = 1..Q``; the right-hand side
    is a running maximum, so the whole check is linear in ``Q``.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    points = points or space.sample
    wit = []
    for x in points:
        xs = orbit(T, x, Q + 1).points
        size = eval_pmetric(space, x, x)
        best = eval_pmetric(space, x, xs[1])
        for q in range(1, Q + 1):
            best = max(best, eval_pmetric(space, x, xs[q + 1]))
            rhs = max(alpha * best, size)
            lhs = eval_pmetric(space, xs[1], xs[q + 1])
            if lhs > rhs + tol:
                wit.append(AWitness(x, q, lhs, rhs))
    wit.sort(key=lambda w: (w.x, w.q))
    return ConditionAReport(alpha, Q, points.generator_spec, FAIL if wit else PASS, tuple(wit))


def alpha_grid(step: float = 0.01) -> tuple:
    """Ascending grid ``step, 2*step, ...`` strictly below 1."""
    n = round(1 / step)
    return tuple(round(k * step, 12) for k in range(1, n))


def find_alpha(space: PMetricSpace, T: SelfMap, points: Optional[SampleSet] = None,
               Q: int = 30, grid: Sequence[float] = alpha_grid(0.1),
               tol: float = DEFAULT_TOL) -> Optional[float]:
    """Smallest grid value at which (A) passes, by bisection.

    The right-hand side of (A) is nondecreasing in alpha, so pass/fail is
    monotone along an ascending grid.
    """
    grid = list(grid)
    if any(not 0 <= a < 1 for a in grid) or grid != sorted(grid):
        raise ValueError("grid must be ascending within [0, 1)")

    def ok(a):
        return check_condition_A(space, T, points, a, Q, tol).passed

    if not grid or not ok(grid[-1]):
        return None
    lo, hi = 0, len(grid) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(grid[mid]):
            hi = mid
        else:
            lo = mid + 1
    return grid[lo]


@dataclass(frozen=True)
class BPairResult:
    """Outcome for one pair and one ``eps``.

    ``q_eps`` is ``None`` when no iterate up to the cap worked; ``lhs_trace``
    then holds ``p(T^q x, T^q y)`` for ``q = 1..q_cap``.
    """

    x: float
    y: float
    eps: float
    bound: float
    q_eps: Optional[int]
    lhs: float
    lhs_trace: tuple = ()

    @property
    def found(self) -> bool:
        return self.q_eps is not None


@dataclass(frozen=True)
class ConditionBReport:
    epsilon1: float
    eps_grid: tuple
    q_cap: int
    rho: float
    sample: str
    verdict: str
    results: tuple
    skipped_pairs: int
    semi_decision: bool = True

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def result(self, x, y, eps) -> BPairResult:
        a, b = sorted((x, y))
        for r in self.results:
            if r.x == a and r.y == b and r.eps == eps:
                return r
        raise KeyError((x, y, eps))

    @property
    def misses(self) -> tuple:
        return tuple(r for r in self.results if not r.found)


def check_condition_B(space: PMetricSpace, T: SelfMap, points: Optional[SampleSet] = None,
                      epsilon1: float = 0.5, eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
                      q_cap: int = DEFAULT_Q_CAP, tol: float = DEFAULT_TOL,
                      rho: Optional[float] = None) -> ConditionBReport:
    """Search ``q = 1..q_cap`` for ``p(T^q x, T^q y) <= max{p(x,x), p(y,y)} + eps``.

    Only pairs whose larger size is within ``epsilon1`` of the reference
    infimum are tested; ``rho`` defaults to the catalog value or the sample
    minimum.  Pairs are unordered and include ``x = y``.
    """
    if epsilon1 <= 0:
        raise ValueError("epsilon1 must be positive")
    if q_cap < 1:
        raise ValueError("q_cap must be >= 1")
    eps_grid = tuple(eps_grid)
    if not eps_grid or any(e <= 0 for e in eps_grid) or list(eps_grid) != sorted(eps_grid, reverse=True):
        raise ValueError("eps_grid must be positive and descending")
    points = points or space.sample
    rho = rho_reference(space, points) if rho is None else rho

    sizes = {x: eval_pmetric(space, x, x) for x in points}
    small = [x for x in points if sizes[x] <= rho + epsilon1 + tol]
    orbits = {x: orbit(T, x, q_cap).points for x in small}
    n_pairs = len(points) * (len(points) + 1) // 2
    results = []
    for x, y in itertools.combinations_with_replacement(small, 2):
        m = max(sizes[x], sizes[y])
        ox, oy = orbits[x], orbits[y]
        lhs = [eval_pmetric(space, ox[q], oy[q]) for q in range(1, q_cap + 1)]
        for eps in eps_grid:
            hit = next((q for q, v in enumerate(lhs, 1) if v <= m + eps + tol), None)
            if hit is None:
                results.append(BPairResult(x, y, eps, m + eps, None, min(lhs), tuple(lhs)))
            else:
                results.append(BPairResult(x, y, eps, m + eps, hit, lhs[hit - 1]))
    verdict = PASS if all(r.found for r in results) else NOT_FOUND
    n_small = len(small)
    skipped = n_pairs - n_small * (n_small + 1) // 2
    return ConditionBReport(epsilon1, eps_grid, q_cap, rho, points.generator_spec,
                            verdict, tuple(results), skipped)


@dataclass(frozen=True)
class ContractWitness:
    x: float
    y: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ContractReport:
    which: str
    alpha: float
    sample: str
    verdict: str
    witnesses: tuple

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def witness(self, x, y) -> Optional[ContractWitness]:
        return next((w for w in self.witnesses if w.x == x and w.y == y), None)


def contract_rhs(space: PMetricSpace, T: SelfMap, x, y, alpha: float, which: str):
    return _rhs(space, x, y, T(x), T(y), alpha, which)


def _rhs(space, x, y, tx, ty, alpha, which):
    p = eval_pmetric
    base = max(alpha * p(space, x, y), p(space, x, x), p(space, y, y))
    if which == EQ6:
        return base
    if which == CIRIC:
        return max(base, alpha * p(space, x, tx), alpha * p(space, y, ty),
                   alpha / 2 * (p(space, x, ty) + p(space, y, tx)))
    raise ValueError(f"unknown contraction {which!r}")


def unscaled_max(space: PMetricSpace, T: SelfMap, x, y):
    """``max{p(x,y), p(x,Tx), p(y,Ty), p(x,Ty), p(y,Tx)}``."""
    tx, ty = T(x), T(y)
    return max(eval_pmetric(space, a, b)
               for a, b in ((x, y), (x, tx), (y, ty), (x, ty), (y, tx)))


def check_contract(space: PMetricSpace, T: SelfMap, points: Optional[SampleSet] = None,
                   alpha: float = 0.5, which: str = EQ6,
                   tol: float = DEFAULT_TOL) -> ContractReport:
    """Check the two-point inequality for every ordered pair (diagonal included)."""
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    points = points or space.sample
    if which not in (EQ6, CIRIC):
        raise ValueError(f"unknown contraction {which!r}")
    img = {x: T(x) for x in points}
    wit = []
    for x, y in itertools.product(points, repeat=2):
        lhs = eval_pmetric(space, img[x], img[y])
        rhs = _rhs(space, x, y, img[x], img[y], alpha, which)
        if lhs > rhs + tol:
            wit.append(ContractWitness(x, y, lhs, rhs))
    wit.sort(key=lambda w: (w.x, w.y))
    return ContractReport(which, alpha, points.generator_spec, FAIL if wit else PASS, tuple(wit))
