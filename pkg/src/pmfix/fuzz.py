"""Brute-force implication testing on random finite partial metric spaces.

Three implications are exercised on every instance: the two-point
contraction (eq6) gives (A) and (B), the Ciric-type contraction gives (A),
and (A) with (B) gives a unique fixed point of minimal size.  A finite space
is complete in every sense needed, so a breach is a bug.
"""
from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .conditions import CIRIC, EQ6, check_condition_A, check_condition_B, check_contract
from .errors import GenerationExhausted
from .orbits import table_map
from .solver import SolveOptions, theorem1_pipeline
from .spaces import GENERATOR_KINDS, eval_pmetric, random_finite_space, table_to_text

ALPHAS = (0.25, 0.5, 0.75)
FUZZ_EPS_GRID = (0.5, 0.1, 0.01, 0.001)

EQ6_AB = "eq6=>A&B"
CIRIC_A = "ciric=>A"
AB_FIXED = "A&B=>fixed-point"


@dataclass(frozen=True)
class FuzzOptions:
    min_points: int = 2
    max_points: int = 6
    exhaustive_upto: int = 4
    sampled_maps: int = 24
    epsilon1: float = 1.0
    q_cap: int = 64
    eps_grid: tuple = FUZZ_EPS_GRID
    tol: float = 1e-9

    def __post_init__(self):
        if not 2 <= self.min_points <= self.max_points <= 8:
            raise ValueError("need 2 <= min_points <= max_points <= 8")
        if self.sampled_maps < 1:
            raise ValueError("sampled_maps must be >= 1")


@dataclass(frozen=True)
class Breach:
    implication: str
    trial: int
    generator: str
    space_seed: int
    alpha: float
    images: tuple
    table: str


@dataclass(frozen=True)
class Tally:
    spaces: int = 0
    skipped: int = 0
    maps: int = 0
    eq6_pass: int = 0
    ciric_pass: int = 0
    a_pass: int = 0
    b_pass: int = 0
    ab_pass: int = 0
    fixed_point_found: int = 0

    def __add__(self, o: "Tally") -> "Tally":
        return Tally(*(a + b for a, b in zip(self._values(), o._values())))

    def _values(self):
        return (self.spaces, self.skipped, self.maps, self.eq6_pass, self.ciric_pass,
                self.a_pass, self.b_pass, self.ab_pass, self.fixed_point_found)


@dataclass(frozen=True)
class FuzzReport:
    seed: int
    trials: int
    counts: Tally
    implication_breaches: int
    counterexample: Optional[Breach]
    verdict: str

    @property
    def passed(self) -> bool:
        return self.implication_breaches == 0


def _maps(n: int, rng: random.Random, opts: FuzzOptions):
    if n <= opts.exhaustive_upto:
        return list(itertools.product(range(n), repeat=n))
    return [tuple(rng.randrange(n) for _ in range(n)) for _ in range(opts.sampled_maps)]


def _trial(seed: int, t: int, opts: FuzzOptions):
    rng = random.Random(f"fuzz:{seed}:{t}")
    n = rng.randint(opts.min_points, opts.max_points)
    kind = GENERATOR_KINDS[t % len(GENERATOR_KINDS)]
    space_seed = rng.randrange(2 ** 31)
    try:
        space = random_finite_space(space_seed, n, kind)
    except GenerationExhausted:
        return Tally(spaces=1, skipped=1), []
    sample = space.sample
    rho = min(eval_pmetric(space, x, x) for x in sample)
    solve = SolveOptions(max_iter=4 * n + 8, tail=2 * n, tol=opts.tol, rho_reference=rho)
    counts = dict(spaces=1, maps=0, eq6_pass=0, ciric_pass=0, a_pass=0, b_pass=0,
                  ab_pass=0, fixed_point_found=0)
    breaches = []

    def breach(what, alpha, images):
        breaches.append(Breach(what, t, kind, space_seed, alpha, images, table_to_text(space)))

    for images in _maps(n, rng, opts):
        alpha = rng.choice(ALPHAS)
        T = table_map(images)
        counts["maps"] += 1
        eq6 = check_contract(space, T, sample, alpha, EQ6, opts.tol).passed
        ciric = check_contract(space, T, sample, alpha, CIRIC, opts.tol).passed
        a_ok = check_condition_A(space, T, sample, alpha, 2 * n, opts.tol).passed
        b_ok = False
        if eq6 or a_ok:
            b_ok = check_condition_B(space, T, sample, opts.epsilon1, opts.eps_grid,
                                     opts.q_cap, opts.tol, rho).passed
        counts["eq6_pass"] += eq6
        counts["ciric_pass"] += ciric
        counts["a_pass"] += a_ok
        counts["b_pass"] += b_ok
        if eq6 and not (a_ok and b_ok):
            breach(EQ6_AB, alpha, images)
        if ciric and not a_ok:
            breach(CIRIC_A, alpha, images)
        if a_ok and b_ok:
            counts["ab_pass"] += 1
            rep = theorem1_pipeline(space, T, sample, alpha, opts.epsilon1, solve, 2 * n,
                                    opts.eps_grid, opts.q_cap)
            ok = (rep.candidate is not None
                  and abs(eval_pmetric(space, rep.candidate, rep.candidate) - rho) <= opts.tol)
            counts["fixed_point_found"] += ok
            if not ok:
                breach(AB_FIXED, alpha, images)
    return Tally(**counts), breaches


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get("PMFIX_THREADS", "1") or 1)
    return max(1, threads)


def fuzz_implications(seed: int, trials: int, opts: Optional[FuzzOptions] = None,
                      threads: Optional[int] = None) -> FuzzReport:
    """Run ``trials`` random spaces; output does not depend on ``threads``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    opts = opts or FuzzOptions()
    workers = _threads(threads)
    if workers == 1:
        outcomes = [_trial(seed, t, opts) for t in range(trials)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outcomes = list(ex.map(_trial, itertools.repeat(seed), range(trials),
                                   itertools.repeat(opts), chunksize=16))
    total = Tally()
    breaches = []
    for tally, found in outcomes:
        total = total + tally
        breaches.extend(found)
    smallest = min(breaches, key=lambda b: (b.table.count("\n"), b.trial), default=None)
    verdict = "pass" if not breaches else "IMPLICATION-BREACH"
    return FuzzReport(seed, trials, total, len(breaches), smallest, verdict)
