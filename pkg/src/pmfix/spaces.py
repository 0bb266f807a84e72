"""Partial metric spaces on finite samples of the real line.

A space is a distance function ``p`` plus a domain predicate.  Everything
that would need the whole (usually infinite) point set is evaluated on a
finite :class:`SampleSet` instead, and reports say so.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import DomainError, GenerationExhausted

POINT_TOL = 1e-12
DEFAULT_TOL = 1e-9
REJECTION_CAP = 10_000

GENERATOR_KINDS = ("max-weight", "metric-plus-constant", "rejection")


def is_finite_point(x) -> bool:
    try:
        return math.isfinite(x)
    except TypeError:
        return False


def same_point(a, b) -> bool:
    return abs(a - b) <= POINT_TOL


@dataclass(frozen=True)
class SampleSet:
    """Finite, sorted, duplicate-free stand-in for a space's point set."""

    points: tuple
    generator_spec: str = "list"

    def __post_init__(self):
        if not self.points:
            raise ValueError("sample set must be nonempty")
        for x in self.points:
            if not is_finite_point(x):
                raise DomainError(f"sample point {x!r} is not finite")
        for a, b in zip(self.points, self.points[1:]):
            if not a < b or same_point(a, b):
                raise ValueError("sample points must be strictly increasing and distinct")

    @classmethod
    def of(cls, points, generator_spec: str = "list") -> "SampleSet":
        """Sort and deduplicate (within ``POINT_TOL``) before building."""
        kept = []
        for x in sorted(points):
            if not kept or not same_point(kept[-1], x):
                kept.append(x)
        return cls(tuple(kept), generator_spec)

    def union(self, other: "SampleSet") -> "SampleSet":
        return SampleSet.of(self.points + other.points,
                            f"union({self.generator_spec}, {other.generator_spec})")

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class PMetricSpace:
    """A point domain with a partial metric ``p``.

    ``contains`` is the domain predicate (``None`` means every finite real).
    ``sample`` is the default sample used when callers do not pass one, and
    ``rho_known`` records the infimum of sizes when it is known in closed form.
    ``table`` is set for finite spaces built from an explicit matrix.
    """

    name: str
    p: Callable = field(repr=False)
    contains: Optional[Callable] = field(default=None, repr=False)
    sample: Optional[SampleSet] = None
    rho_known: Optional[float] = None
    table: Optional[tuple] = field(default=None, repr=False)
    seed: Optional[int] = None

    def check_point(self, x):
        if not is_finite_point(x):
            raise DomainError(f"{self.name}: point {x!r} is not finite")
        if self.contains is not None and not self.contains(x):
            raise DomainError(f"{self.name}: point {x!r} is outside the domain")

    def __call__(self, x, y):
        return eval_pmetric(self, x, y)

    def size(self, x):
        return eval_pmetric(self, x, x)


def eval_pmetric(space: PMetricSpace, x, y):
    """Return ``p(x, y)`` after checking both points against the domain."""
    if space.table is not None:
        return space.p(x, y)  # table lookup is itself the membership check
    space.check_point(x)
    space.check_point(y)
    return space.p(x, y)


# ---------------------------------------------------------------------------
# axioms

@dataclass(frozen=True)
class AxiomWitness:
    axiom: str
    points: tuple
    lhs: float
    rhs: float


@dataclass(frozen=True)
class AxiomReport:
    space: str
    sample: str
    tol: float
    verdicts: dict
    witnesses: tuple

    @property
    def passed(self) -> bool:
        return all(v == "pass" for v in self.verdicts.values())


def verify_axioms(space: PMetricSpace, sample: Optional[SampleSet] = None,
                  tol: float = DEFAULT_TOL) -> AxiomReport:
    """Check P1-P3 on all pairs and P4 on all ordered triples of ``sample``.

    P1 is checked in both directions but only between sampled points: two
    distinct sample points must not have ``p(x,x) = p(y,y) = p(x,y)``.
    """
    sample = sample or space.sample
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    pts = sample.points
    n = len(pts)
    P = [[eval_pmetric(space, x, y) for y in pts] for x in pts]
    wit = []
    for i, j in itertools.product(range(n), repeat=2):
        x, y = pts[i], pts[j]
        pxy, pxx, pyy = P[i][j], P[i][i], P[j][j]
        if pxy < 0:
            wit.append(AxiomWitness("P2", (x, y), pxy, 0.0))
        if pxx > pxy + tol:
            wit.append(AxiomWitness("P2", (x, y), pxx, pxy))
        if i < j:
            if abs(pxy - P[j][i]) > tol:
                wit.append(AxiomWitness("P3", (x, y), pxy, P[j][i]))
            agree = max(pxx, pyy, pxy) - min(pxx, pyy, pxy) <= tol
            if agree != same_point(x, y):
                wit.append(AxiomWitness("P1", (x, y), pxy, pxx))
    for i, j, k in itertools.product(range(n), repeat=3):
        rhs = P[i][k] + P[k][j] - P[k][k]
        if P[i][j] > rhs + tol:
            wit.append(AxiomWitness("P4", (pts[i], pts[j], pts[k]), P[i][j], rhs))
    wit.sort(key=lambda w: (w.points, w.axiom))
    failed = {w.axiom for w in wit}
    verdicts = {a: ("fail" if a in failed else "pass") for a in ("P1", "P2", "P3", "P4")}
    return AxiomReport(space.name, sample.generator_spec, tol, verdicts, tuple(wit))


# ---------------------------------------------------------------------------
# sizes

@dataclass(frozen=True)
class SpaceSummary:
    """Sampled estimates of the infimum of sizes and the set attaining it.

    ``rho_hat`` can only overestimate the true infimum; it depends on the
    sample, which is why ``sample_dependent`` is always set.
    """

    space: str
    sample: str
    rho_hat: float
    up_hat: tuple
    sizes: tuple
    rho_known: Optional[float] = None
    sample_dependent: bool = True

    @property
    def consistent_with_known(self) -> bool:
        return self.rho_known is None or self.rho_hat >= self.rho_known - DEFAULT_TOL


def space_summary(space: PMetricSpace, sample: Optional[SampleSet] = None,
                  tol: float = DEFAULT_TOL) -> SpaceSummary:
    sample = sample or space.sample
    sizes = tuple((x, eval_pmetric(space, x, x)) for x in sample)
    rho_hat = min(s for _, s in sizes)
    up_hat = tuple(x for x, s in sizes if s <= rho_hat + tol)
    return SpaceSummary(space.name, sample.generator_spec, rho_hat, up_hat, sizes,
                        space.rho_known)


def rho_reference(space: PMetricSpace, sample: Optional[SampleSet] = None) -> float:
    """Known infimum of sizes when available, else the sampled estimate."""
    if space.rho_known is not None:
        return space.rho_known
    return space_summary(space, sample).rho_hat


# ---------------------------------------------------------------------------
# finite spaces

def finite_space(table: Sequence[Sequence[float]], name: str = "table",
                 seed: Optional[int] = None) -> PMetricSpace:
    """Space on the points ``0, 1, ..., n-1`` given by an explicit matrix."""
    rows = tuple(tuple(float(v) for v in row) for row in table)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("table must be a nonempty square matrix")

    lookup = {(float(i), float(j)): v for i, r in enumerate(rows) for j, v in enumerate(r)}
    contains = frozenset(float(i) for i in range(n)).__contains__

    def p(x, y):
        try:
            return lookup[x, y]
        except (KeyError, TypeError):
            bad = y if (x, x) in lookup else x
            raise DomainError(f"{name}: point {bad!r} is outside the domain") from None

    sample = SampleSet(tuple(float(i) for i in range(n)), f"range(0, {n - 1}, 1)")
    return PMetricSpace(name, p, contains, sample, None, rows, seed)


def max_weight_table(weights: Sequence[float]) -> list:
    return [[max(a, b) for b in weights] for a in weights]


def metric_plus_constant_table(d: Sequence[Sequence[float]], c: float) -> list:
    return [[d[i][j] + c for j in range(len(d))] for i in range(len(d))]


def _random_metric(rng: random.Random, n: int) -> list:
    d = [[0 if i == j else rng.randint(1, 4) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            d[i][j] = d[j][i]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                d[i][j] = min(d[i][j], d[i][k] + d[k][j])
    return d


def _table_is_pmetric(t) -> bool:
    n = len(t)
    for i in range(n):
        for j in range(n):
            if t[i][j] < 0 or t[i][j] != t[j][i] or t[i][i] > t[i][j]:
                return False
            if i != j and t[i][i] == t[j][j] == t[i][j]:
                return False
            for k in range(n):
                if t[i][j] > t[i][k] + t[k][j] - t[k][k]:
                    return False
    return True


def random_finite_space(seed: int, n: int, kind: str = "max-weight",
                        max_attempts: int = REJECTION_CAP) -> PMetricSpace:
    """Random integer-valued partial metric on ``n`` points, reproducible by seed.

    Integer entries keep every axiom check exact (``tol = 0``).
    """
    if not 2 <= n <= 8:
        raise ValueError("n must lie in [2, 8]")
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    rng = random.Random(f"{seed}:{n}:{kind}")
    if kind == "max-weight":
        table = max_weight_table(rng.sample(range(1, 3 * n + 1), n))
    elif kind == "metric-plus-constant":
        table = metric_plus_constant_table(_random_metric(rng, n), rng.randint(0, 3))
    else:
        for _ in range(max_attempts):
            sizes = [rng.randint(0, 2) for _ in range(n)]
            table = [[0] * n for _ in range(n)]
            for i in range(n):
                table[i][i] = sizes[i]
                for j in range(i):
                    table[i][j] = table[j][i] = max(sizes[i], sizes[j]) + rng.randint(1, 3)
            if _table_is_pmetric(table):
                break
        else:
            raise GenerationExhausted(
                f"no valid {n}-point table after {max_attempts} attempts (seed={seed})")
    return finite_space(table, f"random-{kind}-n{n}-s{seed}", seed)


# ---------------------------------------------------------------------------
# plain-text table format

TABLE_HEADER = "pmetric-table v1"


def _fmt_entry(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def table_to_text(space: PMetricSpace) -> str:
    if space.table is None:
        raise ValueError(f"{space.name} is not a finite table space")
    n = len(space.table)
    lines = [f"{TABLE_HEADER} n={n} seed={space.seed if space.seed is not None else '-'}"]
    lines += [" ".join(_fmt_entry(v) for v in row) for row in space.table]
    return "\n".join(lines) + "\n"


def table_from_text(text: str, name: str = "table") -> PMetricSpace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(TABLE_HEADER):
        raise ValueError(f"missing '{TABLE_HEADER}' header")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
    n = int(fields["n"])
    seed = None if fields.get("seed", "-") == "-" else int(fields["seed"])
    rows = [[float(v) for v in ln.split()] for ln in lines[1:1 + n]]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, found {len(rows)}")
    return finite_space(rows, name, seed)
