"""Picard orbits and their size/Cauchy diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DomainError
from .spaces import DEFAULT_TOL, PMetricSpace, eval_pmetric, is_finite_point

PERIOD_CAP = 16


@dataclass(frozen=True)
class SelfMap:
    """A total self-map ``f`` on a space's points.

    ``domain`` optionally restricts where iterates may land; leaving it is a
    :class:`DomainError`.
    """

    name: str
    f: Callable = field(repr=False)
    domain: Optional[Callable] = field(default=None, repr=False)

    def __call__(self, x):
        y = self.f(x)
        if not is_finite_point(y):
            raise DomainError(f"{self.name}({x!r}) = {y!r} is not finite")
        if self.domain is not None and not self.domain(y):
            raise DomainError(f"{self.name}({x!r}) = {y!r} leaves the domain")
        return y

    def power(self, k: int) -> "SelfMap":
        """The ``k``-fold composite, applied as ``k`` exact steps."""
        if k < 1:
            raise ValueError("power must be >= 1")
        if k == 1:
            return self
        base = self

        def fk(x):
            for _ in range(k):
                x = base(x)
            return x

        return SelfMap(f"{self.name}^{k}", fk, self.domain)


def identity_map(name: str = "id") -> SelfMap:
    return SelfMap(name, lambda x: x)


def table_map(images, name: str = "table-map") -> SelfMap:
    """Self-map of a finite space on ``0..n-1`` given by its image list."""
    imgs = {float(i): float(v) for i, v in enumerate(images)}
    return SelfMap(name, imgs.get, frozenset(imgs).__contains__)


@dataclass(frozen=True)
class Orbit:
    points: tuple

    @property
    def Q(self) -> int:
        return len(self.points) - 1

    def __len__(self):
        return len(self.points)

    def __getitem__(self, q):
        return self.points[q]


def orbit(T: SelfMap, x0, Q: int) -> Orbit:
    """``[x0, T(x0), ..., T^Q(x0)]`` by exact repeated application."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if not is_finite_point(x0):
        raise DomainError(f"start point {x0!r} is not finite")
    pts = [x0]
    for _ in range(Q):
        pts.append(T(pts[-1]))
    return Orbit(tuple(pts))


def default_tail(Q: int) -> int:
    return max(20, Q // 4)


@dataclass(frozen=True)
class CauchyVerdict:
    a: float
    deviation: float
    passed: bool


def is_a_cauchy(space: PMetricSpace, orb: Orbit, a: float, tail: int,
                tol: float = DEFAULT_TOL) -> CauchyVerdict:
    """Max of ``|p(x_q, x_q') - a|`` over all pairs in the last ``tail`` indices."""
    if len(orb) < tail + 1:
        raise ValueError("orbit shorter than tail + 1")
    pts = orb.points[-tail:]
    dev = 0.0
    for i, x in enumerate(pts):
        for y in pts[i:]:
            dev = max(dev, abs(eval_pmetric(space, x, y) - a))
    dev = float(dev)
    return CauchyVerdict(a, dev, dev <= tol)


def detect_period(points, cap: int = PERIOD_CAP) -> Optional[int]:
    """Smallest ``k <= cap`` with ``points[i] == points[i-k]`` across the window."""
    n = len(points)
    for k in range(1, min(cap, n - 1) + 1):
        if all(points[i] == points[i - k] for i in range(k, n)):
            return k
    return None


@dataclass(frozen=True)
class OrbitDiagnostics:
    sizes: tuple
    tail: int
    limsup_size: float
    liminf_size: float
    r_x_estimate: Optional[float]
    cauchy: CauchyVerdict
    period_hint: Optional[int]
    alpha: Optional[float] = None
    lemma1_bound: Optional[float] = None
    lemma1_max: Optional[float] = None
    lemma1_ok: Optional[bool] = None


def orbit_diagnostics(space: PMetricSpace, orb: Orbit, alpha: Optional[float] = None,
                      tail: Optional[int] = None,
                      tol: float = DEFAULT_TOL) -> OrbitDiagnostics:
    """Size sequence, tail oscillation, a-Cauchy check, and the pairwise orbit bound.

    The size limit is declared to exist when the sizes over the tail window
    oscillate by at most ``tol``; the estimate is then the last size.  With
    ``alpha`` given, every pair of orbit points is compared against
    ``2/(1-alpha) * p(x0, x1)``.
    """
    tail = default_tail(orb.Q) if tail is None else tail
    if len(orb) < tail + 2:
        raise ValueError("orbit shorter than tail + 2")
    pts = orb.points
    sizes = tuple(eval_pmetric(space, x, x) for x in pts)
    window = sizes[-tail:]
    hi, lo = max(window), min(window)
    r_x = window[-1] if hi - lo <= tol else None
    cauchy = is_a_cauchy(space, orb, lo if r_x is None else r_x, tail, tol)
    period = detect_period(pts[-tail:])

    bound = worst = ok = None
    if alpha is not None:
        if not 0 <= alpha < 1:
            raise ValueError("alpha must lie in [0, 1)")
        bound = 2.0 / (1.0 - alpha) * eval_pmetric(space, pts[0], pts[1])
        worst = 0.0
        for i, x in enumerate(pts):
            for y in pts[i:]:
                worst = max(worst, eval_pmetric(space, x, y))
        worst = float(worst)
        ok = worst <= bound + tol
    return OrbitDiagnostics(sizes, tail, hi, lo, r_x, cauchy, period,
                            alpha, bound, worst, ok)


def orbit_dump(space: PMetricSpace, orb: Orbit) -> str:
    """Tab-separated ``q x_q p(x_q,x_q) p(x_q,x_{q+1})`` rows, 17 significant digits.

    The last orbit point has no successor, so rows run over ``q = 0..Q-1``.
    """
    rows = []
    pts = orb.points
    for q in range(len(pts) - 1):
        x, y = pts[q], pts[q + 1]
        vals = (float(x), float(eval_pmetric(space, x, x)), float(eval_pmetric(space, x, y)))
        rows.append("\t".join([str(q)] + ["%.17g" % v for v in vals]))
    return "\n".join(rows) + "\n"
