"""Built-in spaces and maps.

Each entry pairs a space with its map and a default sample.  ``example2``
shares the ``example1`` space and changes the map at 0 only.  ``example5``
works in exact rational arithmetic: its orbits approach integers as
``n + 2**-q`` and binary floats would round them onto the integer branch.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .orbits import SelfMap
from .spaces import PMetricSpace, SampleSet


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    space: PMetricSpace
    map: SelfMap
    alpha: float = 0.75
    epsilon1: float = 0.5
    note: str = ""


def _p1(x, y):
    if x <= 0 and y <= 0:
        return abs(x - y)
    return abs(x - y) + 1


def _t1(x):
    if x <= 0:
        return x / 2
    return 1.0


def _t1_modified(x):
    if x == 0:
        return 1.0
    return _t1(x)


def _p3(x, y):
    if x == 0 and y == 0:
        return 0.0
    return 1 + abs(x - y)


def _t3(x):
    return 0.0 if x == 1 else 1.0


def _in_n0(x):
    return x >= 0 and float(x).is_integer()


def _p4(m, n):
    if m == n:
        return 0.0
    if m >= 1 and n >= 1:
        return 1 / m + 1 / n
    return 1 / max(m, n)


@functools.lru_cache(maxsize=8192)
def _split5(x):
    """Write ``x`` as ``(n, f)`` with ``f = 0`` or ``f = 1/(2k)``; ``None`` otherwise."""
    fx = x if isinstance(x, Fraction) else Fraction(x)
    n = fx.numerator // fx.denominator
    f = fx - n
    if f == 0:
        return n, f
    if f.numerator == 1 and f.denominator % 2 == 0:
        return n, f
    return None


def _in_u5(x):
    return x >= 0 and _split5(x) is not None


def _t5(x):
    n, f = _split5(x)
    if f == 0:
        return Fraction(2 * n + 3, 2)
    return n + f / 2


def _euclid(x, y):
    return abs(x - y)


def _halve(x):
    return x / 2


def _reals(x):
    return True


_SAMPLE_1 = SampleSet((-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0), "list(-2, -1, -0.5, 0, 0.5, 1, 2)")
_SPACE_1 = PMetricSpace("example1", _p1, None, _SAMPLE_1, 0.0)

_ENTRIES = (
    CatalogEntry("example1", _SPACE_1, SelfMap("T", _t1),
                 note="0-complete; fixed point 0 in U_p, fixed point 1 outside U_p"),
    CatalogEntry("example2", _SPACE_1, SelfMap("T1", _t1_modified),
                 note="condition (A) holds, condition (B) fails; no fixed point in U_p"),
    CatalogEntry("example3",
                 PMetricSpace("example3", _p3, lambda x: x in (0, 1),
                              SampleSet((0.0, 1.0), "list(0, 1)"), 0.0),
                 SelfMap("T", _t3, lambda x: x in (0, 1)), alpha=0.5,
                 note="period-2 swap; (A) fails for every alpha, its square satisfies (A) and (B)"),
    CatalogEntry("example4",
                 PMetricSpace("example4", _p4, _in_n0,
                              SampleSet((0.0, 1.0, 2.0, 3.0, 4.0, 5.0), "range(0, 5, 1)"), 0.0),
                 SelfMap("T", lambda m: m + 1, _in_n0),
                 note="compact metric space; (B) holds, no fixed point"),
    CatalogEntry("example5",
                 PMetricSpace("example5", _euclid, _in_u5,
                              SampleSet((0.0, 0.25, 0.5, 1.0, 1.25, 1.5, 2.0, 2.25, 2.5, 3.0),
                                        "list(0, 0.25, 0.5, 1, 1.25, 1.5, 2, 2.25, 2.5, 3)"),
                              0.0),
                 SelfMap("T", _t5, _in_u5),
                 note="complete metric space; (A) holds, (B) fails, no fixed point"),
    CatalogEntry("euclidean",
                 PMetricSpace("euclidean", _euclid, _reals,
                              SampleSet((-2.0, -1.0, 0.0, 1.0, 2.0), "list(-2, -1, 0, 1, 2)"), 0.0),
                 SelfMap("halve", _halve), alpha=0.5,
                 note="ordinary metric |x-y| with the contraction x/2"),
)

CATALOG = {e.id: e for e in _ENTRIES}
CATALOG_IDS = tuple(CATALOG)


def get(entry_id: str) -> CatalogEntry:
    try:
        return CATALOG[entry_id]
    except KeyError:
        raise KeyError(f"unknown catalog id {entry_id!r}; known: {', '.join(CATALOG_IDS)}") from None
