import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmfix import catalog
from pmfix.errors import DomainError
from pmfix.orbits import (SelfMap, default_tail, detect_period, identity_map, is_a_cauchy, orbit,
                          orbit_diagnostics, orbit_dump, table_map)
from pmfix.spaces import random_finite_space

E1, E3, E5, EU = (catalog.get(k) for k in ("example1", "example3", "example5", "euclidean"))


def test_orbit_examples():
    assert orbit(E1.map, -1.0, 3).points == (-1.0, -0.5, -0.25, -0.125)
    assert orbit(E1.map, 0.0, 3).points == (0.0, 0.0, 0.0, 0.0)
    assert orbit(E3.map, 0.0, 3).points == (0.0, 1.0, 0.0, 1.0)
    assert orbit(E1.map, -1.0, 5).Q == 5


def test_orbit_requires_positive_q():
    with pytest.raises(ValueError):
        orbit(E1.map, 0.0, 0)


def test_orbit_leaving_domain_raises():
    T = SelfMap("escape", lambda x: x + 0.5, lambda x: x in (0, 1))
    with pytest.raises(DomainError):
        orbit(T, 0.0, 3)
    with pytest.raises(DomainError):
        SelfMap("nan", lambda x: float("nan"))(0.0)


def test_power_composes_exactly():
    T2 = E3.map.power(2)
    assert T2(0.0) == 0 and T2(1.0) == 1
    assert E1.map.power(3)(-8.0) == -1
    with pytest.raises(ValueError):
        E1.map.power(0)


def test_example5_orbit_stays_exact():
    pts = orbit(E5.map, 1.0, 6).points
    assert [float(p) for p in pts] == [1, 2.5, 2.25, 2.125, 2.0625, 2.03125, 2.015625]


def test_diagnostics_example1_from_one():
    d = orbit_diagnostics(E1.space, orbit(E1.map, 1.0, 40))
    assert set(d.sizes[1:]) == {1}
    assert d.r_x_estimate == 1


def test_diagnostics_metric_sizes_zero():
    d = orbit_diagnostics(EU.space, orbit(EU.map, 2.0, 40))
    assert set(d.sizes) == {0} and d.r_x_estimate == 0


def test_lemma1_bound_example1():
    d = orbit_diagnostics(E1.space, orbit(E1.map, -1.0, 40), alpha=0.75)
    assert d.lemma1_bound == 4
    assert d.lemma1_max == 1 - 2 ** -40  # |x_0 - x_40|; the sup 1 is not attained
    assert d.lemma1_ok


def test_cauchy_examples():
    v = is_a_cauchy(E1.space, orbit(E1.map, -1.0, 60), 0.0, 20)
    assert v.passed and v.deviation <= 2 * 2 ** -40
    v3 = is_a_cauchy(E3.space, orbit(E3.map, 0.0, 60), 0.0, 20)
    assert not v3.passed and v3.deviation == 2
    vc = is_a_cauchy(E1.space, orbit(E1.map, 1.0, 30), 1.0, 20)
    assert vc.passed and vc.deviation == 0


def test_cauchy_requires_long_orbit():
    with pytest.raises(ValueError):
        is_a_cauchy(E1.space, orbit(E1.map, -1.0, 5), 0.0, 20)
    with pytest.raises(ValueError):
        orbit_diagnostics(E1.space, orbit(E1.map, -1.0, 5), tail=20)


def test_period_hint_example3():
    assert orbit_diagnostics(E3.space, orbit(E3.map, 0.0, 200)).period_hint == 2


def test_detect_period():
    assert detect_period([1, 2, 3, 1, 2, 3, 1]) == 3
    assert detect_period([5, 5, 5]) == 1
    assert detect_period([1, 2, 3]) is None
    assert detect_period(list(range(40)) * 2, cap=16) is None


def test_default_tail():
    assert default_tail(30) == 20 and default_tail(200) == 50


def test_orbit_dump_format():
    text = orbit_dump(E1.space, orbit(E1.map, -1.0, 3))
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[0].split("\t") == ["0", "-1", "0", "0.5"]
    assert lines[2].split("\t") == ["2", "-0.25", "0", "0.125"]
    third = orbit_dump(E1.space, orbit(E1.map, 0.3, 1)).split("\t")
    assert third[1] == "0.29999999999999999"


def test_identity_map():
    assert orbit(identity_map(), 3.0, 2).points == (3.0, 3.0, 3.0)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10 ** 6), n=st.integers(2, 6), data=st.data())
def test_orbit_invariants_on_finite_spaces(seed, n, data):
    space = random_finite_space(seed, n)
    images = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    T = table_map(images)
    x0 = float(data.draw(st.integers(0, n - 1)))
    orb = orbit(T, x0, 30)
    assert orb.points[0] == x0
    assert all(orb[q + 1] == T(orb[q]) for q in range(30))
    assert orbit(T, x0, 30) == orb
    d = orbit_diagnostics(space, orb, alpha=0.5, tail=20)
    assert d.liminf_size <= d.limsup_size
    assert (d.r_x_estimate is not None) == (d.limsup_size - d.liminf_size <= 1e-9)
    # finite orbits are eventually periodic within n steps
    assert d.period_hint is not None and d.period_hint <= n
    if d.lemma1_ok:
        pts = orb.points
        assert all(space(a, b) <= d.lemma1_bound + 1e-9 for a in pts for b in pts)
