from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from continua.fans import (KEEP_DIGIT, MultiplierSchedule, StepFunction, cantor_fan_profile,
                           endpoint_density_check, fan_geometry, lelek_profile)


def test_cantor_profile():
    assert cantor_fan_profile(0).values == {"": 1}
    f = cantor_fan_profile(2)
    assert set(f.values) == {"00", "02", "20", "22"} and set(f.values.values()) == {1}
    assert f.is_monotone()


def test_lelek_first_step():
    f = lelek_profile(1, MultiplierSchedule([Fraction(1, 2)]))
    assert f.values == {"0": 1, "2": Fraction(1, 2)}
    assert lelek_profile(0).values == {"": 1}


@pytest.mark.parametrize("depth", [3, 8, 12])
def test_lelek_keep_and_max(depth):
    f = lelek_profile(depth)
    assert f.is_monotone()
    for d in range(depth):
        for w, v in f.levels[d].items():
            kids = f.levels[d + 1][w + "0"], f.levels[d + 1][w + "2"]
            assert v == max(kids)
            assert f.levels[d + 1][w + KEEP_DIGIT] == v
            assert kids.count(v) == 1


def test_profiles_are_deterministic():
    assert lelek_profile(10).values == lelek_profile(10).values


@settings(max_examples=40)
@given(st.integers(1, 6), st.integers(1, 2**6 - 1))
def test_schedule_density(k, j):
    s = MultiplierSchedule.default()
    q = Fraction(j, 2**6)
    i = s.first_index_within(q, k)
    assert i <= s.density_bound(k)
    assert all(0 < x < 1 for x in s.take(200))


def test_schedule_values_recur():
    s = MultiplierSchedule.default()
    seen = s.take(4000).count(Fraction(1, 2))
    assert seen >= 5


def test_density_check():
    assert endpoint_density_check(cantor_fan_profile(4), 2, Fraction(1, 2)).ok
    assert endpoint_density_check(lelek_profile(12), 3, Fraction(1, 8)).ok
    with pytest.raises(ValueError):
        endpoint_density_check(lelek_profile(4), 2, Fraction(0))
    with pytest.raises(ValueError):
        endpoint_density_check(lelek_profile(2), 3, Fraction(1, 8))


def test_density_improves_with_depth():
    gaps = [endpoint_density_check(lelek_profile(d), 4, Fraction(1, 32)).worst_gap
            for d in (8, 10, 12, 14)]
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))


def test_fan_geometry():
    m = fan_geometry(cantor_fan_profile(1))
    assert m.is_tree() and m.degree("p") == 2 and len(m.endpoints) == 2
    m = fan_geometry(lelek_profile(1, MultiplierSchedule([Fraction(1, 2)])))
    heights = sorted(m.labels[n]["height"] for n in m.endpoints)
    assert heights == ["1/1", "1/2"]
    f = lelek_profile(6)
    m = fan_geometry(f)
    assert len(m.endpoints) == sum(v > 0 for v in f.values.values())
    assert not m.planarity_problems()


def test_zero_heights_are_dropped():
    f = StepFunction(1, {"0": Fraction(1), "2": Fraction(0)})
    assert len(fan_geometry(f).endpoints) == 1


def test_profile_roundtrip():
    f = lelek_profile(5)
    assert StepFunction.from_json(f.to_json()).values == f.values
