from fractions import Fraction

import pytest

from continua.cantor import ClopenSet
from continua.fans import cantor_fan_profile, lelek_profile
from continua.probes import degree_stats
from continua.quotient import (Band, Decomposition, InvalidDecomposition, UndecidableThreshold,
                               example20_build, gehman_decomposition, quotient_tree,
                               usc_decomposition_check)


def test_gehman_intervals():
    d = gehman_decomposition(3)
    by_stage = {b.stage: (b.lo, b.hi) for b in d.bands}
    assert by_stage[1] == (0, Fraction(1, 2))
    assert by_stage[2] == (Fraction(1, 2), Fraction(3, 4))
    assert len(d.all_bands) == 15


def test_gehman_tree_shape():
    m = quotient_tree(gehman_decomposition(2))
    assert m.is_tree()
    assert sum(n.startswith("b") for n in m.nodes) == 6
    assert len(m.endpoints) == 4
    s = degree_stats(m)
    assert set(s.ramifications.values()) == {3}


def test_root_only_is_a_star():
    m = quotient_tree(Decomposition(cantor_fan_profile(1), []))
    assert m.is_tree() and m.degree("p") == 2 and len(m.endpoints) == 2


def test_overlap_is_rejected():
    f = cantor_fan_profile(1)
    bands = [Band(ClopenSet.full(), Fraction(0), Fraction(1, 2), 1),
             Band(ClopenSet.cylinder("0"), Fraction(1, 4), Fraction(3, 4), 2)]
    with pytest.raises(InvalidDecomposition):
        quotient_tree(Decomposition(f, bands))
    rep = usc_decomposition_check(Decomposition(f, bands), Fraction(1, 9))
    assert rep.overlaps and not rep.ok


def test_band_above_profile_is_rejected():
    f = cantor_fan_profile(1)
    with pytest.raises(InvalidDecomposition):
        Band(ClopenSet.full(), Fraction(1, 2), Fraction(3, 2), 1)
    touch = Decomposition(f, [Band(ClopenSet.full(), Fraction(0), Fraction(1), 1)])
    assert usc_decomposition_check(touch, Fraction(1, 2)).endpoint_touches


def test_usc_counts():
    d = gehman_decomposition(4)
    assert usc_decomposition_check(d, Fraction(1, 9) + Fraction(1, 10**6)).counted == 3
    assert usc_decomposition_check(d, Fraction(1, 9)).max_stage_counted == 2
    assert usc_decomposition_check(d, Fraction(3)).counted == 0
    assert usc_decomposition_check(d, Fraction(1, 9)).ok


def test_staged_bands_first_stages():
    r = example20_build(2, lelek_profile(12))
    s1, s2 = r.stages
    assert (s1.threshold, s1.increment) == (Fraction(3, 4), Fraction(1, 2))
    assert (s2.threshold, s2.increment) == (Fraction(3, 8), Fraction(1, 4))
    assert r.ok
    for b in r.decomposition.bands:
        assert b.hi - b.lo == Fraction(1, 2 * b.stage)
        assert b.piece.diameter < Fraction(1, b.stage)
    assert quotient_tree(r.decomposition).is_tree()


def test_staged_bands_undecidable_at_shallow_depth():
    with pytest.raises(UndecidableThreshold) as info:
        example20_build(2, lelek_profile(12), working_depth=1)
    assert info.value.stage >= 1


def test_decomposition_roundtrip():
    d = example20_build(3, lelek_profile(10)).decomposition
    again = Decomposition.from_json(d.to_json())
    assert again.to_json() == d.to_json()
