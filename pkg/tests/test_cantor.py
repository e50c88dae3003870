from fractions import Fraction

from hypothesis import given, settings, strategies as st

from continua.cantor import (ClopenSet, Cylinder, Partition, canonicalize, diameter, mesh,
                             refines, respects, words_at_depth)
from continua.partition import random_partition

words = st.text(alphabet="02", max_size=8)
clopens = st.lists(st.text(alphabet="02", max_size=5), max_size=6).map(ClopenSet)


def cyl(w):
    return ClopenSet.cylinder(w)


def test_diameters():
    assert diameter("") == 1
    assert diameter("0") == Fraction(1, 3)
    for w in words_at_depth(4):
        assert diameter(w) == Fraction(1, 81)
    assert ClopenSet(["0", "22"]).diameter == 1
    assert ClopenSet(["20", "22"]).diameter == Fraction(1, 3)


def test_set_ops_examples():
    assert cyl("0") | cyl("2") == ClopenSet.full()
    assert not (cyl("0") & cyl("2"))
    assert cyl("2") - cyl("20") == cyl("22")


@settings(max_examples=300)
@given(words, words)
def test_nesting_law(a, b):
    ca, cb = Cylinder(a), Cylinder(b)
    nested = a.startswith(b) or b.startswith(a)
    assert ca.disjoint(cb) != nested


@given(clopens, clopens)
def test_set_ops_stay_canonical(a, b):
    for r in (a | b, a & b, a - b, a.complement()):
        assert tuple(canonicalize(r.words)) == r.words
    assert a.complement().complement() == a
    assert (a | b).complement() == a.complement() & b.complement()
    assert (a - b) | (a & b) == a


def test_canonical_merges_siblings():
    assert ClopenSet(["00", "02", "2"]).words == ("",)
    assert ClopenSet(["0", "00"]).words == ("0",)


def test_refines_examples():
    q = Partition([cyl("0"), cyl("2")])
    p = Partition([cyl("0"), cyl("20"), cyl("22")])
    assert refines(p, q)
    assert not refines(Partition.trivial(), q)
    assert refines(p, p)


def test_respects_examples():
    assert respects(Partition([cyl("0"), cyl("2")]), [cyl("0")])
    assert not respects(Partition.trivial(), [cyl("0")])
    assert respects(Partition([cyl("0"), cyl("20"), cyl("22")]), [cyl("20")])


def test_mesh_examples():
    assert mesh(Partition.trivial()) == 1
    assert mesh(Partition([cyl("0"), cyl("2")])) == Fraction(1, 3)
    assert mesh(Partition.uniform(5)) == Fraction(1, 243)


def test_invalid_partitions_are_reported():
    assert Partition([cyl("0"), ClopenSet(["0", "2"])], validate=False).problems()
    assert Partition([cyl("0")], validate=False).problems()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32), st.integers(0, 2**32))
def test_refines_is_partial_order_and_mesh_monotone(s1, s2, s3):
    import random
    p, q, r = (random_partition(random.Random(s), 6) for s in (s1, s2, s3))
    assert refines(p, p)
    if refines(p, q) and refines(q, p):
        assert sorted(p.to_json()) == sorted(q.to_json())
    if refines(p, q) and refines(q, r):
        assert refines(p, r)
    if refines(p, q):
        assert mesh(p) <= mesh(q)
    fine = Partition.uniform(6)
    assert refines(fine, p) and mesh(fine) <= mesh(p)
