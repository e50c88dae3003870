import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from continua.cantor import ClopenSet, Partition, mesh, refines, respects
from continua.partition import (InvalidRequest, NullPartitionRequest, null_partition,
                                random_request, witness_problems)


def check(req, p):
    assert p.is_valid()
    assert refines(p, req.base)
    assert respects(p, req.marked)
    assert mesh(p) < req.epsilon
    assert not witness_problems(p, req.epsilon)


def test_marked_half():
    req = NullPartitionRequest(Partition.trivial(), [ClopenSet.cylinder("0")], Fraction(1, 2))
    check(req, null_partition(req))


def test_nothing_binds():
    req = NullPartitionRequest(Partition.trivial(), [], Fraction(2))
    p = null_partition(req)
    assert p.to_json() == [[""]]


def test_depth_one_base():
    req = NullPartitionRequest(Partition.uniform(1), [ClopenSet(), ClopenSet.cylinder("20")],
                               Fraction(1, 9))
    p = null_partition(req)
    check(req, p)
    assert all(min(len(w) for w in piece.words) >= 2 for piece in p)


def test_bad_requests():
    with pytest.raises(InvalidRequest):
        null_partition(NullPartitionRequest(Partition.trivial(), [], Fraction(0)))
    with pytest.raises(InvalidRequest):
        null_partition(NullPartitionRequest(Partition.uniform(1), [ClopenSet.cylinder("2")],
                                            Fraction(1)))


def test_empty_marked_sets_are_skipped():
    req = NullPartitionRequest(Partition.uniform(1), [ClopenSet(), ClopenSet()], Fraction(1))
    assert all(piece for piece in null_partition(req))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_contract_on_random_requests(seed):
    req = random_request(random.Random(seed))
    p = null_partition(req)
    check(req, p)
    # feeding the output back in keeps the contract and refines it
    again = null_partition(NullPartitionRequest(p, [], req.epsilon))
    assert refines(again, p)


def test_deterministic():
    req = random_request(random.Random(7))
    assert null_partition(req) == null_partition(req)
