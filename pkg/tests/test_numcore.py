import math

import pytest
from hypothesis import given, settings, strategies as st

import naive
from redgraph import numcore
from redgraph.errors import NotNumericalError, PreconditionError, ResourceError


def test_apery_of_456():
    assert numcore.apery_oracle([4, 5, 6], 4) == [0, 5, 6, 11]


def test_frobenius_examples():
    assert numcore.frobenius_oracle([5, 7]) == 23
    assert numcore.frobenius_oracle([4, 5, 6]) == 7
    assert numcore.frobenius_oracle([1]) == -1
    assert numcore.frobenius_oracle([1, 5]) == -1
    assert numcore.frobenius_oracle([9, 12, 15, 20]) == 46


def test_gaps_and_genus():
    d = numcore.gaps_oracle([4, 5, 6])
    assert d.gaps == (1, 2, 3, 7)
    assert d.frobenius == 7 and d.genus == 4
    assert numcore.gaps_oracle([2, 3]).gaps == (1,)


def test_power_sums():
    assert [numcore.power_sum_oracle([4, 5, 6], k) for k in range(3)] == [4, 13, 63]


def test_minimal_generators():
    assert numcore.minimal_generators([3, 6, 10]) == (3, 10)
    assert numcore.minimal_generators([4, 6, 9, 10]) == (4, 6, 9)
    assert numcore.minimal_generators([1, 7]) == (1,)


def test_symmetry_classes():
    assert numcore.classify_symmetry([5, 7]) == "symmetric"
    assert numcore.classify_symmetry([3, 4, 5]) == "pseudo-symmetric"
    assert numcore.classify_symmetry([1]) == "symmetric"
    assert numcore.classify_symmetry([4, 5, 11]) == "neither"


def test_errors():
    with pytest.raises(NotNumericalError):
        numcore.frobenius_oracle([4, 6])
    with pytest.raises(NotNumericalError):
        numcore.apery_oracle([4, 6], 4)
    with pytest.raises(PreconditionError):
        numcore.apery_oracle([4, 5], 7)
    with pytest.raises(PreconditionError):
        numcore.apery_oracle([4, 5], 0)
    with pytest.raises(PreconditionError):
        numcore.frobenius_oracle([])
    with pytest.raises(ResourceError):
        numcore.membership_table([3, 5], numcore.MEMORY_CEILING + 1)


def test_membership_table():
    assert numcore.membership_table([3, 5], 9) == [True, False, False, True, False, True,
                                                    True, False, True, True]


gen_sets = st.lists(st.integers(2, 30), min_size=1, max_size=4).map(lambda xs: xs + [31])


@settings(max_examples=80, deadline=None)
@given(gen_sets)
def test_matches_naive(gens):
    assert numcore.frobenius_oracle(gens) == naive.frobenius(gens)
    assert list(numcore.gaps_oracle(gens).gaps) == naive.gaps(gens)
    a = min(gens)
    assert numcore.apery_oracle(gens, a) == naive.apery(gens, a)


@settings(max_examples=60, deadline=None)
@given(gen_sets)
def test_apery_one_per_residue_and_independent_of_choice(gens):
    f = numcore.frobenius_oracle(gens)
    for a in set(gens):
        ap = numcore.apery_oracle(gens, a)
        assert len(ap) == a and {x % a for x in ap} == set(range(a))
        assert max(ap) - a == f
        bound = f + 2 * a + 5
        member = numcore.membership_table(gens, bound)
        spanned = {x + k * a for x in ap for k in range(bound // a + 1) if x + k * a <= bound}
        assert spanned == {x for x in range(bound + 1) if member[x]}


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 60), st.integers(2, 60))
def test_sylvester_pairs(a, b):
    if math.gcd(a, b) != 1:
        return
    d = numcore.gaps_oracle([a, b])
    assert d.frobenius == a * b - a - b
    assert 2 * d.genus == a * b - a - b + 1


@settings(max_examples=60, deadline=None)
@given(gen_sets)
def test_minimal_generators_regenerate(gens):
    mg = numcore.minimal_generators(gens)
    bound = max(numcore.frobenius_oracle(gens), 0) + max(gens) + 1
    assert numcore.membership_table(mg, bound) == numcore.membership_table(gens, bound)
