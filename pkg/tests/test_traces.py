import pytest
from hypothesis import given

from kvtrace.freetensor import Alphabet, Polynomial
from kvtrace.traces import (
    CyclicWord,
    TracePolynomial,
    canonical,
    necklace_basis,
    necklace_count,
    necklace_index,
    trace_project,
    words_of_weight,
)

from strategies import polys, words


@given(words(4, 1, 7))
def test_canonical_is_least_rotation(w):
    rots = [w[i:] + w[:i] for i in range(len(w))]
    assert canonical(w) == min(rots)
    assert CyclicWord(w).rotations() == set(rots)


@given(polys(3), polys(3))
def test_trace_kills_commutators(p, q):
    assert not trace_project(p * q - q * p)


@pytest.mark.parametrize("k,d", [(2, 4), (3, 5), (4, 6), (4, 1)])
def test_necklace_count(k, d):
    brute = {canonical(w) for w in words_of_weight(k // 2 if k % 2 == 0 else 1, k % 2, d)} if k != 3 else None
    got = len(necklace_basis(k // 2, 0, d)) if k % 2 == 0 else None
    if got is not None:
        assert got == necklace_count(k, d) == len(brute)


def test_weighted_necklaces():
    # (g,n) = (1,1), weight 2: |xx|, |xy|, |yy|, |z|
    basis = necklace_basis(1, 1, 2)
    assert len(basis) == 4
    assert all(Alphabet(1, 1).weight(w) == 2 for w in basis)
    assert necklace_basis(2, 0, 0) == ((),)


def test_index_and_degree_ops():
    idx = necklace_index(2, 0, 2)
    assert len(idx) == 10
    t = TracePolynomial.from_words({(1, 0): 2, (0,): 1, (): 3})
    assert t.terms[(0, 1)] == 2
    assert t.degree_part(1) == TracePolynomial({(0,): 1})
    assert t.drop_unit().truncate(1) == TracePolynomial({(0,): 1})
    assert t.format(Alphabet(2)).startswith("3*|1|")
