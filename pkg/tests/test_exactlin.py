from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kvtrace.exactlin import (
    Echelon,
    Matrix,
    MismatchedAmbient,
    Subspace,
    column_kernel,
    echelon_kernel,
    solve,
    subspace_ops,
)

vec4 = st.lists(st.integers(-3, 3), min_size=4, max_size=4).map(lambda v: {i: Fraction(x) for i, x in enumerate(v) if x})
vecs = st.lists(vec4, max_size=5)


def _rank_by_gauss(rows, n):
    # plain dense elimination, independent of Echelon
    m = [[Fraction(r.get(i, 0)) for i in range(n)] for r in rows]
    rank, col = 0, 0
    while rank < len(m) and col < n:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def test_echelon_dependency():
    e = Echelon(track=True)
    assert e.add({0: 1, 1: 1}, "a") is None
    assert e.add({1: 1}, "b") is None
    dep = e.add({0: 2, 1: 3}, "c")
    assert dep == {"c": 1, "a": -2, "b": -1}


def test_subspace_basics():
    s = Subspace(3, [{0: 1, 1: 1}, {1: 1}])
    assert s.dim == 2
    assert s.contains_vector({0: 5})
    assert not s.contains_vector({2: 1})
    assert Subspace.full(3).quotient_dim(s) == 1
    assert s.intersect(Subspace(3, [{0: 1, 2: 1}])).dim == 0


def test_mismatched_ambient():
    with pytest.raises(MismatchedAmbient):
        Subspace(2).sum(Subspace(3))


def test_subspace_ops_dispatch():
    a = Subspace(2, [{0: 1}])
    b = Subspace(2, [{1: 1}])
    assert subspace_ops(a, b, "sum") == Subspace.full(2)
    assert subspace_ops(a, [1, 0], "contains_vector")
    with pytest.raises(ValueError):
        subspace_ops(a, b, "nope")


@given(vecs)
def test_dim_matches_dense_rank(rows):
    assert Subspace(4, rows).dim == _rank_by_gauss(rows, 4)


@given(vecs, vecs)
def test_dimension_formula(a, b):
    A, B = Subspace(4, a), Subspace(4, b)
    assert A.sum(B).dim + A.intersect(B).dim == A.dim + B.dim
    assert A.sum(B).contains(A) and A.contains(A.intersect(B))


@given(vecs)
def test_kernel_vectors_are_in_kernel(cols):
    rank, ker = column_kernel(cols)
    assert rank + len(ker) == len(cols)
    for k in ker:
        tot = {}
        for j, c in k.items():
            for i, v in cols[j].items():
                tot[i] = tot.get(i, 0) + c * v
        assert not any(tot.values())


@given(vecs, vec4)
def test_solve(cols, target):
    sol = solve(cols, target)
    span = Subspace(4, cols)
    assert (sol is not None) == span.contains_vector(target)
    if sol is not None:
        tot = {}
        for j, c in sol.items():
            for i, v in cols[j].items():
                tot[i] = tot.get(i, 0) + c * v
        assert {i: v for i, v in tot.items() if v} == target


def test_matrix_roundtrip_and_kernel():
    m = Matrix.from_dense([[1, 2, 3], [2, 4, 6]])
    assert m.to_dense()[1][2] == 6
    assert m.apply({0: 1, 1: 1}) == {0: 3, 1: 6}
    rank, ker = echelon_kernel(m)
    assert rank == 1 and ker.dim == 2
    with pytest.raises(IndexError):
        Matrix(1, 1, {(2, 0): 1})
