from itertools import product
from math import comb

import pytest
from hypothesis import given

from kvtrace.freetensor import Polynomial, lyndon_lie_basis
from kvtrace.hopfkernel import (
    TensorPolynomial2,
    antipode,
    canonical_subspaces,
    coproduct,
    counit,
    free_to_omega_image,
    kernel_by_class,
    kernel_reduced_coproduct,
    reduced_coproduct,
    reduced_coproduct_matrix,
    tensor_map,
    tensor_multiply,
    trace_reduced_coproduct,
    wedge_elements,
)
from kvtrace.traces import TracePolynomial, canonical

from strategies import polys, words


def _triple(t, left):
    # (Delta (x) id) or (id (x) Delta) as a dict keyed by word triples
    out = {}
    for (a, b), c in t.terms.items():
        inner = coproduct(Polynomial({a if left else b: 1}))
        for (u, v), d in inner.terms.items():
            key = (u, v, b) if left else (a, u, v)
            out[key] = out.get(key, 0) + c * d
    return {k: v for k, v in out.items() if v}


@given(polys(3, max_len=4))
def test_coassociative(p):
    d = coproduct(p)
    assert _triple(d, True) == _triple(d, False)


@given(polys(3, max_len=4))
def test_counit(p):
    left = {}
    for (a, b), c in coproduct(p).terms.items():
        if not a:
            left[b] = left.get(b, 0) + c
    assert Polynomial(left) == p


@given(polys(3, max_len=4))
def test_antipode_axiom(p):
    # m (S (x) id) Delta = eps
    t = tensor_map(coproduct(p), antipode, lambda q: q)
    assert tensor_multiply(t) == Polynomial({(): counit(p)}) if counit(p) else not tensor_multiply(t)


@given(polys(2, max_len=3), polys(2, max_len=3))
def test_coproduct_multiplicative(p, q):
    lhs = coproduct(p * q)
    out = {}
    for (a, b), c in coproduct(p).terms.items():
        for (u, v), d in coproduct(q).terms.items():
            out[(a + u, b + v)] = out.get((a + u, b + v), 0) + c * d
    assert lhs == TensorPolynomial2(out)


def test_reduced_coproduct_of_primitive():
    for e in lyndon_lie_basis(2, 0, 3):
        assert not reduced_coproduct(e.poly)


@given(words(4, 1, 6))
def test_trace_splits_against_subsets(w):
    # oracle: enumerate proper nonempty subsets by position lists
    n = len(w)
    expected = {}
    for bits in product((0, 1), repeat=n):
        if 0 < sum(bits) < n:
            a = canonical(tuple(c for c, b in zip(w, bits) if b))
            b = canonical(tuple(c for c, b in zip(w, bits) if not b))
            expected[(a, b)] = expected.get((a, b), 0) + 1
    got = trace_reduced_coproduct(TracePolynomial.from_words({w: 1}))
    assert got.terms == expected


@pytest.mark.parametrize("g", [1, 2, 3])
def test_kernel_free_low_degrees(g):
    h = 2 * g
    assert kernel_reduced_coproduct(g, 1).dim == h
    assert kernel_reduced_coproduct(g, 2).dim == 0
    k3 = kernel_reduced_coproduct(g, 3).kernel
    assert k3 == canonical_subspaces(g, 3, "wedge") and k3.dim == comb(h, 3)


def test_matrix_shape_and_classes():
    m, keys = reduced_coproduct_matrix(2, 3)
    assert m.cols == (4 ** 3 + 2 * 4) // 3 and m.rows == len(keys)
    by = kernel_by_class(2, 3)
    assert sum(by.values()) == 4


def test_wedge_elements_alternate():
    (w,) = wedge_elements(1, 2)
    assert not w  # |xy - yx| = 0
    assert len(wedge_elements(2, 3)) == 4


def test_strict_inclusion_g2_d4():
    ker = kernel_reduced_coproduct(2, 4, "omega").kernel
    hl = canonical_subspaces(2, 4, "H_times_L", "omega")
    assert ker.contains(hl) and ker.dim > hl.dim


def test_surjectivity_probe_small():
    for d in (1, 2, 3):
        assert free_to_omega_image(2, d) == kernel_reduced_coproduct(2, d, "omega").kernel


def test_omega_model_needs_closed_surface():
    with pytest.raises(ValueError):
        canonical_subspaces(1, 2, "boundary_targets", "omega", n=1)
    with pytest.raises(ValueError):
        canonical_subspaces(1, 2, "bogus")
