"""The compiled kernels and the pure-Python fallback must agree exactly."""

import importlib
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kvtrace import _pykernels as py
from kvtrace import kernels

from strategies import words

try:
    from kvtrace import _ckernels as ck
except ImportError:  # pragma: no cover - extension not built
    ck = None

needs_c = pytest.mark.skipif(ck is None, reason="compiled extension not built")
vecs = st.dictionaries(st.integers(0, 6), st.integers(-3, 3).map(Fraction), max_size=5)


@needs_c
@given(words(5, 0, 9))
def test_least_rotation(w):
    assert ck.least_rotation(w) == py.least_rotation(w)


@needs_c
@given(words(4, 1, 8))
def test_splits(w):
    assert ck.trace_coproduct_splits(w) == py.trace_coproduct_splits(w)


@needs_c
@given(vecs, st.lists(vecs, max_size=3))
def test_reduce_vector(v, raw):
    rows = {}
    for r in raw:
        r = {k: c for k, c in r.items() if c}
        if r:
            p = min(r)
            if p not in rows:
                rows[p] = {k: c / r[p] for k, c in r.items()}
    assert ck.reduce_vector(dict(v), rows) == py.reduce_vector(dict(v), rows)


@needs_c
@given(vecs, vecs, st.integers(-2, 2))
def test_axpy(a, b, c):
    x, y = dict(a), dict(a)
    ck.axpy(x, c, b)
    py.axpy(y, c, b)
    assert x == y


def test_selection_env_var():
    code = "import kvtrace.kernels as k; print(k.IMPLEMENTATION)"
    env = dict(os.environ, KVTRACE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.IMPLEMENTATION in ("cython", "python")
