# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; see _pykernels.py for the reference semantics."""

from libc.stdlib cimport malloc, free

IMPLEMENTATION = "cython"


cdef int _least_start(int *s, int n):
    # least rotation start index via the two-pointer (Duval-style) scan
    cdef int i = 0, j = 1, k = 0, a, b
    while i < n and j < n and k < n:
        a = s[(i + k) % n]
        b = s[(j + k) % n]
        if a == b:
            k += 1
            continue
        if a > b:
            i = i + k + 1
        else:
            j = j + k + 1
        if i == j:
            j += 1
        k = 0
    return i if i < j else j


def least_rotation(word):
    word = tuple(word)
    cdef int n = len(word)
    if n < 2:
        return word
    cdef int *s = <int *> malloc(n * sizeof(int))
    cdef int i, start
    try:
        for i in range(n):
            s[i] = word[i]
        start = _least_start(s, n)
        if start == 0:
            return word
        return tuple([s[(start + i) % n] for i in range(n)])
    finally:
        free(s)


cdef tuple _canon(int *buf, int m):
    cdef int start, i
    if m < 2:
        return tuple([buf[i] for i in range(m)])
    start = _least_start(buf, m)
    return tuple([buf[(start + i) % m] for i in range(m)])


def trace_coproduct_splits(word):
    word = tuple(word)
    cdef int n = len(word)
    cdef long mask, full = (1 << n) - 1
    cdef int i, nl, nr
    cdef int *w = <int *> malloc((n + 1) * sizeof(int))
    cdef int *left = <int *> malloc((n + 1) * sizeof(int))
    cdef int *right = <int *> malloc((n + 1) * sizeof(int))
    cdef dict out = {}
    try:
        for i in range(n):
            w[i] = word[i]
        for mask in range(1, full):
            nl = 0
            nr = 0
            for i in range(n):
                if (mask >> i) & 1:
                    left[nl] = w[i]
                    nl += 1
                else:
                    right[nr] = w[i]
                    nr += 1
            key = (_canon(left, nl), _canon(right, nr))
            out[key] = out.get(key, 0) + 1
        return out
    finally:
        free(w)
        free(left)
        free(right)


def reduce_vector(dict vec, dict rows):
    cdef dict out = dict(vec)
    cdef list hits = [c for c in vec if c in rows]
    cdef dict row
    for p in hits:
        coef = out.pop(p, 0)
        if not coef:
            continue
        row = <dict> rows[p]
        for c, v in row.items():
            if c == p:
                continue
            nv = out.get(c, 0) - coef * v
            if nv:
                out[c] = nv
            else:
                out.pop(c, None)
    return out


def axpy(dict target, coef, dict source):
    for c, v in source.items():
        nv = target.get(c, 0) + coef * v
        if nv:
            target[c] = nv
        else:
            target.pop(c, None)
    return target
