"""Pure-Python versions of the hot kernels.

The compiled module ``kvtrace._ckernels`` exports the same four functions
with identical semantics; ``kvtrace.kernels`` picks one at import time.
"""

IMPLEMENTATION = "python"


def least_rotation(word):
    """Lexicographically least rotation of ``word`` (Booth's algorithm).

    >>> least_rotation((2, 0, 1))
    (0, 1, 2)
    >>> least_rotation((1, 0, 1, 0))
    (0, 1, 0, 1)
    """
    n = len(word)
    if n < 2:
        return tuple(word)
    s = word + word
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return tuple(s[k:k + n])


def trace_coproduct_splits(word):
    """Reduced coproduct of the cyclic word ``|word|`` on necklace pairs.

    Returns a dict ``(left, right) -> multiplicity`` summed over all proper
    non-empty position subsets, both legs canonicalised.
    """
    n = len(word)
    out = {}
    full = (1 << n) - 1
    for mask in range(1, full):
        left = []
        right = []
        for i in range(n):
            if mask >> i & 1:
                left.append(word[i])
            else:
                right.append(word[i])
        key = (least_rotation(tuple(left)), least_rotation(tuple(right)))
        out[key] = out.get(key, 0) + 1
    return out


def reduce_vector(vec, rows):
    """Reduce the sparse vector ``vec`` modulo an RREF basis.

    ``rows`` maps pivot column -> row dict with coefficient 1 at the pivot
    and zeros at every other pivot column. ``vec`` is not modified.
    """
    out = dict(vec)
    for p in [c for c in vec if c in rows]:
        coef = out.pop(p, 0)
        if not coef:
            continue
        for c, v in rows[p].items():
            if c == p:
                continue
            nv = out.get(c, 0) - coef * v
            if nv:
                out[c] = nv
            else:
                out.pop(c, None)
    return out


def axpy(target, coef, source):
    """In place ``target += coef * source`` on sparse dicts, dropping zeros."""
    for c, v in source.items():
        nv = target.get(c, 0) + coef * v
        if nv:
            target[c] = nv
        else:
            target.pop(c, None)
    return target
