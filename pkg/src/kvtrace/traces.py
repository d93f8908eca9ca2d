"""Cyclic words, the trace projection |.| and trace-space coordinates."""

from functools import lru_cache

from .freetensor import Alphabet, LinearCombination, Polynomial
from .kernels import least_rotation


def canonical(word):
    """Lexicographically least rotation (the stored representative)."""
    return least_rotation(tuple(word))


class CyclicWord(tuple):
    """A necklace, stored as its canonical rotation."""

    def __new__(cls, word=()):
        return super().__new__(cls, least_rotation(tuple(word)))

    def rotations(self):
        n = len(self)
        return {tuple(self[i:] + self[:i]) for i in range(max(n, 1))}


class TracePolynomial(LinearCombination):
    """Element of |T(H)|, keyed by canonical words."""

    __slots__ = ()

    @classmethod
    def from_words(cls, terms):
        out = {}
        for w, c in dict(terms).items():
            k = least_rotation(tuple(w))
            out[k] = out.get(k, 0) + c
        return cls(out)

    def degree_part(self, d, alphabet=None):
        wt = alphabet.weight if alphabet else len
        return TracePolynomial._wrap({w: c for w, c in self.terms.items() if wt(w) == d})

    def truncate(self, N, alphabet=None):
        wt = alphabet.weight if alphabet else len
        return TracePolynomial._wrap({w: c for w, c in self.terms.items() if wt(w) <= N})

    def drop_unit(self):
        """Remove the |1| component (the reduction modulo constants)."""
        return TracePolynomial._wrap({w: c for w, c in self.terms.items() if w})

    def weights(self, alphabet=None):
        wt = alphabet.weight if alphabet else len
        return sorted({wt(w) for w in self.terms})

    def format(self, alphabet):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            body = f"|{alphabet.format_word(w)}|"
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


class TraceTensor2(LinearCombination):
    """Element of |T(H)| (x) |T(H)|, keyed by pairs of canonical words."""

    __slots__ = ()

    def swap(self):
        return TraceTensor2._wrap({(b, a): c for (a, b), c in self.terms.items()})

    def drop_units(self):
        return TraceTensor2._wrap({k: c for k, c in self.terms.items() if k[0] and k[1]})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], len(kv[0][1]), kv[0][1]))

    def format(self, alphabet):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.sorted_terms():
            body = f"|{alphabet.format_word(a)}| (x) |{alphabet.format_word(b)}|"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def trace_project(p):
    out = {}
    for w, c in p.terms.items():
        k = least_rotation(w)
        nv = out.get(k, 0) + c
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return TracePolynomial._wrap(out)


def trace_of_word(word, coef=1):
    return TracePolynomial({least_rotation(tuple(word)): coef})


def representative(t):
    """Lift a trace polynomial to T(H) through the stored representatives."""
    return Polynomial._wrap(dict(t.terms))


def _weighted_sequences(alphabet, d):
    """All words of weight exactly d, in lexicographic order."""
    letters = list(alphabet.letters())
    wts = [alphabet.weight_of(c) for c in letters]
    out = []

    def rec(prefix, remaining):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for c, w in zip(letters, wts):
            if w <= remaining:
                prefix.append(c)
                rec(prefix, remaining - w)
                prefix.pop()

    rec([], d)
    return out


@lru_cache(maxsize=None)
def words_of_weight(g, n, d):
    return tuple(_weighted_sequences(Alphabet(g, n), d))


@lru_cache(maxsize=None)
def necklace_basis(g, n, d):
    """All weight-d cyclic words in canonical order (length, then lex)."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    if d == 0:
        return (CyclicWord(()),)
    alphabet = Alphabet(g, n)
    if n == 0:
        found = _necklaces_fixed_length(alphabet.size, d)
    else:
        found = {least_rotation(w) for w in _weighted_sequences(alphabet, d)}
    return tuple(CyclicWord(w) for w in sorted(found, key=lambda w: (len(w), w)))


def _necklaces_fixed_length(k, n):
    """Necklaces of length n over range(k) (FKM generation)."""
    out = []
    a = [0] * (n + 1)

    def gen(t, p):
        if t > n:
            if n % p == 0:
                out.append(tuple(a[1:]))
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        for j in range(a[t - p] + 1, k):
            a[t] = j
            gen(t + 1, t)

    gen(1, 1)
    return out


@lru_cache(maxsize=None)
def necklace_index(g, n, d):
    return {w: i for i, w in enumerate(necklace_basis(g, n, d))}


def necklace_count(k, d):
    """(1/d) sum_{e|d} phi(e) k^(d/e)."""
    if d == 0:
        return 1
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _phi(e) * k ** (d // e)
    return total // d


def _phi(n):
    res = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            res -= res // p
        p += 1
    if m > 1:
        res -= res // m
    return res
