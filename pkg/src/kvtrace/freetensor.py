"""The free associative algebra T(H) on x_1..x_g, y_1..y_g, z_1..z_n.

Letters are small integers: x_i -> i-1, y_i -> g+i-1, z_j -> 2g+j-1, so the
integer order is the canonical term order (X < Y < Z, then by index).
Words are tuples of letters; polynomials map words to Fractions.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .kernels import axpy


class LetterOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class Letter:
    kind: str  # "X", "Y" or "Z"
    index: int  # 1-based


@dataclass(frozen=True)
class Alphabet:
    g: int
    n: int = 0

    @property
    def size(self):
        return 2 * self.g + self.n

    def code(self, kind, index):
        kind = kind.upper()
        bound = self.n if kind == "Z" else self.g
        if kind not in ("X", "Y", "Z") or not 1 <= index <= bound:
            raise LetterOutOfRange(f"{kind.lower()}{index} not in ambient (g={self.g}, n={self.n})")
        if kind == "X":
            return index - 1
        if kind == "Y":
            return self.g + index - 1
        return 2 * self.g + index - 1

    def x(self, i):
        return self.code("X", i)

    def y(self, i):
        return self.code("Y", i)

    def z(self, j):
        return self.code("Z", j)

    def letter(self, code):
        if not 0 <= code < self.size:
            raise LetterOutOfRange(f"letter code {code} outside alphabet of size {self.size}")
        if code < self.g:
            return Letter("X", code + 1)
        if code < 2 * self.g:
            return Letter("Y", code - self.g + 1)
        return Letter("Z", code - 2 * self.g + 1)

    def name(self, code):
        let = self.letter(code)
        return f"{let.kind.lower()}{let.index}"

    def weight_of(self, code):
        return 2 if code >= 2 * self.g else 1

    def weight(self, word):
        if self.n == 0:
            return len(word)
        z0 = 2 * self.g
        return len(word) + sum(1 for c in word if c >= z0)

    def letters(self):
        return range(self.size)

    def symplectic_letters(self):
        return range(2 * self.g)

    def format_word(self, word):
        if not word:
            return "1"
        return "*".join(self.name(c) for c in word)


class LinearCombination:
    """Sparse linear combination of hashable keys with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, v in dict(terms).items():
                if v:
                    clean[k] = v if isinstance(v, Fraction) else Fraction(v)
        self.terms = clean

    @classmethod
    def _wrap(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, key, coef=1):
        return cls({key: coef})

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self.terms)
        axpy(out, 1, other.terms)
        return self._wrap(out)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self.terms)
        axpy(out, -1, other.terms)
        return self._wrap(out)

    def __neg__(self):
        return self._wrap({k: -v for k, v in self.terms.items()})

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return self._wrap({})
        return self._wrap({k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def coefficient(self, key):
        return self.terms.get(key, Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]) if isinstance(kv[0], tuple) else kv[0])

    def __repr__(self):
        return f"{type(self).__name__}({dict(self.sorted_terms())!r})"


class Polynomial(LinearCombination):
    """Element of T(H): a combination of words (tuples of letter codes)."""

    __slots__ = ()

    @classmethod
    def one(cls):
        return cls({(): 1})

    @classmethod
    def letter(cls, code):
        return cls({(code,): 1})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return multiply(self, other)

    def degree_part(self, d, alphabet=None):
        wt = alphabet.weight if alphabet else len
        return Polynomial._wrap({w: c for w, c in self.terms.items() if wt(w) == d})

    def truncate(self, N, alphabet=None):
        wt = alphabet.weight if alphabet else len
        return Polynomial._wrap({w: c for w, c in self.terms.items() if wt(w) <= N})

    def weights(self, alphabet=None):
        wt = alphabet.weight if alphabet else len
        return sorted({wt(w) for w in self.terms})

    def constant(self):
        return self.terms.get((), Fraction(0))

    def format(self, alphabet):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            body = alphabet.format_word(w)
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            elif body == "1":
                parts.append(str(c))
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def multiply(p, q, truncate=None, alphabet=None):
    """Concatenation product; words of weight > truncate are dropped."""
    out = {}
    wt = alphabet.weight if alphabet else len
    for u, a in p.terms.items():
        wu = wt(u) if truncate is not None else 0
        for v, b in q.terms.items():
            if truncate is not None and wu + wt(v) > truncate:
                continue
            w = u + v
            nv = out.get(w, 0) + a * b
            if nv:
                out[w] = nv
            else:
                out.pop(w, None)
    return Polynomial._wrap(out)


def bracket(a, b, truncate=None, alphabet=None):
    return multiply(a, b, truncate, alphabet) - multiply(b, a, truncate, alphabet)


def power(p, k, truncate=None, alphabet=None):
    out = Polynomial.one()
    for _ in range(k):
        out = multiply(out, p, truncate, alphabet)
    return out


@dataclass(frozen=True)
class Grading:
    weight: int
    multidegree: tuple
    d_class: tuple
    redundancy: int


def multidegree(word, alphabet):
    """Letter counts ordered (x1, y1, x2, y2, ..., z1, ..., zn)."""
    g = alphabet.g
    lam = [0] * (2 * g + alphabet.n)
    for c in word:
        if c < g:
            lam[2 * c] += 1
        elif c < 2 * g:
            lam[2 * (c - g) + 1] += 1
        elif c < alphabet.size:
            lam[c] += 1
        else:
            raise LetterOutOfRange(f"letter code {c} outside alphabet of size {alphabet.size}")
    return tuple(lam)


def d_class_of(lam, g):
    """Canonical key of the class of a multidegree in Z^2g / <e1+e2 = e3+e4 = ...>."""
    key = tuple(lam[2 * i] - lam[2 * i + 1] for i in range(g))
    return key + (sum(lam[: 2 * g]),) + tuple(lam[2 * g:])


def grade(word, g, n=0):
    alphabet = Alphabet(g, n)
    for c in word:
        if not 0 <= c < alphabet.size:
            raise LetterOutOfRange(f"letter code {c} outside alphabet of size {alphabet.size}")
    lam = multidegree(word, alphabet)
    red = sum(min(lam[2 * i], lam[2 * i + 1]) for i in range(g))
    return Grading(alphabet.weight(word), lam, d_class_of(lam, g), red)


# ---------------------------------------------------------------- Lie part


def lyndon_words(k, max_len):
    """All Lyndon words over range(k) of length <= max_len (Duval's order)."""
    if k == 0 or max_len == 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_factorization(word):
    """Split a Lyndon word as u*v with v its longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        v = word[i:]
        if _is_lyndon(v):
            return word[:i], v
    raise ValueError(f"{word} has length < 2")


def _is_lyndon(w):
    n = len(w)
    return all(w < w[i:] + w[:i] for i in range(1, n))


def bracket_tree(word):
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (bracket_tree(u), bracket_tree(v))


def expand_tree(tree):
    if isinstance(tree, int):
        return Polynomial.letter(tree)
    return bracket(expand_tree(tree[0]), expand_tree(tree[1]))


@lru_cache(maxsize=None)
def _lyndon_expansion(word):
    if len(word) == 1:
        return Polynomial.letter(word[0])
    u, v = standard_factorization(word)
    return bracket(_lyndon_expansion(u), _lyndon_expansion(v))


@dataclass(frozen=True)
class LieElement:
    poly: Polynomial
    tree: object = None
    word: tuple = None


def lyndon_lie_basis(g, n, d):
    """Basis of the weight-d part of the free Lie algebra L(H)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    alphabet = Alphabet(g, n)
    out = []
    for w in lyndon_words(alphabet.size, d):
        if alphabet.weight(w) == d:
            out.append(LieElement(_lyndon_expansion(w), bracket_tree(w), w))
    out.sort(key=lambda e: e.word)
    return out


def witt_dimension(k, d):
    """Necklace-Moebius count (1/d) sum_{e|d} mu(e) k^(d/e)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * k ** (d // e)
    return total // d


def _mobius(n):
    res = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    if n > 1:
        res = -res
    return res


# ------------------------------------------------------ derivatives, series


def fox_d(letter, p):
    """Right Fox derivative: strip ``letter`` from the end of each word."""
    out = {}
    for w, c in p.terms.items():
        if w and w[-1] == letter:
            out[w[:-1]] = out.get(w[:-1], 0) + c
    return Polynomial(out)


def apply_derivation(images, p, truncate=None, alphabet=None):
    """Extend a map letter -> Polynomial to a derivation of T(H) and apply it.

    Letters missing from ``images`` are sent to zero.
    """
    wt = alphabet.weight if alphabet else len
    out = {}
    for w, c in p.terms.items():
        for i, a in enumerate(w):
            img = images.get(a)
            if not img:
                continue
            pre, post = w[:i], w[i + 1:]
            base = wt(pre) + wt(post) if truncate is not None else 0
            for v, b in img.terms.items():
                if truncate is not None and base + wt(v) > truncate:
                    continue
                key = pre + v + post
                nv = out.get(key, 0) + c * b
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
    return Polynomial._wrap(out)


def exp_series(p, N, alphabet=None):
    """exp(p) truncated at weight N; p must have no constant term."""
    if p.constant():
        raise ValueError("exp_series needs a polynomial without constant term")
    out = Polynomial.one()
    term = Polynomial.one()
    for k in range(1, N + 1):
        term = multiply(term, p, N, alphabet).scale(Fraction(1, k))
        if not term:
            break
        out = out + term
    return out


def log_series(q, N, alphabet=None):
    """log(q) truncated at weight N; q must have constant term 1."""
    if q.constant() != 1:
        raise ValueError("log_series needs constant term 1")
    p = q - Polynomial.one()
    out = Polynomial()
    term = Polynomial.one()
    for k in range(1, N + 1):
        term = multiply(term, p, N, alphabet)
        if not term:
            break
        out = out + term.scale(Fraction((-1) ** (k + 1), k))
    return out


def series_coefficients_exp(N):
    """Coefficients 1/k! for k = 0..N."""
    return [Fraction(1, factorial(k)) for k in range(N + 1)]


class Derivation:
    """A derivation of T(H) given by the images of generators.

    Missing generators map to zero. Images are meant to be Lie elements
    when the derivation is one of L(H), but nothing here requires it.
    """

    __slots__ = ("images",)

    def __init__(self, images=None):
        self.images = {a: p for a, p in (images or {}).items() if p}

    def __call__(self, p, truncate=None, alphabet=None):
        return apply_derivation(self.images, p, truncate, alphabet)

    def image(self, letter):
        return self.images.get(letter, Polynomial())

    def __add__(self, other):
        keys = set(self.images) | set(other.images)
        return Derivation({a: self.image(a) + other.image(a) for a in keys})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Derivation({a: p.scale(c) for a, p in self.images.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.images == other.images

    def __bool__(self):
        return bool(self.images)

    def commutator(self, other, truncate=None, alphabet=None):
        """[u, v] = u v - v u, evaluated on generators."""
        keys = set(self.images) | set(other.images)
        out = {}
        for a in keys:
            out[a] = self(other.image(a), truncate, alphabet) - other(self.image(a), truncate, alphabet)
        return Derivation(out)

    def __repr__(self):
        return f"Derivation({self.images!r})"
