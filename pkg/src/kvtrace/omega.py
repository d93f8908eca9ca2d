"""The symplectic element omega and the quotient T(H)_omega.

Trace coordinates of |T(H)_omega| in weight d are the non-pivot necklaces
of the echelonized span of {|m omega|}; this is a deterministic choice of
section, not a canonical basis (the rewriting module supplies that).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .exactlin import Echelon, Subspace, column_kernel, solve
from .freetensor import Alphabet, Derivation, Polynomial, bracket, multiply
from .kernels import axpy, least_rotation
from .traces import TracePolynomial, necklace_basis, necklace_index, trace_project, words_of_weight


class DegreeMismatch(ValueError):
    pass


class NoSolution(RuntimeError):
    pass


def _commutator(a, b):
    return Polynomial({(a, b): 1, (b, a): -1})


@dataclass(frozen=True)
class OmegaFamily:
    g: int
    n: int
    omega: Polynomial
    omega_prime: Polynomial
    omega_dprime: Polynomial


@lru_cache(maxsize=None)
def omega_family(g, n=0):
    alph = Alphabet(g, n)

    def partial(k):
        out = Polynomial()
        for i in range(1, k + 1):
            out = out + _commutator(alph.x(i), alph.y(i))
        return out

    om = partial(g)
    for j in range(1, n + 1):
        om = om + Polynomial.letter(alph.z(j))
    return OmegaFamily(g, n, om, partial(g - 1), partial(g - 2))


def omega(g, n=0):
    return omega_family(g, n).omega


def _trace_vector(t, index):
    return {index[w]: c for w, c in t.terms.items()}


def ideal_generators(g, d):
    """The trace polynomials |m omega| over all weight d-2 words m."""
    om = omega(g)
    for m in words_of_weight(g, 0, d - 2):
        yield trace_project(multiply(Polynomial({m: 1}), om))


@lru_cache(maxsize=None)
def _ideal_echelon(g, d):
    index = necklace_index(g, 0, d)
    ech = Echelon()
    if d >= 2:
        for t in ideal_generators(g, d):
            if t:
                ech.add(_trace_vector(t, index))
    return ech


def ideal_trace_span(g, d):
    """Span of {|m omega|} inside the weight-d trace space."""
    if d < 2:
        raise ValueError("degree must be >= 2")
    ech = _ideal_echelon(g, d)
    return Subspace._from_rows(len(necklace_basis(g, 0, d)), ech.rows)


def ideal_trace_span_bruteforce(g, d):
    """Span of all |a omega b|; used only to test the folding shortcut."""
    om = omega(g)
    index = necklace_index(g, 0, d)
    vecs = []
    for k in range(d - 1):
        for a in words_of_weight(g, 0, k):
            for b in words_of_weight(g, 0, d - 2 - k):
                p = multiply(multiply(Polynomial({a: 1}), om), Polynomial({b: 1}))
                vecs.append(_trace_vector(trace_project(p), index))
    return Subspace(len(index), vecs)


class QuotientModel:
    """Coordinates for the weight-d part of |T(H)_omega|."""

    def __init__(self, g, d):
        self.g = g
        self.degree = d
        self.trace_coords = necklace_basis(g, 0, d)
        self.index = necklace_index(g, 0, d)
        self._ideal = _ideal_echelon(g, d)
        pivots = set(self._ideal.rows)
        self.section = tuple(i for i in range(len(self.trace_coords)) if i not in pivots)
        self.position = {c: k for k, c in enumerate(self.section)}
        self._memo = {}

    @property
    def dim(self):
        return len(self.section)

    @property
    def ideal_span(self):
        return Subspace._from_rows(len(self.trace_coords), self._ideal.rows)

    def section_words(self):
        return [self.trace_coords[i] for i in self.section]

    def project_word(self, word):
        """Coordinates of |word|; word must be canonical and of the right weight."""
        hit = self._memo.get(word)
        if hit is None:
            red = self._ideal.reduce({self.index[word]: Fraction(1)})
            hit = {self.position[c]: v for c, v in red.items()}
            self._memo[word] = hit
        return hit

    def project_vector(self, vec):
        """Project a vector keyed by canonical words."""
        out = {}
        for w, c in vec.items():
            if w not in self.index:
                raise DegreeMismatch(f"{w} is not a weight-{self.degree} necklace")
            axpy(out, c, self.project_word(w))
        return out

    def project(self, t):
        return self.project_vector(t.terms)

    def lift(self, coords):
        return TracePolynomial({self.trace_coords[self.section[k]]: c for k, c in coords.items()})


@lru_cache(maxsize=None)
def quotient_model(g, d):
    return QuotientModel(g, d)


def project_quotient(t, model):
    for w in t.terms:
        if Alphabet(model.g).weight(w) != model.degree:
            raise DegreeMismatch(f"term of weight {len(w)} in a degree-{model.degree} model")
    return model.project(t)


def quotient_dim(g, d):
    return quotient_model(g, d).dim


def project_mixed(t, g):
    """Project a non-homogeneous trace polynomial weight by weight.

    Returns a dict weight -> coordinate dict (weights with zero image dropped).
    """
    by_weight = {}
    for w, c in t.terms.items():
        by_weight.setdefault(len(w), {})[w] = c
    out = {}
    for d, vec in sorted(by_weight.items()):
        coords = quotient_model(g, d).project_vector(vec)
        if coords:
            out[d] = coords
    return out


# ------------------------------------------------------------ Lie ideal, lift


@lru_cache(maxsize=None)
def lie_ideal_spanning(g, m):
    """Right-normed brackets [v1,[v2,...,[v_{m-2},omega]]] spanning the ideal."""
    if m < 2:
        return ()
    om = omega(g)
    letters = range(2 * g)
    out = []
    for seq in product(letters, repeat=m - 2):
        p = om
        for v in reversed(seq):
            p = bracket(Polynomial.letter(v), p)
        out.append(p)
    return tuple(out)


def omega_preserving_lift(f, g):
    """Correct a derivation so that it kills omega exactly.

    ``f`` is a Derivation (or dict letter -> Polynomial) whose images are
    representatives of a homogeneous derivation of L(H)_omega. Raises
    NoSolution if f(omega) is not in the Lie ideal of omega.
    """
    if not isinstance(f, Derivation):
        f = Derivation(f)
    om = omega(g)
    fo = f(om)
    if not fo:
        return f
    weights = {len(w) for w in fo.terms}
    if len(weights) != 1:
        raise ValueError("omega_preserving_lift needs a homogeneous derivation")
    m = weights.pop() - 1
    span = lie_ideal_spanning(g, m)
    cols = []
    labels = []
    for i in range(1, g + 1):
        xi, yi = i - 1, g + i - 1
        for k, e in enumerate(span):
            cols.append(bracket(Polynomial.letter(xi), e).terms)
            labels.append(("a", i, k))
            cols.append(bracket(Polynomial.letter(yi), e).terms)
            labels.append(("b", i, k))
    sol = solve(cols, fo.terms)
    if sol is None:
        raise NoSolution("f(omega) is not in the Lie ideal generated by omega")
    images = dict(f.images)
    for j, c in sol.items():
        kind, i, k = labels[j]
        xi, yi = i - 1, g + i - 1
        e = span[k].scale(c)
        if kind == "b":
            images[xi] = images.get(xi, Polynomial()) + e
        else:
            images[yi] = images.get(yi, Polynomial()) - e
    out = Derivation(images)
    if out(om):
        raise NoSolution("corrected derivation does not kill omega")
    return out


# ------------------------------------------------- commutators modulo <omega>


@lru_cache(maxsize=None)
def two_sided_ideal_rows(g, d):
    """Echelon of the weight-d part of the two-sided ideal <omega> in T(H)."""
    om = omega(g)
    ech = Echelon()
    if d >= 2:
        for k in range(d - 1):
            for a in words_of_weight(g, 0, k):
                left = multiply(Polynomial({a: 1}), om)
                for b in words_of_weight(g, 0, d - 2 - k):
                    ech.add(dict(multiply(left, Polynomial({b: 1})).terms))
    return ech


@lru_cache(maxsize=None)
def _commutator_system(zword, g, d):
    """Tracked echelon of the columns c -> [z, c] modulo <omega> in weight d."""
    k = d - len(zword)
    ideal = two_sided_ideal_rows(g, d)
    z = Polynomial({zword: 1})
    ech = Echelon(track=True)
    cwords = words_of_weight(g, 0, k) if k >= 0 else ()
    for j, w in enumerate(cwords):
        col = bracket(z, Polynomial({w: 1}))
        ech.add(ideal.reduce(dict(col.terms)), label=j)
    return ech, cwords


def commutator_solve(z, b, d, g):
    """Find c with b = [z, c] modulo <omega>, or return None.

    ``z`` is a monomial (a word tuple or a one-term Polynomial) and ``b``
    is homogeneous of weight ``d``.
    """
    if isinstance(z, Polynomial):
        (zword, zc), = z.terms.items()
    else:
        zword, zc = tuple(z), Fraction(1)
    for w in b.terms:
        if len(w) != d:
            return None
    if d - len(zword) < 0:
        return None if b else Polynomial()
    ech, cwords = _commutator_system(zword, g, d)
    ideal = two_sided_ideal_rows(g, d)
    combo = {}
    red = ech._reduce_tracked(ideal.reduce(dict(b.terms)), combo)
    if red:
        return None
    return Polynomial({cwords[j]: -v / zc for j, v in combo.items() if v})


def in_two_sided_ideal(p, g):
    """True iff every homogeneous part of p lies in <omega>."""
    by_weight = {}
    for w, c in p.terms.items():
        by_weight.setdefault(len(w), {})[w] = c
    return all(not two_sided_ideal_rows(g, d).reduce(v) for d, v in by_weight.items())


def quotient_kernel(columns, g, d):
    """Kernel of a linear map into weight-d quotient traces (columns as trace dicts)."""
    model = quotient_model(g, d)
    return column_kernel([model.project_vector(c) for c in columns])
