"""Rewriting of cyclic words modulo omega for a closed surface (n = 0).

Letters follow freetensor: x_g is code g-1 and y_g is code 2g-1.
The primary rule rewrites |b y_g x_g| to |b x_g y_g| + |b omega'|; the
secondary rule removes the words |x_g^(s-1) y_g^(t-1) y_(g-1) x_(g-1)|.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .freetensor import Polynomial
from .kernels import axpy, least_rotation
from .omega import omega_family
from .traces import TracePolynomial, necklace_basis

INFINITE = math.inf


class NoOccurrence(ValueError):
    pass


class InfiniteIrregularity(ValueError):
    def __init__(self, words):
        super().__init__(f"infinite irregularity: {sorted(words)}")
        self.words = tuple(sorted(words))


class FiniteIrregularity(ValueError):
    pass


class IllegalMove(ValueError):
    pass


class NotALoop(ValueError):
    pass


def _gletters(g):
    return g - 1, 2 * g - 1


def is_infinite(word, g):
    """The characterization: only x_g, y_g used, and both occur."""
    xg, yg = _gletters(g)
    seen_x = seen_y = False
    for c in word:
        if c == xg:
            seen_x = True
        elif c == yg:
            seen_y = True
        else:
            return False
    return seen_x and seen_y


def irregularity(word, g):
    word = tuple(word)
    if is_infinite(word, g):
        return INFINITE
    xg, yg = _gletters(g)
    n = len(word)
    if not any(c != xg and c != yg for c in word):
        return 0
    total = 0
    for i, c in enumerate(word):
        if c != yg:
            continue
        j = (i + 1) % n
        while True:
            h = word[j]
            if h == xg:
                total += 1
            elif h != yg:
                break
            j = (j + 1) % n
    return total


def trace_irregularity(t, g):
    return max((irregularity(w, g) for w in t.terms), default=0)


def occurrences(word, g):
    """Positions i with word[i] = y_g and word[i+1] = x_g (cyclically)."""
    xg, yg = _gletters(g)
    n = len(word)
    return [i for i in range(n) if word[i] == yg and word[(i + 1) % n] == xg]


def _split_at(word, i):
    """Return b with |word| = |b y x| for the occurrence at position i."""
    n = len(word)
    k = (i + 2) % n
    rot = word[k:] + word[:k]
    return rot[:-2]


@lru_cache(maxsize=None)
def _rho_image(word, i, g):
    """Terms of |b x_g y_g| + |b omega'| for the occurrence at i."""
    xg, yg = _gletters(g)
    b = _split_at(word, i)
    out = {}
    axpy(out, 1, {least_rotation(b + (xg, yg)): Fraction(1)})
    for k in range(g - 1):
        xk, yk = k, g + k
        axpy(out, 1, {least_rotation(b + (xk, yk)): Fraction(1)})
        axpy(out, -1, {least_rotation(b + (yk, xk)): Fraction(1)})
    return out


def rho_step(t, occurrence, g):
    """Rewrite one occurrence ``(word, position)`` inside ``t``."""
    word, i = occurrence
    word = tuple(word)
    c = t.terms.get(word)
    if not c or i not in occurrences(word, g):
        raise NoOccurrence(f"no y_g x_g at position {i} of {word}")
    out = dict(t.terms)
    out.pop(word)
    axpy(out, c, _rho_image(word, i, g))
    return TracePolynomial._wrap(out)


_RHO_MEMO = {}


def _rho_word(word, g):
    key = (g, word)
    hit = _RHO_MEMO.get(key)
    if hit is not None:
        return hit
    occ = occurrences(word, g)
    if not occ:
        res = {word: Fraction(1)}
    else:
        res = {}
        for w, c in _rho_image(word, occ[0], g).items():
            axpy(res, c, _rho_word(w, g))
    _RHO_MEMO[key] = res
    return res


def rho_normalize(t, g):
    """The unique rho-normal form; every term must have finite irregularity."""
    bad = [w for w in t.terms if is_infinite(w, g)]
    if bad:
        raise InfiniteIrregularity(bad)
    out = {}
    for w, c in t.terms.items():
        axpy(out, c, _rho_word(w, g))
    return TracePolynomial._wrap(out)


def rho_rewrite_with(t, g, choose):
    """Exhaustive rho-rewriting where ``choose`` picks the next occurrence.

    ``choose`` receives a sorted list of candidate ``(word, position)``
    pairs and returns one of them. Used to test strategy independence.
    """
    bad = [w for w in t.terms if is_infinite(w, g)]
    if bad:
        raise InfiniteIrregularity(bad)
    while True:
        cands = [(w, i) for w in sorted(t.terms) for i in occurrences(w, g)]
        if not cands:
            return t
        t = rho_step(t, choose(cands), g)


# ------------------------------------------------------- infinite words


def collapse_infinite(word, g):
    """Move an irr = +inf word to |x_g^s y_g^t|, returning (normal, remainder)."""
    word = least_rotation(tuple(word))
    if not is_infinite(word, g):
        raise FiniteIrregularity(f"{word} has finite irregularity")
    xg, yg = _gletters(g)
    om1 = omega_family(g).omega_prime
    cur = list(word)
    rem = {}
    while True:
        try:
            i = next(k for k in range(len(cur) - 1) if cur[k] == yg and cur[k + 1] == xg)
        except StopIteration:
            break
        p, q = tuple(cur[:i]), tuple(cur[i + 2:])
        for w, c in om1.terms.items():
            axpy(rem, c, {least_rotation(p + w + q): Fraction(1)})
        cur[i], cur[i + 1] = xg, yg
    return tuple(cur), TracePolynomial._wrap(rem)


# ------------------------------------------------------------ holonomy


@dataclass(frozen=True)
class HolonomyData:
    s: int
    t: int
    g: int
    r: Polynomial
    r_prime: Polynomial
    b: Polynomial


def _linear_rewrite(word, g, memo):
    hit = memo.get(word)
    if hit is not None:
        return hit
    xg, yg = _gletters(g)
    i = next((k for k in range(len(word) - 1) if word[k] == yg and word[k + 1] == xg), None)
    if i is None:
        res = {word: Fraction(1)}
    else:
        p, q = word[:i], word[i + 2:]
        res = dict(_linear_rewrite(p + (xg, yg) + q, g, memo))
        for k in range(g - 1):
            xk, yk = k, g + k
            axpy(res, 1, _linear_rewrite(p + (xk, yk) + q, g, memo))
            axpy(res, -1, _linear_rewrite(p + (yk, xk) + q, g, memo))
    memo[word] = res
    return res


@lru_cache(maxsize=None)
def holonomy_data(s, t, g):
    if s < 1 or t < 1:
        raise ValueError("s, t must be >= 1")
    xg, yg = _gletters(g)
    r = Polynomial()
    for i in range(1, s + 1):
        r = r + Polynomial({(xg,) * (s - i) + (yg,) * (t - 1) + (xg,) * (i - 1): 1})
    memo = {}
    rp = {}
    for w, c in r.terms.items():
        axpy(rp, c, _linear_rewrite(w, g, memo))
    r_prime = Polynomial(rp)
    lead = Polynomial({(xg,) * (s - 1) + (yg,) * (t - 1): s})
    return HolonomyData(s, t, g, r, r_prime, r_prime - lead)


# --------------------------------------------------------------- beads


@dataclass(frozen=True)
class BeadConfig:
    """Cyclic arrangement of labelled partitions ('y', j) and beads ('x', i)."""

    s: int
    t: int
    seq: tuple

    def __post_init__(self):
        ys = [lab for kind, lab in self.seq if kind == "y"]
        xs = [lab for kind, lab in self.seq if kind == "x"]
        if sorted(ys) != list(range(1, self.t + 1)) or sorted(xs) != list(range(1, self.s + 1)):
            raise ValueError("each bead and partition label must appear exactly once")
        if not (_cyclically_sorted(ys) and _cyclically_sorted(xs)):
            raise ValueError("labels must respect their cyclic orders")
        # store the rotation starting at partition 1
        k = self.seq.index(("y", 1))
        object.__setattr__(self, "seq", tuple(self.seq[k:] + self.seq[:k]))

    @classmethod
    def base_point(cls, s, t):
        return cls(s, t, tuple(("y", j) for j in range(1, t + 1)) + tuple(("x", i) for i in range(1, s + 1)))

    def word(self, g):
        xg, yg = _gletters(g)
        return tuple(xg if kind == "x" else yg for kind, _ in self.seq)

    def move(self, j, g):
        """Apply m_j; return (new config, edge holonomy before normalization)."""
        n = len(self.seq)
        p = self.seq.index(("y", j))
        q = (p + 1) % n
        if self.seq[q][0] != "x":
            raise IllegalMove(f"no bead immediately right of partition {j}")
        word = self.word(g)
        seq = list(self.seq)
        seq[p], seq[q] = seq[q], seq[p]
        b = _split_at(word, p)
        om1 = omega_family(g).omega_prime
        hol = {}
        for w, c in om1.terms.items():
            axpy(hol, c, {least_rotation(b + w): Fraction(1)})
        return BeadConfig(self.s, self.t, tuple(seq)), TracePolynomial._wrap(hol)


def _cyclically_sorted(labels):
    if not labels:
        return True
    k = labels.index(min(labels))
    rot = labels[k:] + labels[:k]
    return rot == sorted(rot)


def bead_path(start, moves, g):
    """Follow ``moves`` from ``start``; return (end, rho-normalized holonomy)."""
    cur = start
    total = {}
    for j in moves:
        cur, h = cur.move(j, g)
        axpy(total, 1, rho_normalize(h, g).terms)
    return cur, TracePolynomial._wrap(total)


def bead_loop_holonomy(start, moves, g):
    end, hol = bead_path(start, moves, g)
    if end != start:
        raise NotALoop("move sequence does not return to its start")
    return hol


def standard_loop(s, t):
    """The moves m_t^s m_{t-1}^s ... m_1^s, in execution order."""
    return [j for j in range(t, 0, -1) for _ in range(s)]


# ---------------------------------------------------------- secondary rule


def rho2_pattern(word, g):
    """Return (s, t) if |word| is |x_g^(s-1) y_g^(t-1) y_(g-1) x_(g-1)| with s+t >= 3."""
    if g < 2:
        return None
    xg, yg = _gletters(g)
    x1, y1 = g - 2, 2 * g - 2
    if word.count(x1) != 1 or word.count(y1) != 1:
        return None
    a = word.count(xg)
    c = word.count(yg)
    if a + c + 2 != len(word) or a + c < 1:
        return None
    pat = least_rotation((xg,) * a + (yg,) * c + (y1, x1))
    if pat != word:
        return None
    return a + 1, c + 1


@lru_cache(maxsize=None)
def _rho2_image(s, t, g):
    hd = holonomy_data(s, t, g)
    x1, y1 = g - 2, 2 * g - 2
    tail = Polynomial({(x1, y1): 1}) + omega_family(g).omega_dprime
    inv = Fraction(1, s)
    out = {}
    for w, c in hd.r_prime.terms.items():
        for v, e in tail.terms.items():
            axpy(out, c * e * inv, {least_rotation(w + v): Fraction(1)})
    for w, c in hd.b.terms.items():
        axpy(out, -c * inv, {least_rotation(w + (y1, x1)): Fraction(1)})
    return out


def rho2_step(t, g):
    out = {}
    for w, c in t.terms.items():
        st = rho2_pattern(w, g)
        if st is None:
            axpy(out, c, {w: Fraction(1)})
        else:
            axpy(out, c, _rho2_image(st[0], st[1], g))
    return TracePolynomial._wrap(out)


def normal_form(t, g):
    """Coordinates of the class of t over the X u Y basis."""
    cur = {}
    for w, c in t.terms.items():
        if is_infinite(w, g):
            normal, rem = collapse_infinite(w, g)
            axpy(cur, c, {normal: Fraction(1)})
            axpy(cur, c, rem.terms)
        else:
            axpy(cur, c, {w: Fraction(1)})
    t = TracePolynomial._wrap(cur)
    while True:
        finite = TracePolynomial({w: c for w, c in t.terms.items() if not is_infinite(w, g)})
        infinite = {w: c for w, c in t.terms.items() if is_infinite(w, g)}
        nxt = rho2_step(rho_normalize(finite, g), g)
        out = dict(nxt.terms)
        axpy(out, 1, infinite)
        nxt = TracePolynomial._wrap(out)
        if nxt == t:
            return t
        t = nxt


def in_X(word, g):
    return irregularity(word, g) == 0 and rho2_pattern(word, g) is None


def in_Y(word, g):
    xg, yg = _gletters(g)
    s = word.count(xg)
    return s >= 1 and len(word) > s and word == (xg,) * s + (yg,) * (len(word) - s)


@lru_cache(maxsize=None)
def basis_XY(g, d):
    """Weight-d members of X u Y in canonical necklace order."""
    return tuple(w for w in necklace_basis(g, 0, d) if in_X(w, g) or in_Y(w, g))
