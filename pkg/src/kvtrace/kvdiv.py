"""Divergence cocycles, the special series, necklace operations and KRV tests."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exactlin import Echelon, Subspace, column_kernel
from .freetensor import (
    Alphabet,
    Derivation,
    Polynomial,
    bracket,
    exp_series,
    fox_d,
    log_series,
    lyndon_lie_basis,
    multiply,
)
from .hopfkernel import (
    boundary_target_elements,
    kernel_reduced_coproduct,
    project_tensor,
    reduced_coproduct_columns,
    trace_twisted_coproduct,
)
from .kernels import axpy, least_rotation
from .omega import omega, omega_preserving_lift, quotient_model, two_sided_ideal_rows
from .traces import TracePolynomial, TraceTensor2, necklace_index, trace_project

# symplectic pairing <x_k, y_l> = delta_kl = -<y_l, x_k>; z letters pair to 0
PAIRING_SIGN = 1


def pairing(a, b, g):
    if a < g and g <= b < 2 * g and b - g == a:
        return PAIRING_SIGN
    if b < g and g <= a < 2 * g and a - g == b:
        return -PAIRING_SIGN
    return 0


# ------------------------------------------------------------ data types


@dataclass(frozen=True)
class FramingData:
    a: tuple = ()
    b: tuple = ()
    c: tuple = ()

    @classmethod
    def zero(cls, g, n=0):
        return cls((0,) * g, (0,) * g, (0,) * n)


class TangentialDerivation:
    """A derivation u with u(z_j) = [z_j, u_j]; the z images are derived."""

    def __init__(self, g, n, xy_images=None, tangential=(), N=None):
        self.g, self.n = g, n
        self.alphabet = Alphabet(g, n)
        tangential = tuple(tangential) + (Polynomial(),) * (n - len(tangential))
        self.tangential = tangential
        images = dict(xy_images or {})
        for j in range(1, n + 1):
            z = Polynomial.letter(self.alphabet.z(j))
            images[self.alphabet.z(j)] = bracket(z, tangential[j - 1])
        self.u = Derivation(images)
        self.N = N

    def check(self):
        for j in range(1, self.n + 1):
            z = Polynomial.letter(self.alphabet.z(j))
            if self.u.image(self.alphabet.z(j)) != bracket(z, self.tangential[j - 1]):
                return False
        return True

    def __add__(self, other):
        keys = set(self.u.images) | set(other.u.images)
        xy = {a: self.u.image(a) + other.u.image(a) for a in keys if a < 2 * self.g}
        tang = [p + q for p, q in zip(self.tangential, other.tangential)]
        return TangentialDerivation(self.g, self.n, xy, tang, self.N)

    def scale(self, c):
        xy = {a: p.scale(c) for a, p in self.u.images.items() if a < 2 * self.g}
        return TangentialDerivation(self.g, self.n, xy, [p.scale(c) for p in self.tangential], self.N)


@dataclass
class SpecialElements:
    xi: Polynomial
    r_bold: TracePolynomial
    r_bold_prime: TracePolynomial
    p_fr: TracePolynomial
    N: int


@dataclass
class Membership:
    member: bool
    witness_degree: int = None
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.member


# ------------------------------------------------------------ series


@lru_cache(maxsize=None)
def r_coefficients(N):
    """Coefficients of r(s) = log((e^s - 1)/s) up to s^N."""
    # (e^s - 1)/s = sum s^k/(k+1)!; take log of a series with constant term 1
    f = [Fraction(1, factorial(k + 1)) for k in range(N + 1)]
    p = [Fraction(0)] + f[1:]
    out = [Fraction(0)] * (N + 1)
    power = [Fraction(1)] + [Fraction(0)] * N
    for k in range(1, N + 1):
        nxt = [Fraction(0)] * (N + 1)
        for i, a in enumerate(power):
            if a:
                for j in range(1, N + 1 - i):
                    nxt[i + j] += a * p[j]
        power = nxt
        coef = Fraction((-1) ** (k + 1), k)
        for i in range(N + 1):
            out[i] += coef * power[i]
    return tuple(out)


def _r_trace(letter, wt, N):
    coeffs = r_coefficients(N // wt if wt > 1 else N)
    return TracePolynomial({(letter,) * k: c for k, c in enumerate(coeffs) if k and c and k * wt <= N})


def special_elements(g, n, framing, N):
    if N < 2:
        raise ValueError("truncation must be >= 2")
    alph = Alphabet(g, n)
    prod = Polynomial.one()
    for i in range(1, g + 1):
        x = Polynomial.letter(alph.x(i))
        y = Polynomial.letter(alph.y(i))
        for factor in (x, y, x.scale(-1), y.scale(-1)):
            prod = multiply(prod, exp_series(factor, N, alph), N, alph)
    for j in range(1, n + 1):
        prod = multiply(prod, exp_series(Polynomial.letter(alph.z(j)), N, alph), N, alph)
    xi = log_series(prod, N, alph)
    r_bold = TracePolynomial()
    for i in range(1, g + 1):
        r_bold = r_bold + _r_trace(alph.x(i), 1, N) + _r_trace(alph.y(i), 1, N)
    r_prime = r_bold
    for j in range(1, n + 1):
        r_prime = r_prime + _r_trace(alph.z(j), 2, N)
    p = {}
    a = tuple(framing.a) + (0,) * g
    b = tuple(framing.b) + (0,) * g
    for i in range(1, g + 1):
        axpy(p, a[i - 1], {(alph.y(i),): 1})
        axpy(p, -b[i - 1], {(alph.x(i),): 1})
    return SpecialElements(xi, r_bold, r_prime, TracePolynomial(p), N)


# ------------------------------------------------------------ divergences


def _derivation_of(u):
    if isinstance(u, TangentialDerivation):
        return u.u
    if isinstance(u, Derivation):
        return u
    return Derivation(u)


def sdiv(u, letters=None):
    """Single divergence sum_w |d_w u(w)| over the given generators."""
    u = _derivation_of(u)
    out = {}
    for w, img in sorted(u.images.items()):
        if letters is not None and w not in letters:
            continue
        axpy(out, 1, trace_project(fox_d(w, img)).terms)
    return TracePolynomial._wrap(out)


def sdiv_xyz(ut):
    return sdiv(ut)


def sdiv_bruteforce(u):
    """Independent evaluation: scan every monomial for its last letter."""
    u = _derivation_of(u)
    out = {}
    for w, img in u.images.items():
        for word, c in img.terms.items():
            if len(word) and word[len(word) - 1] == w:
                k = least_rotation(word[: len(word) - 1])
                out[k] = out.get(k, 0) + c
    return TracePolynomial(out)


def act_on_trace(u, t, truncate=None, alphabet=None):
    """u(|w|) = |u(w)| extended linearly."""
    u = _derivation_of(u)
    p = Polynomial._wrap(dict(t.terms))
    return trace_project(u(p, truncate, alphabet))


def framed_cocycles(ut, fr, se, which):
    alph = ut.alphabet
    c = tuple(fr.c) + (0,) * ut.n
    b = TracePolynomial()
    for j in range(ut.n):
        if c[j]:
            b = b + trace_project(ut.tangential[j]).scale(c[j])
    if which == "b_fr":
        return b
    base = sdiv_xyz(ut) - b
    if which == "sdiv_fr_gr":
        return base
    if which == "sdiv_fr":
        extra = act_on_trace(ut, se.r_bold - se.p_fr, se.N, alph)
        return (base + extra).truncate(se.N, alph)
    raise ValueError(f"unknown cocycle {which!r}")


def integrate_cocycle(u, psi, N, alphabet=None):
    """sum_k u^k(psi)/(k+1)!, truncated at weight N."""
    u = _derivation_of(u)
    out = psi.truncate(N, alphabet)
    term = out
    k = 1
    while term:
        term = act_on_trace(u, term, N, alphabet)
        if not term:
            break
        out = out + term.scale(Fraction(1, factorial(k + 1)))
        # keep the raw u^k(psi) for the next power
        k += 1
    return out


def integrate_cocycle_raw(u, psi, N, alphabet=None):
    """Same series, accumulating u^k(psi) explicitly (used for testing)."""
    u = _derivation_of(u)
    powers = [psi.truncate(N, alphabet)]
    while powers[-1]:
        powers.append(act_on_trace(u, powers[-1], N, alphabet))
    out = TracePolynomial()
    for k, p in enumerate(powers):
        out = out + p.scale(Fraction(1, factorial(k + 1)))
    return out


# ------------------------------------------------------------ membership


def _target_space(elems, d, g, n):
    index = necklace_index(g, n, d)
    return Subspace(len(index), [{index[w]: c for w, c in e.terms.items()} for e in elems])


def _check_target(s, g, n, N, targets_for_weight):
    alph = Alphabet(g, n)
    for d in range(0, N + 1):
        part = s.degree_part(d, alph)
        if not part:
            continue
        space = _target_space(targets_for_weight(d), d, g, n)
        index = necklace_index(g, n, d)
        if not space.contains_vector({index[w]: c for w, c in part.terms.items()}):
            return d
    return None


def krv_fr_membership(ut, fr, N):
    g, n, alph = ut.g, ut.n, ut.alphabet
    uo = ut.u(omega(g, n), N, alph)
    if uo:
        return Membership(False, min(alph.weight(w) for w in uo.terms), "u(omega) != 0")
    s = framed_cocycles(ut, fr, None, "sdiv_fr_gr").truncate(N, alph)
    bad = _check_target(s, g, n, N, lambda d: boundary_target_elements(g, n, d))
    if bad is not None:
        return Membership(False, bad, "divergence outside the boundary targets")
    return Membership(True)


def xi_targets(g, n, N, se):
    """Weight-by-weight spans are not enough for xi: build truncated series."""
    alph = Alphabet(g, n)
    gens = []
    for j in range(1, n + 1):
        for k in range(1, N // 2 + 1):
            gens.append(TracePolynomial({(alph.z(j),) * k: 1}))
    p = multiply(se.xi, se.xi, N, alph)
    k = 2
    while p and k <= N:
        gens.append(trace_project(p))
        p = multiply(p, se.xi, N, alph)
        k += 1
    return gens


def _vector_all_weights(t, g, n, N):
    alph = Alphabet(g, n)
    out = {}
    for w, c in t.terms.items():
        d = alph.weight(w)
        if d <= N:
            out[(d, necklace_index(g, n, d)[w])] = c
    return out


def kv_fr_membership(ut, fr, N):
    if N < 3:
        raise ValueError("truncation must be >= 3")
    g, n, alph = ut.g, ut.n, ut.alphabet
    se = special_elements(g, n, fr, N)
    ux = ut.u(se.xi, N, alph)
    if ux:
        return Membership(False, min(alph.weight(w) for w in ux.terms), "u(xi) != 0")
    s = framed_cocycles(ut, fr, se, "sdiv_fr")
    gens = xi_targets(g, n, N, se)
    ech = Echelon()
    keys = {}
    for t in gens:
        v = _vector_all_weights(t, g, n, N)
        ech.add({keys.setdefault(k, len(keys)): c for k, c in sorted(v.items())})
    vec = _vector_all_weights(s, g, n, N)
    for k in sorted(vec):
        keys.setdefault(k, len(keys))
    red = ech.reduce({keys[k]: c for k, c in vec.items()})
    if red:
        inv = {v: k for k, v in keys.items()}
        return Membership(False, min(inv[c][0] for c in red), "divergence outside the xi targets")
    return Membership(True)


# --------------------------------------------------- necklace operations


def _reduce_model(t, g, model):
    if model == "free":
        return t
    out = {}
    by_weight = {}
    for w, c in t.terms.items():
        by_weight.setdefault(len(w), {})[w] = c
    for d, vec in by_weight.items():
        m = quotient_model(g, d)
        axpy(out, 1, m.lift(m.project_vector(vec)).terms)
    return TracePolynomial._wrap(out)


def necklace_bracket(a, b, g, model="free"):
    out = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            for i, ai in enumerate(u):
                for j, bj in enumerate(v):
                    e = pairing(ai, bj, g)
                    if e:
                        w = u[i + 1:] + u[:i] + v[j + 1:] + v[:j]
                        axpy(out, e * cu * cv, {least_rotation(w): 1})
    return _reduce_model(TracePolynomial._wrap(out), g, model)


def hamiltonian_derivation(a, g):
    """The derivation v -> sum_i <a_i, v> a_(i+1)...a_(i-1)."""
    images = {}
    for v in range(2 * g):
        img = {}
        for u, c in a.terms.items():
            for i, ai in enumerate(u):
                e = pairing(ai, v, g)
                if e:
                    axpy(img, e * c, {u[i + 1:] + u[:i]: 1})
        images[v] = Polynomial(img)
    return Derivation(images)


def double_divergence(u, g):
    """sum_w sum over positions of w in u(w): |before| (x) |after|."""
    u = _derivation_of(u)
    out = {}
    for w, img in u.images.items():
        for word, c in img.terms.items():
            for k, a in enumerate(word):
                if a == w:
                    key = (least_rotation(word[:k]), least_rotation(word[k + 1:]))
                    axpy(out, c, {key: 1})
    return TraceTensor2._wrap(out)


def _cobracket_free(a, g):
    out = {}
    for u, c in a.terms.items():
        m = len(u)
        for i in range(m):
            for j in range(i + 1, m):
                e = pairing(u[i], u[j], g)
                if not e:
                    continue
                inner = least_rotation(u[i + 1:j])
                outer = least_rotation(u[j + 1:] + u[:i])
                if inner and outer:
                    axpy(out, e * c, {(inner, outer): 1})
                    axpy(out, -e * c, {(outer, inner): 1})
    return TraceTensor2._wrap(out)


def drop_unit_legs(t):
    return TraceTensor2._wrap({k: c for k, c in t.terms.items() if k[0] and k[1]})


def turaev_cobracket_gr(a, g, route="direct"):
    """Graded cobracket on |T(H)_omega| / |K1| in projected leg coordinates.

    ``route="direct"`` uses the double-cut formula; ``route="divergence"``
    evaluates the double divergence of the Hamiltonian derivation, and
    ``route="single"`` the twisted coproduct of its single divergence.
    Output keys are ((deg, i), (deg, j)) quotient coordinates.
    """
    if route == "direct":
        t = _cobracket_free(a, g)
    elif route == "divergence":
        t = drop_unit_legs(double_divergence(hamiltonian_derivation(a, g), g))
    elif route == "twisted_sdiv":
        s = sdiv(hamiltonian_derivation(a, g))
        s = _reduce_model(s, g, "omega")
        t = drop_unit_legs(trace_twisted_coproduct(s))
    else:
        raise ValueError(f"unknown route {route!r}")
    return project_tensor(t, g)


def cobracket_free(a, g):
    """Double-cut cobracket in |T(H)| (x) |T(H)| (no quotient)."""
    return _cobracket_free(a, g)


def tensor_coords_to_trace(vec, g):
    """Turn ((d,i),(e,j)) quotient coordinates back into a TraceTensor2."""
    out = {}
    for ((d, i), (e, j)), c in vec.items():
        a = quotient_model(g, d).section_words()[i]
        b = quotient_model(g, e).section_words()[j]
        axpy(out, c, {(a, b): 1})
    return TraceTensor2._wrap(out)


# ------------------------------------------------- closed-surface KRV


def closed_divergence(f, g):
    """sdiv of the omega-preserving lift, projected to |T(H)_omega|."""
    lift = omega_preserving_lift(f, g)
    s = sdiv(lift)
    out = {}
    for w, c in s.terms.items():
        out.setdefault(len(w), {})[w] = c
    return {d: quotient_model(g, d).project_vector(v) for d, v in out.items()}


def _apply_omega_coproduct(coords, g, d):
    cols = reduced_coproduct_columns(g, d, "omega")
    out = {}
    for k, c in coords.items():
        axpy(out, c, cols[k])
    return out


def krv_closed_membership(f, g, N=None):
    if not isinstance(f, Derivation):
        f = Derivation(f)
    if not f:
        return Membership(True)
    parts = closed_divergence(f, g)
    for d in sorted(parts):
        if N is not None and d > N:
            continue
        if _apply_omega_coproduct(parts[d], g, d):
            return Membership(False, d, "divergence not in the reduced-coproduct kernel")
    return Membership(True)


# ------------------------------------------ derivations of L(H)_omega


@lru_cache(maxsize=None)
def derivation_space(g, k):
    """Degree-k derivations of L(H) that preserve the ideal of omega.

    Returns (params, W) where params lists (generator, Lyndon element) pairs
    and W is a list of coefficient dicts over params spanning the space.
    """
    lie = lyndon_lie_basis(g, 0, k + 1)
    params = [(v, e.poly) for v in range(2 * g) for e in lie]
    ideal = two_sided_ideal_rows(g, k + 2)
    om = omega(g)
    cols = []
    for v, p in params:
        img = Derivation({v: p})(om)
        cols.append(ideal.reduce(dict(img.terms)))
    _, ker = column_kernel(cols)
    basis = Subspace(len(params), ker).basis
    return params, basis


def derivation_from_coeffs(params, coeffs):
    images = {}
    for j, c in coeffs.items():
        v, p = params[j]
        images[v] = images.get(v, Polynomial()) + p.scale(c)
    return Derivation(images)


def trivial_derivations(g, k):
    """Coefficient vectors (in W coordinates) of derivations with ideal-valued images."""
    params, W = derivation_space(g, k)
    ideal = two_sided_ideal_rows(g, k + 1)
    cols = []
    for w in W:
        f = derivation_from_coeffs(params, w)
        vec = {}
        for v, img in f.images.items():
            for word, c in ideal.reduce(dict(img.terms)).items():
                vec[(v, word)] = c
        cols.append(vec)
    _, ker = column_kernel(cols)
    return Subspace(len(W), ker)


def membership_subspace(g, k):
    """W-coordinates of degree-k derivations passing krv_closed_membership."""
    params, W = derivation_space(g, k)
    cols = []
    for w in W:
        f = derivation_from_coeffs(params, w)
        parts = closed_divergence(f, g)
        vec = {}
        for d, coords in parts.items():
            for key, c in _apply_omega_coproduct(coords, g, d).items():
                vec[(d, key)] = c
        cols.append(vec)
    _, ker = column_kernel(cols)
    return Subspace(len(W), ker)


def _act_on_coords(f, g, d, i, k):
    """Image of section basis element i of weight d under f, projected."""
    word = quotient_model(g, d).section_words()[i]
    img = trace_project(f(Polynomial({word: 1})))
    return quotient_model(g, d + k).project(img) if img else {}


def cobracket_defect(f, g, k, N, route="direct"):
    """Coordinates of f(delta(a)) - delta(f(a)) over all basis a with deg a <= N."""
    out = {}
    for d in range(3, N + 1):
        model = quotient_model(g, d)
        for idx, word in enumerate(model.section_words()):
            a = TracePolynomial({word: 1})
            delta = turaev_cobracket_gr(a, g, route)
            lhs = {}
            for ((d1, i), (d2, j)), c in delta.items():
                for i2, c2 in _act_on_coords(f, g, d1, i, k).items():
                    axpy(lhs, c * c2, {((d1 + k, i2), (d2, j)): 1})
                for j2, c2 in _act_on_coords(f, g, d2, j, k).items():
                    axpy(lhs, c * c2, {((d1, i), (d2 + k, j2)): 1})
            fa = trace_project(f(Polynomial({word: 1})))
            if fa:
                rhs = turaev_cobracket_gr(fa, g, route)
                axpy(lhs, -1, rhs)
            for key, c in lhs.items():
                out[(d, idx, key)] = c
    return out


def cobracket_subspace(g, k, N, route="direct"):
    """W-coordinates of degree-k derivations commuting with the cobracket."""
    params, W = derivation_space(g, k)
    cols = [cobracket_defect(derivation_from_coeffs(params, w), g, k, N, route) for w in W]
    _, ker = column_kernel(cols)
    return Subspace(len(W), ker)


# ------------------------------------------------- invariant tensors


def _g_basis(g, d):
    """Section words of |T(H)_omega| in weight d (d >= 1)."""
    return quotient_model(g, d).section_words()


def invariant_tensor_probe(g, r, probe_bound):
    """Degree-r invariants of g (x) g under the diagonal bracket action.

    g is |T(H)_omega| / |K1|; the acting elements are all section words of
    weight 1..probe_bound. Returns the solution Subspace over the basis of
    (g (x) g)^(r), indexed by pairs (i, j) of section words with weights
    summing to r and each at least 1.
    """
    pairs = []
    for d1 in range(1, r):
        for a in _g_basis(g, d1):
            for b in _g_basis(g, r - d1):
                pairs.append((a, b))
    if probe_bound <= 0:
        return Subspace.full(len(pairs))
    actors = [w for d in range(1, probe_bound + 1) for w in _g_basis(g, d)]
    cols = []
    for a, b in pairs:
        vec = {}
        ta, tb = TracePolynomial({a: 1}), TracePolynomial({b: 1})
        for n_act, y in enumerate(actors):
            ty = TracePolynomial({y: 1})
            left = necklace_bracket(ty, ta, g)
            right = necklace_bracket(ty, tb, g)
            t = {}
            for w, c in left.terms.items():
                axpy(t, c, {(w, b): 1})
            for w, c in right.terms.items():
                axpy(t, c, {(a, w): 1})
            for key, c in project_tensor(drop_unit_legs(TraceTensor2(t)), g).items():
                vec[(n_act, key)] = c
        cols.append(vec)
    _, ker = column_kernel(cols)
    return Subspace(len(pairs), ker)
