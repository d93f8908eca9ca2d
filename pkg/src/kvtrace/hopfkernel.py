"""Coproduct, antipode and kernels of the reduced coproduct on trace spaces."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .exactlin import Matrix, Subspace, column_kernel
from .freetensor import Alphabet, LinearCombination, Polynomial, lyndon_lie_basis, multidegree, d_class_of
from .kernels import axpy, least_rotation, trace_coproduct_splits
from .omega import omega, quotient_model
from .traces import TracePolynomial, TraceTensor2, necklace_basis, necklace_index, trace_project


class TensorPolynomial2(LinearCombination):
    """Element of T(H) (x) T(H), keyed by pairs of words."""

    __slots__ = ()

    def swap(self):
        return TensorPolynomial2._wrap({(b, a): c for (a, b), c in self.terms.items()})


@lru_cache(maxsize=None)
def _word_coproduct(word):
    n = len(word)
    out = {}
    for mask in range(1 << n):
        left = tuple(word[i] for i in range(n) if mask >> i & 1)
        right = tuple(word[i] for i in range(n) if not mask >> i & 1)
        out[(left, right)] = out.get((left, right), 0) + 1
    return out


def coproduct(p):
    out = {}
    for w, c in p.terms.items():
        axpy(out, c, _word_coproduct(w))
    return TensorPolynomial2._wrap(out)


def reduced_coproduct(p):
    out = dict(coproduct(p).terms)
    for w, c in p.terms.items():
        axpy(out, -c, {(w, ()): 1, ((), w): 1})
    return TensorPolynomial2._wrap(out)


def counit(p):
    return p.constant()


def antipode(p):
    """Reverse each word and multiply by (-1)^length."""
    return Polynomial._wrap({w[::-1]: (-c if len(w) % 2 else c) for w, c in p.terms.items()})


def twisted_coproduct(p):
    """(id (x) antipode) composed with the coproduct."""
    out = {}
    for (a, b), c in coproduct(p).terms.items():
        key = (a, b[::-1])
        axpy(out, -c if len(b) % 2 else c, {key: 1})
    return TensorPolynomial2._wrap(out)


def tensor_multiply(t):
    """Multiplication map T(H) (x) T(H) -> T(H)."""
    out = {}
    for (a, b), c in t.terms.items():
        axpy(out, c, {a + b: 1})
    return Polynomial._wrap(out)


def tensor_map(t, left, right):
    """Apply linear maps (Polynomial -> Polynomial) to each leg."""
    out = {}
    for (a, b), c in t.terms.items():
        la = left(Polynomial({a: 1}))
        rb = right(Polynomial({b: 1}))
        for u, x in la.terms.items():
            for v, y in rb.terms.items():
                axpy(out, c * x * y, {(u, v): 1})
    return TensorPolynomial2._wrap(out)


def trace_reduced_coproduct(t):
    """|reduced coproduct| on trace polynomials, valued in TraceTensor2."""
    out = {}
    for w, c in t.terms.items():
        axpy(out, c, trace_coproduct_splits(w))
    return TraceTensor2._wrap(out)


def trace_twisted_coproduct(t):
    """|(id (x) antipode) coproduct| on trace polynomials (all splits)."""
    out = {}
    for w, c in t.terms.items():
        n = len(w)
        for mask in range(1 << n):
            left = tuple(w[i] for i in range(n) if mask >> i & 1)
            right = tuple(w[i] for i in range(n) if not mask >> i & 1)
            sign = -1 if len(right) % 2 else 1
            key = (least_rotation(left), least_rotation(right[::-1]))
            axpy(out, c * sign, {key: 1})
    return TraceTensor2._wrap(out)


# ------------------------------------------------------------ kernels


def project_tensor(t, g):
    """Project both legs of a TraceTensor2 into quotient coordinates.

    Keys become ((deg_left, i), (deg_right, j)).
    """
    out = {}
    for (a, b), c in t.terms.items():
        pa = quotient_model(g, len(a)).project_word(a)
        if not pa:
            continue
        pb = quotient_model(g, len(b)).project_word(b)
        for i, x in pa.items():
            for j, y in pb.items():
                axpy(out, c * x * y, {((len(a), i), (len(b), j)): 1})
    return out


def domain_words(g, d, model):
    if model == "free":
        return list(necklace_basis(g, 0, d))
    if model == "omega":
        return quotient_model(g, d).section_words()
    raise ValueError(f"unknown model {model!r}")


def reduced_coproduct_columns(g, d, model="free"):
    cols = []
    for w in domain_words(g, d, model):
        splits = trace_coproduct_splits(w)
        if model == "free":
            cols.append(dict(splits))
        else:
            cols.append(project_tensor(TraceTensor2(splits), g))
    return cols


def reduced_coproduct_matrix(g, d, model="free"):
    """Exact matrix of the reduced coproduct; rows indexed by sorted tensor keys."""
    cols = reduced_coproduct_columns(g, d, model)
    keys = sorted({k for c in cols for k in c})
    pos = {k: i for i, k in enumerate(keys)}
    m = Matrix.from_columns(len(keys), [{pos[k]: v for k, v in c.items()} for c in cols])
    return m, keys


@dataclass(frozen=True)
class KernelReport:
    g: int
    degree: int
    model: str
    kernel: Subspace
    n: int = 0

    @property
    def dim(self):
        return self.kernel.dim


@lru_cache(maxsize=None)
def kernel_reduced_coproduct(g, d, model="free"):
    cols = reduced_coproduct_columns(g, d, model)
    _, kernel = column_kernel(cols)
    return KernelReport(g, d, model, Subspace(len(cols), kernel))


def kernel_by_class(g, d, model="free"):
    """Kernel dimensions per multidegree (free) or per D-class (omega)."""
    alph = Alphabet(g)
    words = domain_words(g, d, model)
    cols = reduced_coproduct_columns(g, d, model)
    groups = {}
    for k, w in enumerate(words):
        lam = multidegree(w, alph)
        key = lam if model == "free" else d_class_of(lam, g)
        groups.setdefault(key, []).append(k)
    out = {}
    for key, idx in sorted(groups.items()):
        _, ker = column_kernel([cols[k] for k in idx])
        if ker:
            out[key] = len(ker)
    return out


# ---------------------------------------------------- canonical subspaces


def _to_coords(t, g, d, model, n=0):
    if model == "free":
        index = necklace_index(g, n, d)
        return {index[w]: c for w, c in t.terms.items()}
    return quotient_model(g, d).project(t)


def _ambient(g, d, model, n=0):
    if model == "free":
        return len(necklace_basis(g, n, d))
    return quotient_model(g, d).dim


def wedge_elements(g, d):
    out = []
    for subset in combinations(range(2 * g), d):
        terms = {}
        for perm in permutations(range(d)):
            inv = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
            axpy(terms, -1 if inv % 2 else 1, {tuple(subset[i] for i in perm): 1})
        out.append(trace_project(Polynomial(terms)))
    return out


def h_times_l_elements(g, d):
    out = []
    if d < 2:
        return out
    for v in range(2 * g):
        for ell in lyndon_lie_basis(g, 0, d - 1):
            out.append(trace_project(Polynomial.letter(v) * ell.poly))
    return out


def boundary_target_elements(g, n, d, N=None):
    """|z_j^k| with 2k = d, and |omega^k| with k >= 2 and 2k = d."""
    alph = Alphabet(g, n)
    out = []
    if d % 2 == 0 and d >= 2:
        k = d // 2
        for j in range(1, n + 1):
            out.append(TracePolynomial({(alph.z(j),) * k: 1}))
        if k >= 2:
            p = Polynomial.one()
            om = omega(g, n)
            for _ in range(k):
                p = p * om
            out.append(trace_project(p).degree_part(d, alph))
    return out


def canonical_subspaces(g, d, which, model="free", n=0):
    if which == "wedge":
        elems = wedge_elements(g, d)
    elif which == "H_times_L":
        elems = h_times_l_elements(g, d)
    elif which == "boundary_targets":
        elems = boundary_target_elements(g, n, d)
    else:
        raise ValueError(f"unknown subspace {which!r}")
    if model == "omega" and n:
        raise ValueError("the omega model is defined for closed surfaces (n = 0)")
    return Subspace(_ambient(g, d, model, n), [_to_coords(t, g, d, model, n) for t in elems])


def free_to_omega_image(g, d):
    """Image of the free kernel under the projection to the quotient."""
    free = kernel_reduced_coproduct(g, d, "free")
    words = necklace_basis(g, 0, d)
    model = quotient_model(g, d)
    vecs = []
    for v in free.kernel.basis:
        vecs.append(model.project_vector({words[i]: c for i, c in v.items()}))
    return Subspace(model.dim, vecs)
