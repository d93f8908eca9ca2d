"""Exact rational linear algebra on sparse vectors.

Vectors are plain dicts ``column -> Fraction`` with no stored zeros.
Elimination pivots on the first nonzero column, so every echelon form
(and everything derived from it) is reproducible byte for byte.
"""

from fractions import Fraction

from .kernels import axpy, reduce_vector


class MismatchedAmbient(ValueError):
    pass


def _clean(vec):
    out = {}
    for c, v in vec.items():
        if v:
            out[c] = v if isinstance(v, Fraction) else Fraction(v)
    return out


class Echelon:
    """Incrementally maintained reduced row-echelon basis.

    With ``track=True`` every basis row remembers the combination of input
    vectors (by insertion label) that produced it; ``add`` then returns the
    dependency combination when the new vector is already in the span.
    """

    def __init__(self, track=False):
        self.rows = {}
        self.track = track
        self.combos = {} if track else None

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec):
        return reduce_vector(vec, self.rows)

    def _reduce_tracked(self, vec, combo):
        out = dict(vec)
        for p in [c for c in vec if c in self.rows]:
            coef = out.pop(p, 0)
            if not coef:
                continue
            row = self.rows[p]
            for c, v in row.items():
                if c == p:
                    continue
                nv = out.get(c, 0) - coef * v
                if nv:
                    out[c] = nv
                else:
                    out.pop(c, None)
            axpy(combo, -coef, self.combos[p])
        return out

    def add(self, vec, label=None):
        """Insert ``vec``; return None if it enlarged the span.

        Otherwise return the dependency: with tracking, a dict
        ``label -> coefficient`` summing to zero; without, ``{}``.
        """
        if self.track:
            combo = {label: Fraction(1)}
            red = self._reduce_tracked(vec, combo)
        else:
            red = self.reduce(vec)
        if not red:
            return combo if self.track else {}
        p = min(red)
        inv = 1 / Fraction(red[p])
        row = {c: v * inv for c, v in red.items()}
        row[p] = Fraction(1)
        if self.track:
            combo = {k: v * inv for k, v in combo.items()}
        for q, other in self.rows.items():
            coef = other.get(p)
            if coef:
                axpy(other, -coef, row)
                if self.track:
                    axpy(self.combos[q], -coef, combo)
        self.rows[p] = row
        if self.track:
            self.combos[p] = combo
        return None

    def pivots(self):
        return sorted(self.rows)


class Subspace:
    """Linear subspace of K^ambient_dim held in reduced row-echelon form."""

    __slots__ = ("ambient_dim", "_rows", "pivot_cols")

    def __init__(self, ambient_dim, vectors=()):
        ech = Echelon()
        for v in vectors:
            v = _clean(v)
            if v and (min(v) < 0 or max(v) >= ambient_dim):
                raise IndexError("vector coordinate outside ambient space")
            ech.add(v)
        self.ambient_dim = ambient_dim
        self._rows = {p: ech.rows[p] for p in sorted(ech.rows)}
        self.pivot_cols = tuple(self._rows)

    @classmethod
    def _from_rows(cls, ambient_dim, rows):
        obj = cls.__new__(cls)
        obj.ambient_dim = ambient_dim
        obj._rows = {p: rows[p] for p in sorted(rows)}
        obj.pivot_cols = tuple(obj._rows)
        return obj

    @classmethod
    def full(cls, n):
        return cls._from_rows(n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def zero(cls, n):
        return cls._from_rows(n, {})

    @property
    def dim(self):
        return len(self._rows)

    @property
    def basis(self):
        return [dict(sorted(r.items())) for r in self._rows.values()]

    def reduce(self, vec):
        return reduce_vector(_clean(vec), self._rows)

    def contains_vector(self, vec):
        return not self.reduce(vec)

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise MismatchedAmbient(f"{self.ambient_dim} != {other.ambient_dim}")

    def sum(self, other):
        self._check(other)
        ech = Echelon()
        ech.rows = {p: dict(r) for p, r in self._rows.items()}
        for r in other._rows.values():
            ech.add(r)
        return Subspace._from_rows(self.ambient_dim, ech.rows)

    def intersect(self, other):
        self._check(other)
        # a in self lies in other iff its reduction modulo other vanishes
        ech = Echelon(track=True)
        kernel = []
        for p, r in self._rows.items():
            dep = ech.add(other.reduce(r), label=p)
            if dep is not None:
                kernel.append(dep)
        vecs = []
        for dep in kernel:
            v = {}
            for p, c in dep.items():
                axpy(v, c, self._rows[p])
            vecs.append(v)
        return Subspace(self.ambient_dim, vecs)

    def contains(self, other):
        self._check(other)
        return all(self.contains_vector(r) for r in other._rows.values())

    def quotient_dim(self, other):
        """dim(self + other) - dim(other)."""
        return self.sum(other).dim - other.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self):
        return hash((self.ambient_dim, self.pivot_cols))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def subspace_ops(a, b, op):
    """Dispatch for the lattice operations by name.

    ``contains_vector`` takes a vector (dict or sequence) as ``b``.
    """
    if op == "contains_vector":
        vec = b if isinstance(b, dict) else dict(enumerate(b))
        return a.contains_vector(vec)
    if op == "sum":
        return a.sum(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "quotient_dim":
        return a.quotient_dim(b)
    raise ValueError(f"unknown subspace operation {op!r}")


class Matrix:
    """Sparse rows x cols matrix over Q, stored column-wise."""

    __slots__ = ("rows", "cols", "_columns")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self._columns = [dict() for _ in range(cols)]
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError((r, c))
            if v:
                self._columns[c][r] = Fraction(v)

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        entries = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(nrows, ncols, entries)

    @classmethod
    def from_columns(cls, rows, columns):
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            m._columns[j] = _clean(col)
        return m

    @property
    def entries(self):
        return {(r, c): v for c, col in enumerate(self._columns) for r, v in col.items()}

    def column(self, j):
        return dict(self._columns[j])

    def apply(self, vec):
        out = {}
        for j, x in vec.items():
            if x:
                axpy(out, x, self._columns[j])
        return out

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out


def column_kernel(columns, ncols=None):
    """Rank and kernel vectors of the map sending basis vector j to columns[j].

    The columns may be keyed by arbitrary hashable target coordinates.
    """
    ech = Echelon(track=True)
    kernel = []
    for j, col in enumerate(columns):
        dep = ech.add(_clean(col), label=j)
        if dep is not None:
            kernel.append(dep)
    return len(ech), kernel


def echelon_kernel(m):
    """Return ``(rank, kernel)`` of ``m`` with the kernel as a Subspace."""
    rank, kernel = column_kernel(m._columns)
    return rank, Subspace(m.cols, kernel)


def solve(columns, target):
    """Find x with sum_j x_j * columns[j] == target, or None."""
    ech = Echelon(track=True)
    for j, col in enumerate(columns):
        ech.add(_clean(col), label=j)
    combo = {}
    red = ech._reduce_tracked(_clean(target), combo)
    if red:
        return None
    # combo holds -(coefficients) expressing target through the basis rows
    return {j: -v for j, v in combo.items() if v}
