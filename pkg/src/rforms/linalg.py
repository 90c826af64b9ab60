"""
Sparse matrices over Q(t) with tensor-leg structure.

Rows and columns are flat integer indices; ``row_shape``/``col_shape``
record the leg dimensions so that a flat index can be read as a
multi-index (first leg most significant).  Only nonzero entries are
stored, row by row.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod

from .scalar import ONE, ZERO, ZeroDivision, as_scalar

__all__ = [
    "QMatrix",
    "ShapeError",
    "SingularMatrix",
    "kron",
    "leg_embed",
    "solve_linear",
    "inverse",
    "rank",
    "rank_at",
    "kernel_basis",
    "SpanEchelon",
    "flip",
    "DEFAULT_T0",
]

DEFAULT_T0 = Fraction(7, 5)


class ShapeError(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    def __init__(self, rank, size):
        super().__init__(f"singular matrix: rank {rank} < {size}")
        self.rank = rank
        self.size = size


def _flat(idx, shape):
    f = 0
    for i, d in zip(idx, shape):
        f = f * d + i
    return f


def _multi(f, shape):
    out = []
    for d in reversed(shape):
        f, r = divmod(f, d)
        out.append(r)
    return tuple(reversed(out))


class QMatrix:
    """Immutable sparse matrix with Scalar entries."""

    __slots__ = ("row_shape", "col_shape", "nrows", "ncols", "rows")

    def __init__(self, row_shape, col_shape, rows=None, _clean=False):
        self.row_shape = tuple(row_shape)
        self.col_shape = tuple(col_shape)
        self.nrows = prod(self.row_shape)
        self.ncols = prod(self.col_shape)
        if rows is None:
            rows = {}
        if not _clean:
            rows = {r: {c: v for c, v in row.items() if v}
                    for r, row in rows.items()}
            rows = {r: row for r, row in rows.items() if row}
        self.rows = rows

    # constructors

    @classmethod
    def zeros(cls, row_shape, col_shape=None):
        return cls(_shape(row_shape), _shape(col_shape if col_shape is not None else row_shape), {}, True)

    @classmethod
    def identity(cls, shape):
        shape = _shape(shape)
        n = prod(shape)
        return cls(shape, shape, {i: {i: ONE} for i in range(n)}, True)

    @classmethod
    def diag(cls, values, shape=None):
        values = [as_scalar(v) for v in values]
        shape = _shape(shape if shape is not None else len(values))
        return cls(shape, shape, {i: {i: v} for i, v in enumerate(values)})

    @classmethod
    def from_dense(cls, data, row_shape=None, col_shape=None):
        data = [[as_scalar(v) for v in row] for row in data]
        nr = len(data)
        nc = len(data[0]) if nr else 0
        rs = _shape(row_shape if row_shape is not None else nr)
        cs = _shape(col_shape if col_shape is not None else nc)
        return cls(rs, cs, {r: {c: v for c, v in enumerate(row)} for r, row in enumerate(data)})

    @classmethod
    def from_entries(cls, row_shape, col_shape, entries):
        """Build from an iterable of (row multi-index, col multi-index, value); values accumulate."""
        rs, cs = _shape(row_shape), _shape(col_shape)
        rows = {}
        for ri, ci, v in entries:
            r = _flat(ri, rs) if isinstance(ri, tuple) else ri
            c = _flat(ci, cs) if isinstance(ci, tuple) else ci
            row = rows.setdefault(r, {})
            row[c] = row.get(c, ZERO) + as_scalar(v)
        return cls(rs, cs, rows)

    # access

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        ri, ci = key
        r = _flat(ri, self.row_shape) if isinstance(ri, tuple) else ri
        c = _flat(ci, self.col_shape) if isinstance(ci, tuple) else ci
        return self.rows.get(r, {}).get(c, ZERO)

    def items(self):
        for r, row in self.rows.items():
            for c, v in row.items():
                yield r, c, v

    def multi_items(self):
        for r, c, v in self.items():
            yield _multi(r, self.row_shape), _multi(c, self.col_shape), v

    def nnz(self):
        return sum(len(row) for row in self.rows.values())

    def to_dense(self):
        return [[self.rows.get(r, {}).get(c, ZERO) for c in range(self.ncols)]
                for r in range(self.nrows)]

    def row_index(self, f):
        return _multi(f, self.row_shape)

    def col_index(self, f):
        return _multi(f, self.col_shape)

    # predicates

    def is_zero(self):
        return not self.rows

    def is_square(self):
        return self.nrows == self.ncols

    def is_diagonal(self):
        return all(set(row) <= {r} for r, row in self.rows.items())

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(sorted((r, c, v) for r, c, v in self.items())))

    # arithmetic

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, orow in other.rows.items():
            row = rows.setdefault(r, {})
            for c, v in orow.items():
                row[c] = row.get(c, ZERO) + v
        return QMatrix(self.row_shape, self.col_shape, rows)

    def __neg__(self):
        return QMatrix(self.row_shape, self.col_shape,
                       {r: {c: -v for c, v in row.items()} for r, row in self.rows.items()}, True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = as_scalar(s)
        if not s:
            return QMatrix.zeros(self.row_shape, self.col_shape)
        if s.is_one():
            return self
        return QMatrix(self.row_shape, self.col_shape,
                       {r: {c: v * s for c, v in row.items()} for r, row in self.rows.items()}, True)

    def __mul__(self, s):
        if isinstance(s, QMatrix):
            return self @ s
        return self.scale(s)

    __rmul__ = scale

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = {}
        for r, row in self.rows.items():
            acc = {}
            for k, a in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for c, b in brow.items():
                    prev = acc.get(c)
                    acc[c] = a * b if prev is None else prev + a * b
            out[r] = acc
        return QMatrix(self.row_shape, other.col_shape, out)

    def __pow__(self, k):
        if k < 0:
            return inverse(self) ** (-k)
        out = QMatrix.identity(self.row_shape)
        for _ in range(k):
            out = out @ self
        return out

    def transpose(self):
        rows = {}
        for r, c, v in self.items():
            rows.setdefault(c, {})[r] = v
        return QMatrix(self.col_shape, self.row_shape, rows, True)

    @property
    def T(self):
        return self.transpose()

    def trace(self):
        acc = ZERO
        for r, row in self.rows.items():
            v = row.get(r)
            if v is not None:
                acc = acc + v
        return acc

    def map(self, fn):
        return QMatrix(self.row_shape, self.col_shape,
                       {r: {c: fn(v) for c, v in row.items()} for r, row in self.rows.items()})

    def permute_legs(self, perm):
        """Reorder both row and column legs: new leg k is old leg perm[k]."""
        rs = tuple(self.row_shape[p] for p in perm)
        cs = tuple(self.col_shape[p] for p in perm)
        rows = {}
        for r, c, v in self.items():
            ri, ci = _multi(r, self.row_shape), _multi(c, self.col_shape)
            nr = _flat(tuple(ri[p] for p in perm), rs)
            nc = _flat(tuple(ci[p] for p in perm), cs)
            rows.setdefault(nr, {})[nc] = v
        return QMatrix(rs, cs, rows, True)

    def partial_transpose(self, leg):
        """Swap the row and column index of one leg (0-based)."""
        rows = {}
        for r, c, v in self.items():
            ri, ci = list(_multi(r, self.row_shape)), list(_multi(c, self.col_shape))
            ri[leg], ci[leg] = ci[leg], ri[leg]
            rows.setdefault(_flat(ri, self.row_shape), {})[_flat(ci, self.col_shape)] = v
        return QMatrix(self.row_shape, self.col_shape, rows, True)

    def flatten(self):
        """Entries as a sparse vector {flat position: value}."""
        n = self.ncols
        return {r * n + c: v for r, c, v in self.items()}

    def at(self, t0=DEFAULT_T0):
        """Specialize t -> t0; returns a dict-of-dicts of Fractions."""
        return {r: {c: v.at(t0) for c, v in row.items()} for r, row in self.rows.items()}

    def subs_power(self, k):
        return self.map(lambda v: v.subs_power(k))

    def __repr__(self):
        return f"QMatrix({self.row_shape}x{self.col_shape}, nnz={self.nnz()})"

    def pretty(self):
        dense = self.to_dense()
        return "\n".join("[" + ", ".join(str(v) for v in row) + "]" for row in dense)


def _shape(s):
    if isinstance(s, int):
        return (s,)
    return tuple(s)


def flip(n):
    """The flip P on C^n (x) C^n: e_i (x) e_j -> e_j (x) e_i."""
    return QMatrix((n, n), (n, n), {j * n + i: {i * n + j: ONE} for i in range(n) for j in range(n)}, True)


def kron(a, b):
    """Kronecker product with concatenated leg shapes."""
    nb_r, nb_c = b.nrows, b.ncols
    rows = {}
    for ra, rowa in a.rows.items():
        for rb, rowb in b.rows.items():
            row = {}
            for ca, va in rowa.items():
                for cb, vb in rowb.items():
                    row[ca * nb_c + cb] = va * vb
            rows[ra * nb_r + rb] = row
    return QMatrix(a.row_shape + b.row_shape, a.col_shape + b.col_shape, rows, True)


def leg_embed(m, legs, total_legs, dim):
    """Embed a matrix acting on two adjacent legs into a ``total_legs``-fold tensor space.

    ``legs`` is 1-based, e.g. (1, 2) or (2, 3) for three legs.
    """
    a, b = legs
    if b != a + 1 or a < 1 or b > total_legs:
        raise ShapeError(f"legs must be adjacent and within 1..{total_legs}, got {legs}")
    if m.nrows != dim * dim or m.ncols != dim * dim:
        raise ShapeError(f"expected a {dim**2}x{dim**2} matrix, got {m.shape}")
    left = QMatrix.identity((dim,) * (a - 1)) if a > 1 else None
    right = QMatrix.identity((dim,) * (total_legs - b)) if b < total_legs else None
    m2 = QMatrix((dim, dim), (dim, dim), m.rows, True)
    out = m2
    if left is not None:
        out = kron(left, out)
    if right is not None:
        out = kron(out, right)
    return out


# elimination


def _pivot_key(v):
    return (v.num.degree() + v.den.degree(), len(v.num.coeffs()))


def _rref(rows, ncols):
    """Reduced row echelon form of a list of sparse rows (dict col -> Scalar).

    Returns (pivot_cols, reduced_rows); columns are processed in increasing order.
    """
    work = [dict(r) for r in rows if r]
    pivots = []
    reduced = []
    for col in range(ncols):
        best = None
        for idx, row in enumerate(work):
            v = row.get(col)
            if v is not None:
                k = _pivot_key(v)
                if best is None or k < best[0]:
                    best = (k, idx)
        if best is None:
            continue
        prow = work.pop(best[1])
        inv = prow[col].inverse()
        prow = {c: v * inv for c, v in prow.items()}
        for row in work:
            f = row.get(col)
            if f is not None:
                _axpy(row, prow, -f)
        for row in reduced:
            f = row.get(col)
            if f is not None:
                _axpy(row, prow, -f)
        pivots.append(col)
        reduced.append(prow)
        if not work:
            break
    return pivots, reduced


def _axpy(dst, src, s):
    for c, v in src.items():
        nv = dst.get(c, ZERO) + s * v
        if nv:
            dst[c] = nv
        else:
            dst.pop(c, None)


def solve_linear(a, rhs):
    """Exact solution x of a @ x = rhs for square nonsingular a."""
    if not a.is_square():
        raise ShapeError(f"solve_linear needs a square matrix, got {a.shape}")
    if rhs.nrows != a.nrows:
        raise ShapeError(f"right-hand side has {rhs.nrows} rows, expected {a.nrows}")
    n = a.ncols
    aug = []
    rrows = rhs.rows
    for r in range(a.nrows):
        row = dict(a.rows.get(r, {}))
        for c, v in rrows.get(r, {}).items():
            row[n + c] = v
        aug.append(row)
    pivots, red = _rref(aug, n)
    if len(pivots) < n or any(p >= n for p in pivots):
        rk = sum(1 for p in pivots if p < n)
        raise SingularMatrix(rk, n)
    out = {}
    for p, row in zip(pivots, red):
        out[p] = {c - n: v for c, v in row.items() if c >= n}
    return QMatrix(a.col_shape, rhs.col_shape, out)


def inverse(a):
    return solve_linear(a, QMatrix.identity(a.row_shape))


def rank(a):
    """Exact rank over Q(t)."""
    if isinstance(a, QMatrix):
        rows = list(a.rows.values())
    else:
        rows = list(a)
    ech = SpanEchelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def rank_at(a, t0=DEFAULT_T0):
    """Rank after specializing t -> t0 (a lower bound for the exact rank)."""
    rows = a.rows.values() if isinstance(a, QMatrix) else a
    ech = _FractionEchelon()
    for row in rows:
        ech.add({c: v.at(t0) for c, v in row.items()})
    return ech.rank


def kernel_basis(a):
    """Right kernel basis; each vector is a dict col -> Scalar with first nonzero entry 1."""
    ncols = a.ncols
    pivots, red = _rref(list(a.rows.values()), ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = {f: ONE}
        for p, row in zip(pivots, red):
            v = row.get(f)
            if v:
                vec[p] = -v
        first = min(vec)
        lead = vec[first]
        if not lead.is_one():
            inv = lead.inverse()
            vec = {k: v * inv for k, v in vec.items()}
        basis.append(vec)
    return basis


class SpanEchelon:
    """Incremental row echelon form of sparse vectors with hashable, ordered keys.

    Each stored row is normalized so that its leading key (largest under
    ``order``) has coefficient 1.  ``reduce`` returns the remainder of a
    vector modulo the span; the vector lies in the span iff the remainder
    is empty.
    """

    def __init__(self, order=None):
        self.order = order if order is not None else (lambda k: k)
        self.pivots = {}

    @property
    def rank(self):
        return len(self.pivots)

    def _lead(self, vec):
        return max(vec, key=self.order)

    def reduce(self, vec):
        vec = {k: v for k, v in vec.items() if v}
        done = {}
        while vec:
            k = self._lead(vec)
            prow = self.pivots.get(k)
            if prow is None:
                done[k] = vec.pop(k)
                continue
            f = vec[k]
            _axpy(vec, prow, -f)
            vec.pop(k, None)
        return done

    def _reduce_top(self, vec):
        vec = {k: v for k, v in vec.items() if v}
        while vec:
            k = self._lead(vec)
            prow = self.pivots.get(k)
            if prow is None:
                return k, vec
            f = vec[k]
            _axpy(vec, prow, -f)
            vec.pop(k, None)
        return None, vec

    def add(self, vec):
        """Insert a vector; returns True if it enlarged the span."""
        k, vec = self._reduce_top(vec)
        if k is None:
            return False
        inv = vec[k].inverse()
        self.pivots[k] = {c: v * inv for c, v in vec.items()}
        return True

    def contains(self, vec):
        return not self.reduce(vec)


class _FractionEchelon:
    def __init__(self):
        self.pivots = {}

    @property
    def rank(self):
        return len(self.pivots)

    def add(self, vec):
        vec = {k: v for k, v in vec.items() if v}
        while vec:
            k = max(vec)
            prow = self.pivots.get(k)
            if prow is None:
                inv = 1 / vec[k]
                self.pivots[k] = {c: v * inv for c, v in vec.items()}
                return True
            f = vec[k]
            for c, v in prow.items():
                nv = vec.get(c, 0) - f * v
                if nv:
                    vec[c] = nv
                else:
                    vec.pop(c, None)
        return False


def matrix_is_zero_at(m, t0=DEFAULT_T0):
    try:
        return all(v.at(t0) == 0 for _, _, v in m.items())
    except ZeroDivision:
        return False
