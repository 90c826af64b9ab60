"""
Free word model of the FRT algebra O(G_q).

A letter is a triple ``(i, j, s)`` with 0-based indices and ``s = 1`` for the
antipoded generator S(u^i_j).  A word is a tuple of letters; the empty tuple
is the unit.  Printing uses 1-based indices, so ``(0, 1, 0)`` shows as
``u^1_2``.

Equality in the quotient is decided by linear algebra inside a degree slice
of the two-sided ideal generated by the FRT relations, the metric relations
(orthogonal and symplectic series) and det_q - 1 (SL series).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

from .linalg import SpanEchelon
from .rmatrix import SeriesSpec, build_rmatrix
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "GenLetter",
    "WordCombo",
    "ResourceBound",
    "DegreeOverflow",
    "RelationIdealSlice",
    "letter",
    "word",
    "word_str",
    "coproduct_splittings",
    "triple_splittings",
    "antipode_word",
    "counit",
    "det_q",
    "frt_relations",
    "metric_relations",
    "build_relation_slice",
    "ideal_member",
    "all_words",
    "MAX_DEGREE",
]

MAX_DEGREE = 3
# N^(2D) bound on the number of monomials in the top degree of a slice
MAX_MONOMIALS = 20000


class ResourceBound(RuntimeError):
    """A configured size bound would be exceeded."""


class DegreeOverflow(ValueError):
    pass


class GenLetter(tuple):
    """(i, j, s): u^i_j when s = 0, S(u^i_j) when s = 1; 0-based indices."""

    __slots__ = ()

    def __new__(cls, i, j, s=0):
        if s not in (0, 1):
            raise ValueError(f"s_parity must be 0 or 1, got {s}")
        return super().__new__(cls, (i, j, s))

    def __str__(self):
        i, j, s = self
        body = f"u^{i + 1}_{j + 1}"
        return f"S({body})" if s else body


def letter(i, j, s=0):
    return GenLetter(i, j, s)


def word(*letters):
    return tuple(GenLetter(*l) for l in letters)


def word_str(w):
    return "1" if not w else "".join(str(GenLetter(*l)) for l in w)


def _check_word(w, N):
    for l in w:
        if not (0 <= l[0] < N and 0 <= l[1] < N):
            raise ValueError(f"letter {l} out of range for N={N}")


class WordCombo:
    """Formal linear combination of words, {word: Scalar} without zeros."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in (terms.items() if isinstance(terms, dict) else terms):
                self._acc(tuple(w), as_scalar(c))

    def _acc(self, w, c):
        v = self.terms.get(w, ZERO) + c
        if v:
            self.terms[w] = v
        else:
            self.terms.pop(w, None)

    @classmethod
    def of(cls, w, c=ONE):
        return cls({tuple(w): c})

    @classmethod
    def scalar(cls, c):
        return cls({(): c})

    def __add__(self, other):
        out = WordCombo(self.terms)
        for w, c in _combo(other).terms.items():
            out._acc(w, c)
        return out

    def __sub__(self, other):
        return self + _combo(other).scale(-ONE)

    def __neg__(self):
        return self.scale(-ONE)

    def scale(self, s):
        s = as_scalar(s)
        if not s:
            return WordCombo()
        return WordCombo({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other):
        """Concatenation product."""
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        other = _combo(other)
        out = WordCombo()
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out._acc(w1 + w2, c1 * c2)
        return out

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return _combo(other) * self

    def __eq__(self, other):
        return isinstance(other, WordCombo) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def degree(self):
        return max((len(w) for w in self.terms), default=0)

    def has_s_letters(self):
        return any(l[2] for w in self.terms for l in w)

    def __repr__(self):
        return f"WordCombo({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            parts.append(f"({self.terms[w]})*{word_str(w)}")
        return " + ".join(parts)


def _combo(x):
    if isinstance(x, WordCombo):
        return x
    if isinstance(x, tuple):
        return WordCombo.of(x)
    return WordCombo.scalar(as_scalar(x))


# coalgebra structure


def _letter_splits(l, N):
    i, j, s = l
    if s == 0:
        return [((i, k, 0), (k, j, 0)) for k in range(N)]
    # Delta S(u^i_j) = sum_k S(u^k_j) (x) S(u^i_k)
    return [((k, j, 1), (i, k, 1)) for k in range(N)]


def coproduct_splittings(w, N):
    """All (w1, w2) with Delta(w) = sum w1 (x) w2; each pair occurs once."""
    w = tuple(w)
    if not w:
        return [((), ())]
    per = [_letter_splits(l, N) for l in w]
    out = []
    for choice in product(*per):
        out.append((tuple(c[0] for c in choice), tuple(c[1] for c in choice)))
    return out


def triple_splittings(w, N, side="left"):
    """(Delta (x) id) Delta (``left``) or (id (x) Delta) Delta (``right``) as a list of triples."""
    out = []
    for a, b in coproduct_splittings(w, N):
        if side == "left":
            out.extend((x, y, b) for x, y in coproduct_splittings(a, N))
        else:
            out.extend((a, x, y) for x, y in coproduct_splittings(b, N))
    return out


def counit(w):
    for i, j, _ in w:
        if i != j:
            return ZERO
    return ONE


def antipode_word(w, s2=None):
    """S(w): reverse and flip parities.

    A letter already at parity 1 maps to S^2(u^i_j) = sum fbar[i,k] u^k_l f[l,j];
    ``s2`` is the pair (fbar, f) of N x N matrices and must be supplied then.
    """
    w = tuple(w)
    if not any(l[2] for l in w):
        return WordCombo.of(tuple(GenLetter(l[0], l[1], 1) for l in reversed(w)))
    if s2 is None:
        raise LookupError("S^2 of an antipoded letter needs the functional matrices (fbar, f)")
    fbar, f = s2
    N = f.nrows
    out = WordCombo.scalar(ONE)
    for l in reversed(w):
        i, j, s = l
        if s == 0:
            out = out * WordCombo.of(((i, j, 1),))
            continue
        piece = WordCombo()
        for k in range(N):
            a = fbar[i, k]
            if not a:
                continue
            for m in range(N):
                b = f[m, j]
                if b:
                    piece._acc(((k, m, 0),), a * b)
        out = out * piece
    return out


def all_words(N, length, parity=0):
    letters = [(i, j, parity) for i in range(N) for j in range(N)]
    return [tuple(p) for p in product(letters, repeat=length)]


# relations


def _uu(e, f, c, d):
    return ((e, c, 0), (f, d, 0))


def frt_relations(spec: SeriesSpec):
    """Components of Rhat (u(x)u) - (u(x)u) Rhat, indexed by (a, b, c, d)."""
    N = spec.N
    Rh = build_rmatrix(spec).Rhat
    rels = []
    for a, b, c, d in product(range(N), repeat=4):
        x = WordCombo()
        for col, v in Rh.rows.get(a * N + b, {}).items():
            e, f = divmod(col, N)
            x._acc(_uu(e, f, c, d), v)
        for e, f in product(range(N), repeat=2):
            v = Rh[e * N + f, c * N + d]
            if v:
                x._acc(_uu(a, b, e, f), -v)
        if x:
            rels.append(((a, b, c, d), x))
    return rels


def metric_relations(spec: SeriesSpec):
    """ehat (u(x)u) - ehat and (u(x)u) ehat - ehat, componentwise (O and Sp only)."""
    bundle = build_rmatrix(spec)
    if bundle.ehat is None:
        return []
    N = spec.N
    E = bundle.ehat
    rels = []
    for a, b, c, d in product(range(N), repeat=4):
        left = WordCombo()
        for col, v in E.rows.get(a * N + b, {}).items():
            e, f = divmod(col, N)
            left._acc(_uu(e, f, c, d), v)
        right = WordCombo()
        for e, f in product(range(N), repeat=2):
            v = E[e * N + f, c * N + d]
            if v:
                right._acc(_uu(a, b, e, f), v)
        const = E[a * N + b, c * N + d]
        for tag, x in (("left", left), ("right", right)):
            x = x - const
            if x:
                rels.append(((tag, a, b, c, d), x))
    return rels


def _inversions(p):
    return sum(1 for x in range(len(p)) for y in range(x + 1, len(p)) if p[x] > p[y])


@lru_cache(maxsize=None)
def _det_q(spec: SeriesSpec):
    N = spec.N
    x = WordCombo()
    for p in permutations(range(N)):
        x._acc(tuple((r, p[r], 0) for r in range(N)), (-spec.q) ** _inversions(p))
    return x


def det_q(spec: SeriesSpec) -> WordCombo:
    """sum over permutations of (-q)^inv(sigma) u^1_sigma(1) ... u^N_sigma(N)."""
    return WordCombo(_det_q(spec).terms)


# the ideal slice


def _word_order(w):
    return (len(w), w)


@dataclass
class RelationIdealSlice:
    spec: SeriesSpec
    D: int
    basis: list
    generators: dict = field(default_factory=dict)
    _echelon: SpanEchelon = field(default=None, repr=False)

    @property
    def dim(self):
        return self._echelon.rank

    def contains(self, x: WordCombo) -> bool:
        return ideal_member(x, self)


def _generator_list(spec, D):
    out = [(("frt",) + key, rel) for key, rel in frt_relations(spec)]
    out += [(("metric",) + key, rel) for key, rel in metric_relations(spec)]
    if spec.series == "SL" and spec.N <= D:
        out.append((("det",), det_q(spec) - ONE))
    return out


@lru_cache(maxsize=None)
def build_relation_slice(spec: SeriesSpec, D: int = 2, max_degree: int = MAX_DEGREE,
                         max_monomials: int = MAX_MONOMIALS) -> RelationIdealSlice:
    if D > max_degree:
        raise ResourceBound(f"degree bound {D} exceeds configured maximum {max_degree}")
    if spec.N ** (2 * D) > max_monomials:
        raise ResourceBound(f"N^(2D) = {spec.N ** (2 * D)} exceeds the bound {max_monomials}")
    N = spec.N
    gens = _generator_list(spec, D)
    ech = SpanEchelon(order=_word_order)
    basis = []
    letters = [(i, j, 0) for i in range(N) for j in range(N)]
    for key, g in gens:
        dg = g.degree()
        room = D - dg
        if room < 0:
            continue
        for total in range(room + 1):
            for left_len in range(total + 1):
                right_len = total - left_len
                for L in product(letters, repeat=left_len):
                    for R in product(letters, repeat=right_len):
                        x = WordCombo.of(L) * g * WordCombo.of(R)
                        if ech.add(dict(x.terms)):
                            basis.append(x)
    sl = RelationIdealSlice(spec, D, basis, {k: g for k, g in gens}, ech)
    return sl


def ideal_member(x: WordCombo, sl: RelationIdealSlice) -> bool:
    x = _combo(x)
    if not x:
        return True
    if x.degree() > sl.D:
        raise DegreeOverflow(f"degree {x.degree()} exceeds slice degree {sl.D}")
    if x.has_s_letters():
        raise ValueError("ideal membership is only defined on words without S-letters")
    return sl._echelon.contains(dict(x.terms))
