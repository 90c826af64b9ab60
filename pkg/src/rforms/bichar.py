"""
Bicharacter-type functionals on A (x) A and the coquasitriangular axioms.

A Bicharacter is fixed by its values on pairs of generators, B00 on
u (x) u.  The values on antipoded letters follow from the antipode axioms:

    B10 = B00^-1                     (S(u) (x) u)
    B01 = ((B00^t2)^-1)^t2           (u (x) S(u)), t2 = transpose of the second leg
    B11 = B10^-1                     (S(u) (x) S(u)), which must come back as B00

Longer words are evaluated recursively: split the right word after its
first letter,

    r(c (x) ab) = r(c1 (x) b) r(c2 (x) a),

and when the right word is a single letter split the left word,

    r(ab (x) c) = r(a (x) c1) r(b (x) c2).

The resulting functional on the free algebra is well defined; whether it
descends to O(G_q) is a separate check (pairing with the relation ideal).
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

from .linalg import QMatrix, flip, inverse
from .outcome import Outcome
from .rmatrix import SeriesSpec, build_rmatrix
from .scalar import ONE, ZERO, Scalar, as_scalar
from .words import (
    RelationIdealSlice,
    WordCombo,
    all_words,
    antipode_word,
    coproduct_splittings,
    counit,
    ideal_member,
    word_str,
)

__all__ = [
    "PairFunctional",
    "Bicharacter",
    "Convolution",
    "InadmissibleParameter",
    "make_rform",
    "make_sform",
    "make_central_bichar",
    "bicharacter_from_matrix",
    "counit_pair",
    "evaluate",
    "convolve",
    "check_cqt",
    "check_cb",
    "check_cotriangular",
    "check_well_defined",
    "unitality_check",
    "exchange_check",
    "cross_order_check",
    "words_upto",
    "flow",
    "unflow",
]


class InadmissibleParameter(ValueError):
    pass


def words_upto(N, D, parity=0):
    out = []
    for k in range(D + 1):
        out.extend(all_words(N, k, parity))
    return out


def _pairs(x):
    if isinstance(x, WordCombo):
        return list(x.terms.items())
    return [(tuple(x), ONE)]


@lru_cache(maxsize=1 << 18)
def flow(w):
    """(sources, destinations, parities) of a word.

    Under the coproduct u^i_j runs i -> k -> j, while S(u^i_j) runs j -> k -> i.
    """
    return (tuple(j if s else i for i, j, s in w),
            tuple(i if s else j for i, j, s in w),
            tuple(s for _, _, s in w))


def unflow(src, dst, par):
    return tuple((d, a, 1) if p else (a, d, 0) for a, d, p in zip(src, dst, par))


def _acc(out, k, v):
    x = out.get(k, ZERO) + v
    if x:
        out[k] = x
    else:
        out.pop(k, None)


class PairFunctional:
    """A linear functional on A (x) A given on pairs of words.

    ``prow(sx, px, sy, py)`` returns the nonzero values on all word pairs with
    the given sources and parities, keyed by the pair of destinations.
    Subclasses implement at least one of ``value`` and ``prow``.
    """

    spec: SeriesSpec
    tag: str

    def value(self, w1, w2) -> Scalar:
        w1, w2 = tuple(w1), tuple(w2)
        sx, dx, px = flow(w1)
        sy, dy, py = flow(w2)
        return self.prow(sx, px, sy, py).get((dx, dy), ZERO)

    def prow(self, sx, px, sy, py):
        N = self.spec.N
        out = {}
        for dx in product(range(N), repeat=len(sx)):
            w1 = unflow(sx, dx, px)
            for dy in product(range(N), repeat=len(sy)):
                v = self.value(w1, unflow(sy, dy, py))
                if v:
                    out[(dx, dy)] = v
        return out

    def __call__(self, x1, x2):
        total = ZERO
        for w1, c1 in _pairs(x1):
            for w2, c2 in _pairs(x2):
                v = self.value(w1, w2)
                if v:
                    total = total + c1 * c2 * v
        return total

    def inverse(self) -> "PairFunctional":
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.tag} on {self.spec.label}>"


class Bicharacter(PairFunctional):
    """Functional of r-form type determined by its generator matrix B00."""

    def __init__(self, spec: SeriesSpec, B00: QMatrix, tag: str = "b"):
        N = spec.N
        self.spec = spec
        self.tag = tag
        self.B00 = QMatrix((N, N), (N, N), B00.rows, True)
        try:
            self.B10 = inverse(self.B00)
            self.B01 = inverse(self.B00.partial_transpose(1)).partial_transpose(1)
            self.B11 = inverse(self.B10)
        except ArithmeticError as exc:
            raise InadmissibleParameter(f"{tag}: base matrix is not convolution invertible") from exc
        self._base = {(0, 0): self.B00, (0, 1): self.B01, (1, 0): self.B10, (1, 1): self.B11}
        self._letter_tables = {}
        self._memo = {}
        self._inv = None

    # evaluation

    def prow(self, sx, px, sy, py):
        key = (sx, px, sy, py)
        out = self._memo.get(key)
        if out is not None:
            return out
        out = {}
        if not sx or not sy:
            out[(sx, sy)] = ONE
        elif len(sy) > 1:
            # r(c (x) ab) = r(c1 (x) b) r(c2 (x) a)
            for (mid, db), x in self.prow(sx, px, sy[1:], py[1:]).items():
                for (dx, (da,)), y in self.prow(mid, px, sy[:1], py[:1]).items():
                    _acc(out, (dx, (da,) + db), x * y)
        elif len(sx) == 1:
            for (dx, dy), v in self._letters(px[0], py[0]).get((sx[0], sy[0]), {}).items():
                out[((dx,), (dy,))] = v
        else:
            # r(xy (x) c) = r(x (x) c1) r(y (x) c2)
            for ((d1,), (mid,)), x in self.prow(sx[:1], px[:1], sy, py).items():
                for (dr, dy), y in self.prow(sx[1:], px[1:], (mid,), py).items():
                    _acc(out, ((d1,) + dr, dy), x * y)
        self._memo[key] = out
        return out

    def _letters(self, p1, p2):
        """{(src1, src2): {(dst1, dst2): value}} for single letters of parities p1, p2."""
        key = (p1, p2)
        table = self._letter_tables.get(key)
        if table is None:
            N = self.spec.N
            table = {}
            for r, c, v in self._base[key].items():
                i, n = divmod(r, N)
                j, m = divmod(c, N)
                s1, d1 = (j, i) if p1 else (i, j)
                s2, d2 = (m, n) if p2 else (n, m)
                table.setdefault((s1, s2), {})[(d1, d2)] = v
            self._letter_tables[key] = table
        return table

    def value_cqt2_first(self, w1, w2):
        """Same functional, expanding the left word first (cross-order oracle)."""
        w1, w2 = tuple(w1), tuple(w2)
        N = self.spec.N
        if not w1:
            return counit(w2)
        if not w2:
            return counit(w1)
        if len(w1) == 1 and len(w2) == 1:
            (i, j, s1), (n, m, s2) = w1[0], w2[0]
            return self._base[(s1, s2)][i * N + n, j * N + m]
        if len(w1) > 1:
            a, b = w1[:-1], w1[-1:]
            v = ZERO
            for c1, c2 in coproduct_splittings(w2, N):
                v = v + self.value_cqt2_first(a, c1) * self.value_cqt2_first(b, c2)
            return v
        a, b = w2[:-1], w2[-1:]
        v = ZERO
        for c1, c2 in coproduct_splittings(w1, N):
            v = v + self.value_cqt2_first(c1, b) * self.value_cqt2_first(c2, a)
        return v

    def inverse(self):
        """r-bar(a (x) b) = r(S(a) (x) b), evaluated on parity-0 left words."""
        if self._inv is None:
            self._inv = _AntipodeLeft(self)
        return self._inv

    def flipped_inverse(self, tag=None):
        """The bicharacter r-bar_21 (for an r-form this is again an r-form)."""
        N = self.spec.N
        P = flip(N)
        return Bicharacter(self.spec, P @ self.B10 @ P, tag or f"{self.tag}bar21")

    def with_B00(self, B00, tag):
        return Bicharacter(self.spec, B00, tag)


class _AntipodeLeft(PairFunctional):
    def __init__(self, b):
        self.spec = b.spec
        self.tag = f"{b.tag}bar"
        self.base = b
        self._memo = {}

    def value_by_antipode(self, w1, w2):
        """Expand S on the left word and evaluate the base form (oracle for ``prow``)."""
        if any(l[2] for l in w1):
            raise ValueError("inverse functional is evaluated on parity-0 left words only")
        total = ZERO
        for w, c in antipode_word(w1).terms.items():
            total = total + c * self.base.value(w, w2)
        return total

    def prow(self, sx, px, sy, py):
        if any(px):
            raise ValueError("inverse functional is evaluated on parity-0 left words only")
        key = (sx, sy, py)
        out = self._memo.get(key)
        if out is not None:
            return out
        # S(u^I_K) reverses the letters and runs rev(K) -> rev(I)
        N = self.spec.N
        out = {}
        want = tuple(reversed(sx))
        ones = (1,) * len(sx)
        for dx in product(range(N), repeat=len(sx)):
            for (d, dy), v in self.base.prow(tuple(reversed(dx)), ones, sy, py).items():
                if d == want:
                    out[(dx, dy)] = v
        self._memo[key] = out
        return out

    def inverse(self):
        return self.base


class _Counit(PairFunctional):
    def __init__(self, spec):
        self.spec = spec
        self.tag = "eps"

    def value(self, w1, w2):
        return counit(w1) * counit(w2)

    def prow(self, sx, px, sy, py):
        return {(sx, sy): ONE}

    def inverse(self):
        return self


def counit_pair(spec):
    return _Counit(spec)


class Convolution(PairFunctional):
    """(f * g)(a (x) b) = sum f(a1 (x) b1) g(a2 (x) b2), evaluated lazily."""

    def __init__(self, f: PairFunctional, g: PairFunctional, tag=None):
        if f.spec != g.spec:
            raise ValueError(f"spec mismatch: {f.spec} vs {g.spec}")
        self.spec = f.spec
        self.f, self.g = f, g
        self.tag = tag or f"({f.tag}*{g.tag})"
        self._memo = {}
        self._inv = None

    def prow(self, sx, px, sy, py):
        key = (sx, px, sy, py)
        out = self._memo.get(key)
        if out is not None:
            return out
        out = {}
        for (mx, my), x in self.f.prow(sx, px, sy, py).items():
            for d, y in self.g.prow(mx, px, my, py).items():
                _acc(out, d, x * y)
        self._memo[key] = out
        return out

    def value_by_splitting(self, w1, w2):
        """Direct sum over coproduct splittings (oracle for the row composition)."""
        N = self.spec.N
        v = ZERO
        s2 = coproduct_splittings(w2, N)
        for a1, a2 in coproduct_splittings(w1, N):
            for b1, b2 in s2:
                x = self.f.value(a1, b1)
                if x:
                    y = self.g.value(a2, b2)
                    if y:
                        v = v + x * y
        return v

    def inverse(self):
        if self._inv is None:
            self._inv = Convolution(self.g.inverse(), self.f.inverse(), f"inv{self.tag}")
            self._inv._inv = self
        return self._inv


def convolve(f: PairFunctional, g: PairFunctional) -> Convolution:
    return Convolution(f, g)


def evaluate(b: PairFunctional, x1, x2) -> Scalar:
    return b(x1, x2)


# constructors


def _check_z(spec, z):
    z = as_scalar(z)
    if not z:
        raise InadmissibleParameter("z must be nonzero")
    if spec.series == "SL":
        if z ** spec.N != spec.q.inverse():
            raise InadmissibleParameter(f"SL_q({spec.N}) needs z^{spec.N} = q^-1, got z = {z}")
    elif spec.series in ("O", "Sp"):
        if not (z * z).is_one():
            raise InadmissibleParameter(f"{spec.label} needs z^2 = 1, got z = {z}")
    return z


def make_rform(spec: SeriesSpec, z=None) -> Bicharacter:
    """r_z with r_z(u^i_j (x) u^n_m) = z R^{in}_{jm}."""
    z = spec.z_default if z is None else z
    z = _check_z(spec, z)
    R = build_rmatrix(spec).R
    b = Bicharacter(spec, R.scale(z), f"r[z={z}]")
    b.z = z
    return b


def make_sform(spec: SeriesSpec, z=None) -> Bicharacter:
    """s = r-bar_21 for r = r_z."""
    r = make_rform(spec, z)
    return r.flipped_inverse(f"s[z={r.z}]")


def make_central_bichar(spec: SeriesSpec, zeta) -> Bicharacter:
    zeta = as_scalar(zeta)
    if not spec.admissible_zeta(zeta):
        if spec.series == "GL":
            need = "zeta != 0"
        elif spec.series == "SL":
            need = f"zeta^{spec.N} = 1"
        else:
            need = "zeta^2 = 1"
        raise InadmissibleParameter(f"zeta = {zeta} violates {need} for {spec.label}")
    N = spec.N
    b = Bicharacter(spec, QMatrix.identity((N, N)).scale(zeta), f"c[zeta={zeta}]")
    b.zeta = zeta
    return b


def bicharacter_from_matrix(spec, B00, tag="custom") -> Bicharacter:
    return Bicharacter(spec, B00, tag)


# checks


def _sample(items, limit, seed):
    items = list(items)
    if limit is None or len(items) <= limit:
        return items
    rng = random.Random(seed)
    return rng.sample(items, limit)


def unitality_check(b: PairFunctional, D=2) -> Outcome:
    N = b.spec.N
    n = 0
    for w in words_upto(N, D):
        for pair in ((w, ()), ((), w)):
            n += 1
            if b.value(*pair) != counit(w):
                return Outcome("unitality", False, f"{word_str(pair[0])} (x) {word_str(pair[1])}", n)
    return Outcome("unitality", True, count=n)


def exchange_check(b: Bicharacter) -> Outcome:
    """Antipode-axiom contractions, from both sides, and B11 = B00."""
    N = b.spec.N
    I = QMatrix.identity((N, N))
    tests = {
        "B10 B00 = I": b.B10 @ b.B00,
        "B00 B10 = I": b.B00 @ b.B10,
        "B00^t2 B01^t2 = I": b.B00.partial_transpose(1) @ b.B01.partial_transpose(1),
        "B01^t2 B00^t2 = I": b.B01.partial_transpose(1) @ b.B00.partial_transpose(1),
    }
    for name, m in tests.items():
        if m != I:
            return Outcome("exchange", False, name, len(tests))
    if b.B11 != b.B00:
        return Outcome("exchange", False, "B11 = B00", len(tests) + 1)
    return Outcome("exchange", True, count=len(tests) + 1)


def cross_order_check(b: Bicharacter, D=2, limit=400, seed=0) -> Outcome:
    N = b.spec.N
    pairs = [(w1, w2) for w1 in words_upto(N, D) for w2 in words_upto(N, D)]
    pairs = _sample(pairs, limit, seed)
    for w1, w2 in pairs:
        if b.value(w1, w2) != b.value_cqt2_first(w1, w2):
            return Outcome("cross_order", False, f"{word_str(w1)} (x) {word_str(w2)}", len(pairs))
    return Outcome("cross_order", True, count=len(pairs))


def check_well_defined(b: PairFunctional, sl: RelationIdealSlice) -> Outcome:
    """Every slice generator pairs to zero with every letter, on both sides and both parities."""
    N = b.spec.N
    letters = [((i, j, s),) for s in (0, 1) for i in range(N) for j in range(N)]
    n = 0
    for key, g in sl.generators.items():
        for w in letters:
            n += 2
            if b(g, w):
                return Outcome("well_defined", False, f"relation {key} (x) {word_str(w)}", n)
            if b(w, g):
                return Outcome("well_defined", False, f"{word_str(w)} (x) relation {key}", n)
    return Outcome("well_defined", True, count=n)


def _cqt_triples(N, D):
    """Nontrivial triples: 1 <= deg c <= D-1 and deg a, deg b >= 1 with deg a + deg b <= D."""
    cs = [w for k in range(1, D) for w in all_words(N, k)]
    abs_ = [(a, b) for la in range(1, D) for lb in range(1, D + 1 - la)
            for a in all_words(N, la) for b in all_words(N, lb)]
    return cs, abs_


def check_cqt(b: PairFunctional, sl: RelationIdealSlice, D=2, limit=None, seed=0) -> Outcome:
    """(CQT.1), (CQT.2) as scalar identities and (CQT.3) by ideal membership.

    Triples: c of degree <= D-1 and a, b with deg a + deg b <= D.
    ``limit`` caps the number of sampled triples per axiom (None = all).
    """
    N = b.spec.N
    f = b
    cs, abs_ = _cqt_triples(N, D)
    triples = _sample([(c, x, y) for c in cs for (x, y) in abs_], limit, seed)
    parts = []
    n = 0
    bad = None
    for c, x, y in triples:
        n += 1
        lhs = f.value(c, x + y)
        rhs = ZERO
        for c1, c2 in coproduct_splittings(c, N):
            rhs = rhs + f.value(c1, y) * f.value(c2, x)
        if lhs != rhs:
            bad = f"c={word_str(c)}, a={word_str(x)}, b={word_str(y)}"
            break
    parts.append(Outcome("CQT.1", bad is None, bad, n))
    n = 0
    bad = None
    for c, x, y in triples:
        n += 1
        lhs = f.value(x + y, c)
        rhs = ZERO
        for c1, c2 in coproduct_splittings(c, N):
            rhs = rhs + f.value(x, c1) * f.value(y, c2)
        if lhs != rhs:
            bad = f"a={word_str(x)}, b={word_str(y)}, c={word_str(c)}"
            break
    parts.append(Outcome("CQT.2", bad is None, bad, n))
    parts.append(_cqt3(f, sl, D, limit, seed))
    parts.append(check_well_defined(f, sl))
    return Outcome.combine(f"cqt[{b.tag}]", parts)


def _cqt3_element(f, a, b, N):
    x = WordCombo()
    sa = coproduct_splittings(a, N)
    sb = coproduct_splittings(b, N)
    for a1, a2 in sa:
        for b1, b2 in sb:
            v = f.value(a1, b1)
            if v:
                x._acc(a2 + b2, v)
            v = f.value(a2, b2)
            if v:
                x._acc(b1 + a1, -v)
    return x


def _cqt3(f, sl, D, limit=None, seed=0):
    N = f.spec.N
    pairs = [(a, b) for la in range(D) for lb in range(D) if la + lb <= D
             for a in all_words(N, la) for b in all_words(N, lb)]
    pairs = _sample(pairs, limit, seed)
    for n, (a, b) in enumerate(pairs, 1):
        if not ideal_member(_cqt3_element(f, a, b, N), sl):
            return Outcome("CQT.3", False, f"a={word_str(a)}, b={word_str(b)}", n)
    return Outcome("CQT.3", True, count=len(pairs))


def _centrality(c, sl, D, limit, seed):
    N = c.spec.N
    pairs = [(a, b) for la in range(D) for lb in range(D) if la + lb <= D
             for a in all_words(N, la) for b in all_words(N, lb)]
    pairs = _sample(pairs, limit, seed)
    n = 0
    for a, b in pairs:
        for side in ("right", "left"):
            n += 1
            x = WordCombo()
            if side == "right":
                for b1, b2 in coproduct_splittings(b, N):
                    x._acc(b2, c.value(a, b1))
                    x._acc(b1, -c.value(a, b2))
            else:
                for a1, a2 in coproduct_splittings(a, N):
                    x._acc(a2, c.value(a1, b))
                    x._acc(a1, -c.value(a2, b))
            if not ideal_member(x, sl):
                return Outcome("CB.2", False, f"a={word_str(a)}, b={word_str(b)}, {side}", n)
    return Outcome("CB.2", True, count=n)


def check_cb(c: PairFunctional, sl: RelationIdealSlice, D=2, limit=None, seed=0) -> Outcome:
    """Central bicharacter: the (CQT.1)/(CQT.2) expansion laws, well-definedness and centrality.

    (CQT.3) is reported in the detail but is not part of the verdict.
    """
    laws = check_cqt(c, sl, D, limit, seed)
    parts = [Outcome(name, ok, None if ok else laws.witness)
             for name, ok in laws.detail["parts"].items() if name != "CQT.3"]
    parts.append(_centrality(c, sl, D, limit, seed))
    return Outcome.combine(f"cb[{c.tag}]", parts, cqt3=laws.detail["parts"]["CQT.3"])


def check_cotriangular(b: PairFunctional, D=2, limit=2000, seed=0) -> bool:
    """True iff r-bar(a (x) b) = r(b (x) a) on all parity-0 word pairs of degree <= D."""
    N = b.spec.N
    inv = b.inverse()
    pairs = [(w1, w2) for w1 in words_upto(N, D) for w2 in words_upto(N, D)]
    for w1, w2 in _sample(pairs, limit, seed):
        if inv.value(w1, w2) != b.value(w2, w1):
            return False
    return True
