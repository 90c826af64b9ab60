"""
Antipode functionals of an r-form and their convolution calculus.

For an r-form r with s = r-bar_21:

    f_r(a)     = r(a1 (x) S(a2))
    f_r-bar(a) = r-bar(S(a1) (x) a2) = s(a2 (x) S(a1))
    f_s(a)     = s(a1 (x) S(a2))
    f_s-bar(a) = s-bar(S(a1) (x) a2) = r(a2 (x) S(a1))

Only parity-0 words are fed to a Functional; S-letters appear inside the
pair evaluations.  On the generator coalgebra every functional is an N x N
matrix and convolution is the matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .bichar import (
    Bicharacter,
    Convolution,
    PairFunctional,
    _sample,
    check_cotriangular,
    words_upto,
)
from .linalg import QMatrix, SingularMatrix, inverse
from .outcome import Outcome
from .scalar import ONE, ZERO, Scalar
from .words import (
    RelationIdealSlice,
    WordCombo,
    antipode_word,
    ideal_member,
)

__all__ = [
    "Functional",
    "ModularMatrix",
    "counit_functional",
    "flip_inverse",
    "make_f",
    "make_all",
    "convolve_functionals",
    "s2_matrix",
    "lemma41_check",
    "character_defect",
    "character_iff_cotriangular",
    "prop43_suite",
    "modular_compare",
    "f_r_matrix",
]


class Functional:
    """A linear functional on A given on parity-0 words.

    ``rows(src)`` maps a tuple of upper indices I to {K: f(u^I_K)} over the
    nonzero values; words are u^{i1}_{k1} ... u^{in}_{kn}.
    """

    def __init__(self, spec, label, rows):
        self.spec = spec
        self.label = label
        self._rows = rows
        self._memo = {}
        self._gen = None

    def row(self, src):
        src = tuple(src)
        out = self._memo.get(src)
        if out is None:
            out = self._rows(src)
            self._memo[src] = out
        return out

    def __call__(self, x):
        if isinstance(x, WordCombo):
            total = ZERO
            for w, c in x.terms.items():
                total = total + c * self(w)
            return total
        w = tuple(x)
        if any(l[2] for l in w):
            raise ValueError("functionals are evaluated on parity-0 words")
        return self.row(tuple(l[0] for l in w)).get(tuple(l[1] for l in w), ZERO)

    @property
    def gen_matrix(self) -> QMatrix:
        if self._gen is None:
            N = self.spec.N
            entries = []
            for i in range(N):
                for (k,), v in self.row((i,)).items():
                    entries.append((i, k, v))
            self._gen = QMatrix.from_entries((N,), (N,), entries)
        return self._gen

    def __repr__(self):
        return f"<Functional {self.label} on {self.spec.label}>"


def counit_functional(spec):
    return Functional(spec, "eps", lambda src: {src: ONE})


def flip_inverse(b: PairFunctional) -> PairFunctional:
    """b-bar_21; for a convolution (f*g)-bar_21 = g-bar_21 * f-bar_21."""
    if isinstance(b, Bicharacter):
        return b.flipped_inverse()
    if isinstance(b, Convolution):
        return Convolution(flip_inverse(b.g), flip_inverse(b.f))
    raise TypeError(f"no flipped inverse for {b!r}")


def _f_rows(b, N):
    # f(u^I_K) = sum_M b(u^I_M (x) S(u^M_K)); S(u^M_K) runs rev(K) -> rev(M)
    def rows(src):
        n = len(src)
        zeros, ones = (0,) * n, (1,) * n
        out = {}
        for K in product(range(N), repeat=n):
            total = ZERO
            for (M, dM), v in b.prow(src, zeros, K[::-1], ones).items():
                if dM == M[::-1]:
                    total = total + v
            if total:
                out[K] = total
        return out
    return rows


def _fbar_rows(b21, N):
    # b-bar(S(a1) (x) a2) = b-bar_21(a2 (x) S(a1)); with a1 = u^I_M, a2 = u^M_K
    def rows(src):
        n = len(src)
        zeros, ones = (0,) * n, (1,) * n
        want = src[::-1]
        out = {}
        for M in product(range(N), repeat=n):
            for (K, d), v in b21.prow(M, zeros, M[::-1], ones).items():
                if d == want:
                    x = out.get(K, ZERO) + v
                    if x:
                        out[K] = x
                    else:
                        out.pop(K, None)
        return out
    return rows


def make_f(b: PairFunctional, variant: str = "f", _s=None) -> Functional:
    N = b.spec.N
    if variant == "f":
        return Functional(b.spec, f"f[{b.tag}]", _f_rows(b, N))
    if variant == "f_bar":
        s = _s if _s is not None else flip_inverse(b)
        return Functional(b.spec, f"fbar[{b.tag}]", _fbar_rows(s, N))
    raise ValueError(f"variant must be 'f' or 'f_bar', got {variant!r}")


@dataclass
class FunctionalSet:
    r: PairFunctional
    s: PairFunctional
    f_r: Functional
    fbar_r: Functional
    f_s: Functional
    fbar_s: Functional


def make_all(r: PairFunctional) -> FunctionalSet:
    s = flip_inverse(r)
    return FunctionalSet(
        r, s,
        make_f(r, "f"),
        make_f(r, "f_bar", _s=s),
        make_f(s, "f"),
        make_f(s, "f_bar", _s=r),
    )


def convolve_functionals(f: Functional, g: Functional) -> Functional:
    if f.spec != g.spec:
        raise ValueError(f"spec mismatch: {f.spec.label} vs {g.spec.label}")

    def rows(src):
        out = {}
        for mid, x in f.row(src).items():
            for d, y in g.row(mid).items():
                v = out.get(d, ZERO) + x * y
                if v:
                    out[d] = v
                else:
                    out.pop(d, None)
        return out

    return Functional(f.spec, f"({f.label}*{g.label})", rows)


def s2_matrix(b: PairFunctional):
    """(gen_matrix(f-bar_r), gen_matrix(f_r)): S^2(u) = Fbar u F on generators."""
    fs = make_all(b)
    return fs.fbar_r.gen_matrix, fs.f_r.gen_matrix


def f_r_matrix(b: PairFunctional) -> QMatrix:
    return make_f(b).gen_matrix


# triple identity


class _Flip(PairFunctional):
    def __init__(self, b):
        self.spec, self.base, self.tag = b.spec, b, f"{b.tag}_21"

    def prow(self, sx, px, sy, py):
        return {(dx, dy): v for (dy, dx), v in self.base.prow(sy, py, sx, px).items()}


class _AlongProduct(PairFunctional):
    """(f o m)(a (x) b) = f(ab)."""

    def __init__(self, f: Functional):
        self.spec, self.f, self.tag = f.spec, f, f"({f.label} o m)"

    def prow(self, sx, px, sy, py):
        if any(px) or any(py):
            raise ValueError("f o m is evaluated on parity-0 words")
        n = len(sx)
        return {(d[:n], d[n:]): v for d, v in self.f.row(tuple(sx) + tuple(sy)).items()}


def lemma41_check(b: PairFunctional, D: int = 2, limit=None, seed=0) -> Outcome:
    """r_21 * r * (f o m) = (f o m) * r_21 * r = f (x) f on word pairs.

    Pairs: all generator pairs plus (degree D, generator) pairs, plus pairs
    with the unit word.  ``limit`` samples the longer pairs deterministically.
    """
    if D > 2:
        raise ValueError("lemma41_check supports D <= 2")
    N = b.spec.N
    f = make_f(b)
    fm = _AlongProduct(f)
    rr = Convolution(_Flip(b), b)
    left = Convolution(rr, fm)
    right = Convolution(fm, rr)
    gens = words_upto(N, 1)
    pairs = [(x, y) for x in gens for y in gens]
    longer = [(x, y) for x in words_upto(N, D) if len(x) == D for y in gens if y]
    if D > 1:
        pairs += _sample(longer, limit, seed)
    count = 0
    for w1, w2 in pairs:
        target = f(w1) * f(w2)
        a, c = left.value(w1, w2), right.value(w1, w2)
        count += 1
        if a != target or c != target:
            return Outcome("triple_identity", False, f"pair ({w1}, {w2}): left {a}, right {c}, f(x)f {target}", count)
    return Outcome("triple_identity", True, None, count, {"sampled": limit is not None and len(longer) > (limit or 0)})


# characters


def character_defect(f: Functional, D: int = 2, limit=None, seed=0) -> Outcome:
    """f(vw) = f(v) f(w) for parity-0 word pairs with deg v + deg w <= D."""
    N = f.spec.N
    pairs = []
    for dv in range(D + 1):
        for dw in range(D + 1 - dv):
            for v in words_upto(N, dv):
                if len(v) != dv:
                    continue
                for w in words_upto(N, dw):
                    if len(w) == dw:
                        pairs.append((v, w))
    count = 0
    for v, w in _sample(pairs, limit, seed):
        count += 1
        lhs, rhs = f(v + w), f(v) * f(w)
        if lhs != rhs:
            return Outcome(f"character[{f.label}]", False, f"f({v}{w}) = {lhs} but f(v)f(w) = {rhs}", count)
    return Outcome(f"character[{f.label}]", True, None, count)


def character_iff_cotriangular(b: PairFunctional, D: int = 2, limit=None) -> Outcome:
    """f_r is a character iff r is cotriangular; both sides computed independently."""
    ch = character_defect(make_f(b), D, limit).passed
    cot = check_cotriangular(b, D, limit=limit or 2000)
    return Outcome("character_iff_cotriangular", ch == cot, None if ch == cot else f"character={ch}, cotriangular={cot}",
                   detail={"character": ch, "cotriangular": cot})


# S^4 suite


def _commute(f, g, words):
    fg, gf = convolve_functionals(f, g), convolve_functionals(g, f)
    for w in words:
        if fg(w) != gf(w):
            return w
    return None


def _kron_entries(A: QMatrix, B: QMatrix, N):
    return {(i, k, l, j): A[i, k] * B[l, j] for i, k, l, j in product(range(N), repeat=4)}


def prop43_suite(b: PairFunctional, sl: RelationIdealSlice, D: int = 2, limit=None, seed=0) -> Outcome:
    N = b.spec.N
    fs = make_all(b)
    four = {"f_r": fs.f_r, "fbar_r": fs.fbar_r, "f_s": fs.f_s, "fbar_s": fs.fbar_s}
    words = _sample(words_upto(N, D), limit, seed)
    parts = []

    # (a) pairwise commutation
    names = list(four)
    bad = None
    for x in range(len(names)):
        for y in range(x + 1, len(names)):
            w = _commute(four[names[x]], four[names[y]], words)
            if w is not None:
                bad = f"{names[x]} and {names[y]} differ on {w}"
                break
        if bad:
            break
    parts.append(Outcome("commutation", bad is None, bad, len(words)))

    # (b) centrality of z = f_r * fbar_s: z * id - id * z on generators lies in the ideal
    Z = convolve_functionals(fs.f_r, fs.fbar_s).gen_matrix
    bad = None
    for i, j in product(range(N), repeat=2):
        x = WordCombo()
        for k in range(N):
            x = x + WordCombo.of(((k, j, 0),), Z[i, k]) - WordCombo.of(((i, k, 0),), Z[k, j])
        if not ideal_member(x, sl):
            bad = f"z*id - id*z at u^{i + 1}_{j + 1} = {x}"
            break
    parts.append(Outcome("centrality_z", bad is None, bad, N * N, {"z": Z.pretty()}))

    # (c) g = f_r * f_s is a character
    g = convolve_functionals(fs.f_r, fs.f_s)
    parts.append(Outcome("g_character", *_pack(character_defect(g, D, limit, seed))))

    # (d) S^4 = gbar * id * g on generators, against the conjugation of S^2 applied twice
    Fbar, F = fs.fbar_r.gen_matrix, fs.f_r.gen_matrix
    G = g.gen_matrix
    gbar = convolve_functionals(fs.fbar_s, fs.fbar_r)
    Gbar = gbar.gen_matrix
    try:
        inv_ok = Gbar @ G == QMatrix.identity(N)
    except SingularMatrix:
        inv_ok = False
    via_g = _kron_entries(Gbar, G, N)
    via_s2 = _kron_entries(Fbar @ Fbar, F @ F, N)
    twice = _s2_twice(Fbar, F, N)
    bad = None
    if not inv_ok:
        bad = "gbar is not the convolution inverse of g on generators"
    elif via_g != via_s2:
        key = next(k for k in via_g if via_g[k] != via_s2[k])
        bad = f"S^4 coefficient {key}: gbar*id*g {via_g[key]} vs (S^2)^2 {via_s2[key]}"
    elif twice != via_s2:
        bad = "applying the S^2 conjugation twice disagrees with Fbar^2 u F^2"
    parts.append(Outcome("s4", bad is None, bad, N ** 4))
    return Outcome.combine("s4_suite", parts)


def _pack(o: Outcome):
    return o.passed, o.witness, o.count


def _s2_twice(Fbar, F, N):
    """Coefficients of S^2(S^2(u^i_j)) on u^k_l, via antipode_word with S^2 data."""
    out = {}
    for i, j in product(range(N), repeat=2):
        once = antipode_word(antipode_word(((i, j, 0),)).terms.popitem()[0], s2=(Fbar, F))
        twice = WordCombo()
        for w, c in once.terms.items():
            (k, l, _), = w
            for a, b_ in product(range(N), repeat=2):
                v = Fbar[k, a] * F[b_, l]
                if v:
                    twice = twice + WordCombo.of(((a, b_, 0),), c * v)
        for k, l in product(range(N), repeat=2):
            out[(i, k, l, j)] = twice.terms.get(((k, l, 0),), ZERO)
    return out


# modular matrix


@dataclass
class ModularMatrix:
    """D~ = c F^-1 with Tr(D~) = Tr(D~^-1); only c^2 is stored."""

    F: QMatrix
    c_squared: Scalar

    @property
    def D_squared(self) -> QMatrix:
        Finv = inverse(self.F)
        return (Finv @ Finv).scale(self.c_squared)

    @property
    def D_minus_squared(self) -> QMatrix:
        return (self.F @ self.F).scale(self.c_squared.inverse())

    @classmethod
    def from_f(cls, F: QMatrix):
        Finv = inverse(F)
        return cls(F, F.trace() / Finv.trace())


def modular_compare(b: PairFunctional) -> Outcome:
    fs = make_all(b)
    F = fs.f_r.gen_matrix
    Fr = F @ fs.f_s.gen_matrix
    M = ModularMatrix.from_f(F)
    diag = F.is_diagonal() and Fr.is_diagonal()
    minus = Fr == M.D_minus_squared
    plus = Fr == M.D_squared
    if minus and plus:
        orient = "both"
    elif minus:
        orient = "D^-2"
    elif plus:
        orient = "D^+2"
    else:
        orient = None
    ok = diag and orient is not None
    wit = None
    if not diag:
        wit = "f_r or F_r is not diagonal"
    elif orient is None:
        wit = f"F_r = {Fr.pretty()} matches neither D~^2 nor D~^-2"
    return Outcome("modular", ok, wit, detail={
        "orientation": orient,
        "F_r": [str(Fr[i, i]) for i in range(b.spec.N)],
        "f_r": [str(F[i, i]) for i in range(b.spec.N)],
        "c_squared": str(M.c_squared),
    })
