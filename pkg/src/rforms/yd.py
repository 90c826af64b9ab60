"""
Right comodules, the induced actions and the Yetter-Drinfeld condition.

For a comodule with coaction delta(e_i) = sum_j e_j (x) v^j_i the actions are
stored as matrices, e_i <| a = sum_j A(a)[j, i] e_j, with

    A1(a)[j, i] = r(v^j_i (x) a),      A2(a)[j, i] = rbar(a (x) v^j_i).

The module law (m <| a) <| b = m <| ab reads A(ab) = A(b) A(a).  The
Yetter-Drinfeld compatibility lives in M (x) A and is checked componentwise
in the e_k basis by ideal membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .bichar import PairFunctional, flow, unflow
from .outcome import Outcome
from .scalar import ONE, ZERO
from .words import (
    RelationIdealSlice,
    WordCombo,
    all_words,
    coproduct_splittings,
    counit,
    ideal_member,
    word_str,
)

__all__ = [
    "Comodule",
    "trivial_comodule",
    "fundamental_comodule",
    "tensor_square_comodule",
    "word_slice_comodule",
    "comodule_laws",
    "action_matrix",
    "action1",
    "action2",
    "yd_check",
    "restricted_cqt_check",
    "lemma22_equivalence",
    "corollary24_check",
]


@dataclass
class Comodule:
    """Finite-dimensional right comodule; ``corep[(j, i)]`` is v^j_i."""

    dim: int
    corep: dict
    label: str
    N: int
    degree: int = 1
    cache: dict = field(default_factory=dict, repr=False)

    def entry(self, j, i) -> WordCombo:
        return self.corep.get((j, i), WordCombo())

    def coefficient_words(self):
        """All words occurring in corep entries (they span C(M))."""
        out = set()
        for v in self.corep.values():
            out.update(v.terms)
        return sorted(out, key=lambda w: (len(w), w))


def trivial_comodule(N) -> Comodule:
    return Comodule(1, {(0, 0): WordCombo.scalar(ONE)}, "trivial", N, 0)


def fundamental_comodule(N) -> Comodule:
    corep = {(j, i): WordCombo.of(((j, i, 0),)) for i in range(N) for j in range(N)}
    return Comodule(N, corep, "fundamental", N, 1)


def tensor_square_comodule(N) -> Comodule:
    corep = {}
    for i, n, j, m in product(range(N), repeat=4):
        corep[(j * N + m, i * N + n)] = WordCombo.of(((j, i, 0), (m, n, 0)))
    return Comodule(N * N, corep, "u(x)u", N, 2)


def word_slice_comodule(N, k) -> Comodule:
    """The span of free words of degree k with the comultiplication as coaction."""
    basis = all_words(N, k)
    index = {w: n for n, w in enumerate(basis)}
    corep = {}
    for w in basis:
        for w1, w2 in coproduct_splittings(w, N):
            key = (index[w1], index[w])
            corep[key] = corep.get(key, WordCombo()) + WordCombo.of(w2)
    return Comodule(len(basis), corep, f"degree-{k} words", N, k)


def _delta_combo(x: WordCombo, N):
    out = {}
    for w, c in x.terms.items():
        for w1, w2 in coproduct_splittings(w, N):
            out[(w1, w2)] = out.get((w1, w2), ZERO) + c
    return {k: v for k, v in out.items() if v}


def comodule_laws(M: Comodule) -> Outcome:
    """Delta(v^j_i) = sum_k v^j_k (x) v^k_i and eps(v^j_i) = delta_ij, in the free algebra."""
    n = 0
    for i in range(M.dim):
        for j in range(M.dim):
            n += 1
            lhs = _delta_combo(M.entry(j, i), M.N)
            rhs = {}
            for k in range(M.dim):
                a, b = M.entry(j, k), M.entry(k, i)
                for w1, c1 in a.terms.items():
                    for w2, c2 in b.terms.items():
                        rhs[(w1, w2)] = rhs.get((w1, w2), ZERO) + c1 * c2
            rhs = {k: v for k, v in rhs.items() if v}
            if lhs != rhs:
                return Outcome("comodule_coassociative", False, f"entry ({j}, {i})", n)
            e = sum((c * counit(w) for w, c in M.entry(j, i).terms.items()), ZERO)
            if e != (ONE if i == j else ZERO):
                return Outcome("comodule_counit", False, f"entry ({j}, {i})", n)
    return Outcome("comodule_laws", True, count=n)


def action_matrix(b: PairFunctional, M: Comodule, which: int, a) -> dict:
    """Sparse {(j, i): value} for e_i <|_which a."""
    a = tuple(a)
    key = (id(b), which, a)
    hit = M.cache.get(key)
    if hit is not None and hit[0] is b:
        return hit[1]
    out = {}
    for (j, i), v in M.corep.items():
        val = b(v, a) if which == 1 else b.inverse()(a, v)
        if val:
            out[(j, i)] = val
    M.cache[key] = (b, out)
    return out


def action1(b, M, a):
    return action_matrix(b, M, 1, a)


def action2(b, M, a):
    return action_matrix(b, M, 2, a)


def _matmul(A, B):
    cols = {}
    for (k, j), v in B.items():
        cols.setdefault(k, []).append((j, v))
    out = {}
    for (j2, k), v in A.items():
        for j, w in cols.get(k, ()):
            key = (j2, j)
            out[key] = out.get(key, ZERO) + v * w
    return {k: v for k, v in out.items() if v}


def _module_law(b, M, which, D):
    """A(ab) = A(b) A(a) for words a, b of positive degree with deg a + deg b <= D; A(1) = I."""
    N = M.N
    n = 0
    ident = {(i, i): ONE for i in range(M.dim)}
    n += 1
    if action_matrix(b, M, which, ()) != ident:
        return Outcome("unitality", False, "e <| 1 != e", n)
    for la in range(1, D):
        for lb in range(1, D + 1 - la):
            for a in all_words(N, la):
                for c in all_words(N, lb):
                    n += 1
                    lhs = action_matrix(b, M, which, a + c)
                    rhs = _matmul(action_matrix(b, M, which, c), action_matrix(b, M, which, a))
                    if lhs != rhs:
                        return Outcome("module_law", False, f"a={word_str(a)}, b={word_str(c)}", n)
    return Outcome("module_law", True, count=n)


def _compat_components(b, M, which, a):
    """Components X_k (k = 0..dim-1) of LHS - RHS of the compatibility for m = e_i."""
    N = M.N
    splits = coproduct_splittings(a, N)
    acts = {}
    for a1, a2 in splits:
        for w in (a1, a2):
            if w not in acts:
                acts[w] = action_matrix(b, M, which, w)
    per_i = {}
    for i in range(M.dim):
        comps = {}
        for a1, a2 in splits:
            A1 = acts[a1]
            A2 = acts[a2]
            # LHS: sum_j A(a1)[k, j] e_k (x) v^j_i a2
            for (k, j), c in A1.items():
                v = M.corep.get((j, i))
                if v is None:
                    continue
                x = comps.setdefault(k, WordCombo())
                for w, cw in v.terms.items():
                    x._acc(w + a2, c * cw)
            # RHS: sum_j A(a2)[j, i] e_k (x) a1 v^k_j
            for (j, i2), c in A2.items():
                if i2 != i:
                    continue
                for k in range(M.dim):
                    v = M.corep.get((k, j))
                    if v is None:
                        continue
                    x = comps.setdefault(k, WordCombo())
                    for w, cw in v.terms.items():
                        x._acc(a1 + w, -c * cw)
        per_i[i] = comps
    return per_i


def _compat(b, M, which, sl, D):
    N = M.N
    n = 0
    for la in range(0, D - M.degree + 1):
        for a in all_words(N, la):
            for i, comps in _compat_components(b, M, which, a).items():
                for k, x in comps.items():
                    n += 1
                    if not ideal_member(x, sl):
                        return Outcome("yd_compatibility", False, f"m=e_{i}, a={word_str(a)}, component e_{k}", n)
    return Outcome("yd_compatibility", True, count=n)


def _action_kills_relations(b, M, which, sl):
    n = 0
    for key, g in sl.generators.items():
        if g.degree() > sl.D:
            continue
        n += 1
        for (j, i), v in M.corep.items():
            val = b(v, g) if which == 1 else b.inverse()(g, v)
            if val:
                return Outcome("action_well_defined", False, f"relation {key} on e_{i}", n)
    return Outcome("action_well_defined", True, count=n)


def yd_check(b: PairFunctional, M: Comodule, which: int, sl: RelationIdealSlice, D=None) -> Outcome:
    D = sl.D if D is None else D
    if M.degree > D - 1 and M.degree > 0:
        from .words import DegreeOverflow

        raise DegreeOverflow(f"comodule entries of degree {M.degree} need a slice of degree >= {M.degree + 1}")
    parts = [
        comodule_laws(M),
        _module_law(b, M, which, D),
        _action_kills_relations(b, M, which, sl),
        _compat(b, M, which, sl, D),
    ]
    return Outcome.combine(f"yd{which}[{b.tag}, {M.label}]", parts)


def restricted_cqt_check(b: PairFunctional, M: Comodule, which: int, sl: RelationIdealSlice, D=None) -> Outcome:
    """The right-hand side of the equivalence, evaluated word-wise.

    which = 1: (CQT.1) for c in C(M), all a, b, and (CQT.3) for a in C(M).
    which = 2: (CQT.2) for c in C(M), all a, b, and (CQT.3) for b in C(M).
    """
    D = sl.D if D is None else D
    N = M.N
    coeffs = M.coefficient_words()
    n, bad = _restricted_law(b, coeffs, which, N, D)
    law = Outcome(f"CQT.{which} on C(M)", bad is None, bad, n)
    n = 0
    bad = None
    for c in coeffs:
        for lo in range(0, D - len(c) + 1):
            for o in all_words(N, lo):
                a, bb = (c, o) if which == 1 else (o, c)
                n += 1
                x = WordCombo()
                for a1, a2 in coproduct_splittings(a, N):
                    for b1, b2 in coproduct_splittings(bb, N):
                        v = b.value(a1, b1)
                        if v:
                            x._acc(a2 + b2, v)
                        v = b.value(a2, b2)
                        if v:
                            x._acc(b1 + a1, -v)
                if not ideal_member(x, sl):
                    bad = f"a={word_str(a)}, b={word_str(bb)}"
                    break
            if bad:
                break
        if bad:
            break
    cqt3 = Outcome("CQT.3 on C(M)", bad is None, bad, n)
    return Outcome.combine(f"cqt{which}|C(M)[{b.tag}, {M.label}]", [_restricted_domain(b, M, which, sl), law, cqt3])


def _restricted_law(b, coeffs, which, N, D):
    """(CQT.1) or (CQT.2) with c in C(M), compared a whole row of destinations at a time."""
    groups = {}
    for c in coeffs:
        sc, dc, pc = flow(c)
        groups.setdefault((sc, pc), set()).add(dc)
    n = 0
    for (sc, pc), dcs in sorted(groups.items()):
        for la in range(0, D):
            for lb in range(0, D + 1 - la):
                for sx in product(range(N), repeat=la):
                    for sy in product(range(N), repeat=lb):
                        px, py = (0,) * la, (0,) * lb
                        n += 1
                        rhs = {}
                        if which == 1:
                            lhs = b.prow(sc, pc, sx + sy, px + py)
                            for (mid, dy), v1 in b.prow(sc, pc, sy, py).items():
                                for (dc, dx), v2 in b.prow(mid, pc, sx, px).items():
                                    _acc(rhs, (dc, dx + dy), v1 * v2)
                            lhs = {k: v for k, v in lhs.items() if k[0] in dcs}
                            rhs = {k: v for k, v in rhs.items() if k[0] in dcs}
                        else:
                            lhs = b.prow(sx + sy, px + py, sc, pc)
                            for (dx, mid), v1 in b.prow(sx, px, sc, pc).items():
                                for (dy, dc), v2 in b.prow(sy, py, mid, pc).items():
                                    _acc(rhs, (dx + dy, dc), v1 * v2)
                            lhs = {k: v for k, v in lhs.items() if k[1] in dcs}
                            rhs = {k: v for k, v in rhs.items() if k[1] in dcs}
                        if lhs != rhs:
                            key = next(k for k in set(lhs) | set(rhs) if lhs.get(k) != rhs.get(k))
                            if which == 1:
                                dc, dxy = key
                            else:
                                dxy, dc = key
                            x = unflow(sx, dxy[:la], px)
                            y = unflow(sy, dxy[la:], py)
                            c = unflow(sc, dc, pc)
                            return n, f"c={word_str(c)}, a={word_str(x)}, b={word_str(y)}"
    return n, None


def _acc(out, k, v):
    x = out.get(k, ZERO) + v
    if x:
        out[k] = x
    else:
        out.pop(k, None)


def _restricted_domain(b, M, which, sl):
    """r is a functional on C(M) (x) A (which = 1) or A (x) C(M) (which = 2)."""
    n = 0
    for key, g in sl.generators.items():
        if g.degree() > sl.D:
            continue
        for c in M.coefficient_words():
            n += 1
            val = b(c, g) if which == 1 else b(g, c)
            if val:
                return Outcome("domain", False, f"r does not vanish on {word_str(c)} against relation {key}", n)
    return Outcome("domain", True, count=n)


def lemma22_equivalence(b: PairFunctional, M: Comodule, sl: RelationIdealSlice, D=None) -> Outcome:
    """Both sides of the equivalence, for <|_1 and <|_2; passes iff the verdicts agree."""
    verdicts = {}
    for which in (1, 2):
        yd = yd_check(b, M, which, sl, D)
        cq = restricted_cqt_check(b, M, which, sl, D)
        verdicts[which] = (yd.passed, cq.passed, yd.witness, cq.witness)
    agree = all(v[0] == v[1] for v in verdicts.values())
    witness = None
    if not agree:
        witness = "; ".join(f"M{w}: yd={v[0]} cqt={v[1]}" for w, v in verdicts.items() if v[0] != v[1])
    detail = {f"M{w}": {"yd": v[0], "cqt": v[1]} for w, v in verdicts.items()}
    return Outcome(f"yd_equivalence[{b.tag}, {M.label}]", agree, witness, 2, detail)


def corollary24_check(b: PairFunctional, D: int, sl: RelationIdealSlice) -> Outcome:
    """A itself as a comodule, through the free word slices of degree <= D-1."""
    if D > sl.D:
        from .words import DegreeOverflow

        raise DegreeOverflow(f"D = {D} exceeds slice degree {sl.D}")
    N = b.spec.N
    parts = []
    for k in range(0, D):
        M = word_slice_comodule(N, k)
        for which in (1, 2):
            parts.append(yd_check(b, M, which, sl, D))
    return Outcome.combine(f"algebra_slices[{b.tag}]", parts)
