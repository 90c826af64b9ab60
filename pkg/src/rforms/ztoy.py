"""
The group algebra of the integers, g^n with g^n g^m = g^(n+m).

Every group-like is its own coproduct, S(g^n) = g^-n, and the r-forms are the
bicharacters r(g^n (x) g^m) = lam^(nm).  The functional calculus reduces to
scalar identities, which makes this a cheap independent instance of the
quantum-group checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .outcome import Outcome
from .scalar import ONE, Q, Scalar, as_scalar

__all__ = ["ToyRForm", "toy_rform", "toy_functionals", "toy_character_iff_cotriangular", "default_lambdas"]


@dataclass(frozen=True)
class ToyRForm:
    lam: Scalar

    def __call__(self, n: int, m: int) -> Scalar:
        return self.lam ** (n * m)

    def bar(self, n: int, m: int) -> Scalar:
        # r-bar(a (x) b) = r(S(a) (x) b)
        return self(-n, m)

    def cqt_defects(self, bound: int = 4):
        """Axiom failures on g^a, g^b, g^c for |a|, |b|, |c| <= bound."""
        rng = range(-bound, bound + 1)
        bad = []
        for a in rng:
            for b in rng:
                if self(a, b) * self.bar(a, b) != ONE:
                    bad.append(("inverse", a, b, None))
                # (CQT.3): r(a1, b1) a2 b2 against b1 a1 r(a2, b2), as {exponent: coefficient}
                lhs = {a + b: self(a, b)}
                rhs = {b + a: self(a, b)}
                if lhs != rhs:
                    bad.append(("CQT.3", a, b, None))
                for c in rng:
                    if self(c, a + b) != self(c, b) * self(c, a):
                        bad.append(("CQT.1", a, b, c))
                    if self(a + b, c) != self(a, c) * self(b, c):
                        bad.append(("CQT.2", a, b, c))
        return bad


def toy_rform(lam) -> ToyRForm:
    lam = as_scalar(lam)
    if not lam:
        raise ValueError("lambda must be nonzero")
    return ToyRForm(lam)


def _f_r(r: ToyRForm, n):
    # f_r(g^n) = r(g^n (x) S(g^n))
    return r(n, -n)


def _f_s(r: ToyRForm, n):
    # s = r-bar_21, f_s(g^n) = s(g^n (x) S(g^n)) = r-bar(g^-n (x) g^n)
    return r.bar(-n, n)


def toy_functionals(lam, range_bound: int = 8) -> Outcome:
    if range_bound < 1:
        raise ValueError("range_bound must be at least 1")
    r = toy_rform(lam)
    rng = range(-range_bound, range_bound + 1)
    fr = {n: _f_r(r, n) for n in rng}
    fs = {n: _f_s(r, n) for n in rng}
    parts = []

    # F_r = f_r * f_s is the counit
    bad = next((n for n in rng if fr[n] * fs[n] != ONE), None)
    parts.append(Outcome("F_r=eps", bad is None, None if bad is None else f"n={bad}", len(rng)))

    # the exponent of f_r(g^n) = lam^(e n^2)
    exps = set()
    for n in rng:
        if n == 0:
            continue
        for e in (1, -1):
            if fr[n] == r.lam ** (e * n * n):
                exps.add(e)
    sign = exps.pop() if len(exps) == 1 else ("either" if exps else None)

    # cross term f_r(n+m) = f_r(n) f_r(m) lam^(2 sigma n m)
    sigmas = set()
    for n in rng:
        for m in rng:
            if abs(n + m) > range_bound or n * m == 0:
                continue
            lhs = fr[n + m]
            hits = {s for s in (1, -1) if lhs == fr[n] * fr[m] * r.lam ** (2 * s * n * m)}
            if not hits:
                sigmas.add(None)
            elif len(hits) == 1:
                sigmas |= hits
    cross_ok = None not in sigmas and len(sigmas) <= 1
    sigma = next(iter(sigmas)) if cross_ok and sigmas else None
    parts.append(Outcome("cross_term", cross_ok, None if cross_ok else f"sigmas seen {sigmas}"))

    is_char = all(fr[n + m] == fr[n] * fr[m] for n in rng for m in rng if abs(n + m) <= range_bound)
    squared_one = (r.lam * r.lam) == ONE
    parts.append(Outcome("character_iff_lam2", is_char == squared_one,
                         None if is_char == squared_one else f"character={is_char}, lam^2=1 is {squared_one}"))
    cq = r.cqt_defects(min(range_bound, 4))
    parts.append(Outcome("cqt", not cq, None if not cq else str(cq[0])))
    return Outcome.combine("toy", parts, lam=str(r.lam), f_r_exponent_sign=sign, sigma=sigma,
                           character=is_char, f_r_sample={n: str(fr[n]) for n in range(0, 4)})


def toy_character_iff_cotriangular(lam, bound: int = 6) -> Outcome:
    """f_r character iff r-bar = r_21 on the tested range."""
    r = toy_rform(lam)
    rng = range(-bound, bound + 1)
    cot = all(r.bar(n, m) == r(m, n) for n in rng for m in rng)
    ch = all(_f_r(r, n + m) == _f_r(r, n) * _f_r(r, m) for n in rng for m in rng if abs(n + m) <= bound)
    return Outcome("toy_character_iff_cotriangular", cot == ch, None if cot == ch else f"character={ch}, cotriangular={cot}",
                   detail={"character": ch, "cotriangular": cot})


def default_lambdas():
    return (Scalar(3) / 2, Scalar(-1), Q)
