"""
Solutions of the braid relation inside span{Rhat, Rhat^-1, I}, and the scale
constraints that turn a solution ray into a universal r-form.

With T = alpha Rhat + beta Rhat^-1 + gamma I the braid defect
T12 T23 T12 - T23 T12 T23 is a cubic form in (alpha, beta, gamma) with
matrix coefficients M_abc.  Every matrix entry is a cubic over Q(t); the
solution variety is the common zero set of their span.

The ray analysis is exact over Q(t): the span contains alpha beta (alpha+beta)
(series B, C, D), each branch alpha = 0, beta = 0, beta = -alpha leaves binary
cubic forms, and the rays of a branch are the roots of their gcd.  A
quadratic gcd with non-square discriminant gives a conjugate pair of rays
defined over a quadratic extension only.

For series A the three directions are dependent (Rhat^-1 = Rhat - lam I), so
the analysis runs in the reduced coordinates T = a Rhat + c I.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from flint import fmpz_poly

from .linalg import QMatrix, SingularMatrix, SpanEchelon, flip, inverse, leg_embed
from .outcome import Outcome
from .rmatrix import SeriesSpec, build_rmatrix
from .scalar import ONE, ZERO, Scalar
from .words import det_q, frt_relations, metric_relations

__all__ = [
    "QuadExt",
    "Ray",
    "ClassificationReport",
    "braid_cubic_coefficients",
    "entry_span",
    "classify_braid_solutions",
    "pairing_constraint",
    "z_constraint",
    "is_square",
    "inversion_stability",
    "MONOMIALS",
]

MONOMIALS = tuple((a, b, 3 - a - b) for a in range(3, -1, -1) for b in range(3 - a, -1, -1))


def _mono_str(m, names=("alpha", "beta", "gamma")):
    parts = []
    for e, n in zip(m, names):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) or "1"


# cubic coefficient matrices


def braid_cubic_coefficients(spec: SeriesSpec, directions=None):
    """{monomial exponents: QMatrix} for the braid defect of sum_k x_k * directions[k].

    The default directions are (Rhat, Rhat^-1, I), giving monomials in
    (alpha, beta, gamma).
    """
    N = spec.N
    if directions is None:
        b = build_rmatrix(spec)
        directions = (b.Rhat, b.Rhat_inv, QMatrix.identity((N, N)))
    k = len(directions)
    emb12 = [leg_embed(d, (1, 2), 3, N) for d in directions]
    emb23 = [leg_embed(d, (2, 3), 3, N) for d in directions]
    out = {}
    cache = {}

    def prod3(a, b, c, first, second):
        key = (a, b, c, id(first))
        if key not in cache:
            cache[key] = first[a] @ second[b] @ first[c]
        return cache[key]

    for x, y, z in product(range(k), repeat=3):
        mono = [0] * k
        for v in (x, y, z):
            mono[v] += 1
        mono = tuple(mono)
        term = prod3(x, y, z, emb12, emb23) - prod3(x, y, z, emb23, emb12)
        out[mono] = out[mono] + term if mono in out else term
    return out


def entry_span(coeffs):
    """SpanEchelon of the entry polynomials; keys are monomials."""
    polys = {}
    for mono, M in coeffs.items():
        for r, c, v in M.items():
            polys.setdefault((r, c), {})[mono] = v
    ech = SpanEchelon(order=lambda m: m)
    for p in polys.values():
        ech.add(p)
    return ech, polys


# univariate polynomials over Q(t): lists of Scalars, index = degree


def _ptrim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _pmod(a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    inv = b[-1].inverse()
    while len(a) >= len(b) and a:
        f = a[-1] * inv
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] = a[i + shift] - f * c
        a = _ptrim(a)
    return a


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(a, b)
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


def is_square(s: Scalar) -> bool:
    """Whether a Scalar is a square in Q(t)."""
    if not s:
        return True
    p = s.num * s.den
    c, facs = p.factor()
    if any(e % 2 for _, e in facs):
        return False
    c = int(c)
    if c < 0:
        return False
    r = int(c ** 0.5)
    while r * r > c:
        r -= 1
    while (r + 1) * (r + 1) <= c:
        r += 1
    return r * r == c


def _sqrt_square(s: Scalar) -> Scalar:
    """Square root of a Scalar already known to be a square."""
    num = _poly_sqrt(s.num)
    den = _poly_sqrt(s.den)
    if num is None or den is None:
        # content may sit across numerator and denominator
        p = s.num * s.den
        root = _poly_sqrt(p)
        return Scalar(root, s.den)
    return Scalar(num, den)


def _poly_sqrt(p):
    c, facs = p.factor()
    c = int(c)
    if c < 0:
        return None
    r = int(round(c ** 0.5))
    if r * r != c or any(e % 2 for _, e in facs):
        return None
    out = fmpz_poly([r])
    for f, e in facs:
        out *= f ** (e // 2)
    return out


class QuadExt:
    """a + b*r in Q(t)[r]/(r^2 + p r + s)."""

    __slots__ = ("a", "b", "p", "s")

    def __init__(self, a, b, p, s):
        self.a, self.b, self.p, self.s = a, b, p, s

    def _lift(self, x):
        if isinstance(x, QuadExt):
            return x
        return QuadExt(Scalar(x) if not isinstance(x, Scalar) else x, ZERO, self.p, self.s)

    def __add__(self, o):
        o = self._lift(o)
        return QuadExt(self.a + o.a, self.b + o.b, self.p, self.s)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.p, self.s)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __mul__(self, o):
        o = self._lift(o)
        # r^2 = -p r - s
        bb = self.b * o.b
        return QuadExt(self.a * o.a - bb * self.s, self.a * o.b + self.b * o.a - bb * self.p, self.p, self.s)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def inverse(self):
        # (a + b r)(a' + b' r) = 1 with conjugate a + b(-p - r)
        ca, cb = self.a - self.b * self.p, -self.b
        norm = self.a * ca - self.b * cb * self.s
        ninv = norm.inverse()
        return QuadExt(ca * ninv, cb * ninv, self.p, self.s)

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __eq__(self, o):
        o = self._lift(o)
        return self.a == o.a and self.b == o.b

    def __str__(self):
        return f"({self.a}) + ({self.b})*r"


@dataclass
class Ray:
    """A solution ray (alpha : beta : gamma), possibly over a quadratic extension."""

    coords: tuple
    rational: bool
    label: str
    minpoly: tuple = None  # (p, s) of r^2 + p r + s when irrational
    axis: str = None

    def as_dict(self):
        d = {"coords": [str(c) for c in self.coords], "rational": self.rational, "label": self.label}
        if self.minpoly:
            d["minpoly"] = f"r^2 + ({self.minpoly[0]})*r + ({self.minpoly[1]})"
        if self.axis:
            d["axis"] = self.axis
        return d


@dataclass
class ClassificationReport:
    spec: SeriesSpec
    route: str
    span_dim: int
    targets: dict
    axes_certified: dict
    rays: list
    variety_is_axes: bool
    rational_variety_is_axes: bool
    extra_rays_excluded: dict = field(default_factory=dict)
    abstract_targets: dict = field(default_factory=dict)
    ehat_ray_excluded: bool | None = None

    @property
    def passed(self):
        ok = all(self.targets.values()) and all(self.axes_certified.values())
        ok = ok and self.rational_variety_is_axes
        ok = ok and all(self.extra_rays_excluded.values())
        return ok

    def summary(self):
        return {
            "route": self.route,
            "span_dim": self.span_dim,
            "targets": self.targets,
            "axes_certified": self.axes_certified,
            "rays": [r.as_dict() for r in self.rays],
            "variety_is_axes": self.variety_is_axes,
            "rational_variety_is_axes": self.rational_variety_is_axes,
            "extra_rays_excluded_as_rforms": self.extra_rays_excluded,
            "abstract_targets": self.abstract_targets,
            "ehat_ray_excluded": self.ehat_ray_excluded,
        }


def _targets_bcd(lam):
    return {
        "alpha*beta*(alpha+beta)": {(2, 1, 0): ONE, (1, 2, 0): ONE},
        "alpha^2*(gamma-beta*lam)": {(2, 0, 1): ONE, (2, 1, 0): -lam},
        "beta^2*(gamma+alpha*lam)": {(0, 2, 1): ONE, (1, 2, 0): lam},
    }


def _branch_forms(polys, sub):
    """Substitute a linear branch into cubic polys, giving binary cubic forms.

    ``sub`` maps (x, y) to (alpha, beta, gamma) as a 3x2 matrix of Scalars.
    Returns forms as lists c[k] = coefficient of x^k y^(3-k).
    """
    forms = []
    for p in polys:
        f = [ZERO] * 4
        for (a, b, c), coef in p.items():
            # (alpha, beta, gamma) linear in (x, y): expand the product
            factors = [sub[0]] * a + [sub[1]] * b + [sub[2]] * c
            acc = {0: ONE}  # power of x -> coeff
            for lx, ly in factors:
                nxt = {}
                for k, v in acc.items():
                    if lx:
                        nxt[k + 1] = nxt.get(k + 1, ZERO) + v * lx
                    if ly:
                        nxt[k] = nxt.get(k, ZERO) + v * ly
                acc = nxt
            for k, v in acc.items():
                f[k] = f[k] + coef * v
        if any(f):
            forms.append(f)
    return forms


def _form_rays(forms):
    """Roots (x : y) of the gcd of binary forms.

    Returns (rational_rays, irrational_minpolys); x : y rays as Scalar pairs,
    irrational ones as monic quadratics (p, s) in w = x/y.
    """
    if not forms:
        return None, None  # whole branch is a solution
    # y | f  <=>  coefficient of x^3 is zero
    y_divides = all(not f[3] for f in forms)
    g = []
    for f in forms:
        g = _pgcd(g, f) if g else _pgcd(f, f)
    rational, irrational = [], []
    if y_divides:
        rational.append((ONE, ZERO))
    if g and not g[0]:
        rational.append((ZERO, ONE))
        g = g[1:]
    deg = len(g) - 1
    if deg == 1:
        rational.append((-g[0], ONE))
    elif deg == 2:
        p, s = g[1], g[0]
        disc = p * p - s * 4
        if is_square(disc):
            root = _sqrt_square(disc)
            half = Scalar(1, 2)
            for sign in (1, -1):
                rational.append(((-p + root * sign) * half, ONE))
        else:
            irrational.append((p, s))
    elif deg >= 3:
        raise ValueError("cubic gcd: every branch point would be a solution; not expected")
    return rational, irrational


def _normalize_ray(v):
    for c in v:
        if c:
            inv = c.inverse()
            return tuple(x * inv for x in v)
    return v


def _axis_name(v):
    nz = [i for i, c in enumerate(v) if c]
    if len(nz) == 1:
        return ("Rhat", "Rhat^-1", "I")[nz[0]]
    return None


def _reduced_axis_name(v):
    a, c = v
    if not c:
        return "Rhat"
    if not a:
        return "I"
    return None


def classify_braid_solutions(spec: SeriesSpec, bundle=None, check_extra=True, abstract=True) -> ClassificationReport:
    bundle = bundle or build_rmatrix(spec)
    N = spec.N
    I = QMatrix.identity((N, N))
    lam = _lam_of(bundle)
    if len(bundle.eigenvalues) == 2:
        return _classify_hecke(spec, bundle)
    coeffs = braid_cubic_coefficients(spec, (bundle.Rhat, bundle.Rhat_inv, I))
    ech, polys = entry_span(coeffs)
    targets = {name: ech.contains(t) for name, t in _targets_bcd(lam).items()}
    axes = {name: coeffs_vanish_on(coeffs, v)
            for name, v in (("Rhat", (ONE, ZERO, ZERO)), ("Rhat^-1", (ZERO, ONE, ZERO)), ("I", (ZERO, ZERO, ONE)))}
    basis = list(ech.pivots.values())
    branches = {
        "alpha=0": ((ZERO, ZERO), (ONE, ZERO), (ZERO, ONE)),     # (beta, gamma) = (x, y)
        "beta=0": ((ONE, ZERO), (ZERO, ZERO), (ZERO, ONE)),      # (alpha, gamma)
        "beta=-alpha": ((ONE, ZERO), (-ONE, ZERO), (ZERO, ONE)),  # (alpha, gamma)
    }
    rays = []
    seen = set()
    for name, sub in branches.items():
        rational, irrational = _form_rays(_branch_forms(basis, sub))
        if rational is None:
            raise ValueError(f"branch {name} lies entirely in the solution variety")
        for x, y in rational:
            v = _normalize_ray(tuple(sub[k][0] * x + sub[k][1] * y for k in range(3)))
            if v in seen:
                continue
            seen.add(v)
            rays.append(Ray(v, True, name, axis=_axis_name(v)))
        for p, s in irrational:
            rays.append(Ray(("x", "y", "r"), False, name, (p, s)))
    rational_axes = all(r.axis for r in rays if r.rational) and {r.axis for r in rays if r.rational} == {"Rhat", "Rhat^-1", "I"}
    variety_is_axes = rational_axes and all(r.rational for r in rays)
    extra = {}
    if check_extra:
        for k, r in enumerate(rays):
            if not r.rational:
                extra[f"{r.label}#{k}"] = _irrational_ray_excluded(spec, bundle, r)
    abstract_targets = {}
    if abstract and bundle is build_rmatrix(spec):
        abstract_targets = _abstract_targets(spec, lam)
    ehat_ray = _normalize_ray((ONE, -ONE, -lam))
    ehat_excluded = not coeffs_vanish_on(coeffs, ehat_ray)
    return ClassificationReport(spec, "bwm", ech.rank, targets, axes, rays, variety_is_axes, rational_axes,
                                extra, abstract_targets, ehat_excluded)


def _lam_of(bundle):
    # lam from the minimal polynomial: Rhat - Rhat^-1 on the top eigenvalue q is q - 1/q
    q = bundle.eigenvalues[0]
    return q - q.inverse()


def coeffs_vanish_on(coeffs, v):
    """Whether sum_m v^m M_m = 0 for a point v with Scalar coordinates."""
    total = None
    for mono, M in coeffs.items():
        w = ONE
        for x, e in zip(v, mono):
            w = w * (x ** e if e else ONE)
        if not w:
            continue
        term = M.scale(w)
        total = term if total is None else total + term
    return total is None or total.is_zero()


def _abstract_targets(spec, lam):
    from .bwm import algebra_for, braid_difference

    alg = algebra_for(spec)
    D = braid_difference(alg)
    polys = {}
    for mono, vec in D.items():
        for k, c in vec.items():
            polys.setdefault(k, {})[mono] = c
    ech = SpanEchelon(order=lambda m: m)
    for p in polys.values():
        ech.add(p)
    return {name: ech.contains(t) for name, t in _targets_bcd(lam).items()}


def _classify_hecke(spec, bundle):
    # Rhat^2 = lam Rhat + p with lam = e1 + e2, so Rhat^-1 lies on the ray (1 : -lam)
    N = spec.N
    e1, e2 = bundle.eigenvalues
    lam = e1 + e2
    I = QMatrix.identity((N, N))
    coeffs = braid_cubic_coefficients(spec, (bundle.Rhat, I))
    ech, polys = entry_span(coeffs)
    # a c (lam a + c) = lam a^2 c + a c^2
    targets = {"a*c*(lam*a+c)": ech.contains({(2, 1): lam, (1, 2): ONE})}
    axes = {
        "Rhat": coeffs_vanish_on(coeffs, (ONE, ZERO)),
        "I": coeffs_vanish_on(coeffs, (ZERO, ONE)),
        "Rhat^-1": coeffs_vanish_on(coeffs, (ONE, -lam)),
    }
    forms = []
    for p in ech.pivots.values():
        f = [ZERO] * 4
        for (a, c), v in p.items():
            f[a] = f[a] + v
        forms.append(f)
    rational, irrational = _form_rays(forms)
    rays = []
    for x, y in rational:
        v = _normalize_ray((x, y))
        name = _reduced_axis_name(v)
        if name is None and v[0] and v[1] == -lam * v[0]:
            name = "Rhat^-1"
        rays.append(Ray(v, True, "reduced (a : c)", axis=name))
    for p, s in irrational:
        rays.append(Ray(("x", "y"), False, "reduced (a : c)", (p, s)))
    rational_axes = all(r.axis for r in rays if r.rational) and {r.axis for r in rays if r.rational} == {"Rhat", "Rhat^-1", "I"}
    variety_is_axes = rational_axes and all(r.rational for r in rays)
    return ClassificationReport(spec, "hecke", ech.rank, targets, axes, rays, variety_is_axes, rational_axes)


# pairing constraints


def _left_chain(B00, N, w, n, m, one):
    """s(w (x) u^n_m) for a parity-0 word w, by repeated (CQT.2)."""
    vec = {n: one}
    for (i, j, _) in w:
        nxt = {}
        for k, x in vec.items():
            for k2 in range(N):
                v = B00.get(((i, k), (j, k2)))
                if v is not None:
                    nxt[k2] = nxt.get(k2, 0 * one) + x * v
        vec = nxt
    return vec.get(m, 0 * one)


def _right_chain(B00, N, w, n, m, one):
    """s(u^n_m (x) w) by repeated (CQT.1): s(c (x) a1..ad) = s(c1 (x) ad) ... s(cd (x) a1)."""
    vec = {n: one}
    for (i, j, _) in reversed(w):
        nxt = {}
        for k, x in vec.items():
            for k2 in range(N):
                v = B00.get(((k, i), (k2, j)))
                if v is not None:
                    nxt[k2] = nxt.get(k2, 0 * one) + x * v
        vec = nxt
    return vec.get(m, 0 * one)


def _relations_for(spec, include_det=True):
    rels = [("frt", key, g) for key, g in frt_relations(spec)]
    rels += [("metric", key, g) for key, g in metric_relations(spec)]
    if spec.series == "SL" and include_det:
        rels.append(("det", (), det_q(spec) - ONE))
    return rels


def pairing_constraint(spec, B00_entries, one, rels=None):
    """Scale constraints for s = kappa * s0 from pairing relations with letters.

    ``B00_entries`` maps ((i, n), (j, m)) to values of s0(u^i_j (x) u^n_m) in a
    ring with unit ``one``.  Each relation g = g_d + g_0 (homogeneous degree d
    part plus constant) pairs with a letter to kappa^d X - K.  Returns
    (consistent, {d: kappa^d value or None if unconstrained}, witness).
    """
    N = spec.N
    rels = _relations_for(spec) if rels is None else rels
    per_degree = {}
    for kind, key, g in rels:
        const = g.terms.get((), ZERO)
        body = {w: c for w, c in g.terms.items() if w}
        degs = {len(w) for w in body}
        if len(degs) != 1:
            raise ValueError(f"relation {kind}{key} is not homogeneous plus constant")
        d = degs.pop()
        for n, m in product(range(N), repeat=2):
            K = -const if n == m else ZERO
            for side in ("left", "right"):
                X = 0 * one
                for w, c in body.items():
                    val = _left_chain(B00_entries, N, w, n, m, one) if side == "left" else \
                        _right_chain(B00_entries, N, w, n, m, one)
                    X = X + val * c
                per_degree.setdefault(d, []).append((X, K, (kind, key, n, m, side)))
    out = {}
    for d, items in per_degree.items():
        Z = None
        for X, K, tag in items:
            if X:
                Z = (one * K) / X
                break
        if Z is None:
            bad = next((tag for X, K, tag in items if K), None)
            if bad is not None:
                return False, out, f"degree {d}: constant term with vanishing pairing at {bad}"
            out[d] = None
            continue
        if not Z:
            tag = next(tag for X, K, tag in items if X)
            return False, out, f"degree {d}: pairing with {tag} is nonzero for every kappa != 0"
        for X, K, tag in items:
            if X * Z != one * K:
                return False, out, f"degree {d}: inconsistent at {tag}"
        out[d] = Z
    return True, out, None


def _entries_of(M: QMatrix, N, f=lambda v: v):
    out = {}
    for r, c, v in M.items():
        i, n = divmod(r, N)
        j, m = divmod(c, N)
        out[((i, n), (j, m))] = f(v)
    return out


def z_constraint(spec: SeriesSpec) -> dict:
    """Admissible scales for the rays T = z Rhat, z Rhat^-1, z I."""
    N = spec.N
    b = build_rmatrix(spec)
    P = flip(N)
    report = {}
    for name, That in (("Rhat", b.Rhat), ("Rhat^-1", b.Rhat_inv)):
        ok, cons, wit = pairing_constraint(spec, _entries_of(P @ That, N), ONE)
        report[name] = {"consistent": ok, "constraints": {d: (str(v) if v is not None else "free") for d, v in cons.items()},
                        "witness": wit, "text": _constraint_text(cons, spec)}
    # T = z I: B00 = z P
    try:
        inverse((P).partial_transpose(1))
        invertible = True
    except SingularMatrix:
        invertible = False
    ok, cons, wit = pairing_constraint(spec, _entries_of(P, N), ONE)
    report["I"] = {"consistent": ok and invertible, "convolution_invertible": invertible,
                   "pairing_consistent": ok, "witness": wit if not ok else
                   ("antipode system for B01 is singular (B00^t2 has rank 1)" if not invertible else None)}
    return report


def _constraint_text(cons, spec):
    parts = []
    for d in sorted(cons):
        v = cons[d]
        if v is None:
            continue
        parts.append(f"z^{d} = {v}")
    if not parts:
        return "z != 0"
    return ", ".join(parts)


def _irrational_ray_excluded(spec, bundle, ray: Ray) -> bool:
    """True if no scale kappa makes kappa * T (T on the ray) pass the relation pairing."""
    N = spec.N
    p, s = ray.minpoly
    one = QuadExt(ONE, ZERO, p, s)
    r = QuadExt(ZERO, ONE, p, s)
    # branch beta = -alpha with (alpha, gamma) = (r, 1) in the x/y chart w = x/y
    if ray.label == "beta=-alpha":
        alpha, beta, gamma = r, -r, one
    elif ray.label == "alpha=0":
        alpha, beta, gamma = 0 * one, r, one
    else:
        alpha, beta, gamma = r, 0 * one, one
    P = flip(N)
    A = _entries_of(P @ bundle.Rhat, N)
    B = _entries_of(P @ bundle.Rhat_inv, N)
    C = _entries_of(P, N)
    entries = {}
    for key in set(A) | set(B) | set(C):
        v = 0 * one
        if key in A:
            v = v + alpha * A[key]
        if key in B:
            v = v + beta * B[key]
        if key in C:
            v = v + gamma * C[key]
        if v:
            entries[key] = v
    ok, _, _ = pairing_constraint(spec, entries, one)
    return not ok


@dataclass
class _Substituted:
    Rhat: QMatrix
    Rhat_inv: QMatrix
    eigenvalues: tuple


def _shape_of(rep: ClassificationReport):
    return {
        "route": rep.route,
        "span_dim": rep.span_dim,
        "targets": sorted(rep.targets.items()),
        "axes": sorted(rep.axes_certified.items()),
        "rational_axes": sorted(r.axis or "other" for r in rep.rays if r.rational),
        "irrational": sum(1 for r in rep.rays if not r.rational),
    }


def inversion_stability(spec: SeriesSpec) -> Outcome:
    """Rerun the ray analysis on Rhat(q^-1); the shape of the answer must not change."""
    b = build_rmatrix(spec)
    sub = _Substituted(b.Rhat.subs_power(-1), b.Rhat_inv.subs_power(-1),
                       tuple(e.subs_power(-1) for e in b.eigenvalues))
    here = _shape_of(classify_braid_solutions(spec, b, check_extra=False, abstract=False))
    there = _shape_of(classify_braid_solutions(spec, sub, check_extra=False, abstract=False))
    diff = {k: (here[k], there[k]) for k in here if here[k] != there[k]}
    return Outcome("q_inversion_stability", not diff, str(diff) if diff else None, detail={"shape": here})
