"""
The algebras BWM_3(q, mu) and H_3(q) and their images in End(V^{(x)3}).

Both algebras are built from a table of left multiplications by the
generators G1, G2 on the normal-form basis.  The table is not trusted: the
structure constants derived from it are certified by associativity on all
basis triples and by the defining relations, and the homomorphism pi into
the three-leg tensor space is certified to be multiplicative on all basis
pairs.

Generator letters in basis words: ``a`` = G1, ``b`` = G2, ``A`` = G1^-1,
``B`` = G2^-1, ``e`` = E1, ``f`` = E2.  In the BWM algebra
G E1 = ell E1 with ell = 1/mu = eps q^(eps-N), and the skein relation reads
G^-1 - G = lam E - lam.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .linalg import QMatrix, inverse, kernel_basis, leg_embed, rank, rank_at
from .rmatrix import SeriesSpec, build_rmatrix
from .scalar import ONE, ZERO, Scalar

__all__ = [
    "AbstractAlgebra",
    "CertificationError",
    "PiImage",
    "BWM_BASIS",
    "HECKE_BASIS",
    "build_bwm3",
    "build_hecke3",
    "build_pi",
    "pi_rank",
    "kernel_relation",
    "compare_with_printed",
    "PRINTED_KERNEL",
    "algebra_for",
    "braid_difference",
    "braid_difference_forms",
]

BWM_BASIS = ("1", "a", "b", "ab", "ba", "aba", "e", "f", "ef", "fe", "af", "fa", "Be", "eB", "afa")
HECKE_BASIS = BWM_BASIS[:6]

DISPLAY = {
    "1": "1", "a": "g1", "b": "g2", "ab": "g1g2", "ba": "g2g1", "aba": "g1g2g1",
    "e": "e1", "f": "e2", "ef": "e1e2", "fe": "e2e1", "af": "g1e2", "fa": "e2g1",
    "Be": "g2^-1e1", "eB": "e1g2^-1", "afa": "g1e2g1",
}

# left multiplication by G1 (``a``) and G2 (``b``) on the normal-form basis;
# coefficients are polynomials in lam and ell, written as (c_lam, c_ell, int, label):
# the term is int * lam**c_lam * ell**c_ell * label
_LEFT_RULES = {
    "a": {
        "1": [(0, 0, 1, "a")],
        "a": [(0, 0, 1, "1"), (1, 0, 1, "a"), (1, 1, -1, "e")],
        "b": [(0, 0, 1, "ab")],
        "ab": [(0, 0, 1, "b"), (1, 0, 1, "ab"), (1, 1, -1, "eB"), (2, 1, -1, "e"), (2, 1, 1, "ef")],
        "ba": [(0, 0, 1, "aba")],
        "aba": [(0, 0, 1, "ba"), (1, 0, 1, "aba"), (1, 1, -1, "ef")],
        "e": [(0, 1, 1, "e")],
        "f": [(0, 0, 1, "af")],
        "ef": [(0, 1, 1, "ef")],
        "fe": [(0, 0, 1, "Be")],
        "af": [(0, 0, 1, "f"), (1, 0, 1, "af"), (1, 1, -1, "ef")],
        "fa": [(0, 0, 1, "afa")],
        "Be": [(0, 0, 1, "fe"), (1, 0, 1, "Be"), (1, 1, -1, "e")],
        "eB": [(0, 1, 1, "eB")],
        "afa": [(0, 0, 1, "fa"), (1, 0, 1, "afa"), (1, 1, -1, "eB")],
    },
    "b": {
        "1": [(0, 0, 1, "b")],
        "a": [(0, 0, 1, "ba")],
        "b": [(0, 0, 1, "1"), (1, 0, 1, "b"), (1, 1, -1, "f")],
        "ab": [(0, 0, 1, "aba")],
        "ba": [(0, 0, 1, "a"), (1, 0, 1, "ba"), (1, 1, -1, "fa")],
        "aba": [(0, 0, 1, "ab"), (1, 0, 1, "aba"), (1, 1, -1, "fe")],
        "e": [(0, 0, 1, "Be"), (1, 0, 1, "e"), (1, 0, -1, "fe")],
        "f": [(0, 1, 1, "f")],
        "ef": [(0, 0, 1, "af"), (1, 0, 1, "ef"), (1, 0, -1, "f")],
        "fe": [(0, 1, 1, "fe")],
        "af": [(0, 0, 1, "ef")],
        "fa": [(0, 1, 1, "fa")],
        "Be": [(0, 0, 1, "e")],
        "eB": [(0, 0, 1, "afa"), (1, 0, 1, "eB"), (1, 0, -1, "fa")],
        "afa": [(0, 0, 1, "eB")],
    },
}


class CertificationError(AssertionError):
    def __init__(self, what, witness):
        super().__init__(f"{what} failed at {witness}")
        self.what = what
        self.witness = witness


@dataclass(frozen=True)
class AbstractAlgebra:
    """A finite-dimensional algebra given by structure constants on a labelled basis.

    ``structure[i][j]`` is a sparse vector {k: c^k_ij} with basis_i basis_j = sum_k c^k_ij basis_k.
    """

    name: str
    basis_labels: tuple
    structure: tuple
    params: dict
    left_gen: dict = field(compare=False, default_factory=dict)
    certificate: dict = field(compare=False, default_factory=dict)

    @property
    def dim(self):
        return len(self.basis_labels)

    def index(self, label):
        return self.basis_labels.index(label)

    def mul(self, x, y):
        """Product of two sparse vectors {basis index: Scalar}."""
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                ab = a * b
                for k, c in self.structure[i][j].items():
                    out[k] = out.get(k, ZERO) + ab * c
        return {k: v for k, v in out.items() if v}

    def element(self, word):
        """Evaluate a word in the letters a, b, A, B, e, f as a vector."""
        vec = {0: ONE}
        for ch in reversed(word):
            vec = _apply(self.left_gen[ch], vec)
        return vec

    def basis_vector(self, label):
        return {self.index(label): ONE}


def _apply(L, vec):
    out = {}
    for j, v in vec.items():
        for i, c in L.rows.items():
            x = c.get(j)
            if x is not None:
                out[i] = out.get(i, ZERO) + x * v
    return {k: v for k, v in out.items() if v}


def _left_matrix(letter, labels, lam, ell):
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    entries = []
    for j, lab in enumerate(labels):
        for c_lam, c_ell, k, target in _LEFT_RULES[letter][lab]:
            if target not in idx:
                continue
            entries.append(((idx[target],), (j,), lam ** c_lam * ell ** c_ell * k))
    return QMatrix.from_entries((n,), (n,), entries)


def _build(name, labels, lam, ell, params):
    n = len(labels)
    La = _left_matrix("a", labels, lam, ell)
    Lb = _left_matrix("b", labels, lam, ell)
    LA, LB = inverse(La), inverse(Lb)
    I = QMatrix.identity((n,))
    if "e" in labels:
        Le = (LA - La + I.scale(lam)).scale(lam.inverse())
        Lf = (LB - Lb + I.scale(lam)).scale(lam.inverse())
    else:
        Le = Lf = QMatrix.zeros((n,))
    gens = {"a": La, "b": Lb, "A": LA, "B": LB, "e": Le, "f": Lf}
    Lbasis = []
    for lab in labels:
        M = I
        if lab != "1":
            for ch in lab:
                M = M @ gens[ch]
        Lbasis.append(M)
    # normal form consistency: basis_i * 1 = basis_i
    for i, M in enumerate(Lbasis):
        col = {r: row[0] for r, row in M.rows.items() if 0 in row}
        if col != {i: ONE}:
            raise CertificationError("normal form", labels[i])
    structure = []
    for i in range(n):
        row = []
        for j in range(n):
            M = Lbasis[i]
            row.append({r: r_row[j] for r, r_row in M.rows.items() if j in r_row})
        structure.append(tuple(row))
    alg = AbstractAlgebra(name, tuple(labels), tuple(structure), params, gens)
    return alg


def _certify_associativity(alg):
    n = alg.dim
    count = 0
    for i in range(n):
        for j in range(n):
            ij = alg.structure[i][j]
            for k in range(n):
                left = alg.mul(ij, {k: ONE})
                right = alg.mul({i: ONE}, alg.structure[j][k])
                if left != right:
                    raise CertificationError("associativity",
                                             (alg.basis_labels[i], alg.basis_labels[j], alg.basis_labels[k]))
                count += 1
    return count


def _relations(with_e):
    """Defining relations as pairs of words (left, right) plus scalar-weighted forms."""
    rels = [("aba", "bab")]
    if with_e:
        rels += [
            ("efe", "e"), ("fef", "f"),
            ("beb", "AfA"), ("BeB", "afa"),
            ("efa", "eB"), ("afe", "Be"),
            ("fea", None), ("abe", "fe"), ("baf", "ef"),
        ]
    return [r for r in rels if r[1] is not None]


def _certify_relations(alg, lam, ell, with_e):
    checks = {}
    E = alg.element
    for lhs, rhs in _relations(with_e):
        ok = E(lhs) == E(rhs)
        checks[f"{lhs}={rhs}"] = ok
        if not ok:
            raise CertificationError("relation", f"{lhs} = {rhs}")
    # quadratic relations
    one = {0: ONE}

    def comb(*terms):
        out = {}
        for c, w in terms:
            for k, v in (E(w) if w else one).items():
                out[k] = out.get(k, ZERO) + c * v
        return {k: v for k, v in out.items() if v}

    if with_e:
        skein = comb((ONE, "A"), (-ONE, "a"), (-lam, "e"), (lam, ""))
        ge = comb((ONE, "ae"), (-ell, "e"))
        eg = comb((ONE, "ea"), (-ell, "e"))
        for name, v in (("G1^-1 - G1 = lam E1 - lam", skein), ("G1 E1 = ell E1", ge), ("E1 G1 = ell E1", eg)):
            checks[name] = not v
            if v:
                raise CertificationError("relation", name)
    else:
        hecke = comb((ONE, "aa"), (-lam, "a"), (-ONE, ""))
        checks["G1^2 = lam G1 + 1"] = not hecke
        if hecke:
            raise CertificationError("relation", "Hecke quadratic")
    return checks


@lru_cache(maxsize=None)
def build_bwm3(lam: Scalar, mu: Scalar) -> AbstractAlgebra:
    """BWM_3 with skein parameter lam = q - q^-1 and mu = eps q^(N-eps)."""
    ell = mu.inverse()
    alg = _build("BWM3", BWM_BASIS, lam, ell, {"lam": lam, "mu": mu})
    n_triples = _certify_associativity(alg)
    checks = _certify_relations(alg, lam, ell, True)
    alg.certificate.update(associativity_triples=n_triples, relations=checks, dim=alg.dim)
    return alg


@lru_cache(maxsize=None)
def build_hecke3(lam: Scalar) -> AbstractAlgebra:
    """H_3(q): the BWM rules with E1 = E2 = 0."""
    alg = _build("H3", HECKE_BASIS, lam, ONE, {"lam": lam})
    n_triples = _certify_associativity(alg)
    checks = _certify_relations(alg, lam, ONE, False)
    alg.certificate.update(associativity_triples=n_triples, relations=checks, dim=alg.dim)
    return alg


def algebra_for(spec: SeriesSpec) -> AbstractAlgebra:
    if spec.family == "A":
        return build_hecke3(spec.lam)
    return build_bwm3(spec.lam, spec.mu)


@dataclass(frozen=True)
class PiImage:
    spec: SeriesSpec
    algebra: AbstractAlgebra
    images: dict
    certificate: dict = field(compare=False, default_factory=dict)

    def flattened(self):
        return [self.images[lab].flatten() for lab in self.algebra.basis_labels]

    def of_vector(self, vec):
        N3 = (self.spec.N,) * 3
        out = QMatrix.zeros(N3)
        for k, c in vec.items():
            out = out + self.images[self.algebra.basis_labels[k]].scale(c)
        return out


def build_pi(alg: AbstractAlgebra, spec: SeriesSpec, certify=True) -> PiImage:
    N = spec.N
    bundle = build_rmatrix(spec)
    if alg.name == "BWM3" and spec.family == "BCD":
        if alg.params["mu"] != spec.mu:
            raise CertificationError("parameter match", (str(alg.params["mu"]), str(spec.mu)))
    gens = {
        "a": leg_embed(bundle.Rhat, (1, 2), 3, N),
        "b": leg_embed(bundle.Rhat, (2, 3), 3, N),
        "A": leg_embed(bundle.Rhat_inv, (1, 2), 3, N),
        "B": leg_embed(bundle.Rhat_inv, (2, 3), 3, N),
    }
    if bundle.ehat is not None:
        gens["e"] = leg_embed(bundle.ehat, (1, 2), 3, N)
        gens["f"] = leg_embed(bundle.ehat, (2, 3), 3, N)
    images = {}
    for lab in alg.basis_labels:
        M = QMatrix.identity((N,) * 3)
        if lab != "1":
            for ch in lab:
                M = M @ gens[ch]
        images[lab] = M
    pi = PiImage(spec, alg, images)
    if certify:
        pairs = 0
        labels = alg.basis_labels
        for i, li in enumerate(labels):
            for j, lj in enumerate(labels):
                lhs = images[li] @ images[lj]
                rhs = pi.of_vector(alg.structure[i][j])
                if lhs != rhs:
                    raise CertificationError("pi multiplicativity", (DISPLAY[li], DISPLAY[lj]))
                pairs += 1
        pi.certificate["multiplicative_pairs"] = pairs
    return pi


def pi_rank(pi: PiImage, precheck=True):
    vecs = pi.flattened()
    out = {"rank": rank(vecs)}
    if precheck:
        out["rank_at_t0"] = rank_at(vecs)
    return out


def kernel_relation(pi: PiImage):
    """The unique linear relation among the pi-images, as {label: coefficient}.

    Normalized so that the first nonzero coefficient (in basis order) is 1.
    """
    vecs = pi.flattened()
    labels = pi.algebra.basis_labels
    # kernel of the matrix whose columns are the image vectors
    cols = {}
    for j, v in enumerate(vecs):
        for pos, val in v.items():
            cols.setdefault(pos, {})[j] = val
    M = QMatrix((len(cols),), (len(labels),), {r: row for r, row in enumerate(cols.values())}, True)
    ker = kernel_basis(M)
    if len(ker) != 1:
        raise ValueError(f"kernel_relation needs rank deficit exactly 1, found {len(ker)}")
    return {labels[k]: v for k, v in sorted(ker[0].items())}


# printed linear relation among the pi-images for Sp_q(4), read literally:
# value is (sign, q-exponent list) summed, or None where the printed token is
# not a power of q
PRINTED_KERNEL = {
    "1": [(1, 0)],
    "a": [(-1, -1)],
    "b": [(-1, -1)],
    "ab": None,            # printed "g^{-2}"
    "ba": [(1, -2)],
    "aba": [(-1, -3)],
    "e": [(-1, -6), (-1, -2)],   # two printed e1 terms, no e2 term
    "f": [],
    "ef": [(-1, -4)],
    "fe": [(-1, -4)],
    "af": [(1, -3)],
    "fa": [(1, -3)],
    "eB": None,            # printed "g^{-5}"
    "Be": [(1, -5)],
    "afa": [(-1, -4)],
}


def compare_with_printed(relation, spec: SeriesSpec, printed=None):
    """Term-by-term comparison of a computed kernel relation with the printed one."""
    printed = PRINTED_KERNEL if printed is None else printed
    rows = []
    for lab in BWM_BASIS:
        comp = relation.get(lab, ZERO)
        p = printed.get(lab)
        if p is None:
            rows.append({"term": DISPLAY[lab], "computed": str(comp), "printed": "unreadable",
                         "status": "unreadable"})
            continue
        pv = ZERO
        for sign, k in p:
            pv = pv + spec.qp(k) * sign
        rows.append({"term": DISPLAY[lab], "computed": str(comp), "printed": str(pv),
                     "status": "match" if pv == comp else "mismatch"})
    return rows


# polynomial elements: {(a, b, c): vector} meaning sum alpha^a beta^b gamma^c * vector


def _pmul(alg, x, y):
    out = {}
    for m1, v1 in x.items():
        for m2, v2 in y.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            acc = out.setdefault(m, {})
            for k, c in alg.mul(v1, v2).items():
                acc[k] = acc.get(k, ZERO) + c
    return _pclean(out)


def _padd(*terms):
    out = {}
    for s, x in terms:
        for m, v in x.items():
            acc = out.setdefault(m, {})
            for k, c in v.items():
                acc[k] = acc.get(k, ZERO) + s * c
    return _pclean(out)


def _pclean(p):
    out = {}
    for m, v in p.items():
        v = {k: c for k, c in v.items() if c}
        if v:
            out[m] = v
    return out


def _const(vec, mono=(0, 0, 0)):
    return {mono: vec}


def braid_difference(alg):
    """T12 T23 T12 - T23 T12 T23 for T = alpha G + beta G^-1 + gamma, as a polynomial element."""
    E = alg.element
    T1 = {(1, 0, 0): E("a"), (0, 1, 0): E("A"), (0, 0, 1): E("")}
    T2 = {(1, 0, 0): E("b"), (0, 1, 0): E("B"), (0, 0, 1): E("")}
    lhs = _pmul(alg, _pmul(alg, T1, T2), T1)
    rhs = _pmul(alg, _pmul(alg, T2, T1), T2)
    return _padd((ONE, lhs), (-ONE, rhs))


def braid_difference_forms(alg):
    """Compare the expanded braid difference with its reduced forms.

    ``printed`` forms keep only the alpha^2 beta, alpha beta^2, alpha^2 gamma
    and beta^2 gamma words, with the skein brace carrying +lam (e1 + e2).
    ``corrected`` forms add the alpha gamma^2 (g1 - g2) and
    beta gamma^2 (g1^-1 - g2^-1) words and use -lam (e1 + e2) in the brace.
    Returns {name: bool}.
    """
    lam = alg.params["lam"]
    E = alg.element
    D = braid_difference(alg)

    def diff(w1, w2):
        return _padd((ONE, {(0, 0, 0): E(w1)}), (-ONE, {(0, 0, 0): E(w2)}))

    def scaled(mono, poly_coeffs, vec_poly):
        out = {}
        for m, s in poly_coeffs.items():
            mm = (m[0] + mono[0], m[1] + mono[1], m[2] + mono[2])
            out = _padd((ONE, out), (s, {mm: vec_poly[(0, 0, 0)]}))
        return out

    one = {(0, 0, 0): ONE}
    words = _padd(
        (ONE, scaled((2, 1, 0), one, diff("aBa", "bAb"))),
        (ONE, scaled((1, 2, 0), one, diff("AbA", "BaB"))),
        (ONE, scaled((2, 0, 1), one, diff("aa", "bb"))),
        (ONE, scaled((0, 2, 1), one, diff("AA", "BB"))),
    )
    gamma2 = _padd(
        (ONE, scaled((1, 0, 2), one, diff("a", "b"))),
        (ONE, scaled((0, 1, 2), one, diff("A", "B"))),
    )
    # alpha^2 (gamma - beta lam)(g1^2 - g2^2) + beta^2 (alpha lam + gamma)(g1^-2 - g2^-2)
    skein = _padd(
        (ONE, scaled((2, 0, 0), {(0, 0, 1): ONE, (0, 1, 0): -lam}, diff("aa", "bb"))),
        (ONE, scaled((0, 2, 0), {(1, 0, 0): lam, (0, 0, 1): ONE}, diff("AA", "BB"))),
    )
    skein_printed = skein_corrected = skein
    if "e" in alg.basis_labels:
        l2 = lam * lam
        for sign, name in ((ONE, "printed"), (-ONE, "corrected")):
            brace = {}
            for c, w in ((ONE, "fa"), (ONE, "af"), (-ONE, "eB"), (-ONE, "Be"),
                         (lam, "ef"), (lam, "fe"), (lam * sign, "e"), (lam * sign, "f")):
                brace = _padd((ONE, brace), (c, {(0, 0, 0): E(w)}))
            full = _padd((ONE, skein), (ONE, scaled((0, 0, 0), {(2, 1, 0): l2, (1, 2, 0): l2}, brace)))
            if name == "printed":
                skein_printed = full
            else:
                skein_corrected = full
    words_full = _padd((ONE, words), (ONE, gamma2))
    return {
        "expanded_equals_printed_braid_word_form": D == words,
        "expanded_equals_corrected_braid_word_form": D == words_full,
        "printed_braid_word_form_equals_printed_skein_form": words == skein_printed,
        "corrected_braid_word_form_equals_corrected_skein_form":
            words_full == _padd((ONE, skein_corrected), (ONE, gamma2)),
    }
