"""
Standard R-matrices of GL_q(N), SL_q(N), O_q(N) and Sp_q(N).

Index convention: R^{in}_{jm} sits at row (i, n), column (j, m) of an
N^2 x N^2 matrix with legs (N, N); indices are 0-based internally and
1-based in the data file.  Rhat = P R with P the flip.

The entries are read from ``data/rmatrix_entries.txt``.  Nothing about the
transcription is trusted: ``build_rmatrix`` re-derives the Yang-Baxter
equation, the braid relation, the minimal polynomial of Rhat and the
properties of the contraction ``ehat`` and refuses to return a bundle if
any of them fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd

from .linalg import QMatrix, flip, inverse, leg_embed, rank
from .scalar import ONE, Scalar

__all__ = [
    "SeriesSpec",
    "SeriesError",
    "ConsistencyError",
    "RMatrixBundle",
    "build_series",
    "build_rmatrix",
    "braid_defect_of",
    "ybe_defect_of",
    "SUPPORTED_SPECS",
]

SERIES = ("GL", "SL", "O", "Sp")

SUPPORTED_SPECS = (
    ("GL", 2), ("GL", 3), ("SL", 2), ("SL", 3),
    ("O", 3), ("O", 4), ("Sp", 2), ("Sp", 4), ("Sp", 6),
)


class SeriesError(ValueError):
    """Invalid (series, N) combination."""


class ConsistencyError(AssertionError):
    """A construction-time identity failed; carries the identity name and a witness."""

    def __init__(self, identity, witness):
        super().__init__(f"{identity} violated at {witness}")
        self.identity = identity
        self.witness = witness


@dataclass(frozen=True)
class SeriesSpec:
    """A quantum group selection with its derived constants.

    ``root`` is the integer k with q**(1/2) = t**k.  It is 1 except for
    SL_q(N) with odd N, where the scale z with z**N = q**-1 needs an N-th
    root of q; there the base variable t is q**(1/(2N)).
    """

    series: str
    N: int
    root: int = 1

    @property
    def family(self):
        return "A" if self.series in ("GL", "SL") else "BCD"

    @property
    def label(self):
        return f"{self.series}_q({self.N})"

    def qp(self, x) -> Scalar:
        """q**x for any x with 2*root*x integral (half-integers always qualify)."""
        k = Fraction(x) * 2 * self.root
        if k.denominator != 1:
            raise ValueError(f"q**{x} is not a power of the base variable of {self.label}")
        return Scalar.monomial(int(k))

    @property
    def q(self):
        return self.qp(1)

    @property
    def t(self):
        return self.qp(Fraction(1, 2))

    @property
    def lam(self):
        return self.q - self.q.inverse()

    @property
    def eps(self):
        if self.series == "O":
            return 1
        if self.series == "Sp":
            return -1
        return None

    @property
    def mu(self):
        """BWM parameter eps*q^(N-eps); None for series A."""
        if self.eps is None:
            return None
        return self.qp(self.N - self.eps) * self.eps

    @property
    def ell(self):
        """Third eigenvalue of Rhat, eps*q^(eps-N) = 1/mu."""
        if self.eps is None:
            return None
        return self.qp(self.eps - self.N) * self.eps

    def prime(self, i):
        """0-based i -> i' = N-1-i."""
        return self.N - 1 - i

    @property
    def rho(self):
        """Exponents rho_1..rho_N of the standard orthogonal/symplectic R-matrix."""
        N = self.N
        if self.series == "O":
            out = []
            for i in range(1, N + 1):
                ip = N + 1 - i
                if i < ip:
                    out.append(Fraction(N, 2) - i)
                elif i == ip:
                    out.append(Fraction(0))
                else:
                    out.append(-(Fraction(N, 2) - ip))
            return tuple(out)
        if self.series == "Sp":
            half = N // 2
            return tuple(Fraction(half - i + 1) if i <= half else -Fraction(half - (N + 1 - i) + 1)
                         for i in range(1, N + 1))
        return None

    def eps_index(self, i):
        """Sign eps_i (1-based i): 1 for O, +1/-1 on the two halves for Sp."""
        if self.series == "Sp":
            return 1 if i <= self.N // 2 else -1
        return 1

    @property
    def z_default(self):
        """A canonical admissible scale z: 1, or an N-th root of q^-1 for SL."""
        if self.series == "SL":
            return self.qp(Fraction(-1, self.N))
        return ONE

    def admissible_zeta(self, zeta) -> bool:
        zeta = Scalar(zeta)
        if not zeta:
            return False
        if self.series == "GL":
            return True
        if self.series == "SL":
            return (zeta ** self.N).is_one()
        return (zeta ** 2).is_one()

    def __str__(self):
        return self.label


def build_series(series, N) -> SeriesSpec:
    s = _normalize_series(series)
    N = int(N)
    if N < 2:
        raise SeriesError(f"N must be at least 2, got {N}")
    if s == "Sp" and N % 2:
        raise SeriesError(f"Sp_q(N) needs even N, got {N}")
    root = 1
    if s == "SL":
        root = N // gcd(N, 2)
    return SeriesSpec(s, N, root)


def _normalize_series(series):
    key = str(series).strip().lower()
    table = {"gl": "GL", "a-gl": "GL", "sl": "SL", "a-sl": "SL", "o": "O", "b-d": "O",
             "bd": "O", "sp": "Sp", "c": "Sp"}
    if key not in table:
        raise SeriesError(f"unknown series {series!r}; expected one of {SERIES}")
    return table[key]


# entry table


@lru_cache(maxsize=None)
def _entry_rules():
    text = resources.files("rforms").joinpath("data/rmatrix_entries.txt").read_text(encoding="utf-8")
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 5:
            raise ValueError(f"rmatrix_entries.txt:{lineno}: expected 5 fields")
        family, npat, cond, idx, value = parts
        idx = idx.split()
        if len(idx) != 4:
            raise ValueError(f"rmatrix_entries.txt:{lineno}: expected 4 indices")
        rules.append((family, npat, compile(cond, "<cond>", "eval"), tuple(idx),
                      compile(value, "<value>", "eval"), lineno))
    return tuple(rules)


def _n_matches(pattern, N):
    if pattern == "*":
        return True
    if pattern == "odd":
        return N % 2 == 1
    if pattern == "even":
        return N % 2 == 0
    return int(pattern) == N


def _transcribe(spec: SeriesSpec) -> QMatrix:
    N = spec.N
    rho = spec.rho
    ns = {
        "q": spec.q,
        "lam": spec.lam,
        "qp": spec.qp,
        "rho": (lambda i: rho[i - 1]),
        "eps": spec.eps_index,
        "__builtins__": {},
    }
    entries = []
    for family, npat, cond, idx, value, _ in _entry_rules():
        if family != spec.family or not _n_matches(npat, N):
            continue
        for a in range(1, N + 1):
            for b in range(1, N + 1):
                env = dict(ns, a=a, b=b, ap=N + 1 - a, bp=N + 1 - b)
                if not eval(cond, env):
                    continue
                pos = tuple(env[x] - 1 for x in idx)
                v = eval(value, env)
                entries.append(((pos[0], pos[1]), (pos[2], pos[3]), Scalar(v) if not isinstance(v, Scalar) else v))
    return QMatrix.from_entries((N, N), (N, N), entries)


# bundle


@dataclass(frozen=True)
class RMatrixBundle:
    spec: SeriesSpec
    R: QMatrix
    Rhat: QMatrix
    Rinv: QMatrix
    Rhat_inv: QMatrix
    eigenvalues: tuple
    ehat: QMatrix | None = None
    ehat_scalar: Scalar | None = None
    metric: QMatrix | None = None
    checks: dict = field(default_factory=dict, compare=False)

    def minimal_polynomial_str(self):
        return "".join(f"(x - ({ev}))" for ev in self.eigenvalues)


def ybe_defect_of(R: QMatrix, N: int) -> QMatrix:
    """R12 R13 R23 - R23 R13 R12 on the N^3 space."""
    R12 = leg_embed(R, (1, 2), 3, N)
    R23 = leg_embed(R, (2, 3), 3, N)
    P23 = leg_embed(flip(N), (2, 3), 3, N)
    R13 = P23 @ R12 @ P23
    return R12 @ R13 @ R23 - R23 @ R13 @ R12


def braid_defect_of(m: QMatrix, N: int) -> QMatrix:
    """M12 M23 M12 - M23 M12 M23 on the N^3 space; zero iff m satisfies the braid relation."""
    m12 = leg_embed(m, (1, 2), 3, N)
    m23 = leg_embed(m, (2, 3), 3, N)
    return m12 @ m23 @ m12 - m23 @ m12 @ m23


def _first_witness(m: QMatrix):
    for ri, ci, v in m.multi_items():
        return {"row": [i + 1 for i in ri], "col": [i + 1 for i in ci], "value": str(v)}
    return None


def _require_zero(name, m):
    if not m.is_zero():
        raise ConsistencyError(name, _first_witness(m))


def _candidate_eigenvalues(spec):
    q = spec.q
    cands = [q, -q.inverse()]
    if spec.family == "BCD":
        cands.append(spec.ell)
    return cands


def _minimal_polynomial_roots(Rhat, cands):
    """Smallest subset S of candidate eigenvalues with prod_{x in S}(Rhat - x) = 0."""
    n = Rhat.row_shape
    I = QMatrix.identity(n)
    from itertools import combinations
    for size in range(1, len(cands) + 1):
        for subset in combinations(cands, size):
            acc = I
            for ev in subset:
                acc = acc @ (Rhat - I.scale(ev))
            if acc.is_zero():
                return tuple(subset)
    return None


def _metric_from_ehat(ehat, N):
    # ehat has rank one: ehat = c (x) c'; read c off a nonzero column
    col = None
    for r, c, v in ehat.items():
        col = c
        break
    entries = []
    for r in range(N * N):
        v = ehat.rows.get(r, {}).get(col)
        if v:
            entries.append(((r // N,), (r % N,), v))
    C = QMatrix.from_entries((N,), (N,), entries)
    # normalize the entry in row 1 to 1
    first = min(r for r in C.rows)
    lead = next(iter(C.rows[first].values()))
    return C.scale(lead.inverse())


@lru_cache(maxsize=None)
def build_rmatrix(spec: SeriesSpec) -> RMatrixBundle:
    N = spec.N
    R = _transcribe(spec)
    P = flip(N)
    Rhat = P @ R
    I = QMatrix.identity((N, N))
    Rinv = inverse(R)
    Rhat_inv = inverse(Rhat)
    _require_zero("R Rinv = I", R @ Rinv - I)
    _require_zero("Rhat Rhat_inv = I", Rhat @ Rhat_inv - I)
    _require_zero("quantum Yang-Baxter equation", ybe_defect_of(R, N))
    _require_zero("braid relation", braid_defect_of(Rhat, N))
    roots = _minimal_polynomial_roots(Rhat, _candidate_eigenvalues(spec))
    if roots is None:
        raise ConsistencyError("minimal polynomial", "no product of candidate factors vanishes")
    if spec.family == "A" and set(roots) != {spec.q, -spec.q.inverse()}:
        raise ConsistencyError("Hecke condition", [str(r) for r in roots])
    checks = {"ybe": True, "braid": True, "inverse": True, "minimal_polynomial": [str(r) for r in roots]}
    ehat = x = metric = None
    if spec.family == "BCD":
        lam = spec.lam
        ehat = I - (Rhat - Rhat_inv).scale(lam.inverse())
        e2 = ehat @ ehat
        r0, c0, v0 = next(ehat.items())
        x = e2[r0, c0] / v0
        _require_zero("ehat^2 = x ehat", e2 - ehat.scale(x))
        _require_zero("Rhat ehat = eps q^(eps-N) ehat", Rhat @ ehat - ehat.scale(spec.ell))
        if rank(ehat) != 1:
            raise ConsistencyError("ehat has rank one", rank(ehat))
        metric = _metric_from_ehat(ehat, N)
        checks["ehat_scalar"] = str(x)
    return RMatrixBundle(spec, R, Rhat, Rinv, Rhat_inv, roots, ehat, x, metric, checks)


def eigen_directions_rank(bundle: RMatrixBundle) -> int:
    """Rank of {Rhat, Rhat^-1, I} as vectors in the N^2 x N^2 matrix space."""
    I = QMatrix.identity(bundle.Rhat.row_shape)
    return rank([bundle.Rhat.flatten(), bundle.Rhat_inv.flatten(), I.flatten()])
