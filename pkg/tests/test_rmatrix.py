import numpy as np
import pytest

from rforms.linalg import QMatrix
from rforms.rmatrix import SeriesError, build_rmatrix, build_series, braid_defect_of, ybe_defect_of
from rforms.scalar import ONE
from conftest import ALL_SPECS, spec_id

T0 = 1.3


def numeric(M):
    out = np.zeros((M.nrows, M.ncols))
    for r, c, v in M.items():
        out[r, c] = float(v.at(T0))
    return out


@pytest.mark.parametrize("key", ALL_SPECS, ids=spec_id)
def test_defects_vanish_exactly(key):
    spec = build_series(*key)
    b = build_rmatrix(spec)
    assert ybe_defect_of(b.R, spec.N).is_zero()
    assert braid_defect_of(b.Rhat, spec.N).is_zero()
    assert b.Rhat @ b.Rhat_inv == QMatrix.identity((spec.N, spec.N))


@pytest.mark.parametrize("key", ALL_SPECS, ids=spec_id)
def test_float_oracle_for_ybe(key):
    # floating point at t = 1.3, built with numpy kron; shares only the entry table
    spec = build_series(*key)
    N = spec.N
    R = numeric(build_rmatrix(spec).R)
    I = np.eye(N)
    P = np.zeros((N * N, N * N))
    for i in range(N):
        for j in range(N):
            P[j * N + i, i * N + j] = 1
    R12, R23 = np.kron(R, I), np.kron(I, R)
    P23 = np.kron(I, P)
    R13 = P23 @ R12 @ P23
    err = np.abs(R12 @ R13 @ R23 - R23 @ R13 @ R12).max()
    assert err < 1e-8 * max(1.0, np.abs(R).max() ** 3)


@pytest.mark.parametrize("key", [k for k in ALL_SPECS if k[0] in ("GL", "SL")], ids=spec_id)
def test_hecke(key):
    spec = build_series(*key)
    b = build_rmatrix(spec)
    I = QMatrix.identity((spec.N, spec.N))
    assert ((b.Rhat - I.scale(spec.q)) @ (b.Rhat + I.scale(spec.q.inverse()))).is_zero()
    assert not (b.Rhat - I.scale(spec.q)).is_zero()


@pytest.mark.parametrize("N", [2, 3])
def test_gl_entries_closed_form(N):
    spec = build_series("GL", N)
    q, lam = spec.q, spec.lam
    entries = []
    for i in range(N):
        for j in range(N):
            entries.append(((i, j), (i, j), q if i == j else ONE))
            if i > j:
                entries.append(((i, j), (j, i), lam))
    want = QMatrix.from_entries((N, N), (N, N), entries)
    assert build_rmatrix(spec).R == want


@pytest.mark.parametrize("key", [k for k in ALL_SPECS if k[0] in ("O", "Sp")], ids=spec_id)
def test_ehat_scalar_closed_form(key):
    spec = build_series(*key)
    q, eps, N = spec.q, spec.eps, spec.N
    want = ONE + (spec.qp(N - eps) - spec.qp(eps - N)) * eps / (q - q.inverse())
    b = build_rmatrix(spec)
    assert b.ehat_scalar == want
    assert b.ehat @ b.ehat == b.ehat.scale(want)


def test_bad_series():
    with pytest.raises(SeriesError):
        build_series("Sp", 3)
    with pytest.raises(SeriesError):
        build_series("E", 6)
