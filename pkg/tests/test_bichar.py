import pytest
from hypothesis import given, strategies as st

from rforms.bichar import (Bicharacter, InadmissibleParameter, check_cb, check_cqt, convolve, counit_pair,
                           exchange_check, make_central_bichar, make_rform, make_sform, unitality_check)
from rforms.linalg import QMatrix
from rforms.rmatrix import build_series
from rforms.scalar import ONE, Q, Scalar
from rforms.words import build_relation_slice, counit

GL2 = build_series("GL", 2)
O3 = build_series("O", 3)


def word_strategy(N, max_len=2, parity=st.integers(0, 1)):
    letter = st.tuples(st.integers(0, N - 1), st.integers(0, N - 1), parity)
    return st.lists(letter, max_size=max_len).map(tuple)


@given(word_strategy(3), word_strategy(3))
def test_row_evaluation_matches_cross_order(w1, w2):
    r = make_rform(O3)
    assert r.value(w1, w2) == r.value_cqt2_first(w1, w2)


@given(word_strategy(3, parity=st.just(0)), word_strategy(3))
def test_inverse_rows_match_antipode_expansion(w1, w2):
    rb = make_rform(O3).inverse()
    assert rb.value(w1, w2) == rb.value_by_antipode(w1, w2)


@given(word_strategy(3), word_strategy(3))
def test_convolution_rows_match_splittings(w1, w2):
    f = convolve(make_central_bichar(O3, -1), make_rform(O3))
    assert f.value(w1, w2) == f.value_by_splitting(w1, w2)


@given(word_strategy(3, parity=st.just(0)), word_strategy(3, parity=st.just(0)))
def test_inverse_is_convolution_inverse(w1, w2):
    r = make_rform(O3)
    eps = counit(w1) * counit(w2)
    assert convolve(r, r.inverse()).value(w1, w2) == eps
    assert convolve(r.inverse(), r).value(w1, w2) == eps


def test_basics_and_counit_pair():
    r = make_rform(GL2)
    assert unitality_check(r).passed and exchange_check(r).passed
    e = counit_pair(GL2)
    w = ((0, 0, 0), (1, 1, 0))
    assert convolve(e, r).value(w, w) == r.value(w, w)


@pytest.mark.parametrize("series,N,zeta", [("GL", 2, 2), ("SL", 2, -1), ("O", 3, -1), ("Sp", 2, -1)])
def test_axioms_hold(series, N, zeta):
    spec = build_series(series, N)
    sl = build_relation_slice(spec, 2)
    c = make_central_bichar(spec, zeta)
    for b in (make_rform(spec), make_sform(spec), convolve(c, make_rform(spec))):
        assert check_cqt(b, sl).passed, b.tag
    cb = check_cb(c, sl)
    assert cb.passed
    # a central bicharacter alone is not an r-form: its exchange law fails
    assert cb.detail["cqt3"] is False


@given(st.integers(0, 15), st.sampled_from([ONE, Scalar(2), Q]))
def test_single_entry_perturbations_fail(pos, delta):
    sl = build_relation_slice(GL2, 2)
    r = make_rform(GL2)
    rows = {k: dict(v) for k, v in r.B00.rows.items()}
    i, j = divmod(pos, 4)
    rows.setdefault(i, {})[j] = rows.get(i, {}).get(j, Scalar(0)) + delta
    try:
        b = Bicharacter(GL2, QMatrix(r.B00.row_shape, r.B00.col_shape, rows), "p")
    except InadmissibleParameter:
        return
    out = check_cqt(b, sl)
    assert not out.passed and out.witness


def test_inadmissible_parameters():
    with pytest.raises(InadmissibleParameter):
        make_central_bichar(O3, 2)
    with pytest.raises(InadmissibleParameter):
        make_rform(build_series("SL", 2), 1)
    with pytest.raises(InadmissibleParameter):
        make_central_bichar(GL2, 0)
