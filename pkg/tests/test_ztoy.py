from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rforms.scalar import ONE, Q, Scalar
from rforms.ztoy import default_lambdas, toy_character_iff_cotriangular, toy_functionals, toy_rform

nonzero = st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda x: x != 0)


@pytest.mark.parametrize("lam", default_lambdas(), ids=str)
def test_default_lambdas(lam):
    o = toy_functionals(lam)
    assert o.passed
    assert o.detail["parts"]["F_r=eps"]


@given(nonzero)
def test_F_r_is_counit(x):
    o = toy_functionals(Scalar(x), range_bound=5)
    assert o.passed


@given(nonzero, st.integers(-8, 8))
def test_f_r_closed_form(x, n):
    # f_r(g^n) = r(g^n, g^-n) = lam^(-n^2)
    r = toy_rform(Scalar(x))
    assert r(n, -n) == Scalar(Fraction(x) ** (-n * n))


@given(nonzero)
def test_character_iff_lambda_squared_one(x):
    o = toy_character_iff_cotriangular(Scalar(x))
    assert o.passed
    assert o.detail["character"] == (x * x == 1)


def test_sigma_is_global():
    sig = {toy_functionals(lam).detail["sigma"] for lam in (Scalar(3) / 2, Q, Scalar(5))}
    assert sig == {-1}
    # lam^2 = 1 leaves the cross term sign undetermined
    assert toy_functionals(Scalar(-1)).detail["sigma"] is None
    assert toy_functionals(Scalar(-1)).detail["character"]


def test_zero_lambda_rejected():
    with pytest.raises(ValueError):
        toy_rform(0)
    with pytest.raises(ValueError):
        toy_functionals(ONE, range_bound=0)
