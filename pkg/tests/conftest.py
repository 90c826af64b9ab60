import pytest
import sympy
from hypothesis import settings

from rforms.rmatrix import build_series

settings.register_profile("exact", deadline=None, max_examples=40)
settings.load_profile("exact")

ALL_SPECS = [("GL", 2), ("GL", 3), ("SL", 2), ("SL", 3), ("O", 3), ("O", 4), ("Sp", 2), ("Sp", 4), ("Sp", 6)]
SMALL_SPECS = [("GL", 2), ("SL", 2), ("O", 3), ("Sp", 2)]

T = sympy.Symbol("t")


def to_sympy(s):
    """Scalar -> sympy rational function in t (independent of the fmpz_poly route)."""
    num = sum(int(c) * T ** k for k, c in enumerate(s.num.coeffs()))
    den = sum(int(c) * T ** k for k, c in enumerate(s.den.coeffs()))
    return sympy.cancel(num / den)


def spec_id(p):
    return f"{p[0]}{p[1]}"


@pytest.fixture(params=SMALL_SPECS, ids=spec_id)
def small_spec(request):
    return build_series(*request.param)


@pytest.fixture(params=ALL_SPECS, ids=spec_id)
def any_spec(request):
    return build_series(*request.param)
