import json
from pathlib import Path

import pytest

from conftest import ALL_SPECS, SMALL_SPECS, spec_id
from rforms.bichar import convolve, counit_pair, make_central_bichar, make_rform, make_sform
from rforms.functionals import (character_iff_cotriangular, lemma41_check, make_all, modular_compare, prop43_suite,
                                s2_matrix)
from rforms.linalg import QMatrix
from rforms.rmatrix import build_series
from rforms.scalar import Q, Scalar
from rforms.words import build_relation_slice

DATA = Path(__file__).parent / "data"
MODULAR = json.loads((DATA / "modular.json").read_text())


def closed_form_F(spec):
    """F_r = diag(q^(4 rho_i)) in t-exponents, with rho read off the weights of the vector representation."""
    N = spec.N
    if spec.family == "A":
        rho = [(N + 1) / 2 - i for i in range(1, N + 1)]
    else:
        rho = spec.rho
    return [Scalar.monomial(int(8 * spec.root * x)) for x in rho]


@pytest.mark.parametrize("key", SMALL_SPECS, ids=spec_id)
def test_inverse_pair(key):
    spec = build_series(*key)
    other = {"GL": 3, "SL": -spec.z_default, "O": -1, "Sp": -1}[spec.series]
    for z in (None, other):
        Fbar, F = s2_matrix(make_rform(spec, z))
        assert Fbar @ F == QMatrix.identity((spec.N,))


@pytest.mark.parametrize("key", SMALL_SPECS, ids=spec_id)
def test_triple_identity(key):
    spec = build_series(*key)
    r = make_rform(spec)
    for b in (r, make_sform(spec), convolve(make_central_bichar(spec, -1), r)):
        assert lemma41_check(b).passed


@pytest.mark.parametrize("key", [("GL", 2), ("O", 3)], ids=spec_id)
def test_s4_suite(key):
    spec = build_series(*key)
    assert prop43_suite(make_rform(spec), build_relation_slice(spec, 2)).passed


@pytest.mark.parametrize("key", [("GL", 2), ("O", 3), ("Sp", 2)], ids=spec_id)
def test_character_iff_cotriangular(key):
    spec = build_series(*key)
    seen = set()
    r = make_rform(spec)
    for b in (r, make_sform(spec), make_central_bichar(spec, -1), counit_pair(spec),
              convolve(make_central_bichar(spec, -1), r)):
        o = character_iff_cotriangular(b)
        assert o.passed
        seen.add(o.detail["cotriangular"])
    assert seen == {True, False}


@pytest.mark.parametrize("key", ALL_SPECS, ids=spec_id)
def test_modular_orientation(key):
    spec = build_series(*key)
    o = modular_compare(make_rform(spec))
    assert o.passed
    assert o.detail["orientation"] == "D^-2"
    assert o.detail["F_r"] == [str(x) for x in closed_form_F(spec)]
    assert o.detail == {**o.detail, **MODULAR[spec_id(key)]}


def test_F_r_is_z_independent():
    gl = build_series("GL", 2)
    base = modular_compare(make_rform(gl)).detail["F_r"]
    for z in (Scalar(3), Q, Scalar(-2) / 7):
        o = modular_compare(make_rform(gl, z))
        assert o.detail["F_r"] == base
    o3 = build_series("O", 3)
    assert modular_compare(make_rform(o3, -1)).detail["F_r"] == MODULAR["O3"]["F_r"]


def test_f_r_depends_on_z_but_F_r_does_not():
    gl = build_series("GL", 2)
    f1 = make_all(make_rform(gl)).f_r.gen_matrix
    f3 = make_all(make_rform(gl, 3)).f_r.gen_matrix
    assert f1 != f3
