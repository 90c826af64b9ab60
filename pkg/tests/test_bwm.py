import json
from pathlib import Path

import numpy as np
import pytest

from rforms.bwm import (BWM_BASIS, DISPLAY, HECKE_BASIS, algebra_for, braid_difference_forms, build_bwm3, build_hecke3,
                        build_pi, compare_with_printed, kernel_relation, pi_rank)
from rforms.linalg import QMatrix
from rforms.rmatrix import build_series
from rforms.scalar import Q, Scalar

DATA = Path(__file__).parent / "data"
T0 = 1.3


def test_bwm3_is_associative():
    alg = build_bwm3(Scalar(2), Scalar(3))
    assert alg.dim == 15
    assert alg.basis_labels == BWM_BASIS
    assert alg.certificate["associativity_triples"] == 15 ** 3
    assert all(alg.certificate["relations"].values())


def test_hecke3_is_associative():
    alg = build_hecke3(Q - Q.inverse())
    assert alg.dim == 6 and alg.basis_labels == HECKE_BASIS
    assert alg.certificate["associativity_triples"] == 6 ** 3


def test_left_multiplication_matches_numeric_matrices():
    # structure constants checked against a float evaluation of the generators' left action
    alg = build_bwm3(Scalar(2) / 3, Scalar(5))
    n = alg.dim
    mats = []
    for i in range(n):
        M = np.zeros((n, n))
        for j in range(n):
            for k, c in alg.structure[i][j].items():
                M[k, j] = float(c.at(T0))
        mats.append(M)
    a, b = alg.index("a"), alg.index("b")
    aba = alg.index("aba")
    assert np.allclose(mats[a] @ mats[b] @ mats[a], mats[aba])
    assert np.allclose(mats[a] @ mats[b] @ mats[a], mats[b] @ mats[a] @ mats[b])


EXPECTED_RANK = {("GL", 2): 5, ("GL", 3): 6, ("SL", 2): 5, ("SL", 3): 6, ("O", 3): 15, ("O", 4): 15,
                 ("Sp", 2): 5, ("Sp", 4): 14, ("Sp", 6): 15}


def float_rank(pi):
    rows = []
    for v in pi.flattened():
        dense = np.zeros(pi.spec.N ** 6)
        for pos, val in v.items():
            dense[pos] = float(val.at(T0))
        rows.append(dense)
    return np.linalg.matrix_rank(np.array(rows), tol=1e-8)


@pytest.mark.parametrize("key", list(EXPECTED_RANK), ids=lambda k: f"{k[0]}{k[1]}")
def test_pi_rank(key):
    spec = build_series(*key)
    pi = build_pi(algebra_for(spec), spec)
    assert pi.certificate["multiplicative_pairs"] == pi.algebra.dim ** 2
    r = pi_rank(pi)
    assert r["rank"] == EXPECTED_RANK[key] == r["rank_at_t0"]
    assert float_rank(pi) == r["rank"]


def test_sp4_kernel_golden_and_printed_comparison():
    spec = build_series("Sp", 4)
    pi = build_pi(algebra_for(spec), spec)
    rel = kernel_relation(pi)
    golden = json.loads((DATA / "kernel_sp4.json").read_text())
    assert {DISPLAY[k]: str(v) for k, v in rel.items()} == golden
    # the relation really annihilates the image
    total = QMatrix.zeros((spec.N,) * 3)
    for lab, c in rel.items():
        total = total + pi.images[lab].scale(c)
    assert total == QMatrix.zeros((spec.N,) * 3)
    rows = {r["term"]: r["status"] for r in compare_with_printed(rel, spec)}
    assert rows["1"] == rows["g1"] == rows["g2"] == rows["g2g1"] == rows["g1g2g1"] == "match"
    assert rows["g1g2"] == rows["e1g2^-1"] == "unreadable"
    # every e-containing term differs from the printed one
    assert all(rows[t] == "mismatch" for t in rows if "e" in t and rows[t] != "unreadable")


def test_kernel_relation_requires_a_single_relation():
    spec = build_series("Sp", 2)
    with pytest.raises(ValueError):
        kernel_relation(build_pi(algebra_for(spec), spec))


@pytest.mark.parametrize("key", [("GL", 2), ("O", 3)], ids=lambda k: f"{k[0]}{k[1]}")
def test_braid_difference_forms(key):
    forms = braid_difference_forms(algebra_for(build_series(*key)))
    assert forms["expanded_equals_corrected_braid_word_form"]
    assert forms["corrected_braid_word_form_equals_corrected_skein_form"]
    assert not forms["expanded_equals_printed_braid_word_form"]
    # the printed skein form only survives without the e generators
    assert forms["printed_braid_word_form_equals_printed_skein_form"] == (key[0] == "GL")
