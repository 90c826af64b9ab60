from collections import Counter

import pytest
from hypothesis import given, strategies as st

from rforms.rmatrix import build_series
from rforms.scalar import ONE, ZERO
from rforms.words import (DegreeOverflow, ResourceBound, WordCombo, all_words, antipode_word, build_relation_slice,
                          coproduct_splittings, counit, det_q, frt_relations, ideal_member, metric_relations,
                          triple_splittings)

N = 3
letters = st.tuples(st.integers(0, N - 1), st.integers(0, N - 1), st.just(0))
words = st.lists(letters, max_size=3).map(tuple)


@given(words)
def test_coassociative(w):
    assert Counter(triple_splittings(w, N, "left")) == Counter(triple_splittings(w, N, "right"))


@given(words)
def test_counit_law(w):
    left = sum((counit(a) for a, b in coproduct_splittings(w, N) if b == w), ZERO)
    right = sum((counit(b) for a, b in coproduct_splittings(w, N) if a == w), ZERO)
    assert left == ONE and right == ONE


@given(words, words)
def test_antipode_reverses_products(a, b):
    assert antipode_word(a + b) == antipode_word(b) * antipode_word(a)


@given(words)
def test_antipode_splittings_run_backwards(w):
    # Delta(S w) = (S (x) S) Delta^op(w)
    sw = next(iter(antipode_word(w).terms))
    lhs = Counter(coproduct_splittings(sw, N))
    rhs = Counter()
    for a, b in coproduct_splittings(w, N):
        rhs[(next(iter(antipode_word(b).terms)), next(iter(antipode_word(a).terms)))] += 1
    assert lhs == rhs


def test_gl2_commutation_relation():
    spec = build_series("GL", 2)
    sl = build_relation_slice(spec, 2)
    u11, u12 = (0, 0, 0), (0, 1, 0)
    a = WordCombo.of((u11, u12)) - WordCombo.of((u12, u11), spec.q)
    b = WordCombo.of((u11, u12)) - WordCombo.of((u12, u11), spec.q.inverse())
    assert ideal_member(a, sl) != ideal_member(b, sl)
    assert not ideal_member(WordCombo.of((u11,)), sl)


def test_relations_generate_their_multiples():
    spec = build_series("O", 3)
    sl = build_relation_slice(spec, 3)
    (key, g), = frt_relations(spec)[:1]
    x = WordCombo.of(((1, 2, 0),)) * g
    assert ideal_member(x, sl) and ideal_member(g * WordCombo.of(((0, 0, 0),)), sl)
    assert metric_relations(spec)
    with pytest.raises(DegreeOverflow):
        ideal_member(x * WordCombo.of(((0, 0, 0),)), sl)


def test_quantum_determinant_is_central():
    spec = build_series("GL", 2)
    sl = build_relation_slice(spec, 3)
    d = det_q(spec)
    for i in range(2):
        for j in range(2):
            u = WordCombo.of(((i, j, 0),))
            assert ideal_member(d * u - u * d, sl)


def test_resource_bound():
    with pytest.raises(ResourceBound):
        build_relation_slice(build_series("Sp", 6), 3)
    assert len(all_words(2, 2)) == 16
