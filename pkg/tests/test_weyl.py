from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverlab.quiver import builtin_quiver, coroot, find_delta
from quiverlab.weyl import (BraidWord, WeylError, braid_L_lambda, identity, length, reduced_word,
                            simple_reflection, translation_action, translation_element, weyl_image,
                            word_element)


def test_simple_reflection_examples():
    Q = builtin_quiver("A1~")
    for i in Q.vertices:
        s = simple_reflection(Q, i)
        root = Q.simple_root(i)
        assert s(root) == tuple(-x for x in root)
        assert (s * s).action == identity(Q).action
    assert simple_reflection(Q, 1)((1, 0)) == (1, 2)


def _words_up_to(Q, max_len):
    for n in range(max_len + 1):
        yield from product(Q.vertices, repeat=n)


def test_translation_of_kronecker_coroot_has_length_two():
    Q = builtin_quiver("A1~")
    lam = coroot(Q, 1)
    t = translation_element(Q, lam)
    assert t.action == translation_action(Q, lam)
    assert length(Q, t) == 2
    # brute force: the shortest word with this action has length 2
    shortest = min(len(w) for w in _words_up_to(Q, 3) if word_element(Q, w).action == t.action)
    assert shortest == 2


@pytest.mark.parametrize("tag", ["A1~", "A2~", "D4~"])
def test_coroot_translation_sends_simple_root_down_by_two_delta(tag):
    Q = builtin_quiver(tag)
    delta = find_delta(Q).delta
    for i in Q.vertices:
        act = translation_action(Q, coroot(Q, i))
        image = tuple(sum(act[r][c] * Q.simple_root(i)[c] for c in Q.vertices) for r in Q.vertices)
        assert image == tuple(a - 2 * b for a, b in zip(Q.simple_root(i), delta))


def test_reduced_word_of_identity_is_empty():
    Q = builtin_quiver("A2~")
    assert len(reduced_word(Q, identity(Q))) == 0


def test_finite_braid_words_reduce_to_same_length():
    Q = builtin_quiver("A2")
    a, b = word_element(Q, [0, 1, 0]), word_element(Q, [1, 0, 1])
    assert a.action == b.action
    assert len(reduced_word(Q, a)) == len(reduced_word(Q, b)) == 3


@pytest.mark.parametrize("tag", ["A1~", "A2~", "D4~"])
def test_lengths_against_exhaustive_enumeration(tag):
    Q = builtin_quiver(tag)
    shortest = {}
    for w in _words_up_to(Q, 4):
        shortest.setdefault(word_element(Q, w).action, len(w))
    for action, n in shortest.items():
        assert length(Q, action) == n


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=8))
def test_reduced_word_has_same_action(word):
    Q = builtin_quiver("A2~")
    w = word_element(Q, word)
    red = reduced_word(Q, w)
    assert len(red) <= len(word)
    assert (len(word) - len(red)) % 2 == 0
    assert weyl_image(Q, red) == w.action


def test_braid_L_lambda_examples():
    Q = builtin_quiver("A1~")
    assert len(braid_L_lambda(Q, (0, 0))) == 0
    lam = coroot(Q, 1)
    assert braid_L_lambda(Q, lam) == reduced_word(Q, translation_action(Q, lam))


@pytest.mark.parametrize("tag", ["A2~", "D4~"])
def test_braid_L_lambda_independent_of_decomposition(tag):
    Q = builtin_quiver(tag)
    for i in range(1, Q.num_vertices):
        lam = coroot(Q, i)
        images = {weyl_image(Q, braid_L_lambda(Q, lam, shift=N)) for N in (1, 2, 3)}
        assert images == {translation_action(Q, lam)}


def test_braid_word_serialization_round_trip():
    w = BraidWord([(0, 1), (2, -1), (1, 1)])
    assert BraidWord.parse(w.serialize()) == w
    assert (w * w.inverse()).letters == ()
    with pytest.raises(WeylError):
        BraidWord.parse([0])
