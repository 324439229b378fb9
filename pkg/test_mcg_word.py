#!/usr/bin/env python3
"""
Tests for LR words and SL2(Z) arithmetic.
"""

import itertools
import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import pytest
from hypothesis import given, settings, strategies as st

from mcg.word import (
    INT64_MAX,
    IntMatrix2x2,
    MappingClassWord,
    L,
    R,
    cyclic_normalize,
    decompose,
    is_pseudo_anosov,
    prefix_product,
    word_to_matrix,
)
from utils.errors import InvalidParameter, MatrixOverflowError, NotPseudoAnosov

admissible_words = st.text(alphabet="RL", min_size=2, max_size=10).filter(lambda w: "R" in w and "L" in w)


def test_generators_have_determinant_one():
    assert R.det == 1 and L.det == 1
    assert R.to_list() == [[1, 1], [0, 1]]
    assert L.to_list() == [[1, 0], [1, 1]]


def test_word_to_matrix_rl():
    assert word_to_matrix(MappingClassWord("RL")).to_list() == [[2, 1], [1, 1]]
    assert word_to_matrix(MappingClassWord("LR")).to_list() == [[1, 1], [1, 2]]


def test_word_to_matrix_rrll():
    m = word_to_matrix(MappingClassWord("RRLL"))
    assert m.to_list() == [[5, 2], [2, 1]]
    assert m.trace == 6


@pytest.mark.parametrize("letters", ["RR", "LLL", "R"])
def test_single_letter_words_are_not_pseudo_anosov(letters):
    word = MappingClassWord(letters)
    assert not word.is_admissible()
    assert word_to_matrix(word).trace == 2
    with pytest.raises(NotPseudoAnosov):
        word.require_pseudo_anosov()


@pytest.mark.parametrize("letters", ["", "RX", "rl", "R L"])
def test_invalid_words_rejected(letters):
    with pytest.raises(InvalidParameter):
        MappingClassWord(letters)


def test_matrix_requires_determinant_one():
    with pytest.raises(InvalidParameter):
        IntMatrix2x2(2, 0, 0, 1)
    with pytest.raises(InvalidParameter):
        IntMatrix2x2(1.0, 0, 0, 1)


def test_matrix_overflow_detected():
    big = IntMatrix2x2(1, 2**62, 0, 1)
    with pytest.raises(MatrixOverflowError):
        big @ big
    with pytest.raises(MatrixOverflowError):
        IntMatrix2x2(1, INT64_MAX + 1, 0, 1)


def test_inverse_and_conjugation():
    m = IntMatrix2x2(2, 1, 1, 1)
    assert m @ m.inverse() == IntMatrix2x2.identity()
    assert m.conjugate_by(R) == R.inverse() @ m @ R


@pytest.mark.parametrize("entries,expected", [
    ((2, 1, 1, 1), True),
    ((1, 1, 0, 1), False),
    ((-1, 0, 0, -1), False),
    ((-3, 1, -1, 0), True),
])
def test_is_pseudo_anosov(entries, expected):
    assert is_pseudo_anosov(IntMatrix2x2(*entries)) is expected


def test_decompose_rl():
    assert str(decompose(IntMatrix2x2(2, 1, 1, 1))) == "RL"


def test_decompose_rrll():
    assert str(decompose(IntMatrix2x2(5, 2, 2, 1))) == "RRLL"


def test_decompose_lr_normalizes_to_rl():
    assert str(decompose(IntMatrix2x2(1, 1, 1, 2))) == "RL"


def test_decompose_negative_trace_uses_minus_m():
    assert str(decompose(IntMatrix2x2(-2, -1, -1, -1))) == "RL"


def test_decompose_rejects_parabolic():
    with pytest.raises(NotPseudoAnosov):
        decompose(IntMatrix2x2(1, 1, 0, 1))


def test_decompose_conjugate_with_negative_entries():
    # R (RL) R^-1 = [[3, -1], [1, 0]]
    m = IntMatrix2x2(2, 1, 1, 1).conjugate_by(R.inverse())
    assert not m.is_nonnegative()
    assert str(decompose(m)) == "RL"


def test_cyclic_normalize_prefers_r():
    assert str(cyclic_normalize(MappingClassWord("LRR"))) == "RRL"
    assert str(cyclic_normalize(MappingClassWord("LLRL"))) == "RLLL"


def test_prefix_product_conjugates_onto_rotation():
    word = MappingClassWord("RRLRL")
    for shift in range(len(word)):
        p = prefix_product(word, shift)
        assert word_to_matrix(word).conjugate_by(p) == word_to_matrix(word.rotate(shift))


@given(admissible_words)
@settings(max_examples=100, deadline=None)
def test_decompose_inverts_word_to_matrix(letters):
    word = MappingClassWord(letters)
    assert decompose(word_to_matrix(word)) == cyclic_normalize(word)


def test_decompose_recovers_every_short_word():
    checked = 0
    for length in range(2, 11):
        for letters in itertools.product("RL", repeat=length):
            word = MappingClassWord("".join(letters))
            if not word.is_admissible():
                continue
            assert decompose(word_to_matrix(word)) == cyclic_normalize(word), word
            checked += 1
    assert checked == 2026


@given(admissible_words, st.lists(st.sampled_from(["R", "L", "r", "l"]), max_size=6))
@settings(max_examples=100, deadline=None)
def test_decompose_is_conjugation_invariant(letters, conjugators):
    by_name = {"R": R, "L": L, "r": R.inverse(), "l": L.inverse()}
    m = word_to_matrix(MappingClassWord(letters))
    conjugated = m
    for name in conjugators:
        conjugated = conjugated.conjugate_by(by_name[name])
    assert decompose(conjugated) == decompose(m)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
