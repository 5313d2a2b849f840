from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aggrescribe.metrics import (
    DELETE,
    INSERT,
    MATCH,
    SUBSTITUTE,
    cer,
    edit_distance,
    sym_char_distance,
    wer,
)
from oracles import brute_edit_distance, check_alignment

short_text = st.text(alphabet="abc ", max_size=12)


class TestEditDistance:
    def test_both_empty(self):
        result = edit_distance("", "")
        assert result.distance == 0
        assert result.ops == ()

    def test_identity(self):
        result = edit_distance("chat", "chat")
        assert result.distance == 0
        assert all(kind == MATCH for kind, _, _ in result.ops)

    def test_kitten_sitting(self):
        # frozen from the recursive oracle
        assert brute_edit_distance("kitten", "sitting") == 3
        assert edit_distance("kitten", "sitting").distance == 3

    def test_word_tokens(self):
        assert edit_distance(["le", "chat"], ["le", "chien"]).distance == 1

    def test_tiebreak_prefers_substitutions_over_indel_pairs(self):
        # "ab" -> "ba" has optimal indel alignments too; the traceback pins
        # the diagonal one.
        ops = [kind for kind, _, _ in edit_distance("ab", "ba").ops]
        assert ops == [SUBSTITUTE, SUBSTITUTE]

    def test_insert_and_delete_ops(self):
        assert [k for k, _, _ in edit_distance("a", "ab").ops] == [MATCH, INSERT]
        assert [k for k, _, _ in edit_distance("ab", "a").ops] == [MATCH, DELETE]

    @given(short_text, short_text)
    def test_matches_recursive_oracle(self, a, b):
        assert edit_distance(a, b).distance == brute_edit_distance(a, b)

    @given(short_text, short_text)
    def test_symmetry_and_bounds(self, a, b):
        d = edit_distance(a, b).distance
        assert d == edit_distance(b, a).distance
        assert abs(len(a) - len(b)) <= d <= max(len(a), len(b))

    @given(short_text, short_text, short_text)
    def test_triangle_inequality(self, a, b, c):
        dist = lambda x, y: edit_distance(x, y).distance  # noqa: E731
        assert dist(a, c) <= dist(a, b) + dist(b, c)

    @given(short_text, short_text)
    def test_alignment_replays_onto_target(self, a, b):
        result = edit_distance(a, b)
        check_alignment(result.ops, a, b, result.distance)


class TestRates:
    def test_cer_identity(self):
        assert cer("abc", "abc") == 0.0

    def test_cer_single_substitution(self):
        # frozen: 1 edit over 3 reference chars
        assert brute_edit_distance("axc", "abc") == 1
        assert cer("axc", "abc") == pytest.approx(1 / 3)

    def test_cer_empty_hypothesis(self):
        assert cer("", "abc") == 1.0

    def test_cer_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            cer("abc", "")

    def test_cer_can_exceed_one(self):
        assert cer("aaaa", "b") == 4.0

    def test_wer_identity(self):
        assert wer("le chat noir", "le chat noir") == 0.0

    def test_wer_substitution(self):
        assert wer("le chien noir", "le chat noir") == pytest.approx(1 / 3)

    def test_wer_deletions(self):
        assert wer("chat", "le chat noir") == pytest.approx(2 / 3)

    def test_wer_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            wer("chat", "   ")

    def test_sym_both_empty(self):
        assert sym_char_distance("", "") == 0.0

    def test_sym_identity(self):
        assert sym_char_distance("abc", "abc") == 0.0

    def test_sym_quarter(self):
        assert brute_edit_distance("abcd", "abed") == 1
        assert sym_char_distance("abcd", "abed") == 0.25

    @given(short_text, short_text)
    def test_sym_range_symmetry_and_zero_iff_equal(self, a, b):
        d = sym_char_distance(a, b)
        assert 0.0 <= d <= 1.0
        assert d == sym_char_distance(b, a)
        assert (d == 0.0) == (a == b)

    @given(short_text.filter(bool), short_text)
    def test_cer_zero_iff_equal(self, reference, hypothesis):
        assert (cer(hypothesis, reference) == 0.0) == (hypothesis == reference)
