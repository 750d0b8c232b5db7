import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shinglesync import (
    Alphabet,
    Reason,
    ShingleMultiset,
    TokenDecider,
    UdDecider,
    bigram_map,
    decoding_count,
    is_ud,
    qgram_map,
    shingle_sequence,
)
from shinglesync.errors import (
    InvalidSymbolError,
    InvalidTokenError,
    ProtocolMisuseError,
)

from conftest import words_ab, words_abc


def push_all(word, alphabet=None):
    decider = UdDecider(alphabet or Alphabet.from_text(word))
    verdict = decider.verdict
    for ch in word:
        verdict = decider.push(ch)
    return decider, verdict


class TestCharDecider:
    def test_katana_rejected_by_cycle_intrusion_at_6(self):
        _, verdict = push_all("katana")
        assert not verdict.ok
        assert verdict.reason is Reason.CYCLE_INTRUSION
        assert verdict.position == 6

    def test_kanata_rejected(self):
        _, verdict = push_all("kanata")
        assert not verdict.ok

    def test_axbxa_accepted(self):
        _, verdict = push_all("axbxa")
        assert verdict.ok

    def test_axbxbax_rejected_by_communicating_parents_at_7(self):
        _, verdict = push_all("axbxbax")
        assert not verdict.ok
        assert verdict.reason is Reason.COMMUNICATING_PARENTS
        assert verdict.position == 7

    def test_double_letter_accepted(self):
        _, verdict = push_all("aa")
        assert verdict.ok
        assert decoding_count(bigram_map("aa")).count == 1

    def test_empty_and_single(self):
        assert is_ud("")
        assert is_ud("a")

    def test_fresh_state(self):
        decider = UdDecider(Alphabet("ab"))
        assert decider.verdict.ok
        assert decider.slot_count() == 2

    def test_large_alphabet_allocation_is_alphabet_sized(self):
        alphabet = Alphabet([chr(i) for i in range(256, 512)])
        decider = UdDecider(alphabet)
        assert decider.slot_count() == 256

    def test_invalid_symbol_leaves_state_unchanged(self):
        decider = UdDecider(Alphabet("ab"))
        decider.push("a")
        with pytest.raises(InvalidSymbolError):
            decider.push("z")
        assert decider.push("b").ok

    def test_rejection_is_absorbing(self):
        decider, verdict = push_all("katana")
        assert not verdict.ok
        followup = decider.push("k")
        assert not followup.ok
        assert followup.position == 6

    @given(words_abc, words_abc)
    def test_non_ud_prefix_absorbs_suffix(self, u, v):
        alphabet = Alphabet("abc")
        if not is_ud(u, alphabet):
            assert not is_ud(u + v, alphabet)

    def test_space_bound_after_long_stream(self, rng):
        alphabet = Alphabet("abcdefgh")
        decider = UdDecider(alphabet)
        for _ in range(5000):
            decider.push(rng.choice("abcdefgh"))
        assert decider.slot_count() == 8
        assert decider.stack_depth() <= 8

    def test_push_and_feed_agree(self, rng):
        alphabet = Alphabet("abc")
        for _ in range(200):
            w = "".join(rng.choice("abc") for _ in range(rng.randrange(0, 20)))
            a = UdDecider(alphabet)
            for ch in w:
                a.push(ch)
            b = UdDecider(alphabet)
            b.feed(w)
            assert a.verdict == b.verdict


class TestOracleEquivalence:
    def test_exhaustive_sigma2(self):
        alphabet = Alphabet("ab")
        for n in range(9):
            for tup in itertools.product("ab", repeat=n):
                w = "".join(tup)
                assert is_ud(w, alphabet) == (decoding_count(bigram_map(w)).count == 1), w

    @settings(max_examples=300)
    @given(words_abc)
    def test_random_sigma3(self, w):
        assert is_ud(w) == (decoding_count(bigram_map(w)).count == 1)

    def test_random_sigma4_long_words(self):
        rng = random.Random(0xFACE)
        alphabet = Alphabet("abcd")
        for _ in range(10_000):
            w = "".join(rng.choice("abcd") for _ in range(rng.randrange(0, 65)))
            assert is_ud(w, alphabet) == (decoding_count(bigram_map(w)).count == 1), w


class TestTokenDecider:
    def test_q2_tokens_match_char_decider(self, rng):
        for _ in range(300):
            w = "".join(rng.choice("abc") for _ in range(rng.randrange(0, 20)))
            td = TokenDecider(2)
            verdict = td.push_word(w)
            assert verdict.ok == is_ud(w), w

    def test_katana_token_stream_rejected(self):
        td = TokenDecider(2)
        verdict = td.push_word("katana")
        assert not verdict.ok
        assert verdict.reason is Reason.CYCLE_INTRUSION

    def test_merged_fixture_stream_accepted(self):
        td = TokenDecider(2)
        for s in ["$k", "ka", "at", "tana", "a$"]:
            verdict = td.push_shingle(s)
        assert verdict.ok

    @settings(max_examples=150, deadline=None)
    @given(words_abc)
    def test_q3_matches_enumeration(self, w):
        td = TokenDecider(3)
        assert td.push_word(w).ok == (decoding_count(qgram_map(w, 3)).count == 1)

    def test_push_token_validates_length(self):
        td = TokenDecider(3)
        with pytest.raises(InvalidTokenError):
            td.push_token("abc")

    def test_prefix_token_stream_rejects_like_chars(self):
        # the node-gram stream of katana's shingles: one leading anchor token,
        # then the characters; the verdict and reason match the char decider
        # with positions shifted by that anchor
        td = TokenDecider(2)
        verdict = td.verdict
        for tok in ["$", "k", "a", "t", "a", "n", "a"]:
            verdict = td.push_token(tok)
            if not verdict.ok:
                break
        assert not verdict.ok
        assert verdict.reason is Reason.CYCLE_INTRUSION
        assert verdict.position == 7

    def test_token_slots_track_alphabet_not_stream(self, rng):
        td = TokenDecider(2)
        for _ in range(2000):
            td.push_token(rng.choice("ab"))
        assert td.slot_count() == 2


class TestMerging:
    def test_katana_merges_to_tana(self):
        td = TokenDecider(2, track_undo=True)
        outcomes = [td.push_or_merge(s) for s in shingle_sequence("katana", 2)]
        assert td.labels() == ["$k", "ka", "at", "tana", "a$"]
        merged = [o for o in outcomes if o.merged]
        assert len(merged) == 1 and merged[0].label == "tana" and merged[0].merges == 2

    def test_ud_stream_all_accepted_and_state_matches_plain(self):
        plain = TokenDecider(2)
        merging = TokenDecider(2, track_undo=True)
        for s in shingle_sequence("axbxa", 2):
            plain.push_shingle(s)
            assert merging.push_or_merge(s).accepted
        assert plain.labels() == merging.labels()
        assert plain.verdict.ok and merging.verdict.ok

    def test_all_same_character_needs_no_merges(self):
        td = TokenDecider(2, track_undo=True)
        merges = sum(td.push_or_merge(s).merges for s in shingle_sequence("aaaa", 2))
        assert merges == 0
        ms = ShingleMultiset(Counter(td.labels()), base_len=2)
        result = decoding_count(ms)
        assert result.count == 1 and result.witnesses == ("aaaa",)

    def test_merge_without_prior_edge_raises(self):
        td = TokenDecider(2, track_undo=True)
        with pytest.raises(ProtocolMisuseError):
            td.undo_last()

    def test_push_or_merge_requires_undo_tracking(self):
        td = TokenDecider(2)
        with pytest.raises(ProtocolMisuseError):
            td.push_or_merge("$a")

    @settings(max_examples=200, deadline=None)
    @given(words_abc, st.integers(min_value=2, max_value=3))
    def test_merged_multiset_decodes_to_original(self, w, l):
        td = TokenDecider(l, track_undo=True)
        for s in shingle_sequence(w, l):
            td.push_or_merge(s)
        assert td.verdict.ok
        ms = ShingleMultiset(Counter(td.labels()), base_len=l)
        result = decoding_count(ms)
        assert result.count == 1 and result.witnesses == (w,)

    @given(words_ab)
    def test_merge_count_bounded_by_stream_length(self, w):
        td = TokenDecider(2, track_undo=True)
        total = sum(td.push_or_merge(s).merges for s in shingle_sequence(w, 2))
        assert total <= len(w) + 1

    def test_undo_restores_state_exactly(self):
        reference = TokenDecider(2, track_undo=True)
        probe = TokenDecider(2, track_undo=True)
        seq = shingle_sequence("axbxa", 2)
        for s in seq[:3]:
            reference.push_shingle(s)
            probe.push_shingle(s)
        probe.push_shingle(seq[3])
        probe.undo_last()
        assert probe.labels() == reference.labels()
        for s in seq[3:]:
            assert reference.push_shingle(s).ok
            assert probe.push_shingle(s).ok
        assert probe.labels() == reference.labels()

    def test_parallel_labels_rejected_on_replay(self):
        # two differently-labeled edges between the same node pair are always
        # ambiguous; a plain decider must reject such a stream
        td = TokenDecider(2)
        for s in ["$a", "ac", "ca", "abc"]:
            verdict = td.push_shingle(s)
        assert not verdict.ok
        assert verdict.reason is Reason.PARALLEL_LABELS
