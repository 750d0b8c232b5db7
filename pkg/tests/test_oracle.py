import itertools

import pytest
from hypothesis import given, settings

from shinglesync import (
    Alphabet,
    ShingleMultiset,
    bigram_map,
    decoding_count,
    find_obstruction,
    interior_equal,
    interior_qgrams,
    is_obstruction,
    is_ud,
    obstruction_language_count,
    qgram_map,
    rotation_pair,
    transposition_pair,
)
from shinglesync.errors import InvalidParameterError

from conftest import words_abcd


FIG2_MULTISET = ShingleMultiset({"$k": 1, "ka": 1, "at": 1, "tana": 1, "a$": 1}, base_len=2)
# the hand-merge folding the middle of katana into "ata"; it still decodes
# two ways, which is exactly why the streaming merge produces "tana" instead
ATA_MULTISET = ShingleMultiset({"$k": 1, "ka": 1, "ata": 1, "an": 1, "na": 1, "a$": 1}, base_len=2)


class TestDecodingCount:
    def test_katana_two_decodings(self):
        result = decoding_count(bigram_map("katana"))
        assert result.count == 2
        assert result.witnesses == ("kanata", "katana")

    def test_single_char(self):
        result = decoding_count(bigram_map("a"))
        assert result.count == 1 and result.witnesses == ("a",)

    def test_fig2_multiset_unique(self):
        result = decoding_count(FIG2_MULTISET)
        assert result.count == 1 and result.witnesses == ("katana",)

    def test_ata_multiset_is_not_unique(self):
        result = decoding_count(ATA_MULTISET, cap=5)
        assert result.count == 2
        assert result.witnesses == ("kanata", "katana")

    def test_inconsistent_multisets_count_zero(self):
        assert decoding_count(ShingleMultiset({"$a": 1, "b$": 1}, base_len=2)).count == 0
        assert decoding_count(ShingleMultiset({"ab": 1, "bc": 1}, base_len=2)).count == 0
        # unreachable tail typo'd variant: no complete walk exists
        typo = ShingleMultiset({"$k": 1, "ka": 1, "ata": 1, "an": 1, "na": 1, "n$": 1}, base_len=2)
        assert decoding_count(typo).count == 0

    def test_cap_saturation(self):
        ms = bigram_map("katana")
        result = decoding_count(ms, cap=1)
        assert result.count == 1 and result.saturated

    def test_empty_word_multisets(self):
        assert decoding_count(bigram_map("")).witnesses == ("",)
        assert decoding_count(qgram_map("", 3)).witnesses == ("",)

    @settings(max_examples=150)
    @given(words_abcd)
    def test_original_word_is_a_witness_when_unsaturated(self, w):
        result = decoding_count(bigram_map(w), cap=3)
        if not result.saturated:
            assert w in result.witnesses
        else:
            assert len(result.witnesses) == 3


class TestObstructions:
    def test_fixtures(self):
        assert is_obstruction("katana")
        assert not is_obstruction("axbxa")
        assert not is_obstruction("")
        assert not is_obstruction("a")
        assert is_obstruction("axbxbax")

    def test_witness_is_reported(self):
        x, a, b = find_obstruction("katana")
        assert x not in (a, b)

    def test_exhaustive_duality_sigma2(self):
        alphabet = Alphabet("ab")
        for n in range(10):
            for tup in itertools.product("ab", repeat=n):
                w = "".join(tup)
                assert is_obstruction(w) == (not is_ud(w, alphabet)), w

    @settings(max_examples=400)
    @given(words_abcd)
    def test_duality_random(self, w):
        assert is_obstruction(w) == (not is_ud(w))

    @pytest.mark.parametrize(
        "sigma,count", [(1, 0), (2, 2), (3, 12), (4, 36), (5, 80)]
    )
    def test_obstruction_language_count(self, sigma, count):
        assert obstruction_language_count(sigma) == count

    def test_obstruction_language_count_rejects_zero(self):
        with pytest.raises(InvalidParameterError):
            obstruction_language_count(0)


def random_word(rng, lo=0, hi=6, symbols="abcd"):
    return "".join(rng.choice(symbols) for _ in range(rng.randrange(lo, hi)))


def random_gram(rng, q, symbols="abcd"):
    return "".join(rng.choice(symbols) for _ in range(q - 1))


class TestPairTransforms:
    def test_transposition_requires_gram_lengths(self):
        with pytest.raises(InvalidParameterError):
            transposition_pair("", "ab", "x", "c", "", "y", "", 2)

    def test_transposition_fixed_point(self):
        x, xp = transposition_pair("a", "b", "cc", "d", "e", "cc", "f", 2)
        assert x == xp

    def test_transposition_preserves_padded_multisets(self, rng):
        for q in (2, 3):
            for _ in range(200):
                x, xp = transposition_pair(
                    random_word(rng),
                    random_gram(rng, q),
                    random_word(rng, 1, 5),
                    random_gram(rng, q),
                    random_word(rng),
                    random_word(rng, 1, 5),
                    random_word(rng),
                    q,
                )
                assert qgram_map(x, q) == qgram_map(xp, q)

    def test_rotation_fixture(self):
        assert rotation_pair("t", "a", "n", "a", 2) == ("atana", "anata")

    def test_rotation_fixed_point(self):
        x, xp = rotation_pair("t", "a", "t", "a", 2)
        assert x == xp

    def test_rotation_preserves_interior_multisets(self, rng):
        for q in (2, 3):
            for _ in range(200):
                x, xp = rotation_pair(
                    random_word(rng, 1, 5),
                    random_gram(rng, q),
                    random_word(rng, 1, 5),
                    random_gram(rng, q),
                    q,
                )
                assert interior_equal(x, xp, q)
                assert interior_qgrams(x, q) == interior_qgrams(xp, q)

    def test_rotation_with_matching_anchor_is_padded_equal(self, rng):
        for _ in range(100):
            z = random_gram(rng, 2)
            x, xp = rotation_pair(random_word(rng, 1, 5), z, random_word(rng, 1, 5), z, 2)
            assert qgram_map(x, 2) == qgram_map(xp, 2)
            if x != xp:
                assert not is_ud(x) and not is_ud(xp)

    def test_katana_rebuilt_from_rotation_with_context(self):
        x, xp = rotation_pair("t", "a", "n", "a", 2)
        assert ("k" + x, "k" + xp) == ("katana", "kanata")
        assert bigram_map("k" + x) == bigram_map("k" + xp)
        assert not is_ud("k" + x)

    def test_distinct_transposition_pairs_are_not_ud(self, rng):
        found = 0
        for _ in range(300):
            x, xp = transposition_pair(
                random_word(rng),
                random_gram(rng, 2),
                random_word(rng, 1, 4),
                random_gram(rng, 2),
                random_word(rng),
                random_word(rng, 1, 4),
                random_word(rng),
                2,
            )
            if x != xp:
                found += 1
                assert not is_ud(x) and not is_ud(xp)
        assert found > 50
