import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conjtrace.errors import InvalidLetter, ParseError, RankMismatch
from conjtrace.freegroup import (
    ConjClass, Word, are_conjugate, canonical_core, cyclic_canonical,
    enumerate_words, invert, least_rotation, letter_key, multiply, parse_word,
    random_word, word_stats,
)

letters2 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=14)
words2 = letters2.map(lambda xs: Word(xs, 2))


def w(s, rank=2):
    return parse_word(s, rank)


class TestParse:
    def test_reduced_unchanged(self):
        assert w("abA").letters == (1, 2, -1)

    def test_cancellation(self):
        assert w("abB").letters == (1,)

    def test_rank_bound(self):
        with pytest.raises(InvalidLetter):
            w("c")

    def test_invalid_letter_is_parse_error(self):
        with pytest.raises(ParseError):
            w("a?b")

    def test_identity_spellings(self):
        assert w("").is_identity() and w("1").is_identity()

    def test_higher_rank(self):
        assert w("cC", 3).is_identity()
        assert w("abc", 3).letters == (1, 2, 3)

    @given(words2)
    def test_roundtrip(self, u):
        assert w(str(u)) == u


class TestProducts:
    def test_examples(self):
        assert multiply(w("ab"), w("B")) == w("a")
        assert multiply(w("a"), w("A")).is_identity()
        assert str(multiply(w("ab"), w("ab"))) == "abab"

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            multiply(w("a"), w("a", 3))
        with pytest.raises(RankMismatch):
            are_conjugate(w("a"), w("a", 3))

    @given(words2, words2, words2)
    def test_associative(self, u, v, x):
        assert (u * v) * x == u * (v * x)

    @given(words2)
    def test_inverse(self, u):
        assert (u * invert(u)).is_identity()
        assert ~~u == u

    @given(words2)
    def test_reduced(self, u):
        assert all(a != -b for a, b in zip(u.letters, u.letters[1:]))

    @given(words2, st.integers(-4, 4))
    def test_power(self, u, n):
        expect = Word.identity(2)
        base = u if n >= 0 else ~u
        for _ in range(abs(n)):
            expect = expect * base
        assert u ** n == expect


class TestCanonical:
    def test_examples(self):
        cls, c = cyclic_canonical(w("Bab"))
        assert str(cls.core) == "a" and c == w("B")
        assert str(cyclic_canonical(w("babbaa"))[0].core) == "aababb"
        assert str(cyclic_canonical(w("abaabb"))[0].core) == "aabbab"

    def test_conjugacy_examples(self):
        assert are_conjugate(w("ab"), w("ba"))
        assert not are_conjugate(w("babbaa"), w("abaabb"))
        assert not are_conjugate(w("a"), w("A"))

    @given(words2)
    def test_conjugator_certificate(self, u):
        cls, c = cyclic_canonical(u)
        assert c * cls.core * ~c == u
        assert cls.class_norm == len(cls.core)

    @given(words2)
    def test_core_is_least_rotation(self, u):
        core = cyclic_canonical(u)[0].core.letters
        if core:
            assert core[0] != -core[-1] or len(core) == 1
            keys = [letter_key(x) for x in core]
            rots = [keys[i:] + keys[:i] for i in range(len(keys))]
            assert keys == min(rots)

    @given(st.lists(st.integers(0, 3), max_size=20))
    def test_booth_matches_brute_force(self, seq):
        k = least_rotation(seq)
        if seq:
            rots = [seq[i:] + seq[:i] for i in range(len(seq))]
            assert seq[k:] + seq[:k] == min(rots)

    @given(words2, words2)
    def test_conjugates_detected(self, u, c):
        assert are_conjugate(u, c * u * ~c)

    def test_brute_force_conjugacy_up_to_length_8(self):
        # Two cyclically reduced words are conjugate iff they are rotations.
        words = [x for n in range(0, 9) for x in enumerate_words(2, n)]
        rr = random.Random(3)
        sample = rr.sample(words, 400)
        cores = {}
        for x in sample:
            d = x.cyclic_reduce()[0].letters
            rots = frozenset(d[i:] + d[:i] for i in range(max(1, len(d))))
            cores[x] = rots
        for u, v in itertools.combinations(sample[:200], 2):
            assert are_conjugate(u, v) == (cores[u] == cores[v])


class TestStats:
    def test_examples(self):
        s = word_stats(w("abaabb"))
        assert str(s.reverse) == "bbaaba" and s.is_positive and s.signature == (3, 3)
        s = word_stats(w("aB"))
        assert str(s.reverse) == "Ba" and not s.is_positive and s.signature == (1, -1)
        s = word_stats(Word.identity(2))
        assert s.reverse.is_identity() and s.is_positive and s.signature == (0, 0)


class TestEnumerate:
    def test_counts(self):
        assert len(list(enumerate_words(2, 2))) == 12
        assert len(list(enumerate_words(2, 6, positive_only=True))) == 64
        assert len(list(enumerate_words(2, 6, positive_only=True, up_to_conjugacy=True))) == 14

    @pytest.mark.parametrize("n", range(1, 7))
    def test_classes_match_brute_force(self, n):
        brute = {canonical_core(x) for x in enumerate_words(2, n)
                 if x.is_cyclically_reduced() and len(canonical_core(x)) == n}
        got = [c.core.letters for c in enumerate_words(2, n, up_to_conjugacy=True)]
        assert len(got) == len(set(got))
        assert set(got) == brute

    def test_lexicographic_order(self):
        ws = list(enumerate_words(2, 3))
        keys = [[letter_key(x) for x in u.letters] for u in ws]
        assert keys == sorted(keys)
        assert len(ws) == 4 * 3 * 3

    def test_random_word(self):
        r = random.Random(5)
        for _ in range(50):
            u = random_word(r, 3, 7)
            assert len(u) == 7
        assert random_word(r, 2, 9, positive_only=True).is_positive()

    def test_conjclass_type(self):
        c = next(iter(enumerate_words(2, 2, up_to_conjugacy=True)))
        assert isinstance(c, ConjClass)
