import itertools
import random
from fractions import Fraction

import pytest

from conjtrace.errors import ConjugatePair, NotSeparated, ParseError, TrivialElement
from conjtrace.freegroup import Word, are_conjugate, enumerate_words, parse_word, random_word
from conjtrace.separation import (Unknown, coefficient_growth, con_exact_small,
                                  conj_depth_report, d_exact_small, default_assignment,
                                  find_separating_prime, finite_quotient_certificate,
                                  small_homomorphisms, verify_witness, witness_from_json,
                                  witness_to_json)
from conjtrace.wehrfritz import build_representation


def w(s, rank=2):
    return parse_word(s, rank)


SMALL = [c.core for n in range(1, 4) for c in enumerate_words(2, n, up_to_conjugacy=True)]


class TestPrimes:
    def test_examples(self):
        assert find_separating_prime(8, {2}) == 3
        assert find_separating_prime(Fraction(1, 2)) == 3
        with pytest.raises(NotSeparated):
            find_separating_prime(0)

    def test_avoids_forbidden(self):
        assert find_separating_prime(7, [2 * 3 * 5]) == 11


class TestAssignment:
    def test_default(self):
        rep = build_representation(w("ab"))
        a = default_assignment(rep)
        assert a["T"] == 2 and a["X1"] == 3 and a["Y1"] == 4 and a["W1"] == 6 and a["D1"] == 1
        assert a["X2"] == 4


class TestCertificates:
    def test_ab_vs_a(self):
        c = finite_quotient_certificate(w("ab"), w("a"))
        assert c.dimension == 6 and c.convention == "SL"
        assert c.p == 17 and (c.trace_gamma, c.trace_eta) == (13, 0)
        assert all(verify_witness(c).values())
        assert c.quotient_order_bound == 17 ** 35

    def test_inverse_pair(self):
        c = finite_quotient_certificate(w("a"), w("A"))
        assert c.dimension == 3 and c.p == 5
        assert all(verify_witness(c).values())

    def test_conjugate_rejected(self):
        with pytest.raises(ConjugatePair):
            finite_quotient_certificate(w("ab"), w("ba"))

    def test_all_small_pairs(self):
        for u, v in itertools.combinations(SMALL, 2):
            c = finite_quotient_certificate(u, v)
            checks = verify_witness(c)
            assert all(checks.values()), (u, v, checks)
            assert c.dimension == 3 * build_representation(u).m

    def test_tampered_witness_fails(self):
        c = finite_quotient_certificate(w("aab"), w("abb"))
        c.trace_eta = (c.trace_eta + 1) % c.p
        assert not verify_witness(c)["trace_eta"]
        c = finite_quotient_certificate(w("aab"), w("abb"))
        c.eta = c.gamma
        assert not verify_witness(c)["traces_differ"]

    def test_json_roundtrip(self):
        c = finite_quotient_certificate(w("aab"), w("abb"))
        text = witness_to_json(c)
        back = witness_from_json(text)
        assert back == c and witness_to_json(back) == text

    def test_bad_json(self):
        with pytest.raises(ParseError):
            witness_from_json('{"format": "other"}')
        with pytest.raises(ParseError):
            witness_from_json("{not json")

    def test_explicit_assignment(self):
        rep = build_representation(w("ab"))
        asg = default_assignment(rep, 3)
        c = finite_quotient_certificate(w("ab"), w("Ab"), asg)
        assert c.assignment == asg and all(verify_witness(c).values())

    def test_order_bound_direction(self):
        import math
        for u, v in list(itertools.combinations(SMALL, 2))[:40]:
            c = finite_quotient_certificate(u, v)
            assert math.log(c.quotient_order_bound) <= (c.dimension ** 2 - 1) * math.log(c.p) + 1e-9


class TestOracles:
    def test_con_examples(self):
        assert con_exact_small(w("a"), w("b"), 6) == 2
        assert con_exact_small(w("a"), w("A"), 6) == 3
        assert con_exact_small(w("a"), w("aa"), 6) == 2

    def test_d_examples(self):
        assert d_exact_small(w("a"), 6) == 2
        assert d_exact_small(w("aa"), 6) == 3
        assert d_exact_small(w("abAB"), 6) == 6

    def test_errors(self):
        with pytest.raises(ConjugatePair):
            con_exact_small(w("ab"), w("ba"), 4)
        with pytest.raises(TrivialElement):
            d_exact_small(Word.identity(2), 4)

    def test_unknown_below_bound(self):
        assert isinstance(d_exact_small(w("abAB"), 5), Unknown)
        assert str(Unknown(5)) == "Unknown(>5)"

    def test_homomorphism_count(self):
        # image orders are capped at K; S_3 itself appears only once K >= 6
        assert sorted({len(Q) for _, Q in small_homomorphisms(2, 3)}) == [1, 2, 3]
        assert 6 in {len(Q) for _, Q in small_homomorphisms(2, 6)}

    def test_upper_vs_exact(self):
        for u, v in itertools.combinations(SMALL, 2):
            exact = con_exact_small(u, v, 6)
            bound = finite_quotient_certificate(u, v).quotient_order_bound
            if not isinstance(exact, Unknown):
                assert exact <= bound

    def test_separation_dominates_divisibility(self):
        rr = random.Random(21)
        pairs = []
        while len(pairs) < 20:
            u, v = random_word(rr, 2, rr.randint(1, 3)), random_word(rr, 2, rr.randint(1, 3))
            if not are_conjugate(u, v):
                pairs.append((u, v))
        for g, eta in pairs:
            con = con_exact_small(g, eta, 6)
            for c in [Word.identity(2)] + [Word((x,), 2) for x in (1, -1, 2, -2)]:
                e2 = c * eta * ~c
                if len(e2) > len(eta) + 2:
                    continue
                d = d_exact_small(~g * e2, 6)
                if not isinstance(con, Unknown) and not isinstance(d, Unknown):
                    assert con >= d

    def test_conj_depth_report(self):
        rows = conj_depth_report(2, 2, 5)
        assert [r[0] for r in rows] == [1, 2]
        assert rows[0][1] == 3
        assert all(rows[i][1] <= rows[i + 1][1] for i in range(len(rows) - 1))


class TestGrowth:
    def test_exponential_bound(self):
        rr = random.Random(5)
        words = [random_word(rr, 2, n) for n in range(1, 11)]
        for g in ("ab", "aab", "abAB"):
            for n, h in coefficient_growth(w(g), words):
                assert h <= 64 ** n
