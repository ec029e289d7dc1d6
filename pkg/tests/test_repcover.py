import itertools
import random

import pytest

from conjtrace.errors import BadGroup, ParseError
from conjtrace.freegroup import random_word
from conjtrace.repcover import (FiniteQuotient, build_certificate, certificate_from_json,
                                certificate_to_json, cyclic_quotient, embed_quotient,
                                infinite_order_certificate, lift_matrix, matrix_power,
                                parse_quotient, relation_free, serialize_quotient,
                                sl_order, symmetric3_quotient, verify_diagram)
from conjtrace.ring import RingMatrix

QUOTIENTS = {
    "Z2": (cyclic_quotient(2, (1, 0)), 3),
    "Z3": (cyclic_quotient(3, (1, 2)), 2),
    "S3": (symmetric3_quotient(), 5),
    "trivial": (cyclic_quotient(1, (0, 0)), 3),
    "Z2-char2": (cyclic_quotient(2, (1, 1)), 2),
}


def enumerate_sl2(p):
    return sum(1 for a, b, c, d in itertools.product(range(p), repeat=4)
               if (a * d - b * c) % p == 1)


class TestQuotients:
    def test_validation(self):
        with pytest.raises(BadGroup):
            FiniteQuotient(((0, 1), (0, 1)), (0,))
        with pytest.raises(BadGroup):
            FiniteQuotient(((0, 1), (1, 0)), (2,))
        with pytest.raises(BadGroup):
            FiniteQuotient((), ())

    def test_s3_structure(self):
        Q = symmetric3_quotient()
        assert Q.order == 6
        assert sorted(Q.element_order(g) for g in range(6)) == [1, 2, 2, 2, 3, 3]
        a, b = Q.images
        assert Q.mul(a, b) != Q.mul(b, a)

    def test_roundtrip(self):
        for Q, _ in QUOTIENTS.values():
            assert parse_quotient(serialize_quotient(Q)) == Q

    def test_parse_comments_and_errors(self):
        text = "# cyclic\nquotient 1\ngenerators 1\norder 2\ntable\n0 1\n1 0 # row\nimages 1\n"
        assert parse_quotient(text).images == (1,)
        with pytest.raises(ParseError):
            parse_quotient("quotient 2\n")
        with pytest.raises(ParseError):
            parse_quotient("quotient 1\ngenerators 2\norder 2\ntable\n0 1\n1 0\nimages 1\n")


class TestEmbedding:
    def test_unpadded_cases(self):
        e = embed_quotient(cyclic_quotient(2, (1, 0)), 2)
        assert e.dim == 2 and not e.padded
        e = embed_quotient(cyclic_quotient(3, (1, 0)), 2)
        assert e.dim == 3 and not e.padded
        assert e.matrix(1) == RingMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]], 2)

    def test_s3_padded(self):
        e = embed_quotient(symmetric3_quotient(), 5)
        assert e.dim == 7 and e.padded
        mats = [e.matrix(g) for g in range(6)]
        assert len(set(mats)) == 6 and all(m.det() == 1 for m in mats)

    def test_homomorphism(self):
        Q = symmetric3_quotient()
        e = embed_quotient(Q, 5)
        for g, h in itertools.product(range(6), repeat=2):
            assert e.matrix(g) @ e.matrix(h) == e.matrix(Q.mul(g, h))

    def test_not_prime(self):
        with pytest.raises(BadGroup):
            embed_quotient(cyclic_quotient(2, (1, 0)), 4)


class TestOrders:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_sl2_enumeration(self, p):
        assert enumerate_sl2(p) == sl_order(2, p)

    def test_known_values(self):
        assert sl_order(2, 3) == 24
        assert sl_order(3, 2) == 168

    @pytest.mark.parametrize("name", ["Z2", "Z3", "S3"])
    def test_exponent_arithmetic(self, name):
        Q, p = QUOTIENTS[name]
        e = embed_quotient(Q, p)
        ex = sl_order(e.dim, p) + 1
        for g in range(Q.order):
            M = e.matrix(g)
            assert sl_order(e.dim, p) % Q.element_order(g) == 0
            assert M ** ex == M
            assert Q.power(g, ex) == g


class TestLifts:
    def test_examples(self):
        A = lift_matrix(RingMatrix([[2, 0], [0, 2]], 3))
        assert A == RingMatrix([[-1, 3], [0, -1]])
        B = lift_matrix(RingMatrix.identity(2, modulus=5))
        assert B == RingMatrix([[1, 5], [0, 1]])
        for M in (A, B):
            assert M.det() == 1 and infinite_order_certificate(M)

    def test_finite_order_rejected(self):
        assert not infinite_order_certificate(RingMatrix([[0, -1], [1, 0]]))
        assert not infinite_order_certificate(RingMatrix.identity(3))

    def test_matrix_power(self):
        A = RingMatrix([[2, 1], [1, 1]])
        assert matrix_power(A, 5) == A @ A @ A @ A @ A

    def test_relation_free(self):
        a = RingMatrix([[1, 2], [0, 1]])
        b = RingMatrix([[1, 0], [2, 1]])
        assert relation_free([a, b], 6)
        c = RingMatrix([[0, -1], [1, 0]])
        assert not relation_free([a, c], 4)


class TestPipeline:
    @pytest.mark.parametrize("name", sorted(QUOTIENTS))
    def test_certificate(self, name):
        Q, p = QUOTIENTS[name]
        cert = build_certificate(Q, p)
        rr = random.Random(31)
        words = [random_word(rr, Q.rank, rr.randint(0, 8)) for _ in range(50)]
        checks = verify_diagram(Q, cert, words)
        assert all(v is not False for v in checks.values()), checks
        assert cert.exponent == sl_order(cert.dim, p) + 1

    def test_mod3_order(self):
        Q, p = QUOTIENTS["Z2"]
        cert = build_certificate(Q, p)
        R = cert.images[0].map(lambda x: x % 3, 3)
        assert R != RingMatrix.identity(cert.dim, modulus=3) and (R @ R).is_identity()

    def test_m_override(self):
        Q, p = QUOTIENTS["Z2"]
        cert = build_certificate(Q, p, m=2, depth=4)
        assert cert.exponent == 2 * cert.group_order + 1
        assert all(v is not False for v in verify_diagram(Q, cert).values())

    def test_json_roundtrip(self):
        for name in ("Z3", "S3"):
            Q, p = QUOTIENTS[name]
            cert = build_certificate(Q, p)
            text = certificate_to_json(cert)
            back = certificate_from_json(text)
            assert certificate_to_json(back) == text
            assert all(v is not False for v in verify_diagram(back.quotient, back).values())

    def test_tampered_certificate(self):
        Q, p = QUOTIENTS["Z3"]
        cert = build_certificate(Q, p)
        cert.exponent += 1
        checks = verify_diagram(Q, cert)
        assert checks["exponent"] is False
