import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conjtrace.errors import (ArithmeticDomainError, BadPrime, MissingAssignment,
                              ZeroInverse)
from conjtrace.ring import (LaurentPolynomial, RingMatrix, VariableRegistry, char_poly,
                            exact_div, gcd_all, is_prime, newton_coefficients,
                            primes_from, reduce_mod_p, specialize, specialize_matrix,
                            standard_coefficients)

REG = VariableRegistry(["X", "Y", "T"], {"X", "T"})

monos = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(-2, 2))


def _build(d):
    acc = REG.zero()
    for e, c in d.items():
        acc = acc + REG.monomial(e, c)
    return acc


polys = st.dictionaries(monos, st.integers(-5, 5), max_size=5).map(_build)
points = st.tuples(st.sampled_from([-3, -2, -1, 1, 2, 3]), st.integers(-4, 4),
                   st.sampled_from([-2, -1, 1, 2, 5]))


def at(p, pt):
    return specialize(p, dict(zip(("X", "Y", "T"), pt)))


# -- independent oracles -------------------------------------------------------

def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def cofactor_charpoly(M):
    """det(tI - M) by Laplace expansion over polynomials in t (ascending)."""
    n = len(M)
    E = [[([-M[i][j], 1] if i == j else [-M[i][j]]) for j in range(n)] for i in range(n)]

    def det(rows, cols):
        if len(rows) == 1:
            return E[rows[0]][cols[0]]
        acc = [0]
        for k, c in enumerate(cols):
            sub = det(rows[1:], cols[:k] + cols[k + 1:])
            term = _pmul(E[rows[0]][c], sub)
            if k % 2:
                term = [-x for x in term]
            acc = _padd(acc, term)
        return acc

    return det(list(range(n)), list(range(n)))


def rand_int_matrix(r, n, lo=-4, hi=4):
    return RingMatrix([[r.randint(lo, hi) for _ in range(n)] for _ in range(n)])


# -----------------------------------------------------------------------------

class TestLaurent:
    @given(polys, polys, polys)
    def test_ring_axioms(self, p, q, r):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == REG.zero()
        assert p * REG.one() == p

    @given(polys, polys, points)
    def test_specialize_is_homomorphism(self, p, q, pt):
        assert at(p + q, pt) == at(p, pt) + at(q, pt)
        assert at(p * q, pt) == at(p, pt) * at(q, pt)

    def test_specialize_examples(self):
        R = VariableRegistry(["X", "T"], {"X", "T"})
        assert specialize(R.const(2) + R.var("T"), {"T": 2}) == 4
        assert specialize(R.inv("X"), {"X": 2}) == Fraction(1, 2)
        with pytest.raises(ZeroInverse):
            specialize(R.inv("X"), {"X": 0})
        with pytest.raises(MissingAssignment):
            specialize(R.var("X"), {})

    def test_units(self):
        X, T = REG.var("X"), REG.var("T")
        u = -(X ** 2) * REG.inv("T")
        assert u.is_unit() and u * u.unit_inverse() == REG.one()
        assert not (X + 1).is_unit()
        assert not REG.var("Y").is_unit()

    def test_inverse_of_noninvertible_rejected(self):
        with pytest.raises(Exception):
            REG.inv("Y")

    @given(polys)
    def test_serialization_roundtrip(self, p):
        assert LaurentPolynomial.from_data(REG, p.to_data()) == p

    def test_str_canonical(self):
        assert str(REG.const(2) + REG.var("T") * 2) == "2 + 2*T"
        assert str(REG.zero()) == "0"

    def test_exact_division(self):
        p = REG.var("X") * 6 + 4
        assert p.exact_div(2) == REG.var("X") * 3 + 2
        with pytest.raises(ArithmeticDomainError):
            p.exact_div(4)
        with pytest.raises(ArithmeticDomainError):
            exact_div(7, 2)

    def test_big_coefficients(self):
        p = (REG.var("X") + 1) ** 40
        assert p.coefficient_in("X", 20).constant_term() == 137846528820
        assert p.degree("X") == (0, 40)

    def test_modular(self):
        p = (REG.var("X") * 3 + 5).reduce_mod(7)
        assert (p * 5).reduce_mod(7) == (REG.var("X") + 4).reduce_mod(7)


class TestMatrix:
    def test_block_diag_multiplicative(self, rng):
        A, B = rand_int_matrix(rng, 2), rand_int_matrix(rng, 3)
        C, D = rand_int_matrix(rng, 2), rand_int_matrix(rng, 3)
        lhs = RingMatrix.block_diag([A, B]) @ RingMatrix.block_diag([C, D])
        assert lhs == RingMatrix.block_diag([A @ C, B @ D])

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_trace_cyclic(self, rng, n):
        for _ in range(10):
            M, N = rand_int_matrix(rng, n), rand_int_matrix(rng, n)
            assert (M @ N).trace() == (N @ M).trace()

    def test_polynomial_entries(self):
        X = REG.var("X")
        M = RingMatrix([[X, REG.one()], [REG.zero(), REG.inv("X")]])
        assert (M @ M).trace() == X ** 2 + REG.inv("X") ** 2
        assert M.det() == REG.one()

    def test_power_and_identity(self, rng):
        M = rand_int_matrix(rng, 3)
        assert M ** 3 == M @ M @ M
        assert (M ** 0).is_identity()

    def test_det_matches_cofactor(self, rng):
        for n in (1, 2, 3, 4):
            M = rand_int_matrix(rng, n)
            assert M.det() == cofactor_charpoly(M.rows)[0] * (-1) ** n

    def test_reduce_mod_p(self):
        M = RingMatrix([[Fraction(1, 2), 0], [0, 2]])
        assert reduce_mod_p(M, 3).tolist() == [[2, 0], [0, 2]]
        with pytest.raises(BadPrime):
            reduce_mod_p(M, 2)
        assert reduce_mod_p(RingMatrix([[7, -1], [0, 5]]), 5).tolist() == [[2, 4], [0, 0]]

    def test_specialize_matrix(self):
        M = RingMatrix([[REG.var("T"), 1], [0, REG.inv("T")]])
        assert specialize_matrix(M, {"T": 3}).tolist() == [[3, 1], [0, Fraction(1, 3)]]


class TestCharPoly:
    def test_identity(self):
        assert char_poly(RingMatrix.identity(2)) == [1, 2, 1]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_against_cofactor_oracle(self, rng, n):
        for _ in range(8):
            M = rand_int_matrix(rng, n)
            assert standard_coefficients(char_poly(M)) == cofactor_charpoly(M.rows)

    def test_conventions(self, rng):
        M = rand_int_matrix(rng, 4)
        C = char_poly(M)
        assert C[4] == 1 and C[3] == M.trace() and C[0] == M.det()

    def test_polynomial_matrix(self):
        X, T = REG.var("X"), REG.var("T")
        M = RingMatrix([[X, REG.one()], [REG.zero(), T]])
        assert char_poly(M) == [X * T, X + T, REG.one()]

    def test_modular(self, rng):
        M = rand_int_matrix(rng, 3)
        p = 11
        C = char_poly(M.map(lambda x: x % p, p))
        assert [c % p for c in C] == [c % p for c in char_poly(M)]
        with pytest.raises(ArithmeticDomainError):
            char_poly(M.map(lambda x: x % 3, 3))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_newton_matches_char_poly(self, rng, n):
        for _ in range(8):
            M = rand_int_matrix(rng, n)
            traces = [(M ** k).trace() for k in range(1, n)]
            C = char_poly(M)
            if M.det() == 1 or n == 1:
                assert newton_coefficients(traces, n) == C[1:]
            else:
                # e_{n-k} for k >= 1 does not involve det
                assert newton_coefficients(traces, n)[:-1] == C[1:-1]

    def test_newton_examples(self):
        assert newton_coefficients([5], 2) == [5, 1]
        assert newton_coefficients([3, 5], 3) == [Fraction(9 - 5, 2), 3, 1]


class TestNumberTheory:
    def test_primes(self):
        brute = [n for n in range(2, 400) if all(n % d for d in range(2, n))]
        assert [n for n in range(400) if is_prime(n)] == brute
        assert is_prime((1 << 61) - 1)
        g = primes_from(90)
        assert next(g) == 97

    def test_gcd_all(self):
        assert gcd_all([12, 18, -30]) == 6
        assert gcd_all([]) == 0
