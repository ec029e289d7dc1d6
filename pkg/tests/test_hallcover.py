import random

import pytest
from hypothesis import given, strategies as st

from conjtrace.errors import NotACover, ParseError, TrivialElement
from conjtrace.freegroup import Word, are_conjugate, enumerate_words, parse_word, random_word
from conjtrace.hallcover import (SubgroupGraph, conjugate_into, coset_structure,
                                 hall_completion, membership, parse_graph,
                                 serialize_graph)


def w(s, rank=2):
    return parse_word(s, rank)


def basis_strs(g):
    return [str(b) for b in hall_completion(w(g))[1].basis]


class TestExamples:
    def test_generator(self):
        graph, cs, _ = hall_completion(w("a"))
        assert cs.index == 1 and basis_strs("a") == ["a", "b"]

    def test_square(self):
        graph, cs, _ = hall_completion(w("aa"))
        assert cs.index == 2
        assert basis_strs("aa") == ["aa", "b", "abA"]
        assert cs.sigma[0] == (1, 0) and cs.sigma[1] == (0, 1)

    def test_ab(self):
        graph, cs, _ = hall_completion(w("ab"))
        assert cs.index == 2
        assert cs.sigma == ((1, 0), (1, 0))
        assert set(basis_strs("ab")) == {"ab", "aa", "bA"}
        assert membership(w("a"), graph) is None
        assert membership(w("aa"), graph) is not None

    def test_single_vertex(self):
        g = SubgroupGraph(2, 1, 0, ((0,), (0,)), (0, 1, 0), frozenset())
        cs = coset_structure(g)
        assert cs.index == 1 and cs.sigma == ((0,), (0,))
        assert [str(a) for a in cs.basis] == ["a", "b"]

    def test_membership_examples(self):
        graph, cs, _ = hall_completion(w("aa"))
        assert str(membership(w("aa"), graph)) == "a"   # first basis letter
        assert membership(Word.identity(2), graph).is_identity()

    def test_identity_rejected(self):
        with pytest.raises(TrivialElement):
            hall_completion(Word.identity(2))

    def test_inverse_core(self):
        graph, cs, c = hall_completion(w("A"))
        assert cs.basis[0] == w("A")

    def test_not_cyclically_reduced(self):
        g = w("bAAbaB")
        graph, cs, c = hall_completion(g)
        assert c * cs.basis[0] * ~c == g


class TestInvariants:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_all_small_classes(self, n):
        for cls in enumerate_words(2, n, up_to_conjugacy=True):
            g = cls.core
            graph, cs, c = hall_completion(g)
            assert cs.basis[0] == g
            assert cs.index == len(g) <= len(g)
            assert cs.basis_rank == cs.index * (2 - 1) + 1
            for b in cs.basis:
                assert membership(b, graph) is not None
            # theta[j] x = alpha theta[sigma(j)]
            for j in range(cs.index):
                for x in (1, 2):
                    lhs = cs.theta[j] * Word((x,), 2)
                    rhs = cs.expand(cs.alpha(j, x)) * cs.theta[cs.coset_after(j, x)]
                    assert lhs == rhs
                    lhs = cs.theta[j] * Word((-x,), 2)
                    rhs = cs.expand(cs.alpha(j, -x)) * cs.theta[cs.coset_after(j, -x)]
                    assert lhs == rhs

    def test_rank3(self):
        g = w("abCa", 3)
        graph, cs, _ = hall_completion(g)
        assert cs.basis_rank == cs.index * 2 + 1 and cs.basis[0] == g

    def test_membership_expands_back(self):
        r = random.Random(11)
        graph, cs, _ = hall_completion(w("aab"))
        for _ in range(200):
            u = random_word(r, 2, r.randint(0, 9))
            bw = membership(u, graph)
            end = graph.read(graph.base, u.letters)
            assert (bw is not None) == (end == graph.base)
            if bw is not None:
                assert cs.expand(bw) == u

    def test_conjugate_into(self):
        graph, cs, _ = hall_completion(w("ab"))
        r = random.Random(2)
        for _ in range(100):
            u = random_word(r, 2, r.randint(1, 7))
            hit = conjugate_into(u, graph)
            if hit is not None:
                v, bw = hit
                core = u.cyclic_reduce()[0]
                assert cs.expand(bw) == cs.theta[v] * core * ~cs.theta[v]
        assert conjugate_into(w("a"), graph) is None
        assert conjugate_into(w("Bab"), graph) is None
        assert conjugate_into(w("ba"), graph) is not None

    @given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=10))
    def test_roundtrip(self, letters):
        g = Word(letters, 2)
        if not g.letters:
            return
        graph = hall_completion(g)[0]
        text = serialize_graph(graph)
        assert parse_graph(text) == graph
        assert coset_structure(parse_graph(text)).basis == coset_structure(graph).basis


class TestErrors:
    def test_not_permutation(self):
        g = SubgroupGraph(2, 2, 0, ((0, 0), (0, 1)), (0, 2, 0), frozenset({(0, 1, 0)}))
        with pytest.raises(NotACover):
            coset_structure(g)

    def test_tree_not_spanning(self):
        g = SubgroupGraph(2, 2, 0, ((1, 0), (0, 1)), (0, 1, 1), frozenset())
        with pytest.raises(NotACover):
            coset_structure(g)

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_graph("subgroup-graph 1\nrank 2\n")
        with pytest.raises(ParseError):
            parse_graph("subgroup-graph 7\n")
        with pytest.raises(ParseError):
            parse_graph("bogus line\n")
