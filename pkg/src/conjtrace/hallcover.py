"""Finite covers of the rose in which a chosen word becomes a basis element.

The subgroup graph of ``<gamma>`` is the cycle spelling the cyclic core of
gamma.  Completing every partial edge map to a permutation gives a covering,
hence a finite-index subgroup containing the core as a free factor (M. Hall).
Vertices are 0-based and vertex ``v`` stands for the right coset with
representative ``theta[v]``.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NotACover, ParseError, TrivialElement
from .freegroup import Word

__all__ = [
    "SubgroupGraph", "CosetStructure", "hall_completion", "coset_structure",
    "membership", "conjugate_into", "complete_edges", "bfs_spanning_tree",
    "serialize_graph", "parse_graph",
]


@dataclass(frozen=True)
class SubgroupGraph:
    """Covering graph: ``edges[i][v]`` is the end of the (i+1)-edge at ``v``.

    Tree and marked edges are triples ``(source, generator, target)`` with a
    positive generator label.  ``marked_sign = -1`` means basis element 1 is
    the inverse of the loop through the marked edge.
    """

    rank: int
    vertex_count: int
    base: int
    edges: tuple
    marked_edge: tuple
    spanning_tree: frozenset
    marked_sign: int = 1

    def edge_target(self, v, x):
        """Vertex reached from ``v`` by reading the letter ``x`` (or None)."""
        if x > 0:
            return self.edges[x - 1][v]
        perm = self.edges[-x - 1]
        try:
            return perm.index(v)
        except ValueError:
            return None

    def read(self, start, letters):
        v = start
        for x in letters:
            v = self.edge_target(v, x)
            if v is None:
                return None
        return v


@dataclass(frozen=True)
class CosetStructure:
    """Coset data of a finite-index subgroup.

    ``theta[j]`` is the representative of coset ``j`` and
    ``sigma[i][j]`` the coset of ``theta[j] * x_{i+1}``.  ``schreier[j][i]``
    is the word in the subgroup basis for
    ``alpha = theta[j] * x_{i+1} * theta[sigma[i][j]]**-1``.
    """

    index: int
    theta: tuple
    sigma: tuple
    schreier: tuple
    basis: tuple
    edge_letter: dict = field(compare=False, repr=False)

    @property
    def basis_rank(self):
        return len(self.basis)

    def alpha(self, j, x):
        """Schreier element for coset ``j`` and letter ``x`` (basis word).

        For an inverse letter the coset moved to is ``sigma^{-1}(j)``.
        """
        if x > 0:
            return self.schreier[j][x - 1]
        i = -x - 1
        k = self.sigma[i].index(j)
        return ~self.schreier[k][i]

    def coset_after(self, j, x):
        if x > 0:
            return self.sigma[x - 1][j]
        return self.sigma[-x - 1].index(j)

    def expand(self, basis_word):
        """Rewrite a basis word as an element of the ambient free group."""
        return basis_word.substitute(self.basis)

    def tau(self, basis_word):
        """Exponent sum of the first basis element (projection onto the gamma line)."""
        return basis_word.signature()[0]


def complete_edges(m, partial):
    """Extend a partial injection on ``range(m)`` to a permutation.

    Unmatched sources are sent to unmatched targets, both in ascending order.
    """
    perm = [None] * m
    for s, t in partial.items():
        perm[s] = t
    hit = set(partial.values())
    sources = [v for v in range(m) if perm[v] is None]
    targets = [v for v in range(m) if v not in hit]
    for s, t in zip(sources, targets):
        perm[s] = t
    return tuple(perm)


def bfs_spanning_tree(rank, vertex_count, base, edges, exclude=None):
    """Breadth-first tree from ``base``; edges tried by ascending generator."""
    seen = {base}
    tree = set()
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for i in range(rank):
            for x in (i + 1, -(i + 1)):
                if x > 0:
                    u = edges[i][v]
                    e = (v, i + 1, u)
                else:
                    u = edges[i].index(v)
                    e = (u, i + 1, v)
                if e == exclude or u in seen:
                    continue
                seen.add(u)
                tree.add(e)
                queue.append(u)
    return frozenset(tree)


def hall_completion(gamma, rank=None):
    """Hall cover for ``gamma``; returns ``(graph, cosets, conjugator)``.

    With ``delta`` the cyclic core and ``c`` the conjugator,
    ``gamma = c * delta * c**-1`` and ``delta`` is basis element 1.
    """
    rank = gamma.rank if rank is None else rank
    delta, conj = gamma.cyclic_reduce()
    d = delta.letters
    if not d:
        raise TrivialElement("the identity has no Hall cover")
    m = len(d)
    partial = [dict() for _ in range(rank)]
    cycle = []
    for k, x in enumerate(d):
        a, b = k, (k + 1) % m
        if x > 0:
            partial[x - 1][a] = b
            cycle.append((a, x, b))
        else:
            partial[-x - 1][b] = a
            cycle.append((b, -x, a))
    edges = tuple(complete_edges(m, p) for p in partial)
    marked = cycle[-1]
    tree = frozenset(cycle[:-1])
    graph = SubgroupGraph(rank, m, 0, edges, marked, tree, 1 if d[-1] > 0 else -1)
    cs = coset_structure(graph)
    if cs.basis[0] != delta:
        raise AssertionError("marked edge does not read the core")
    return graph, cs, conj


@lru_cache(maxsize=256)
def coset_structure(g):
    m, r = g.vertex_count, g.rank
    if len(g.edges) != r:
        raise NotACover("one edge map per generator is required")
    for perm in g.edges:
        if len(perm) != m or sorted(perm) != list(range(m)):
            raise NotACover("an edge map is not a permutation")
    theta = [None] * m
    theta[g.base] = Word.identity(r)
    adj = {}
    for (s, x, t) in g.spanning_tree:
        if g.edges[x - 1][s] != t:
            raise NotACover(f"tree edge {(s, x, t)} is not in the graph")
        adj.setdefault(s, []).append((x, t))
        adj.setdefault(t, []).append((-x, s))
    queue = deque([g.base])
    while queue:
        v = queue.popleft()
        for x, u in sorted(adj.get(v, ())):
            if theta[u] is None:
                theta[u] = theta[v] * Word((x,), r)
                queue.append(u)
    if any(t is None for t in theta):
        raise NotACover("spanning tree does not reach every vertex")
    if g.marked_edge in g.spanning_tree:
        raise NotACover("the marked edge lies in the tree")

    s, x, t = g.marked_edge
    marked_elt = theta[s] * Word((x,), r) * ~theta[t]
    others = sorted(
        ((v, i + 1, g.edges[i][v]) for i in range(r) for v in range(m)
         if (v, i + 1, g.edges[i][v]) not in g.spanning_tree
         and (v, i + 1, g.edges[i][v]) != g.marked_edge),
        key=lambda e: (e[1], e[0]))
    if g.marked_sign not in (1, -1):
        raise NotACover("marked sign must be 1 or -1")
    edge_letter = {g.marked_edge: g.marked_sign}
    basis = [marked_elt if g.marked_sign > 0 else ~marked_elt]
    for k, e in enumerate(others, start=2):
        edge_letter[e] = k
        basis.append(theta[e[0]] * Word((e[1],), r) * ~theta[e[2]])
    nb = len(basis)
    if nb != m * (r - 1) + 1:
        raise AssertionError("basis size disagrees with the Schreier formula")

    sigma = tuple(tuple(g.edges[i]) for i in range(r))
    schreier = []
    for j in range(m):
        row = []
        for i in range(r):
            e = (j, i + 1, g.edges[i][j])
            k = edge_letter.get(e)
            w = Word.identity(nb) if k is None else Word((k,), nb)
            lhs = theta[j] * Word((i + 1,), r)
            rhs = w.substitute(basis) * theta[e[2]]
            if lhs != rhs:
                raise AssertionError(f"coset relation fails at {(j, i + 1)}")
            row.append(w)
        schreier.append(tuple(row))
    return CosetStructure(m, tuple(theta), sigma, tuple(schreier),
                          tuple(basis), edge_letter)



def membership(w, g):
    """Basis word for ``w`` if it lies in the subgroup, else None."""
    cs = coset_structure(g)
    end, bw = _read_basis(w.letters, g.base, cs)
    return bw if end == g.base else None


def _read_basis(letters, start, cs):
    nb = cs.basis_rank
    v = start
    out = []
    for x in letters:
        a = cs.alpha(v, x)
        out.extend(a.letters)
        v = cs.coset_after(v, x)
    return v, Word(out, nb)


def conjugate_into(w, g):
    """Decide whether some conjugate of ``w`` lies in the subgroup.

    Returns ``(vertex, basis_word)`` where the cyclic core of ``w`` read from
    ``vertex`` is a closed loop, so ``theta[vertex] * core * theta[vertex]**-1``
    is in the subgroup with the given basis word; None if no vertex works.
    """
    cs = coset_structure(g)
    core = w.cyclic_reduce()[0].letters
    for v in range(g.vertex_count):
        end, bw = _read_basis(core, v, cs)
        if end == v:
            # theta[v] core theta[v]^-1 = prefix-alpha product
            return v, bw
    return None


def serialize_graph(g):
    lines = ["subgroup-graph 1", f"rank {g.rank}", f"vertices {g.vertex_count}",
             f"base {g.base}"]
    for i, perm in enumerate(g.edges):
        lines.append(f"gen {i + 1}: " + " ".join(map(str, perm)))
    lines.append("marked " + " ".join(map(str, g.marked_edge)) + f" {g.marked_sign}")
    for e in sorted(g.spanning_tree):
        lines.append("tree " + " ".join(map(str, e)))
    return "\n".join(lines) + "\n"


def parse_graph(text):
    rank = m = base = marked = None
    sign = 1
    edges, tree = [], []
    try:
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            key, _, rest = line.partition(" ")
            if key == "subgroup-graph":
                if rest.strip() != "1":
                    raise ParseError(f"unsupported graph format {rest!r}")
            elif key == "rank":
                rank = int(rest)
            elif key == "vertices":
                m = int(rest)
            elif key == "base":
                base = int(rest)
            elif key == "gen":
                _, _, perm = rest.partition(":")
                edges.append(tuple(int(t) for t in perm.split()))
            elif key == "marked":
                *marked, sign = (int(t) for t in rest.split())
                marked = tuple(marked)
            elif key == "tree":
                tree.append(tuple(int(t) for t in rest.split()))
            else:
                raise ParseError(f"unknown line {line!r}")
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    if None in (rank, m, base, marked):
        raise ParseError("incomplete graph description")
    return SubgroupGraph(rank, m, base, tuple(edges), marked, frozenset(tree), sign)
