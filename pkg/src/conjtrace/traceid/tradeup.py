"""Rewrite traces of words with inverse letters as polynomials in traces of
positive words, using Cayley-Hamilton for a unimodular n x n matrix:

    A^-1 = sum_{k=1..n} (-1)^(k-1) C_k(A) A^(k-1),

with ``C_k = e_{n-k}`` obtained from ``tr A, ..., tr A^(n-1)`` by Newton's
identities.  Each step removes the leftmost inverse letter of the canonical
cyclic word, so the total number of inverse letters strictly decreases.
"""

from fractions import Fraction

from ..errors import BadDimension
from ..freegroup import Word, canonical_core, letter_char
from ..ring import newton_coefficients

__all__ = ["TraceExpression", "tradeup_rewrite", "leading_atom"]


def _atom_str(atom):
    return "".join(letter_char(x) for x in atom)


class TraceExpression:
    """Polynomial with rational coefficients in atoms ``t_[w]``.

    A monomial is a sorted tuple of ``(atom, exponent)``; an atom is the
    canonical letters tuple of a nonempty positive word.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, n, c):
        return cls(n, {(): Fraction(c)})

    @classmethod
    def atom(cls, n, letters):
        """Trace of a positive cyclic word; the empty word is the constant n."""
        core = tuple(canonical_core(Word._raw(tuple(letters), max(map(abs, letters), default=1))))
        if not core:
            return cls.constant(n, n)
        return cls(n, {((core, 1),): Fraction(1)})

    def _coerce(self, other):
        if isinstance(other, TraceExpression):
            return other
        return TraceExpression.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return TraceExpression(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return TraceExpression(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TraceExpression(self.n, {m: c * other for m, c in self.terms.items()})
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                d = dict(m1)
                for a, e in m2:
                    d[a] = d.get(a, 0) + e
                m = tuple(sorted(d.items()))
                t[m] = t.get(m, 0) + c1 * c2
        return TraceExpression(self.n, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TraceExpression):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def atoms(self):
        return sorted({a for m in self.terms for a, _ in m}, key=lambda a: (len(a), a))

    def evaluate(self, trace_of_atom):
        """Exact value given a function from atom letters to a trace."""
        vals = {a: trace_of_atom(a) for a in self.atoms()}
        total = Fraction(0)
        for m, c in self.terms.items():
            v = Fraction(c)
            for a, e in m:
                v *= Fraction(vals[a]) ** e
            total += v
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        def mono_key(m):
            return (sum(e for _, e in m), [(len(a), a, e) for a, e in m])
        parts = []
        for m in sorted(self.terms, key=mono_key):
            c = self.terms[m]
            body = "*".join(f"t[{_atom_str(a)}]" + (f"^{e}" if e > 1 else "") for a, e in m)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"({c})*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"TraceExpression(n={self.n}, {self})"


_memo = {}


def _rewrite(core, n):
    key = (core, n)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    neg = next((i for i, x in enumerate(core) if x < 0), None)
    if neg is None:
        res = TraceExpression.atom(n, core)
    else:
        x = -core[neg]
        u, v = core[:neg], core[neg + 1:]
        powers = [TraceExpression.atom(n, (x,) * i) for i in range(1, n)]
        C = newton_coefficients(powers, n)
        res = TraceExpression(n)
        for k in range(1, n + 1):
            inner = _rewrite(_canon(u + (x,) * (k - 1) + v), n)
            term = inner if k == n else C[k - 1] * inner
            res = res + term if k % 2 else res - term
    _memo[key] = res
    return res


def _canon(letters):
    rank = max(map(abs, letters), default=1)
    return tuple(canonical_core(Word(letters, rank)))


def tradeup_rewrite(w, n):
    if n < 2:
        raise BadDimension("the trade-up formula needs n >= 2")
    return _rewrite(_canon(w.letters), n)


def leading_atom(expr):
    """Longest atom occurring linearly, with its coefficient (None if absent)."""
    best = None
    for m, c in expr.terms.items():
        if len(m) == 1 and m[0][1] == 1:
            a = m[0][0]
            if best is None or (len(a), a) > (len(best[0]), best[0]):
                best = (a, c)
    return best
