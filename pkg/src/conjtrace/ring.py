"""Exact rings: sparse multivariate Laurent polynomials over Z or F_p, and
square matrices over Z, Q, F_p or Laurent polynomial rings.

Monomials are packed into a single Python integer (one signed 40-bit slot per
variable) so that multiplying monomials is integer addition.
"""

from fractions import Fraction
from itertools import count
import math

from .errors import (
    ArithmeticDomainError, BadPrime, MissingAssignment, ZeroInverse,
)

__all__ = [
    "VariableRegistry", "LaurentPolynomial", "RingMatrix", "specialize",
    "char_poly", "standard_coefficients", "newton_coefficients",
    "reduce_mod_p", "specialize_matrix", "is_prime", "primes_from",
    "exact_div",
]

_W = 40
_MASK = (1 << _W) - 1
_HALF = 1 << (_W - 1)


def _encode(exps):
    key = 0
    for i, e in enumerate(exps):
        if e:
            key += e << (_W * i)
    return key


def _decode(key, n):
    out = []
    for _ in range(n):
        r = key & _MASK
        if r >= _HALF:
            r -= 1 << _W
        out.append(r)
        key = (key - r) >> _W
    return tuple(out)


class VariableRegistry:
    """Ordered variable names, each flagged invertible or not."""

    def __init__(self, names, invertible=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if invertible is None:
            invertible = (False,) * len(names)
        elif isinstance(invertible, (set, frozenset)):
            invertible = tuple(n in invertible for n in names)
        self.names = names
        self.invertible = tuple(bool(f) for f in invertible)
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (isinstance(other, VariableRegistry)
                and self.names == other.names
                and self.invertible == other.invertible)

    def __hash__(self):
        return hash((self.names, self.invertible))

    def __repr__(self):
        return f"VariableRegistry({list(self.names)!r})"

    def var(self, name, modulus=None):
        exps = [0] * len(self.names)
        exps[self.index[name]] = 1
        return LaurentPolynomial(self, {_encode(exps): 1}, modulus)

    def inv(self, name, modulus=None):
        i = self.index[name]
        if not self.invertible[i]:
            raise ArithmeticDomainError(f"{name} is not invertible")
        return LaurentPolynomial(self, {-(1 << (_W * i)): 1}, modulus)

    def const(self, c, modulus=None):
        return LaurentPolynomial(self, {0: c} if c else {}, modulus)

    def zero(self, modulus=None):
        return LaurentPolynomial(self, {}, modulus)

    def one(self, modulus=None):
        return LaurentPolynomial(self, {0: 1}, modulus)

    def monomial(self, exps, coeff=1, modulus=None):
        if isinstance(exps, dict):
            e = [0] * len(self.names)
            for name, k in exps.items():
                e[self.index[name]] = k
            exps = e
        for i, k in enumerate(exps):
            if k < 0 and not self.invertible[i]:
                raise ArithmeticDomainError(
                    f"negative exponent on {self.names[i]}")
        return LaurentPolynomial(self, {_encode(exps): coeff}, modulus)


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial with integer or F_p coefficients."""

    __slots__ = ("registry", "terms", "modulus", "_hash")

    def __init__(self, registry, terms=None, modulus=None):
        self.registry = registry
        self.modulus = modulus
        t = {}
        if terms:
            if modulus is None:
                t = {k: c for k, c in terms.items() if c}
            else:
                for k, c in terms.items():
                    c %= modulus
                    if c:
                        t[k] = c
        self.terms = t
        self._hash = None

    @classmethod
    def _make(cls, registry, terms, modulus):
        # terms already normalized
        p = object.__new__(cls)
        p.registry = registry
        p.terms = terms
        p.modulus = modulus
        p._hash = None
        return p

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.registry is not self.registry and other.registry != self.registry:
                raise ArithmeticDomainError("polynomials over different registries")
            if other.modulus != self.modulus:
                raise ArithmeticDomainError("coefficient rings differ")
            return other
        if isinstance(other, int):
            return LaurentPolynomial(self.registry, {0: other}, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        p = self.modulus
        for k, c in other.terms.items():
            v = t.get(k, 0) + c
            if p is not None:
                v %= p
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return LaurentPolynomial._make(self.registry, t, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.modulus
        if p is None:
            t = {k: -c for k, c in self.terms.items()}
        else:
            t = {k: (-c) % p for k, c in self.terms.items()}
        return LaurentPolynomial._make(self.registry, t, p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        acc = {}
        get = acc.get
        for k2, c2 in b.items():
            for k1, c1 in a.items():
                k = k1 + k2
                acc[k] = get(k, 0) + c1 * c2
        p = self.modulus
        if p is None:
            t = {k: c for k, c in acc.items() if c}
        else:
            t = {}
            for k, c in acc.items():
                c %= p
                if c:
                    t[k] = c
        return LaurentPolynomial._make(self.registry, t, p)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_unit():
                raise ArithmeticDomainError("negative power of a non-unit")
            return self.unit_inverse() ** (-n)
        result = self.registry.one(self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            if self.modulus is not None:
                other %= self.modulus
            return self.terms == {0: other}
        if isinstance(other, LaurentPolynomial):
            return (self.registry == other.registry
                    and self.modulus == other.modulus
                    and self.terms == other.terms)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or set(self.terms) == {0}

    def constant_term(self):
        return self.terms.get(0, 0)

    def items(self):
        """(exponent tuple, coefficient) pairs in canonical order."""
        n = len(self.registry)
        out = [(_decode(k, n), c) for k, c in self.terms.items()]
        out.sort(key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))
        return out

    def is_unit(self):
        if len(self.terms) != 1:
            return False
        (k, c), = self.terms.items()
        if self.modulus is None and c not in (1, -1):
            return False
        exps = _decode(k, len(self.registry))
        return all(e == 0 or self.registry.invertible[i] for i, e in enumerate(exps))

    def unit_inverse(self):
        if not self.is_unit():
            raise ArithmeticDomainError("not a unit")
        (k, c), = self.terms.items()
        if self.modulus is not None:
            c = pow(c, -1, self.modulus)
        return LaurentPolynomial._make(self.registry, {-k: c}, self.modulus)

    def exact_div(self, k):
        if self.modulus is not None:
            inv = pow(k % self.modulus, -1, self.modulus)
            return self * inv
        t = {}
        for key, c in self.terms.items():
            q, r = divmod(c, k)
            if r:
                raise ArithmeticDomainError(f"coefficient {c} not divisible by {k}")
            t[key] = q
        return LaurentPolynomial._make(self.registry, t, None)

    def degree(self, name):
        """(min, max) exponent of ``name`` over the terms."""
        i = self.registry.index[name]
        n = len(self.registry)
        es = [_decode(k, n)[i] for k in self.terms]
        return (min(es), max(es)) if es else (0, 0)

    def coefficient_in(self, name, e):
        """Coefficient of ``name**e``, as a polynomial in the other variables."""
        i = self.registry.index[name]
        n = len(self.registry)
        shift = e << (_W * i)
        t = {}
        for k, c in self.terms.items():
            if _decode(k, n)[i] == e:
                t[k - shift] = c
        return LaurentPolynomial._make(self.registry, t, self.modulus)

    def specialize(self, assignment):
        return specialize(self, assignment)

    def reduce_mod(self, p):
        return LaurentPolynomial(self.registry, self.terms, p)

    def max_abs_coefficient(self):
        return max((abs(c) for c in self.terms.values()), default=0)

    def to_data(self):
        """Machine-readable form: list of [exponent list, coefficient]."""
        return [[list(e), c] for e, c in self.items()]

    @classmethod
    def from_data(cls, registry, data, modulus=None):
        t = {}
        for exps, c in data:
            t[_encode(exps)] = c
        return cls(registry, t, modulus)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        names = self.registry.names
        for exps, c in self.items():
            mono = []
            for name, e in zip(names, exps):
                if e == 1:
                    mono.append(name)
                elif e:
                    mono.append(f"{name}^{e}")
            if not mono:
                parts.append((c < 0, str(abs(c))))
            elif abs(c) == 1:
                parts.append((c < 0, "*".join(mono)))
            else:
                parts.append((c < 0, f"{abs(c)}*" + "*".join(mono)))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, s in parts[1:]:
            out += (" - " if neg else " + ") + s
        return out

    def __repr__(self):
        return f"LaurentPolynomial({self})"


def _power_table(value, lo, hi):
    tab = {0: Fraction(1)}
    if hi > 0:
        v = Fraction(value)
        acc = Fraction(1)
        for e in range(1, hi + 1):
            acc *= v
            tab[e] = acc
    if lo < 0:
        v = 1 / Fraction(value)
        acc = Fraction(1)
        for e in range(1, -lo + 1):
            acc *= v
            tab[-e] = acc
    return tab


def specialize(poly, assignment):
    """Evaluate ``poly`` exactly at an assignment of names to integers/rationals."""
    reg = poly.registry
    n = len(reg)
    decoded = [(_decode(k, n), c) for k, c in poly.terms.items()]
    if not decoded:
        return Fraction(0)
    used = set()
    for exps, _ in decoded:
        used.update(i for i, e in enumerate(exps) if e)
    tables = {}
    for i in used:
        name = reg.names[i]
        if name not in assignment:
            raise MissingAssignment(name)
        v = assignment[name]
        lo = min(e[i] for e, _ in decoded)
        hi = max(e[i] for e, _ in decoded)
        if v == 0 and (reg.invertible[i] or lo < 0):
            raise ZeroInverse(f"{name} is invertible and cannot be 0")
        tables[i] = _power_table(v, lo, hi)
    total = Fraction(0)
    for exps, c in decoded:
        term = Fraction(c)
        for i, e in enumerate(exps):
            if e:
                term *= tables[i][e]
        total += term
    if poly.modulus is not None:
        raise ArithmeticDomainError("specialize expects integer coefficients")
    return total


def exact_div(x, k, modulus=None):
    """Divide a ring element by a positive integer, failing if inexact."""
    if isinstance(x, LaurentPolynomial):
        return x.exact_div(k)
    if modulus is not None:
        return (x * pow(k, -1, modulus)) % modulus
    if isinstance(x, Fraction):
        return x / k
    if isinstance(x, int):
        q, r = divmod(x, k)
        if r:
            raise ArithmeticDomainError(f"{x} not divisible by {k}")
        return q
    return x * Fraction(1, k)


class RingMatrix:
    """Square matrix over a commutative ring; ``modulus`` marks F_p entries."""

    __slots__ = ("rows", "modulus")

    def __init__(self, rows, modulus=None):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if modulus is not None:
            rows = tuple(tuple(x % modulus for x in r) for r in rows)
        self.rows = rows
        self.modulus = modulus

    @classmethod
    def _make(cls, rows, modulus):
        m = object.__new__(cls)
        m.rows = rows
        m.modulus = modulus
        return m

    @classmethod
    def identity(cls, n, one=1, zero=0, modulus=None):
        return cls._make(tuple(tuple(one if i == j else zero for j in range(n))
                               for i in range(n)), modulus)

    @classmethod
    def block_diag(cls, blocks, zero=0):
        n = sum(b.dim for b in blocks)
        rows = [[zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.dim):
                for j in range(b.dim):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.dim
        return cls(rows, blocks[0].modulus if blocks else None)

    @property
    def dim(self):
        return len(self.rows)

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            return self.rows[ij[0]][ij[1]]
        return self.rows[ij]

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.modulus == other.modulus and self.rows == other.rows

    def __hash__(self):
        return hash((self.rows, self.modulus))

    def __repr__(self):
        return f"RingMatrix({[list(r) for r in self.rows]!r}, modulus={self.modulus})"

    def tolist(self):
        return [list(r) for r in self.rows]

    def _finish(self, rows):
        p = self.modulus
        if p is not None:
            rows = tuple(tuple(x % p for x in r) for r in rows)
        return RingMatrix._make(tuple(tuple(r) for r in rows), p)

    def __add__(self, other):
        return self._finish([[a + b for a, b in zip(r, s)]
                             for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self._finish([[a - b for a, b in zip(r, s)]
                             for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self._finish([[-a for a in r] for r in self.rows])

    def scale(self, c):
        return self._finish([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        if self.modulus != other.modulus:
            raise ArithmeticDomainError("matrices over different rings")
        n = self.dim
        b = other.rows
        cols = list(zip(*b))
        out = []
        for r in self.rows:
            nz = [(k, x) for k, x in enumerate(r) if x]
            row = []
            for j in range(n):
                col = cols[j]
                acc = None
                for k, x in nz:
                    y = col[k]
                    if y:
                        acc = x * y if acc is None else acc + x * y
                if acc is None:
                    acc = _zero_like(r[0] if r else 0)
                row.append(acc)
            out.append(row)
        return self._finish(out)

    __mul__ = __matmul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative matrix powers need an explicit inverse")
        one = _one_like(self.rows[0][0])
        zero = _zero_like(self.rows[0][0])
        result = RingMatrix.identity(self.dim, one, zero, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def trace(self):
        acc = self.rows[0][0]
        for i in range(1, self.dim):
            acc = acc + self.rows[i][i]
        if self.modulus is not None:
            acc %= self.modulus
        return acc

    def transpose(self):
        return RingMatrix._make(tuple(zip(*self.rows)), self.modulus)

    def map(self, f, modulus=None):
        return RingMatrix([[f(x) for x in r] for r in self.rows], modulus)

    def is_identity(self):
        n = self.dim
        return all(self.rows[i][j] == (1 if i == j else 0)
                   for i in range(n) for j in range(n))

    def det(self):
        """Determinant: fraction-field elimination over Z, Q or F_p, and the
        division-free Faddeev-LeVerrier constant term over polynomial rings."""
        n = self.dim
        p = self.modulus
        if any(isinstance(x, LaurentPolynomial) for r in self.rows for x in r):
            return char_poly(self)[0]
        if p is None:
            a = [[Fraction(x) for x in r] for r in self.rows]
        else:
            a = [list(r) for r in self.rows]
        d = Fraction(1) if p is None else 1
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d = d * a[c][c]
            inv = (1 / a[c][c]) if p is None else pow(a[c][c], -1, p)
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                    if p is not None:
                        a[r] = [x % p for x in a[r]]
            if p is not None:
                d %= p
        if p is None:
            return int(d) if d.denominator == 1 else d
        return d % p

    def max_abs_entry(self):
        """Largest |numerator| or |denominator| over entries (height)."""
        best = 0
        for r in self.rows:
            for x in r:
                if isinstance(x, Fraction):
                    best = max(best, abs(x.numerator), x.denominator)
                elif isinstance(x, LaurentPolynomial):
                    best = max(best, x.max_abs_coefficient())
                else:
                    best = max(best, abs(x))
        return best


def _zero_like(x):
    if isinstance(x, LaurentPolynomial):
        return x.registry.zero(x.modulus)
    if isinstance(x, Fraction):
        return Fraction(0)
    return 0


def _one_like(x):
    if isinstance(x, LaurentPolynomial):
        return x.registry.one(x.modulus)
    if isinstance(x, Fraction):
        return Fraction(1)
    return 1


def char_poly(m):
    """Characteristic polynomial coefficients ``C_0, ..., C_n``.

    Convention: ``det(tI - M) = sum_k (-1)**(n-k) * C_k * t**k``, so
    ``C_n = 1``, ``C_{n-1} = trace`` and ``C_0 = det``.  Computed by the
    Faddeev-LeVerrier recurrence with exact division by ``1, ..., n``.
    """
    n = m.dim
    p = m.modulus
    if p is not None and p <= n:
        raise ArithmeticDomainError(f"need p > {n} for exact division")
    sample = m.rows[0][0]
    one, zero = _one_like(sample), _zero_like(sample)
    ident = RingMatrix.identity(n, one, zero, p)
    c = [zero] * (n + 1)
    c[n] = one
    mk = RingMatrix.identity(n, zero, zero, p)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(c[n - k + 1])
        c[n - k] = -exact_div((m @ mk).trace(), k, p)
        if p is not None:
            c[n - k] %= p
    return [(-x if (n - k) % 2 else x) if p is None else
            ((-x) % p if (n - k) % 2 else x)
            for k, x in enumerate(c)]


def standard_coefficients(C):
    """Convert ``C_0..C_n`` to plain coefficients of ``det(tI - M)``."""
    n = len(C) - 1
    return [(-x if (n - k) % 2 else x) for k, x in enumerate(C)]


def newton_coefficients(power_traces, n):
    """``[C^n_1, ..., C^n_n]`` from power traces ``t_1, t_2, ...``.

    ``C^n_k`` is the elementary symmetric function ``e_{n-k}`` of the
    eigenvalues, obtained by Newton's identities; only ``t_1..t_{n-1}`` are
    used.  Elements may be numbers or any ring supporting ``* Fraction``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    t = list(power_traces)
    if len(t) < n - 1:
        raise ValueError(f"need {n - 1} power traces")
    e = [1]
    for m in range(1, n):
        acc = None
        for i in range(1, m + 1):
            term = t[i - 1] * e[m - i]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        e.append(acc * Fraction(1, m))
    return [e[n - k] for k in range(1, n + 1)]


def reduce_mod_p(m, p):
    """Entrywise reduction of a rational matrix into F_p."""
    rows = []
    for r in m.rows:
        row = []
        for x in r:
            x = Fraction(x)
            if x.denominator % p == 0:
                raise BadPrime(f"{p} divides the denominator of {x}")
            row.append(x.numerator * pow(x.denominator, -1, p) % p)
        rows.append(row)
    return RingMatrix(rows, p)


def specialize_matrix(m, assignment):
    return RingMatrix([[specialize(x, assignment) if isinstance(x, LaurentPolynomial)
                        else Fraction(x) for x in r] for r in m.rows])


def is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_from(start=2):
    for n in count(max(2, start)):
        if is_prime(n):
            yield n


def gcd_all(values):
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g
