"""Words in a free group of finite rank.

Letters are nonzero integers: ``i`` is the i-th generator and ``-i`` its
inverse.  The text syntax uses ``a, b, c, ...`` for generators and the
uppercase letters for inverses, so ``"abA"`` is ``(1, 2, -1)``.

Conjugacy classes are represented by the least rotation of the cyclically
reduced core under the letter order ``1 < -1 < 2 < -2 < ...``.
"""

from collections import namedtuple
from dataclasses import dataclass
import string

from .errors import InvalidLetter, ParseError, RankMismatch

__all__ = [
    "Word", "ConjClass", "WordStats", "parse_word", "multiply", "invert",
    "cyclic_canonical", "are_conjugate", "word_stats", "enumerate_words",
    "least_rotation", "letter_key", "letter_char", "random_word", "canonical_core",
]


def letter_key(x):
    """Sort key realizing the order 1 < -1 < 2 < -2 < ..."""
    return 2 * x - 1 if x > 0 else -2 * x


def _key_letter(k):
    return (k + 1) // 2 if k % 2 else -(k // 2)


def letter_char(x):
    if x > 0:
        return string.ascii_lowercase[x - 1]
    return string.ascii_uppercase[-x - 1]


def _reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word; immutable."""

    __slots__ = ("rank", "letters")

    def __init__(self, letters=(), rank=2):
        if rank < 1:
            raise ValueError("rank must be positive")
        letters = tuple(letters)
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise InvalidLetter(f"letter {x} outside rank {rank}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "letters", _reduce(letters))

    @classmethod
    def _raw(cls, letters, rank):
        # caller guarantees letters are valid and reduced
        w = object.__new__(cls)
        object.__setattr__(w, "rank", rank)
        object.__setattr__(w, "letters", letters)
        return w

    @classmethod
    def identity(cls, rank):
        return cls._raw((), rank)

    @classmethod
    def generator(cls, i, rank):
        return cls((i,), rank)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.rank == other.rank and self.letters == other.letters

    def __hash__(self):
        return hash((self.rank, self.letters))

    def __str__(self):
        return "".join(letter_char(x) for x in self.letters) or "1"

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank})"

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return invert(self)

    def inverse(self):
        return invert(self)

    def __pow__(self, n):
        base = self if n >= 0 else invert(self)
        n = abs(n)
        result = Word.identity(self.rank)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self):
        return not self.letters

    def is_cyclically_reduced(self):
        w = self.letters
        return len(w) < 2 or w[0] != -w[-1]

    def cyclic_reduce(self):
        """Return ``(core, c)`` with ``c * core * c**-1 == self``."""
        w = self.letters
        i, j = 0, len(w)
        while j - i >= 2 and w[i] == -w[j - 1]:
            i += 1
            j -= 1
        return Word._raw(w[i:j], self.rank), Word._raw(w[:i], self.rank)

    def reverse(self):
        return Word._raw(self.letters[::-1], self.rank)

    def is_positive(self):
        return all(x > 0 for x in self.letters)

    def signature(self):
        sig = [0] * self.rank
        for x in self.letters:
            sig[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(sig)

    def substitute(self, images):
        """Image under the endomorphism sending generator i to ``images[i-1]``."""
        rank = images[0].rank
        out = Word.identity(rank)
        for x in self.letters:
            g = images[abs(x) - 1]
            out = out * (g if x > 0 else invert(g))
        return out


@dataclass(frozen=True)
class ConjClass:
    """Conjugacy class, stored as its canonical cyclic core."""

    rank: int
    core: Word

    @property
    def class_norm(self):
        return len(self.core)

    def __str__(self):
        return str(self.core)


WordStats = namedtuple("WordStats", "reverse is_positive signature")


def parse_word(text, rank=2):
    text = text.strip()
    if text in ("", "1"):
        return Word.identity(rank)
    letters = []
    for ch in text:
        if ch in string.ascii_lowercase:
            x = string.ascii_lowercase.index(ch) + 1
        elif ch in string.ascii_uppercase:
            x = -(string.ascii_uppercase.index(ch) + 1)
        else:
            raise ParseError(f"malformed character {ch!r} in {text!r}")
        if abs(x) > rank:
            raise InvalidLetter(f"letter {ch!r} not available in rank {rank}")
        letters.append(x)
    return Word._raw(_reduce(letters), rank)


def _check_rank(u, v):
    if u.rank != v.rank:
        raise RankMismatch(f"ranks differ: {u.rank} vs {v.rank}")


def multiply(u, v):
    _check_rank(u, v)
    a, b = u.letters, v.letters
    k = 0
    n = min(len(a), len(b))
    while k < n and a[-1 - k] == -b[k]:
        k += 1
    return Word._raw(a[:len(a) - k] + b[k:], u.rank)


def invert(w):
    return Word._raw(tuple(-x for x in reversed(w.letters)), w.rank)


def least_rotation(seq):
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) + list(seq)
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def cyclic_canonical(w):
    """Canonical class of ``w`` and a conjugator ``c`` with ``c*core*c^-1 == w``."""
    delta, c = w.cyclic_reduce()
    d = delta.letters
    k = least_rotation([letter_key(x) for x in d])
    core = Word._raw(d[k:] + d[:k], w.rank)
    # delta = s * core * s^-1 with s = d[:k]
    conj = c * Word._raw(d[:k], w.rank)
    return ConjClass(w.rank, core), conj


def canonical_core(w):
    """Letters of the canonical cyclic core; cheaper than ``cyclic_canonical``."""
    d = w.cyclic_reduce()[0].letters
    k = least_rotation([letter_key(x) for x in d])
    return d[k:] + d[:k]


def are_conjugate(u, v):
    _check_rank(u, v)
    return canonical_core(u) == canonical_core(v)


def word_stats(w):
    return WordStats(w.reverse(), w.is_positive(), w.signature())


def enumerate_words(rank, length, positive_only=False, up_to_conjugacy=False):
    """Yield reduced words (or canonical classes) of the given length.

    Order is lexicographic under the letter order.  With ``up_to_conjugacy``
    the necklaces are generated directly (FKM prenecklace extension), so the
    cost is proportional to the number of classes visited, not words.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    if positive_only:
        keys = [2 * i - 1 for i in range(1, rank + 1)]
    else:
        keys = list(range(1, 2 * rank + 1))
    if length == 0:
        e = Word.identity(rank)
        yield ConjClass(rank, e) if up_to_conjugacy else e
        return
    if up_to_conjugacy:
        yield from _enumerate_necklaces(rank, length, keys)
        return
    buf = [0] * length

    def rec(t):
        if t == length:
            yield Word._raw(tuple(buf), rank)
            return
        prev = buf[t - 1] if t else 0
        for k in keys:
            x = _key_letter(k)
            if x == -prev:
                continue
            buf[t] = x
            yield from rec(t + 1)

    yield from rec(0)


def _enumerate_necklaces(rank, n, keys):
    a = [0] * n  # keys

    def rec(t, p):
        if t == n:
            if n % p == 0:
                first, last = _key_letter(a[0]), _key_letter(a[-1])
                if n == 1 or first != -last:
                    core = tuple(_key_letter(k) for k in a)
                    yield ConjClass(rank, Word._raw(core, rank))
            return
        lo = a[t - p] if t else keys[0]
        prev = _key_letter(a[t - 1]) if t else 0
        for k in keys:
            if k < lo:
                continue
            x = _key_letter(k)
            if x == -prev:
                continue
            a[t] = k
            yield from rec(t + 1, p if (t and k == lo) else t + 1)

    yield from rec(0, 1)


def random_word(rng, rank, length, positive_only=False):
    """Uniform random reduced word of exactly ``length`` letters."""
    letters = []
    pool = list(range(1, rank + 1))
    if not positive_only:
        pool += [-x for x in pool]
    while len(letters) < length:
        x = rng.choice(pool)
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return Word._raw(tuple(letters), rank)
