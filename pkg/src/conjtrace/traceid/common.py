"""Word evaluation on concrete matrices and seeded unimodular samples."""

from fractions import Fraction

from ..ring import RingMatrix

FINGERPRINT_PRIME = (1 << 61) - 1


def evaluate_word(w, mats, modulus=None):
    """Product of ``mats[x]`` over the letters of ``w``.

    ``mats`` maps every letter (positive and negative) to a RingMatrix.
    """
    n = next(iter(mats.values())).dim
    acc = RingMatrix.identity(n, modulus=modulus)
    for x in w.letters:
        acc = acc @ mats[x]
    return acc


def trace_word_mod(letters, mats, p):
    """Trace of a word over plain nested lists modulo ``p`` (fast path)."""
    n = len(mats[letters[0]]) if letters else 0
    if not letters:
        return None
    acc = mats[letters[0]]
    for x in letters[1:]:
        b = mats[x]
        acc = [[sum(acc[i][k] * b[k][j] for k in range(n)) % p for j in range(n)]
               for i in range(n)]
    return sum(acc[i][i] for i in range(n)) % p


def elementary_product(rng, n, steps=12, offset=3):
    """Product of ``steps`` random elementary matrices ``I + t*e_ij``, |t| <= offset."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        t = 0
        while t == 0:
            t = rng.randint(-offset, offset)
        # row operation: row_i += t * row_j  (left multiplication by I + t e_ij)
        m[i] = [a + t * b for a, b in zip(m[i], m[j])]
    return RingMatrix(m)


def integer_inverse(m):
    """Inverse of an integer matrix of determinant 1 (adjugate)."""
    n = m.dim
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(m.rows)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c])
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    rows = [[int(x) for x in r[n:]] for r in a]
    return RingMatrix(rows)


def letter_mats(gens):
    """Letter -> matrix map for a generator tuple of unimodular integer matrices."""
    out = {}
    for i, g in enumerate(gens, start=1):
        out[i] = g
        out[-i] = integer_inverse(g)
    return out


def random_sl2_mod(rng, p):
    a = rng.randrange(1, p)
    b, c = rng.randrange(p), rng.randrange(p)
    d = (1 + b * c) * pow(a, -1, p) % p
    return [[a, b], [c, d]]


def inverse2_mod(m, p):
    (a, b), (c, d) = m
    return [[d, (-b) % p], [(-c) % p, a]]
