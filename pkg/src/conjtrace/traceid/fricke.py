"""SL(2) trace polynomials in ``x = tr A``, ``y = tr B``, ``z = tr AB``.

Reduction uses ``tr(UV) + tr(UV^-1) = tr U tr V`` on cyclic words, with
results memoized on the canonical class of ``w`` (merged with ``w^-1``,
which has the same SL(2) trace).
"""

from ..errors import RankMismatch
from ..freegroup import Word, canonical_core
from ..ring import VariableRegistry

__all__ = ["FRICKE_VARS", "fricke", "sl2_equivalent", "fricke_key"]

FRICKE_VARS = VariableRegistry(["x", "y", "z"])
_X, _Y, _Z = (FRICKE_VARS.var(n) for n in ("x", "y", "z"))
_TWO = FRICKE_VARS.const(2)
_memo = {}


def _key(letters):
    c = canonical_core(Word._raw(letters, 2))
    ci = canonical_core(Word._raw(tuple(-x for x in reversed(c)), 2))
    return min(c, ci)


def _reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _tr(letters):
    c = _key(_reduce(letters))
    hit = _memo.get(c)
    if hit is not None:
        return hit
    res = _compute(c)
    _memo[c] = res
    return res


def _compute(c):
    n = len(c)
    if n == 0:
        return _TWO
    if n == 1:
        return _X if abs(c[0]) == 1 else _Y
    first = {}
    for i, x in enumerate(c):
        if x in first:
            i0 = first[x]
            r = c[i0:] + c[:i0]
            j = i - i0
            xp, xq = r[:j], r[j:]
            p, q = r[1:j], r[j + 1:]
            return _tr(xp) * _tr(xq) - _tr(p + tuple(-y for y in reversed(q)))
        first[x] = i
    last = c[-1]
    if -last in first:
        p = c[:-1]
        return _tr(p) * _tr((last,)) - _tr(p + (-last,))
    # two distinct generators, each once
    s = (1 if c[0] > 0 else -1) * (1 if c[1] > 0 else -1)
    return _Z if s > 0 else _X * _Y - _Z


def fricke(w):
    if w.rank != 2:
        raise RankMismatch("trace polynomials are defined for rank 2")
    return _tr(w.letters)


def fricke_key(w):
    """Canonical serialized form, usable as a grouping key."""
    return tuple(fricke(w).items())


def sl2_equivalent(u, v):
    if u.rank != 2 or v.rank != 2:
        raise RankMismatch("trace polynomials are defined for rank 2")
    return fricke(u) == fricke(v)
