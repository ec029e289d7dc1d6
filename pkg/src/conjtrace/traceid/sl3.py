"""SL(3) trace tests for rank-2 words.

The generic test writes each generator as ``L * diag(d1, d2, 1/(d1 d2)) * U``
with unit lower/upper triangular ``L``, ``U``.  Such products are dense in
SL(3, C), so two words are SL(3)-trace equivalent iff these Laurent
polynomials coincide.
"""

import random
from dataclasses import dataclass

from ..errors import RankMismatch, TooLarge
from ..ring import RingMatrix, VariableRegistry
from .common import FINGERPRINT_PRIME, elementary_product, evaluate_word, letter_mats

__all__ = ["SL3_VARS", "generic_pair", "sl3_generic_trace",
           "sl3_witness_distinguish", "Sl3Witness", "DEFAULT_TERM_CAP",
           "WITNESS_TRIALS"]

_PARAMS = ("l1", "l2", "l3", "d1", "d2", "u1", "u2", "u3")
_NAMES = tuple(f"{g}{p}" for g in "AB" for p in _PARAMS)
SL3_VARS = VariableRegistry(_NAMES, {n for n in _NAMES if n[1] == "d"})
DEFAULT_TERM_CAP = 2_000_000
WITNESS_TRIALS = 25


def _generic(g):
    R = SL3_VARS
    v = {p: R.var(g + p) for p in _PARAMS}
    one, zero = R.one(), R.zero()
    d1i, d2i = R.inv(g + "d1"), R.inv(g + "d2")
    L = RingMatrix([[one, zero, zero], [v["l1"], one, zero], [v["l2"], v["l3"], one]])
    D = RingMatrix([[v["d1"], zero, zero], [zero, v["d2"], zero], [zero, zero, d1i * d2i]])
    U = RingMatrix([[one, v["u1"], v["u2"]], [zero, one, v["u3"]], [zero, zero, one]])
    # inverses of unit triangular factors are polynomial
    Li = RingMatrix([[one, zero, zero], [-v["l1"], one, zero],
                     [v["l1"] * v["l3"] - v["l2"], -v["l3"], one]])
    Di = RingMatrix([[d1i, zero, zero], [zero, d2i, zero], [zero, zero, v["d1"] * v["d2"]]])
    Ui = RingMatrix([[one, -v["u1"], v["u1"] * v["u3"] - v["u2"]], [zero, one, -v["u3"]],
                     [zero, zero, one]])
    return L @ D @ U, Ui @ Di @ Li


def generic_pair():
    """Letter -> generic matrix map for both generators and their inverses."""
    A, Ai = _generic("A")
    B, Bi = _generic("B")
    return {1: A, -1: Ai, 2: B, -2: Bi}


_GENERIC = None


def sl3_generic_trace(w, term_cap=DEFAULT_TERM_CAP):
    global _GENERIC
    if w.rank != 2:
        raise RankMismatch("the generic test is for rank 2")
    if _GENERIC is None:
        _GENERIC = generic_pair()
    if not w.letters:
        return SL3_VARS.const(3)
    # cyclic core suffices; traces are class functions
    core = w.cyclic_reduce()[0]
    acc = _GENERIC[core.letters[0]]
    for x in core.letters[1:]:
        acc = acc @ _GENERIC[x]
        if sum(len(e) for r in acc.rows for e in r) > term_cap:
            raise TooLarge(f"more than {term_cap} terms; use the witness test")
    return acc.trace()


@dataclass(frozen=True)
class Sl3Witness:
    A: RingMatrix
    B: RingMatrix
    trace_u: int
    trace_v: int
    trial: int


def sl3_witness_distinguish(u, v, trials=WITNESS_TRIALS, seed=1729):
    """Search seeded integer pairs for a trace difference; None if none found."""
    if u.rank != 2 or v.rank != 2:
        raise RankMismatch("witness search is for rank 2")
    rng = random.Random(seed)
    for t in range(trials):
        A, B = elementary_product(rng, 3), elementary_product(rng, 3)
        mats = letter_mats((A, B))
        tu = evaluate_word(u, mats).trace() if u.letters else 3
        tv = evaluate_word(v, mats).trace() if v.letters else 3
        if tu != tv:
            return Sl3Witness(A, B, tu, tv, t)
    return None
