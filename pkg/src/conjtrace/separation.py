"""Finite-quotient certificates for conjugacy separation, plus brute-force
oracles for the divisibility and conjugacy-separation functions.

A certificate specializes the symbolic representation at an integer point,
reduces modulo a prime avoiding every denominator, and rescales each
generator image into SL(d, F_p).  Distinct traces in the quotient prove the
images are not conjugate there.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
import json
import math

from .errors import (
    BadCertificate, ConjugatePair, NotSeparated, ParseError,
    TrivialElement, UnluckySpecialization,
)
from .freegroup import Word, are_conjugate, enumerate_words, parse_word
from .ring import RingMatrix, primes_from, reduce_mod_p, specialize, specialize_matrix
from .wehrfritz import build_representation, trace_of

__all__ = [
    "FiniteQuotientWitness", "Unknown", "default_assignment",
    "assignment_schedule", "find_separating_prime",
    "finite_quotient_certificate", "verify_witness", "witness_to_json",
    "witness_from_json", "con_exact_small", "d_exact_small",
    "conj_depth_report", "coefficient_growth", "small_homomorphisms",
    "FALLBACK_ATTEMPTS",
]

WITNESS_FORMAT = "conjtrace-witness"
WITNESS_VERSION = 1
FALLBACK_ATTEMPTS = 8
MAX_PRIME_TRIES = 200


def default_assignment(rep, shift=0):
    """X_j = j+2, Y_j = j+3, W_j = j+5, D_j = 1, T = 2, all shifted by ``shift``."""
    out = {}
    for name in rep.registry.names:
        if name == "T":
            out[name] = 2 + shift
            continue
        kind, j = name[0], int(name[1:])
        base = {"X": j + 2, "Y": j + 3, "W": j + 5, "D": 1}[kind]
        out[name] = base + shift
    return out


def assignment_schedule(rep, attempts=FALLBACK_ATTEMPTS):
    """Default point first, then shifts by the successive primes 2, 3, 5, ..."""
    yield default_assignment(rep)
    primes = primes_from(2)
    for _ in range(attempts - 1):
        yield default_assignment(rep, next(primes))


def find_separating_prime(alpha, forbidden=(), start=2):
    alpha = Fraction(alpha)
    if alpha == 0:
        raise NotSeparated("the trace difference vanishes")
    bad = [abs(int(f)) for f in forbidden if f]
    for p in primes_from(start):
        if alpha.numerator % p == 0 or alpha.denominator % p == 0:
            continue
        if any(f % p == 0 for f in bad):
            continue
        return p


@dataclass
class FiniteQuotientWitness:
    rank: int
    gamma: Word
    eta: Word
    dimension: int
    p: int
    generators: list          # SL(d, F_p) images, as RingMatrix mod p
    trace_gamma: int
    trace_eta: int
    assignment: dict
    convention: str = "SL"
    scalars: list = field(default_factory=list)

    @property
    def quotient_order_bound(self):
        return self.p ** (self.dimension ** 2 - 1)

    def log_order_bound(self):
        return (self.dimension ** 2 - 1) * math.log(self.p)


def _eval_word_mod(gens, inverses, w, p):
    d = gens[0].dim
    acc = RingMatrix.identity(d, modulus=p)
    for x in w.letters:
        acc = acc @ (gens[x - 1] if x > 0 else inverses[-x - 1])
    return acc


def _inverse_mod(m):
    """Inverse over F_p by Gauss-Jordan elimination."""
    p, n = m.modulus, m.dim
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m.rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] % p), None)
        if piv is None:
            raise BadCertificate("matrix is singular mod p")
        a[c], a[piv] = a[piv], a[c]
        inv = pow(a[c][c], -1, p)
        a[c] = [x * inv % p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return RingMatrix([r[n:] for r in a], p)


def _sl_scalar(det, d, p):
    """Some c with c**d * det == 1 mod p, or None."""
    target = pow(det, -1, p)
    for c in range(1, p):
        if pow(c, d, p) == target:
            return c
    return None


def finite_quotient_certificate(gamma, eta, assignment=None, attempts=FALLBACK_ATTEMPTS):
    if are_conjugate(gamma, eta):
        raise ConjugatePair(f"{gamma} and {eta} are conjugate")
    rep = build_representation(gamma)
    diff = trace_of(rep, gamma) - trace_of(rep, eta)
    schedule = [assignment] if assignment is not None else assignment_schedule(rep, attempts)
    r = rep.rank
    for asg in schedule:
        delta = specialize(diff, asg)
        if delta == 0:
            continue
        images = [specialize_matrix(rep.dense_generator(x), asg) for x in range(1, r + 1)]
        forbidden = [abs(Fraction(asg[n]).numerator)
                     for n, inv in zip(rep.registry.names, rep.registry.invertible) if inv]
        for im in images:
            forbidden.extend(Fraction(e).denominator for row in im.rows for e in row)
        w = _witness_from_images(gamma, eta, images, delta, forbidden, rep.dim, asg)
        if w is not None:
            return w
    raise UnluckySpecialization(f"no separating point found for ({gamma}, {eta})")


def _witness_from_images(gamma, eta, images, delta, forbidden, d, asg):
    start = 2
    for _ in range(MAX_PRIME_TRIES):
        p = find_separating_prime(delta, forbidden, start)
        start = p + 1
        mods = [reduce_mod_p(im, p) for im in images]
        scalars = []
        for m in mods:
            c = _sl_scalar(m.det(), d, p)
            if c is None:
                break
            scalars.append(c)
        else:
            gens = [m.scale(c) for m, c in zip(mods, scalars)]
            invs = [_inverse_mod(g) for g in gens]
            tg = _eval_word_mod(gens, invs, gamma, p).trace()
            te = _eval_word_mod(gens, invs, eta, p).trace()
            if tg != te:
                return FiniteQuotientWitness(gamma.rank, gamma, eta, d, p, gens,
                                             tg, te, dict(asg), "SL", scalars)
    return None


def verify_witness(w):
    """Recheck a witness from its data alone; returns a dict of named checks."""
    p = w.p
    gens = w.generators
    checks = {"prime": all(p % q for q in range(2, math.isqrt(p) + 1)) and p > 1,
              "dimension": all(g.dim == w.dimension and g.modulus == p for g in gens)}
    checks["determinant_one"] = all(g.det() == 1 for g in gens)
    try:
        invs = [_inverse_mod(g) for g in gens]
    except BadCertificate:
        checks["invertible"] = False
        return checks
    tg = _eval_word_mod(gens, invs, w.gamma, p).trace()
    te = _eval_word_mod(gens, invs, w.eta, p).trace()
    checks["trace_gamma"] = tg == w.trace_gamma % p
    checks["trace_eta"] = te == w.trace_eta % p
    checks["traces_differ"] = tg != te
    return checks


def witness_to_json(w):
    return json.dumps({
        "format": WITNESS_FORMAT, "version": WITNESS_VERSION,
        "rank": w.rank, "gamma": str(w.gamma), "eta": str(w.eta),
        "dimension": w.dimension, "p": w.p, "convention": w.convention,
        "assignment": w.assignment, "scalars": w.scalars,
        "generators": [g.tolist() for g in w.generators],
        "trace_gamma": w.trace_gamma, "trace_eta": w.trace_eta,
        "quotient_order_bound": str(w.quotient_order_bound),
    }, sort_keys=True)


def witness_from_json(text):
    try:
        d = json.loads(text) if isinstance(text, str) else text
        if d.get("format") != WITNESS_FORMAT or d.get("version") != WITNESS_VERSION:
            raise ParseError("not a witness of a supported version")
        r, p = d["rank"], d["p"]
        return FiniteQuotientWitness(
            r, parse_word(d["gamma"], r), parse_word(d["eta"], r), d["dimension"], p,
            [RingMatrix(g, p) for g in d["generators"]], d["trace_gamma"],
            d["trace_eta"], d["assignment"], d["convention"], d["scalars"])
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed witness: {exc}") from exc


# -- brute-force oracles ------------------------------------------------------

@dataclass(frozen=True)
class Unknown:
    """No quotient of order <= ``bound`` settles the question."""

    bound: int

    def __str__(self):
        return f"Unknown(>{self.bound})"


def _pmul(p, q):
    # apply p, then q
    return tuple(q[i] for i in p)


def _pinv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _closure(gens, cap):
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _pmul(g, s)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        return None
                    nxt.append(h)
        frontier = nxt
    return frozenset(seen)


def _cycle_type_reps(k):
    reps = {}
    for p in permutations(range(k)):
        seen, ct = set(), []
        for i in range(k):
            if i in seen:
                continue
            j, n = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                n += 1
            ct.append(n)
        reps.setdefault(tuple(sorted(ct)), p)
    return list(reps.values())


@lru_cache(maxsize=8)
def small_homomorphisms(rank, K):
    """All ``(images, image group)`` for maps F_rank -> S_K with image order <= K.

    The first image ranges over cycle-type representatives only; every
    homomorphism is conjugate in S_K to one listed, and conjugation changes
    neither the image order nor conjugacy of images.
    """
    if K < 1:
        return ()
    perms = list(permutations(range(K)))
    out = []
    for first in _cycle_type_reps(K):
        for rest in product(perms, repeat=rank - 1):
            gens = (first,) + rest
            Q = _closure(gens, K)
            if Q is not None:
                out.append((gens, Q))
    return tuple(out)


def _image(gens, w):
    acc = tuple(range(len(gens[0])))
    for x in w.letters:
        g = gens[x - 1] if x > 0 else _pinv(gens[-x - 1])
        acc = _pmul(acc, g)
    return acc


def con_exact_small(gamma, eta, K=6):
    if are_conjugate(gamma, eta):
        raise ConjugatePair(f"{gamma} and {eta} are conjugate")
    best = None
    for gens, Q in small_homomorphisms(gamma.rank, K):
        if best is not None and len(Q) >= best:
            continue
        g, h = _image(gens, gamma), _image(gens, eta)
        if not any(_pmul(_pmul(_pinv(q), g), q) == h for q in Q):
            best = len(Q)
    return Unknown(K) if best is None else best


def d_exact_small(gamma, K=6):
    if not gamma.letters:
        raise TrivialElement("the identity survives in no quotient")
    best = None
    ident = tuple(range(K))
    for gens, Q in small_homomorphisms(gamma.rank, K):
        if best is not None and len(Q) >= best:
            continue
        if _image(gens, gamma) != ident:
            best = len(Q)
    return Unknown(K) if best is None else best


def conj_depth_report(rank, norm, K=6):
    """Rows ``(n, max Con over non-conjugate class pairs of norm <= n, pair)``.

    Values are exact when at most ``K``; an Unknown entry dominates.
    """
    classes = [c.core for n in range(1, norm + 1)
               for c in enumerate_words(rank, n, up_to_conjugacy=True)]
    rows = []
    worst, worst_pair = 0, None
    done = 0
    for n in range(1, norm + 1):
        upto = [c for c in classes if len(c) <= n]
        for i in range(len(upto)):
            for j in range(i + 1, len(upto)):
                if max(i, j) < done:
                    continue
                v = con_exact_small(upto[i], upto[j], K)
                key = K + 1 if isinstance(v, Unknown) else v
                if key > worst:
                    worst, worst_pair = key, (upto[i], upto[j])
        done = len(upto)
        rows.append((n, Unknown(K) if worst > K else worst, worst_pair))
    return rows


def coefficient_growth(gamma, words, assignment=None):
    """``(length, height)`` of specialized rho(w): largest |numerator| or denominator."""
    rep = build_representation(gamma)
    asg = assignment or default_assignment(rep)
    gens = {}
    for x in range(1, rep.rank + 1):
        gens[x] = specialize_matrix(rep.dense_generator(x), asg)
        gens[-x] = specialize_matrix(rep.dense_generator(-x), asg)
    out = []
    for w in words:
        acc = RingMatrix.identity(rep.dim, Fraction(1), Fraction(0))
        for x in w.letters:
            acc = acc @ gens[x]
        out.append((len(w), acc.max_abs_entry()))
    return out
