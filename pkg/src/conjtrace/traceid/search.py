"""Search for non-conjugate SL(2)-trace equivalent pairs of cyclic words,
optionally testing each pair in SL(3).

Classes are bucketed by generator signature (up to a global sign, since
``w`` and ``w^-1`` share SL(2) traces) and by values of the trace at seeded
points of SL(2, F_P), P = 2^61 - 1.  Equal polynomials give equal values, so
bucketing never separates an equivalent pair; pairs inside a bucket are
then confirmed exactly.  Images of a word under reversal, inversion and
both are always SL(2)-equivalent to it and are not recomputed.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import json
import random

from ..freegroup import Word, canonical_core, enumerate_words, letter_key, parse_word
from ..errors import ParseError
from .common import (FINGERPRINT_PRIME, elementary_product, inverse2_mod,
                     random_sl2_mod, trace_word_mod)
from .fricke import fricke
from .sl3 import TooLarge, sl3_generic_trace

__all__ = ["PairRecord", "SearchReport", "search_pairs", "search_range",
           "report_to_jsonl", "report_from_jsonl", "witness_pairs",
           "SL2", "SL3_SURVIVING", "SL3_REFUTED"]

SL2 = "SL2"
SL3_SURVIVING = "SL3-surviving"
SL3_REFUTED = "SL3-refuted"
REPORT_FORMAT = "conjtrace-search"
REPORT_VERSION = 1
SL2_POINTS = 3


@dataclass(frozen=True)
class PairRecord:
    u: Word
    v: Word
    level: str
    reverse: bool = False
    inverse: bool = False
    reverse_inverse: bool = False
    refutation: str = ""      # "witness:<trial>" or "generic"

    def flags(self):
        out = []
        if self.reverse:
            out.append("reverse-pair")
        if self.inverse:
            out.append("inverse-pair")
        if self.reverse_inverse:
            out.append("reverse-inverse-pair")
        return out

    def line(self):
        extra = f" [{self.refutation}]" if self.refutation else ""
        flags = ",".join(self.flags()) or "-"
        return f"{self.u} {self.v} {self.level}{extra} {flags}"


@dataclass
class SearchReport:
    length: int
    n_test: int
    positive_only: bool
    exclude_reverse: bool
    exclude_inverse: bool
    seed: int
    classes: int = 0
    pairs: list = field(default_factory=list)

    def surviving(self):
        return [p for p in self.pairs if p.level in (SL2, SL3_SURVIVING) and
                (self.n_test == 2 or p.level == SL3_SURVIVING)]

    def __eq__(self, other):
        return report_to_jsonl(self) == report_to_jsonl(other)


def _canon(letters):
    return canonical_core(Word._raw(letters, 2))


def _sort_key(letters):
    return (len(letters), [letter_key(x) for x in letters])


def _sl2_points(seed):
    rng = random.Random(f"sl2-points-{seed}")
    pts = []
    for _ in range(SL2_POINTS):
        A, B = random_sl2_mod(rng, FINGERPRINT_PRIME), random_sl2_mod(rng, FINGERPRINT_PRIME)
        P = FINGERPRINT_PRIME
        pts.append({1: A, -1: inverse2_mod(A, P), 2: B, -2: inverse2_mod(B, P)})
    return pts


def _fingerprint_chunk(args):
    chunk, seed = args
    pts = _sl2_points(seed)
    P = FINGERPRINT_PRIME
    out = []
    for c in chunk:
        out.append(tuple(trace_word_mod(c, m, P) for m in pts))
    return out


def witness_pairs(seed, trials):
    """Seeded integer unimodular pairs shared by witness search and reports."""
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        out.append((elementary_product(rng, 3), elementary_product(rng, 3)))
    return out


class _Sl3Tester:
    def __init__(self, seed, trials):
        from .common import letter_mats
        P = FINGERPRINT_PRIME
        self.mats = []
        for A, B in witness_pairs(seed, trials):
            lm = letter_mats((A, B))
            self.mats.append({x: [[e % P for e in r] for r in m.rows] for x, m in lm.items()})
        self.cache = {}

    def value(self, c, t):
        key = (c, t)
        if key not in self.cache:
            self.cache[key] = trace_word_mod(c, self.mats[t], FINGERPRINT_PRIME)
        return self.cache[key]

    def test(self, u, v):
        for t in range(len(self.mats)):
            if self.value(u, t) != self.value(v, t):
                return SL3_REFUTED, f"witness:{t}"
        try:
            same = sl3_generic_trace(Word._raw(u, 2)) == sl3_generic_trace(Word._raw(v, 2))
        except TooLarge:
            return SL3_SURVIVING, "generic-too-large"
        return (SL3_SURVIVING, "") if same else (SL3_REFUTED, "generic")


def search_pairs(length, n_test=2, positive_only=False, exclude_reverse=False,
                 exclude_inverse=False, seed=1729, trials=25, jobs=1,
                 signature_filter=True):
    if length < 1:
        raise ValueError("length must be at least 1")
    if n_test not in (2, 3):
        raise ValueError("n_test must be 2 or 3")
    classes = [c.core.letters for c in
               enumerate_words(2, length, positive_only=positive_only, up_to_conjugacy=True)]
    report = SearchReport(length, n_test, positive_only, exclude_reverse,
                          exclude_inverse, seed, len(classes))
    fps = _fingerprints(classes, seed, jobs)
    buckets = {}
    for c, fp in zip(classes, fps):
        key = fp
        if signature_filter:
            s = Word._raw(c, 2).signature()
            key = (max(s, tuple(-x for x in s)), fp)
        buckets.setdefault(key, []).append(c)
    tester = _Sl3Tester(seed, trials) if n_test == 3 else None
    pairs = []
    for group in buckets.values():
        if len(group) < 2:
            continue
        group.sort(key=_sort_key)
        for i, u in enumerate(group):
            rev_u = _canon(u[::-1])
            inv_u = _canon(tuple(-x for x in reversed(u)))
            ri_u = _canon(tuple(-x for x in u))
            for v in group[i + 1:]:
                rec = dict(reverse=v == rev_u, inverse=v == inv_u, reverse_inverse=v == ri_u)
                if exclude_reverse and rec["reverse"]:
                    continue
                if exclude_inverse and rec["inverse"]:
                    continue
                if not any(rec.values()) and fricke(Word._raw(u, 2)) != fricke(Word._raw(v, 2)):
                    continue
                level, why = SL2, ""
                if tester is not None:
                    level, why = tester.test(u, v)
                pairs.append(PairRecord(Word._raw(u, 2), Word._raw(v, 2), level,
                                        refutation=why, **rec))
    pairs.sort(key=lambda p: (_sort_key(p.u.letters), _sort_key(p.v.letters)))
    report.pairs = pairs
    return report


def _fingerprints(classes, seed, jobs):
    if jobs <= 1 or len(classes) < 2000:
        return _fingerprint_chunk((classes, seed))
    size = -(-len(classes) // jobs)
    chunks = [(classes[i:i + size], seed) for i in range(0, len(classes), size)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_fingerprint_chunk, chunks))
    return [fp for part in parts for fp in part]


def search_range(max_length, min_length=1, **kw):
    return [search_pairs(L, **kw) for L in range(min_length, max_length + 1)]


def report_to_jsonl(report):
    head = {"format": REPORT_FORMAT, "version": REPORT_VERSION, "length": report.length,
            "n": report.n_test, "positive": report.positive_only,
            "exclude_reverse": report.exclude_reverse,
            "exclude_inverse": report.exclude_inverse, "seed": report.seed,
            "classes": report.classes, "pairs": len(report.pairs)}
    lines = [json.dumps(head, sort_keys=True)]
    for p in report.pairs:
        lines.append(json.dumps({"u": str(p.u), "v": str(p.v), "level": p.level,
                                 "reverse": p.reverse, "inverse": p.inverse,
                                 "reverse_inverse": p.reverse_inverse,
                                 "refutation": p.refutation}, sort_keys=True))
    return "\n".join(lines) + "\n"


def report_from_jsonl(text):
    lines = [json.loads(s) for s in text.splitlines() if s.strip()]
    if not lines:
        raise ParseError("empty report")
    h = lines[0]
    if h.get("format") != REPORT_FORMAT or h.get("version") != REPORT_VERSION:
        raise ParseError("not a search report of a supported version")
    rep = SearchReport(h["length"], h["n"], h["positive"], h["exclude_reverse"],
                       h["exclude_inverse"], h["seed"], h["classes"])
    for d in lines[1:]:
        rep.pairs.append(PairRecord(parse_word(d["u"]), parse_word(d["v"]), d["level"],
                                    d["reverse"], d["inverse"], d["reverse_inverse"],
                                    d["refutation"]))
    if len(rep.pairs) != h["pairs"]:
        raise ParseError("pair count does not match the header")
    return rep
