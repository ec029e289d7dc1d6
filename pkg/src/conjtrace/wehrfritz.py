"""Wehrfritz's induced representation of F_r attached to a word gamma.

On the Hall subgroup with basis ``(delta, lambda_1, ...)`` put

    tau(delta)    = [[1, 0], [1, 1]]
    tau(lambda_j) = [[X_j, Y_j], [W_j, X_j^-1 (D_j + Y_j W_j)]]

and ``psi = diag(tau, T**k)`` where ``k`` is the exponent sum of ``delta``.
Inducing ``psi`` along the coset action gives ``rho: F_r -> GL(3m)``.

Images are stored block-monomially: ``rho(w)`` sends coset ``j`` to one
coset ``end_j`` with block ``psi(u_j)`` where ``u_j`` is the basis word read
along ``w`` from ``j``.  Dense matrices are available for cross-checks.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import RankMismatch, TrivialElement
from .freegroup import Word, canonical_core
from .hallcover import conjugate_into, hall_completion
from .ring import RingMatrix, VariableRegistry

__all__ = [
    "WehrfritzRep", "InducedTraceBreakdown", "PowerOfGamma",
    "InSubgroupNotPower", "NotInSubgroup", "build_representation",
    "trace_of", "classify", "verify_separation", "power_exponent",
]


@dataclass(frozen=True)
class PowerOfGamma:
    exponent: int

    def __str__(self):
        return f"PowerOfGamma({self.exponent})"


@dataclass(frozen=True)
class InSubgroupNotPower:
    tau: int

    def __str__(self):
        return f"InSubgroupNotPower(tau={self.tau})"


@dataclass(frozen=True)
class NotInSubgroup:
    def __str__(self):
        return "NotInSubgroup"


@dataclass(frozen=True)
class InducedTraceBreakdown:
    fixed_cosets: tuple
    tau_counts: dict
    sl2_trace_sum: object
    total: object
    case: object

    def t_part(self):
        """``sum_j s_j * T**j`` as a polynomial."""
        return self.total - self.sl2_trace_sum


def _var_names(j):
    return (f"X{j}", f"Y{j}", f"W{j}", f"D{j}")


class WehrfritzRep:
    def __init__(self, gamma):
        if not gamma.letters:
            raise TrivialElement("gamma must be nontrivial")
        self.gamma = gamma
        self.rank = gamma.rank
        self.graph, self.cosets, self.conjugator = hall_completion(gamma)
        self.delta = self.cosets.basis[0]
        self.m = self.cosets.index
        self.dim = 3 * self.m
        nb = self.cosets.basis_rank
        names, inv = [], []
        for j in range(1, nb):
            names += _var_names(j)
            inv += [True, False, False, True]
        names.append("T")
        inv.append(True)
        self.registry = VariableRegistry(names, inv)
        self._tau_gen = {}
        R = self.registry
        one, zero = R.one(), R.zero()
        self._tau_gen[1] = RingMatrix([[one, zero], [one, one]])
        self._tau_gen[-1] = RingMatrix([[one, zero], [-one, one]])
        for j in range(1, nb):
            X, Y, W, D = (R.var(n) for n in _var_names(j))
            Xi, Di = R.inv(f"X{j}"), R.inv(f"D{j}")
            z = Xi * (D + Y * W)
            self._tau_gen[j + 1] = RingMatrix([[X, Y], [W, z]])
            self._tau_gen[-(j + 1)] = RingMatrix(
                [[Di * z, -(Di * Y)], [-(Di * W), Di * X]])
        self._check_generators()

    # -- subgroup representation ------------------------------------------
    def tau_matrix(self, basis_word):
        """The 2x2 part of ``psi`` on a word in the subgroup basis."""
        R = self.registry
        acc = RingMatrix.identity(2, R.one(), R.zero())
        for x in basis_word.letters:
            acc = acc @ self._tau_gen[x]
        return acc

    def psi(self, basis_word):
        """``(tau matrix, T exponent)``; the 3x3 block is ``diag(tau, T**k)``."""
        return self.tau_matrix(basis_word), basis_word.signature()[0]

    def psi_block(self, basis_word):
        t, k = self.psi(basis_word)
        R = self.registry
        z = R.zero()
        return RingMatrix([[t[0, 0], t[0, 1], z], [t[1, 0], t[1, 1], z],
                           [z, z, R.var("T") ** k]])

    # -- induced representation -------------------------------------------
    def coset_walk(self, w):
        """For each coset ``j``: ``(end coset, basis word read from j)``."""
        cs = self.cosets
        nb = cs.basis_rank
        out = []
        for j in range(self.m):
            v = j
            letters = []
            for x in w.letters:
                letters.extend(cs.alpha(v, x).letters)
                v = cs.coset_after(v, x)
            out.append((v, Word(letters, nb)))
        return out

    def dense_generator(self, x):
        """Dense ``rho(x)`` for a single letter ``x`` (possibly negative)."""
        return self._dense_from_walk(self.coset_walk(Word((x,), self.rank)))

    def dense_image(self, w):
        """Dense ``rho(w)`` computed as a product of generator matrices."""
        R = self.registry
        acc = RingMatrix.identity(self.dim, R.one(), R.zero())
        for x in w.letters:
            acc = acc @ self._dense_gen(x)
        return acc

    def _dense_gen(self, x):
        cache = self.__dict__.setdefault("_dense_cache", {})
        if x not in cache:
            cache[x] = self.dense_generator(x)
        return cache[x]

    def block_image(self, w):
        return self._dense_from_walk(self.coset_walk(w))

    def _dense_from_walk(self, walk):
        R = self.registry
        z = R.zero()
        n = self.dim
        rows = [[z] * n for _ in range(n)]
        for j, (end, bw) in enumerate(walk):
            b = self.psi_block(bw)
            for a in range(3):
                for c in range(3):
                    rows[3 * j + a][3 * end + c] = b[a, c]
        return RingMatrix(rows)

    def trace(self, w):
        R = self.registry
        total = R.zero()
        T = R.var("T")
        for j, (end, bw) in enumerate(self.coset_walk(w)):
            if end == j:
                t, k = self.psi(bw)
                total = total + t.trace() + T ** k
        return total

    def determinant(self, x):
        """det rho(x) for a letter: sign(sigma) * prod det(psi blocks)."""
        walk = self.coset_walk(Word((x,), self.rank))
        perm = [end for end, _ in walk]
        sign = _perm_sign(perm)
        R = self.registry
        det = R.const(sign)
        for _, bw in walk:
            t, k = self.psi(bw)
            det = det * (t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]) * R.var("T") ** k
        return det

    def _check_generators(self):
        cs = self.cosets
        for x in range(1, self.rank + 1):
            if not self.determinant(x).is_unit():
                raise AssertionError(f"rho(x{x}) is not invertible")
        # rho(theta_j x theta_sigma(j)^-1) at the base coset is psi(alpha)
        base = self.graph.base
        for j in range(self.m):
            for x in range(1, self.rank + 1):
                k = cs.sigma[x - 1][j]
                w = cs.theta[j] * Word((x,), self.rank) * ~cs.theta[k]
                end, bw = self.coset_walk(w)[base]
                if end != base or bw != cs.schreier[j][x - 1]:
                    raise AssertionError("coset relation not reproduced")

    def __repr__(self):
        return f"WehrfritzRep(gamma={self.gamma}, m={self.m})"


def _perm_sign(perm):
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=64)
def build_representation(gamma, rank=None):
    if rank is not None and rank != gamma.rank:
        raise RankMismatch(f"word has rank {gamma.rank}, not {rank}")
    return WehrfritzRep(gamma)


def trace_of(rep, w):
    if w.rank != rep.rank:
        raise RankMismatch("word and representation ranks differ")
    return rep.trace(w)


def power_exponent(eta, gamma):
    """``l`` with ``eta`` conjugate to ``gamma**l``, or None."""
    ce = canonical_core(eta)
    cg = canonical_core(gamma)
    if not cg:
        return None
    if not ce:
        return 0
    if len(ce) % len(cg):
        return None
    q = len(ce) // len(cg)
    for ell in (q, -q):
        if canonical_core(gamma ** ell) == ce:
            return ell
    return None


def classify(rep, eta):
    if not eta.letters:
        raise TrivialElement("eta must be nontrivial")
    if eta.rank != rep.rank:
        raise RankMismatch("word and representation ranks differ")
    R = rep.registry
    T = R.var("T")
    fixed, counts = [], {}
    sl2 = R.zero()
    total = R.zero()
    for j, (end, bw) in enumerate(rep.coset_walk(eta)):
        if end != j:
            continue
        t, k = rep.psi(bw)
        fixed.append(j)
        counts[k] = counts.get(k, 0) + 1
        sl2 = sl2 + t.trace()
        total = total + t.trace() + T ** k
    ell = power_exponent(eta, rep.gamma)
    if ell is not None:
        case = PowerOfGamma(ell)
    else:
        hit = conjugate_into(eta, rep.graph)
        case = NotInSubgroup() if hit is None else InSubgroupNotPower(rep.cosets.tau(hit[1]))
    return InducedTraceBreakdown(tuple(fixed), counts, sl2, total, case)


def verify_separation(rep, eta):
    """True iff rho gives gamma and eta the same trace."""
    return trace_of(rep, rep.gamma) == trace_of(rep, eta)
