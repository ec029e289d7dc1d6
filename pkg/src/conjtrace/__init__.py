"""Conjugacy separability of free groups, made computational.

Words, Hall covers, the induced representation that separates a word from
its non-conjugates, finite-quotient witnesses, trace identities and lifts
of finite quotients to free subgroups of SL(n, Z).
"""

__version__ = "0.1.0"

from .freegroup import ConjClass, Word, are_conjugate, cyclic_canonical, parse_word

__all__ = ["Word", "ConjClass", "parse_word", "cyclic_canonical", "are_conjugate",
           "__version__"]
