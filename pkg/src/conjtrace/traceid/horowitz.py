"""Horowitz's recursive families of SL(2)-trace equivalent words."""

from dataclasses import dataclass
from itertools import product

from ..freegroup import Word

__all__ = ["HorowitzParams", "horowitz_word", "horowitz_family"]


@dataclass(frozen=True)
class HorowitzParams:
    depth: int
    signs: tuple

    def __post_init__(self):
        if self.depth < 0 or len(self.signs) != self.depth:
            raise ValueError("need exactly one sign per level")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")


def horowitz_word(params):
    """``w_0 = a``; ``w_k = w^-e b^2k w^e b^(2k-1) w^-e b^2k w^e`` with ``w = w_{k-1}``."""
    w = Word((1,), 2)
    b = Word((2,), 2)
    for k, e in enumerate(params.signs, start=1):
        u, v = w ** -e, w ** e
        w = u * b ** (2 * k) * v * b ** (2 * k - 1) * u * b ** (2 * k) * v
    return w


def horowitz_family(depth):
    return [horowitz_word(HorowitzParams(depth, s))
            for s in product((1, -1), repeat=depth)]
