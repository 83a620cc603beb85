from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from ..exact import Cyclo


class ProductNotOne(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    """Rank-one torsion character: line i has monodromy zeta_order ** exponents[i].

    Stored in lowest terms: ``order`` is the lcm of the orders of the entries.
    """

    order: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        n = self.order
        exps = tuple(e % n for e in self.exponents)
        g = reduce(math.gcd, exps, n)
        object.__setattr__(self, "order", n // g)
        object.__setattr__(self, "exponents", tuple(e // g for e in exps))

    @classmethod
    def diagonal(cls, d: int, order: int, k: int = 1) -> "Character":
        """lambda = zeta_order**k on each of d lines."""
        return cls(order, (k,) * d)

    @property
    def lambdas(self) -> tuple[Cyclo, ...]:
        return tuple(Cyclo.root(self.order, e) for e in self.exponents)

    @property
    def d(self) -> int:
        return len(self.exponents)

    def is_trivial(self) -> bool:
        return self.order == 1

    def check_product(self) -> None:
        if sum(self.exponents) % self.order:
            raise ProductNotOne(f"product of monodromies is not 1 for {self}")

    def to_json(self) -> dict:
        return {"order": self.order, "exponents": list(self.exponents)}

    @classmethod
    def from_json(cls, data) -> "Character":
        return cls(int(data["order"]), tuple(int(e) for e in data["exponents"]))


def character_from_values(values: Sequence[tuple[int, int]]) -> Character:
    """Build from per-line (order, exponent) pairs."""
    n = reduce(lambda a, b: a * b // math.gcd(a, b), (o for o, _ in values), 1)
    return Character(n, tuple(e * (n // o) for o, e in values))
