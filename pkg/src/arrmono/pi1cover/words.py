"""Words in free groups: letters are signed 1-based generator indices."""
from __future__ import annotations

from typing import Iterable, Sequence

Word = tuple[int, ...]


def reduce_word(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("0 is not a generator letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-a for a in reversed(w))


def product(*words: Sequence[int]) -> Word:
    return reduce_word(a for w in words for a in w)


def conjugate(w: Sequence[int], by: Sequence[int]) -> Word:
    """by * w * by^-1."""
    return product(by, w, inverse(by))


def abelianize(w: Sequence[int], n: int) -> list[int]:
    v = [0] * n
    for a in w:
        v[abs(a) - 1] += 1 if a > 0 else -1
    return v


def exponent_sum(w: Sequence[int], values: Sequence[int], modulus: int) -> int:
    """Image of w under generator -> values[g] in Z/modulus."""
    s = 0
    for a in w:
        s += values[abs(a) - 1] if a > 0 else -values[abs(a) - 1]
    return s % modulus if modulus else s
