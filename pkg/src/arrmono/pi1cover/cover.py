"""Cyclic covers via Reidemeister-Schreier, and the deck action on H_1 of the cover."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exact import cyclotomic_poly, euler_phi
from .character import Character
from .fox import divisors, generator_exponents, twisted_h1, twisted_h1_values
from .presentation import GroupPresentation
from .words import Word, abelianize, inverse, product


class NotSurjective(ValueError):
    pass


@dataclass(frozen=True)
class CoverPresentation:
    """Presentation of K = ker(G -> Z/d) on Schreier generators s_(c, g) = T_c x_g T_(c+v_g)^-1."""

    base: GroupPresentation
    images: tuple[int, ...]
    d: int
    transversal: tuple[Word, ...]  # T_c, a word in the base generators of image c
    index: dict  # (coset, base generator) -> 1-based generator of K, absent for tree edges
    presentation: GroupPresentation

    def rewrite(self, word: Sequence[int], start: int = 0) -> Word:
        """Rewrite a word of G lying in K (when read from coset ``start``)."""
        c = start
        out = []
        for a in word:
            g = abs(a) - 1
            if a > 0:
                s = self.index.get((c, g))
                if s:
                    out.append(s)
                c = (c + self.images[g]) % self.d
            else:
                c = (c - self.images[g]) % self.d
                s = self.index.get((c, g))
                if s:
                    out.append(-s)
        if c != start:
            raise ValueError("word does not lie in the subgroup")
        return product(out)

    def base_word(self, s: int) -> Word:
        """The element of G represented by generator s of K."""
        c, g = self.generator_of[s]
        return product(self.transversal[c], (g + 1,), inverse(self.transversal[(c + self.images[g]) % self.d]))

    @property
    def generator_of(self) -> dict:
        return {s: key for key, s in self.index.items()}

    @property
    def deck_word(self) -> Word:
        return self.transversal[1 % self.d]


def subgroup_presentation(pres: GroupPresentation, images: Sequence[int], d: int) -> CoverPresentation:
    g = pres.n_generators
    images = tuple(int(v) % d for v in images)
    if len(images) != g:
        raise ValueError(f"{len(images)} images for {g} generators")
    if math.gcd(math.gcd(*images) if images else 0, d) != 1:
        raise NotSurjective(f"images {list(images)} do not generate Z/{d}")
    # BFS spanning tree of the coset graph
    transversal: list[Word | None] = [None] * d
    transversal[0] = ()
    tree = set()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for j in range(g):
            nxt = (c + images[j]) % d
            if transversal[nxt] is None:
                transversal[nxt] = product(transversal[c], (j + 1,))
                tree.add((c, j))
                queue.append(nxt)
    index = {}
    for c in range(d):
        for j in range(g):
            if (c, j) not in tree:
                index[(c, j)] = len(index) + 1
    cov = CoverPresentation(pres, images, d, tuple(transversal), index, GroupPresentation(len(index), ()))
    relators = tuple(cov.rewrite(r, c) for r in pres.relators for c in range(d))
    kpres = GroupPresentation(len(index), relators)
    return CoverPresentation(pres, images, d, tuple(transversal), index, kpres)


def restricted_exponents(cov: CoverPresentation, base_values: Sequence[int], n: int) -> list[int]:
    """Values on the generators of K of a character of G given on base generators."""
    t = [sum(base_values[abs(a) - 1] * (1 if a > 0 else -1) for a in w) for w in cov.transversal]
    out = [0] * cov.presentation.n_generators
    for (c, g), s in cov.index.items():
        out[s - 1] = (t[c] + base_values[g] - t[(c + cov.images[g]) % cov.d]) % n
    return out


# --- rational linear algebra on H_1(K; Q) -------------------------------------


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    # sparse Gauss-Jordan; relation matrices of covers are mostly zeros
    sparse = [{j: Fraction(x) for j, x in enumerate(r) if x} for r in rows]
    sparse = [r for r in sparse if r]
    done: list[dict] = []
    pivots: list[int] = []
    for c in range(ncols):
        p = next((i for i, r in enumerate(sparse) if c in r), None)
        if p is None:
            continue
        row = sparse.pop(p)
        inv = 1 / row[c]
        row = {j: x * inv for j, x in row.items()}
        for group in (sparse, done):
            for other in group:
                f = other.get(c)
                if f:
                    for j, y in row.items():
                        v = other.get(j, 0) - f * y
                        if v:
                            other[j] = v
                        else:
                            other.pop(j, None)
        sparse = [r for r in sparse if r]
        done.append(row)
        pivots.append(c)
    dense = [[r.get(j, Fraction(0)) for j in range(ncols)] for r in done]
    return dense, pivots


def _matmul(a, b):
    return [[sum(x * b[k][j] for k, x in enumerate(row)) for j in range(len(b[0]))] for row in a]


def _nullity(m: list[list[Fraction]]) -> int:
    if not m:
        return 0
    _, piv = _rref(m, len(m[0]))
    return len(m[0]) - len(piv)


def _poly_at(coeffs: Sequence[int], b: list[list[Fraction]]) -> list[list[Fraction]]:
    size = len(b)
    out = [[Fraction(0)] * size for _ in range(size)]
    for c in reversed(coeffs):  # Horner
        out = _matmul(out, b) if size else out
        for i in range(size):
            out[i][i] += c
    return out


def deck_matrix(cov: CoverPresentation) -> list[list[Fraction]]:
    """Action of conjugation by the deck word on H_1(K; Q), in a basis of free columns."""
    kp = cov.presentation
    ncols = kp.n_generators
    rel = [[Fraction(x) for x in row] for row in kp.abelian_matrix()]
    red, pivots = _rref(rel, ncols) if rel else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]

    def project(v: list[int]) -> list[Fraction]:
        out = [Fraction(v[f]) for f in free]
        for row, p in zip(red, pivots):
            if v[p]:
                for k, f in enumerate(free):
                    out[k] -= v[p] * row[f]
        return out

    t = cov.deck_word
    cols = []
    for f in free:
        image = cov.rewrite(product(t, cov.base_word(f + 1), inverse(t)))
        cols.append(project(abelianize(image, ncols)))
    b = len(free)
    return [[cols[j][i] for j in range(b)] for i in range(b)]


@dataclass(frozen=True)
class PullbackCheck:
    character: Character
    base_dim: int
    cover_dim: int

    @property
    def ok(self) -> bool:
        return self.base_dim <= self.cover_dim

    def to_json(self) -> dict:
        return {**self.character.to_json(), "base_dim": self.base_dim, "cover_dim": self.cover_dim, "ok": self.ok}


@dataclass(frozen=True)
class CoverMonodromy:
    d: int
    b1: int  # rank of H_1(K)
    character_dims: dict  # order n | d -> dim of each primitive n-th root eigenspace
    pullback_checks: tuple[PullbackCheck, ...]

    @property
    def trivial(self) -> bool:
        return all(k == 0 for n, k in self.character_dims.items() if n > 1)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "b1": self.b1,
            "trivial": self.trivial,
            "by_order": [{"order": n, "dim": k} for n, k in sorted(self.character_dims.items())],
            "pullback_checks": [p.to_json() for p in self.pullback_checks],
        }


def cover_monodromy(pres: GroupPresentation, images: Sequence[int], d: int,
                    characters: Sequence[Character] = (), cover: CoverPresentation | None = None) -> CoverMonodromy:
    cov = cover or subgroup_presentation(pres, images, d)
    b = deck_matrix(cov)
    size = len(b)
    ident = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    power = ident
    for _ in range(d):
        power = _matmul(power, b) if size else power
    if power != ident:
        raise AssertionError("deck transformation does not have order dividing d on H_1")
    dims = {}
    for n in divisors(d):
        null = _nullity(_poly_at(cyclotomic_poly(n), b)) if size else 0
        if null % euler_phi(n):
            raise AssertionError(f"eigenspace of order {n} is not Galois-stable")
        dims[n] = null // euler_phi(n)
    if sum(euler_phi(n) * k for n, k in dims.items()) != size:
        raise AssertionError("eigenspaces do not fill H_1 of the cover")
    checks = []
    for chi in characters:
        vals = generator_exponents(pres, chi)
        base = twisted_h1(pres, chi)
        up = twisted_h1_values(cov.presentation, restricted_exponents(cov, vals, chi.order), chi.order)
        checks.append(PullbackCheck(chi, base, up))
    return CoverMonodromy(d, size, dims, tuple(checks))


def milnor_images(pres: GroupPresentation, d: int) -> list[int]:
    """Images in Z/d sending the meridian of every line to 1."""
    return generator_exponents(pres, Character(d, (1,) * len(pres.meridians)))
