"""Fox calculus and twisted H^1 of rank-one torsion local systems.

For a character chi of the group presented by <x_1..x_g | r_1..r_s>, the
cochain complex of the presentation 2-complex with coefficients in L_chi is

    C^0 --d1--> C^1 --d2--> C^2,   d1 = (chi(x_j) - 1)_j,  d2 = (chi(dr_i/dx_j)),

so dim H^1 = g - rank(d2) - rank(d1). In degree 1 this is H^1(pi_1, L_chi),
which equals H^1(M, L_chi) for any space M with that fundamental group: no
asphericity is needed below degree 2.

Group ring elements of Z[Z/N] are kept as {exponent: coefficient} dicts and
only pushed to Z[zeta_N] at rank time.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from ..arrgeo import Arrangement, Lattice, intersection_lattice
from ..exact import _power_table, euler_phi, rank_integral_sparse
from .character import Character
from .presentation import GroupPresentation, PresentationError
from .wiring import randell_presentation, wiring_diagram


class FoxIdentityFailure(AssertionError):
    pass


def generator_exponents(pres: GroupPresentation, chi: Character) -> list[int]:
    """Exponent of chi(x_g) in Z/order for every generator, read off the meridians."""
    chi.check_product()
    if len(pres.meridians) != chi.d:
        raise PresentationError(f"presentation has {len(pres.meridians)} meridians, character has {chi.d} entries")
    n = chi.order
    values: list[int | None] = [None] * pres.n_generators
    for line, w in enumerate(pres.meridians):
        if len(w) == 1:
            g = abs(w[0]) - 1
            e = chi.exponents[line] if w[0] > 0 else -chi.exponents[line]
            if values[g] is not None and (values[g] - e) % n:
                raise PresentationError(f"generator {g + 1} is the meridian of two lines with different values")
            values[g] = e % n
    missing = [g + 1 for g, v in enumerate(values) if v is None]
    if missing:
        raise PresentationError(f"generators {missing} are not single-letter meridians of any line")
    out = [int(v) for v in values]  # type: ignore[arg-type]
    for line, w in enumerate(pres.meridians):
        if _word_exponent(w, out, n) != chi.exponents[line] % n:
            raise PresentationError(f"meridian word of line {line} disagrees with the character")
    return out


def _word_exponent(w: Sequence[int], values: Sequence[int], n: int) -> int:
    s = 0
    for a in w:
        s += values[a - 1] if a > 0 else -values[-a - 1]
    return s % n


def fox_row(word: Sequence[int], values: Sequence[int], n: int) -> dict[int, dict[int, int]]:
    """Fox derivatives of one relator, evaluated in Z[Z/n]: {generator: {exponent: coeff}}."""
    row: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    s = 0
    for a in word:
        g = abs(a) - 1
        if a > 0:
            row[g][s] += 1
            s = (s + values[g]) % n
        else:
            s = (s - values[g]) % n
            row[g][s] -= 1
    return {g: {e: c for e, c in d.items() if c} for g, d in row.items()}


def fox_jacobian(pres: GroupPresentation, values: Sequence[int], n: int) -> list[dict[int, dict[int, int]]]:
    return [fox_row(r, values, n) for r in pres.relators]


def check_fox_identity(pres: GroupPresentation, jac, values: Sequence[int], n: int) -> None:
    """sum_j (dr/dx_j)(chi(x_j) - 1) = chi(r) - 1 = 0, exactly in Z[Z/n]."""
    for r, row in zip(pres.relators, jac):
        acc: dict[int, int] = defaultdict(int)
        for g, poly in row.items():
            for e, c in poly.items():
                acc[(e + values[g]) % n] += c
                acc[e] -= c
        if any(acc.values()):
            raise FoxIdentityFailure(f"Fox identity fails for relator {list(r)}")


def _to_cyclotomic(poly: dict[int, int], n: int) -> tuple[int, ...]:
    table = _power_table(n)
    out = [0] * euler_phi(n)
    for e, c in poly.items():
        for j, t in enumerate(table[e % n]):
            if t:
                out[j] += c * t
    return tuple(out)


def twisted_h1_values(pres: GroupPresentation, values: Sequence[int], n: int) -> int:
    """dim H^1 for the character x_g -> zeta_n ** values[g]."""
    values = [v % n for v in values]
    for r in pres.relators:
        if _word_exponent(r, values, n):
            raise PresentationError(f"assignment does not kill relator {list(r)}; not a character")
    jac = fox_jacobian(pres, values, n)
    check_fox_identity(pres, jac, values, n)
    rows = []
    for row in jac:
        sparse = {}
        for g, poly in row.items():
            v = _to_cyclotomic(poly, n)
            if any(v):
                sparse[g] = v
        rows.append(sparse)
    r2 = rank_integral_sparse(rows, pres.n_generators, n)
    r1 = 1 if any(values) else 0
    return pres.n_generators - r2 - r1


def twisted_h1(pres: GroupPresentation, chi: Character) -> int:
    return twisted_h1_values(pres, generator_exponents(pres, chi), chi.order)


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


@dataclass(frozen=True)
class EigenspaceReport:
    """dim H^1(F)_lambda per order of lambda (the same for every primitive root of that order)."""

    d: int
    dims: dict  # order n | d -> dim for each primitive n-th root
    galois_checked: bool = False
    notes: tuple = field(default=())

    @property
    def b1_F(self) -> int:
        return sum(euler_phi(n) * k for n, k in self.dims.items())

    @property
    def weight2_dim(self) -> int:
        return self.dims[1]

    @property
    def weight1_dim(self) -> int:
        return self.b1_F - self.weight2_dim

    def dim(self, order: int) -> int:
        if self.d % order:
            return 0
        return self.dims[order]

    @property
    def trivial_monodromy(self) -> bool:
        return all(k == 0 for n, k in self.dims.items() if n > 1)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "by_order": [
                {"order": n, "roots": euler_phi(n), "dim": k} for n, k in sorted(self.dims.items())
            ],
            "b1_F": self.b1_F,
            "weight2_dim": self.weight2_dim,
            "weight1_dim": self.weight1_dim,
            "trivial_monodromy": self.trivial_monodromy,
        }


def arrangement_presentation(arr: Arrangement, lattice: Lattice | None = None,
                             infinity_line: int | None = None, **kw) -> GroupPresentation:
    return randell_presentation(wiring_diagram(arr, infinity_line, lattice, **kw))


def milnor_eigenspaces(arr: Arrangement, presentation: GroupPresentation | None = None,
                       infinity_line: int | None = None, lattice: Lattice | None = None,
                       all_roots: bool = False) -> EigenspaceReport:
    """Eigenspace dimensions of the Milnor fiber monodromy on H^1.

    Uses dim H^1(F)_lambda = dim H^1(M, L) for the character lambda on every
    line. With ``all_roots`` every primitive root is computed separately and
    the Galois symmetry is asserted; otherwise one root per order.
    """
    d = arr.d
    if presentation is None:
        presentation = arrangement_presentation(arr, lattice or intersection_lattice(arr), infinity_line)
    dims = {}
    for n in divisors(d):
        ks = [k for k in range(1, n + 1) if math.gcd(k, n) == 1] if all_roots else [1]
        vals = {twisted_h1(presentation, Character(n, (k,) * d)) for k in ks}
        if len(vals) != 1:
            raise AssertionError(f"Galois-conjugate eigenspaces of order {n} differ: {sorted(vals)}")
        dims[n] = vals.pop()
    if dims[1] != d - 1:
        raise AssertionError(f"dim H^1(F)_1 = {dims[1]}, expected {d - 1}")
    return EigenspaceReport(d, dims, galois_checked=all_roots)


