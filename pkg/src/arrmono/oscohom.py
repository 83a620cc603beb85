"""Degree <= 2 Orlik-Solomon algebra, Aomoto complexes and first resonance.

Resonance of the projective complement is computed inside the central
algebra: for alpha != 0 with sum(alpha) = 0,
dim H^1(A, alpha) = dim ker(mu_alpha : A^1 -> A^2) - 1, the -1 accounting
for alpha itself, which always lies in the kernel.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .arrgeo import Arrangement, FlatPoint, Lattice
from .exact import Cyclo, common_order, rank, saturation_basis
from .pi1cover.character import Character

if TYPE_CHECKING:
    from .multinet import MultinetStructure

__all__ = [
    "SigmaNonZero",
    "IrrationalSpan",
    "ConsistencyError",
    "OS2",
    "ResonanceComponent",
    "os2_structure",
    "cup",
    "aomoto_h1",
    "resonance_components",
    "torsion_points",
    "in_span",
]


class SigmaNonZero(ValueError):
    pass


class IrrationalSpan(ValueError):
    pass


class ConsistencyError(AssertionError):
    pass


@dataclass(frozen=True)
class OS2:
    """Degree-2 part of the Orlik-Solomon algebra.

    Basis element (X, t) stands for e_{i1} e_{it}, i1 the least line through X.
    ``table[(i, j)]`` (i < j) expands e_i e_j as {basis index: +-1}.
    """

    d: int
    basis: tuple[tuple[int, int], ...]
    table: dict

    @property
    def dim2(self) -> int:
        return len(self.basis)

    def product(self, i: int, j: int) -> dict[int, int]:
        if i == j:
            return {}
        if i < j:
            return self.table[(i, j)]
        return {b: -c for b, c in self.table[(j, i)].items()}


def os2_structure(arr: Arrangement, lattice: Lattice) -> OS2:
    basis = []
    index = {}
    for k, pt in enumerate(lattice.points):
        anchor = pt.incident[0]
        for line in pt.incident[1:]:
            index[(k, line)] = len(basis)
            basis.append((k, line))
    table = {}
    for k, pt in enumerate(lattice.points):
        anchor = pt.incident[0]
        for i, j in itertools.combinations(pt.incident, 2):
            if i == anchor:
                table[(i, j)] = {index[(k, j)]: 1}
            else:
                # e_i e_j = e_a e_j - e_a e_i
                table[(i, j)] = {index[(k, j)]: 1, index[(k, i)]: -1}
    return OS2(arr.d, tuple(basis), table)


def _as_cyclo(alpha: Sequence) -> list[Cyclo]:
    vals = [Cyclo.coerce(a) for a in alpha]
    n = common_order(vals)
    return [v.lift(n) for v in vals]


def cup(os2: OS2, u: Sequence, v: Sequence) -> list[Cyclo]:
    """u * v in A^2, as coordinates in the OS2 basis."""
    u, v = _as_cyclo(u), _as_cyclo(v)
    n = common_order(u + v)
    out = [Cyclo.zero(n) for _ in range(os2.dim2)]
    for i, a in enumerate(u):
        if a.is_zero():
            continue
        for j, b in enumerate(v):
            if i == j or b.is_zero():
                continue
            ab = a * b
            for idx, c in os2.product(i, j).items():
                out[idx] = out[idx] + ab * c
    return out


def multiplication_matrix(os2: OS2, alpha: Sequence) -> list[list[Cyclo]]:
    """Matrix of mu_alpha : A^1 -> A^2 (columns indexed by e_i)."""
    alpha = _as_cyclo(alpha)
    n = common_order(alpha)
    m = [[Cyclo.zero(n) for _ in range(os2.d)] for _ in range(os2.dim2)]
    for i in range(os2.d):
        for j, a in enumerate(alpha):
            if i == j or a.is_zero():
                continue
            for idx, c in os2.product(i, j).items():
                m[idx][i] = m[idx][i] + a * c
    return m


def aomoto_h1(os2: OS2, alpha: Sequence) -> int:
    """dim H^1(A, mu_alpha) for alpha in H^1 of the projective complement."""
    alpha = _as_cyclo(alpha)
    if len(alpha) != os2.d:
        raise ValueError(f"alpha has {len(alpha)} coordinates, arrangement has {os2.d} lines")
    total = sum(alpha, Cyclo.zero(alpha[0].order))
    if not total.is_zero():
        raise SigmaNonZero(f"coordinates of alpha sum to {total}, not 0")
    if all(a.is_zero() for a in alpha):
        return os2.d - 1
    m = multiplication_matrix(os2, alpha)
    kernel_dim = os2.d - (rank(m, os2.d) if m else 0)
    return kernel_dim - 1


@dataclass(frozen=True)
class ResonanceComponent:
    span: tuple[tuple[Cyclo, ...], ...]
    provenance: str  # "local" or "multinet"
    source: object  # FlatPoint for local, MultinetStructure for multinet
    order: int = 1

    @property
    def dimension(self) -> int:
        return len(self.span)

    def is_rational(self) -> bool:
        return all(c.is_rational() for v in self.span for c in v)


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return all(Cyclo.coerce(x).is_zero() for x in v)
    base = rank([list(w) for w in vectors])
    return rank([list(w) for w in vectors] + [list(v)]) == base


def _contained(a: ResonanceComponent, b: ResonanceComponent) -> bool:
    return all(in_span(b.span, v) for v in a.span)


def local_span(d: int, pt: FlatPoint, order: int = 1) -> tuple[tuple[Cyclo, ...], ...]:
    first = pt.incident[0]
    vecs = []
    for i in pt.incident[1:]:
        v = [Cyclo.zero(order)] * d
        v[i] = Cyclo.one(order)
        v[first] = Cyclo.rational(-1, order)
        vecs.append(tuple(v))
    return tuple(vecs)


def multinet_span(d: int, mn: "MultinetStructure", order: int = 1) -> tuple[tuple[Cyclo, ...], ...]:
    def class_vector(cls):
        v = [Cyclo.zero(order)] * d
        for i in cls:
            v[i] = Cyclo.rational(mn.mu[i], order)
        return v

    v1 = class_vector(mn.classes[0])
    return tuple(tuple(a - b for a, b in zip(class_vector(c), v1)) for c in mn.classes[1:])


def check_component(os2: OS2, comp: ResonanceComponent) -> tuple[bool, int]:
    """(isotropic, minimum aomoto_h1 over the spanning vectors)."""
    iso = all(
        all(c.is_zero() for c in cup(os2, u, v))
        for u, v in itertools.combinations(comp.span, 2)
    )
    return iso, min(aomoto_h1(os2, v) for v in comp.span)


def resonance_components(
    arr: Arrangement,
    lattice: Lattice,
    multinet_list: Sequence["MultinetStructure"] = (),
    os2: OS2 | None = None,
    verify: bool = True,
) -> list[ResonanceComponent]:
    """Local components (points of multiplicity >= 3) and multinet components.

    Duplicates and components contained in an earlier or larger one are dropped.
    """
    d = arr.d
    comps = [
        ResonanceComponent(local_span(d, pt), "local", pt)
        for pt in lattice.points
        if pt.multiplicity >= 3
    ]
    for mn in multinet_list:
        comps.append(ResonanceComponent(multinet_span(d, mn), "multinet", mn))
    kept: list[ResonanceComponent] = []
    for c in comps:
        if any(_contained(c, k) for k in kept):
            continue
        kept = [k for k in kept if not _contained(k, c)] + [c]
    # restore canonical order: locals by point order, then multinets in input order
    order = {id(c): n for n, c in enumerate(comps)}
    kept.sort(key=lambda c: order[id(c)])
    if verify:
        os2 = os2 or os2_structure(arr, lattice)
        for c in kept:
            iso, low = check_component(os2, c)
            if not iso:
                raise ConsistencyError(f"{c.provenance} component is not isotropic")
            if low < 1:
                raise ConsistencyError(f"{c.provenance} component has a non-resonant spanning vector")
    return kept


def torsion_points(component: ResonanceComponent, order: int) -> list[Character]:
    """Nontrivial N-torsion characters exp(2 pi i a), a in the span with a in (1/N) Z^d."""
    if not component.is_rational():
        raise IrrationalSpan("torsion points need a rationally spanned component")
    if order < 1:
        raise ValueError("order must be positive")
    d = len(component.span[0])
    basis = saturation_basis(component.span, d)
    out = set()
    for coeffs in itertools.product(range(order), repeat=len(basis)):
        exps = [0] * d
        for c, w in zip(coeffs, basis):
            if c:
                for i, x in enumerate(w):
                    exps[i] += c * x
        ch = Character(order, tuple(exps))
        if not ch.is_trivial():
            out.add(ch)
    return sorted(out, key=lambda ch: (ch.order, ch.exponents))
