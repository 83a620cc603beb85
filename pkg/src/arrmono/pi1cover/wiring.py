"""Wiring diagrams of complexified-real arrangements and their pi_1 presentations.

Deconing at a chosen line puts the other lines in an affine chart (u, v).
After a rational shear u' = u + t*v, no line is vertical and the affine
multiple points have distinct u'. Sweeping u' left to right, each line is
the graph v = m*u' + q, and at every multiple point a consecutive block of
wires reverses.

The presentation is the Zariski-van Kampen one. Base fiber: the vertical
line far to the left, base point high up the imaginary v-axis, generator x_p
a counterclockwise lasso around the wire at position p (positions counted
bottom to top), so x_1 x_2 ... x_n bounds a disk around all wires. Passing a
multiple point along the real axis (dodging it on one fixed side) acts on
the current lassos y_s..y_t of the crossing block by the half twist

    y'_{s+j} = A_{m-1-j} y_{t-j} A_{m-1-j}^-1,  A_i = y_s y_{s+1} ... y_{s+i-1},

which preserves the product y_s...y_t. The loop around the point gives the
full twist, i.e. the relations y_s...y_t = (its cyclic rotations).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count

from ..arrgeo import Arrangement, Lattice, intersection_lattice
from .presentation import GroupPresentation
from .words import Word, inverse, product


class NotReal(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    u: Fraction
    point: int  # lattice index
    start: int  # lowest position of the block before the crossing
    local_order: tuple[int, ...]  # line indices bottom to top, before the crossing

    @property
    def lines(self) -> tuple[int, ...]:
        return tuple(sorted(self.local_order))

    @property
    def multiplicity(self) -> int:
        return len(self.local_order)


@dataclass(frozen=True)
class WiringDiagram:
    d: int
    infinity_line: int
    shear: Fraction
    slopes: dict  # line -> (m, q) with v = m*u' + q
    initial_order: tuple[int, ...]  # affine lines bottom to top at the far left
    crossings: tuple[Crossing, ...]


def _rational_triple(arr: Arrangement, i: int) -> tuple[Fraction, Fraction, Fraction]:
    ln = arr.lines[i]
    if not ln.is_rational():
        raise NotReal(f"line {i} ({ln}) has a non-rational coefficient")
    return tuple(c.to_fraction() for c in ln.coeffs)  # type: ignore[return-value]


def _shear_candidates():
    yield Fraction(0)
    for n in count(1):
        for p in range(1, n + 1):
            for s in (1, -1):
                q = n + 1 - p
                yield Fraction(s * p, q)


def wiring_diagram(arr: Arrangement, infinity_line: int | None = None, lattice: Lattice | None = None,
                   shear: Fraction | int | None = None, skip: int = 0) -> WiringDiagram:
    """Deconed wiring diagram.

    ``shear`` forces a particular sweep direction; otherwise the first generic
    candidate (after skipping ``skip`` generic ones) is used.
    """
    d = arr.d
    inf = d - 1 if infinity_line is None else infinity_line
    if not 0 <= inf < d:
        raise ValueError(f"infinity line {inf} out of range")
    forms = [_rational_triple(arr, i) for i in range(d)]
    lattice = lattice or intersection_lattice(arr)

    # coordinates (u, v) = the two coordinates other than the pivot of f_inf
    f_inf = forms[inf]
    k = next(j for j in range(3) if f_inf[j])
    j1, j2 = [j for j in range(3) if j != k]
    # x_k = (w - sum_{j != k} f_inf[j] x_j) / f_inf[k]
    aff = {}
    for i, f in enumerate(forms):
        if i == inf:
            continue
        r = f[k] / f_inf[k]
        aff[i] = (f[j1] - r * f_inf[j1], f[j2] - r * f_inf[j2], r)  # A u + B v + C = 0

    pts = []
    for idx, pt in enumerate(lattice.points):
        if inf in pt.incident:
            continue
        p = [c.to_fraction() for c in pt.point]
        w = sum(a * b for a, b in zip(f_inf, p))
        pts.append((idx, p[j1] / w, p[j2] / w))

    def generic(t: Fraction) -> bool:
        if any(b - a * t == 0 for a, b, _ in aff.values()):
            return False
        us = [u + t * v for _, u, v in pts]
        return len(set(us)) == len(us)

    if shear is not None:
        t = Fraction(shear)
        if not generic(t):
            raise ValueError(f"shear {t} is not generic for this arrangement")
    else:
        gen = (t for t in _shear_candidates() if generic(t))
        for _ in range(skip):
            next(gen)
        t = next(gen)

    slopes = {}
    for i, (a, b, c) in aff.items():
        den = b - a * t
        slopes[i] = (-a / den, -c / den)

    events = sorted((u + t * v, idx) for idx, u, v in pts)
    u0 = (events[0][0] - 1) if events else Fraction(0)
    order = sorted(slopes, key=lambda i: (slopes[i][0] * u0 + slopes[i][1], -slopes[i][0]))
    initial = tuple(order)
    crossings = []
    for u, idx in events:
        through = [i for i in lattice.points[idx].incident if i != inf]
        pos = sorted(order.index(i) for i in through)
        s, e = pos[0], pos[-1]
        if e - s + 1 != len(pos):
            raise AssertionError("wires through a multiple point are not adjacent")
        block = tuple(order[s:e + 1])
        crossings.append(Crossing(u, idx, s, block))
        order[s:e + 1] = reversed(block)
    return WiringDiagram(d, inf, t, slopes, initial, tuple(crossings))


def randell_presentation(wd: WiringDiagram) -> GroupPresentation:
    n = len(wd.initial_order)
    y: list[Word] = [(p + 1,) for p in range(n)]
    relators = []
    for cr in wd.crossings:
        s, m = cr.start, cr.multiplicity
        local = y[s:s + m]
        full = product(*local)
        for r in range(1, m):
            rot = product(*local[r:], *local[:r])
            relators.append(product(full, inverse(rot)))
        prefixes = [()]
        for w in local[:-1]:
            prefixes.append(product(prefixes[-1], w))
        y[s:s + m] = [product(prefixes[m - 1 - j], local[m - 1 - j], inverse(prefixes[m - 1 - j])) for j in range(m)]
    meridians: list[Word] = [()] * wd.d
    for p, line in enumerate(wd.initial_order):
        meridians[line] = (p + 1,)
    meridians[wd.infinity_line] = tuple(-(p + 1) for p in reversed(range(n)))
    return GroupPresentation(n, tuple(relators), tuple(meridians))
