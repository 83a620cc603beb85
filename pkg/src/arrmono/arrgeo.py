"""Projective line arrangements, their intersection lattice, and the catalog."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .exact import Cyclo, common_order

__all__ = [
    "ArrangementError",
    "DuplicateLine",
    "ZeroForm",
    "UnknownName",
    "ProjLine",
    "Arrangement",
    "FlatPoint",
    "Lattice",
    "validate_arrangement",
    "intersection_lattice",
    "builtin",
    "BUILTIN_NAMES",
    "load_arrangement",
    "arrangement_to_json",
]


class ArrangementError(ValueError):
    """Malformed arrangement input."""


class DuplicateLine(ArrangementError):
    def __init__(self, i: int, j: int):
        super().__init__(f"lines {i} and {j} are proportional")
        self.i, self.j = i, j


class ZeroForm(ArrangementError):
    def __init__(self, i: int):
        super().__init__(f"line {i} has all coefficients zero")
        self.i = i


class UnknownName(ArrangementError):
    pass


def _normalize_triple(coeffs: Sequence[Cyclo]) -> tuple[Cyclo, Cyclo, Cyclo] | None:
    lead = next((c for c in coeffs if not c.is_zero()), None)
    if lead is None:
        return None
    inv = lead.inverse()
    return tuple(c * inv for c in coeffs)  # type: ignore[return-value]


@dataclass(frozen=True)
class ProjLine:
    """Line a*x + b*y + c*z = 0, scaled so its first nonzero coefficient is 1."""

    coeffs: tuple[Cyclo, Cyclo, Cyclo]

    def __call__(self, point: Sequence[Cyclo]) -> Cyclo:
        return sum((a * p for a, p in zip(self.coeffs, point)), Cyclo.zero(self.coeffs[0].order))

    def key(self) -> tuple:
        return tuple(c.sort_key() for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def __str__(self):
        terms = []
        for c, v in zip(self.coeffs, "xyz"):
            if c.is_zero():
                continue
            s = "" if c == 1 else "-" if c == -1 else f"{c}*"
            terms.append(f"{s}{v}")
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class Arrangement:
    name: str
    lines: tuple[ProjLine, ...]
    order: int = 1

    @property
    def d(self) -> int:
        return len(self.lines)

    def is_real(self) -> bool:
        return all(ln.is_rational() for ln in self.lines)


@dataclass(frozen=True)
class FlatPoint:
    point: tuple[Cyclo, Cyclo, Cyclo]
    incident: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.incident)

    def key(self) -> tuple:
        return tuple(c.sort_key() for c in self.point)


@dataclass(frozen=True)
class Lattice:
    points: tuple[FlatPoint, ...]
    d: int
    _pair_index: dict = field(default_factory=dict, compare=False, repr=False)

    def point_of(self, i: int, j: int) -> int:
        """Index of the point where lines i and j meet."""
        if i > j:
            i, j = j, i
        return self._pair_index[(i, j)]

    def points_on(self, i: int) -> list[int]:
        return [k for k, p in enumerate(self.points) if i in p.incident]

    def multiplicities(self) -> list[int]:
        return [p.multiplicity for p in self.points]

    def restrict(self, support: Sequence[int]) -> list[tuple[int, tuple[int, ...]]]:
        """Points of the subarrangement ``support``: (point index, incident support lines)."""
        s = set(support)
        out = []
        for k, p in enumerate(self.points):
            inc = tuple(i for i in p.incident if i in s)
            if len(inc) >= 2:
                out.append((k, inc))
        return out


def validate_arrangement(raw: Sequence[Sequence], order: int | None = None, name: str = "custom") -> Arrangement:
    if not raw:
        raise ArrangementError("an arrangement needs at least one line")
    triples = []
    for i, t in enumerate(raw):
        if len(t) != 3:
            raise ArrangementError(f"line {i}: expected 3 coefficients, got {len(t)}")
        triples.append([Cyclo.coerce(c) for c in t])
    n = common_order([c for t in triples for c in t])
    if order is not None:
        if order % n:
            raise ArrangementError(f"coefficients need Q(zeta_{n}), not contained in Q(zeta_{order})")
        n = order
    lines = []
    for i, t in enumerate(triples):
        norm = _normalize_triple([c.lift(n) for c in t])
        if norm is None:
            raise ZeroForm(i)
        lines.append(ProjLine(norm))
    seen: dict[tuple, int] = {}
    for i, ln in enumerate(lines):
        k = ln.key()
        if k in seen:
            raise DuplicateLine(seen[k], i)
        seen[k] = i
    return Arrangement(name, tuple(lines), n)


def _cross(a: Sequence[Cyclo], b: Sequence[Cyclo]) -> tuple[Cyclo, Cyclo, Cyclo]:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def intersection_lattice(arr: Arrangement) -> Lattice:
    groups: dict[tuple, set[int]] = {}
    coords: dict[tuple, tuple] = {}
    for i, j in combinations(range(arr.d), 2):
        p = _normalize_triple(_cross(arr.lines[i].coeffs, arr.lines[j].coeffs))
        assert p is not None
        key = tuple(c.sort_key() for c in p)
        groups.setdefault(key, set()).update((i, j))
        coords[key] = p
    points = []
    for key in sorted(groups):
        p = coords[key]
        inc = tuple(sorted(groups[key]))
        # pairwise grouping must agree with direct incidence
        direct = tuple(i for i, ln in enumerate(arr.lines) if ln(p).is_zero())
        assert direct == inc, (direct, inc)
        points.append(FlatPoint(p, inc))
    pair_index = {}
    for k, pt in enumerate(points):
        for i, j in combinations(pt.incident, 2):
            pair_index[(i, j)] = k
    return Lattice(tuple(points), arr.d, pair_index)


# ---------------------------------------------------------------------------
# catalog

# Rational realization of the Pappus configuration: the lines y=0 and y=z
# carry A=(0,1,3) and B=(1,3,4); six joins A_iB_j (i != j) and the Pappus line.
_PAPPUS = [
    (0, 1, 0), (0, 1, -1),
    (1, -3, 0), (1, -4, 0), (1, 0, -1), (1, -3, -1), (1, 2, -3), (1, 0, -3),
    (1, -6, 1),
]


def _a3() -> list:
    return [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (0, 1, -1), (1, 0, -1)]


def _b3() -> list:
    return [
        (1, 0, 0), (0, 1, 0), (0, 0, 1),
        (1, -1, 0), (1, 1, 0), (0, 1, -1), (0, 1, 1), (1, 0, -1), (1, 0, 1),
    ]


def _hesse() -> tuple[list, list[list[int]]]:
    """The 12 lines of the Hesse pencil's four completely reducible fibers.

    Fiber xyz plus, for t in {1, w, w^2} (w = zeta_3), the triangle
    x^3 + y^3 + z^3 - 3t*xyz = prod_j (x + w^(k+j) y + w^(2j) z) with t = w^k.
    Returns (lines, classes).
    """
    lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    classes = [[0, 1, 2]]
    for k in range(3):
        cls = []
        for j in range(3):
            lines.append((1, Cyclo.root(3, k + j), Cyclo.root(3, 2 * j)))
            cls.append(len(lines) - 1)
        classes.append(cls)
    return lines, classes


def _ceva(r: int) -> list:
    """xyz (x^r - y^r)(y^r - z^r)(z^r - x^r) over Q(zeta_r)."""
    lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for j in range(r):
        lines.append((1, -Cyclo.root(r, j), 0))
    for j in range(r):
        lines.append((0, 1, -Cyclo.root(r, j)))
    for j in range(r):
        lines.append((-Cyclo.root(r, j), 0, 1))
    return lines


BUILTIN_NAMES = ("A3", "B3", "Pappus", "Hesse", "Ceva(r)")

_CEVA_RE = re.compile(r"^(?:Ceva|A_?r?)\((\d+)\)$")


def builtin(name: str) -> Arrangement:
    if name == "A3":
        return validate_arrangement(_a3(), 1, "A3")
    if name == "B3":
        return validate_arrangement(_b3(), 1, "B3")
    if name == "Pappus":
        return validate_arrangement(_PAPPUS, 1, "Pappus")
    if name == "Hesse":
        return validate_arrangement(_hesse()[0], 3, "Hesse")
    m = _CEVA_RE.match(name)
    if m:
        r = int(m.group(1))
        if r < 1:
            raise UnknownName(f"Ceva(r) needs r >= 1, got {r}")
        return validate_arrangement(_ceva(r), r, f"Ceva({r})")
    raise UnknownName(f"unknown catalog arrangement {name!r}; known: {', '.join(BUILTIN_NAMES)}")


def hesse_classes() -> list[list[int]]:
    return _hesse()[1]


def ceva_multinet(r: int) -> tuple[list[list[int]], list[int]]:
    """Classes and multiplicities of the pencil <x^r(y^r-z^r), y^r(z^r-x^r), z^r(x^r-y^r)>."""
    classes = [[0] + [3 + r + j for j in range(r)], [1] + [3 + 2 * r + j for j in range(r)], [2] + [3 + j for j in range(r)]]
    mu = [r, r, r] + [1] * (3 * r)
    return classes, mu


# ---------------------------------------------------------------------------
# JSON


def arrangement_to_json(arr: Arrangement) -> dict:
    return {
        "name": arr.name,
        "cyclotomic_order": arr.order,
        "lines": [[c.to_json() for c in ln.coeffs] for ln in arr.lines],
    }


def load_arrangement(path: str | Path) -> Arrangement:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ArrangementError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    try:
        order = data.get("cyclotomic_order")
        order = None if order is None else int(order)
        raw = [[Cyclo.from_json(c) for c in t] for t in data["lines"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ArrangementError(f"{path}: malformed arrangement file ({exc})") from exc
    try:
        return validate_arrangement(raw, order, str(data.get("name", path.stem)))
    except ArrangementError as exc:
        raise ArrangementError(f"{path}: {exc}") from exc
