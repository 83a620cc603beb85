"""Multinets on line arrangements, their pencils, and monodromy certificates.

Axioms checked for a partition A_1 ... A_k (k >= 3) of a support set with
multiplicities mu:

* M1  every class has the same weight e = sum of mu over the class;
* M2  at every base point X (a point where lines of two or more classes meet)
      each class has the same weight n_X through X;
* M3  lines from different classes meet at base points;
* M4  inside each class, any two lines are joined by a chain of lines of the
      class whose consecutive members meet away from the base locus.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Mapping, Sequence

from .arrgeo import Arrangement, FlatPoint, Lattice
from .exact import Cyclo, rank_and_kernel

__all__ = [
    "AxiomViolation",
    "BudgetExceeded",
    "SpanNotTwo",
    "NotReduced",
    "BasePoint",
    "MultinetStructure",
    "EnumerationOptions",
    "PencilRealization",
    "Bound",
    "MonodromyCertificate",
    "SteinData",
    "validate_multinet",
    "enumerate_multinets",
    "realize_pencil",
    "monodromy_lower_bounds",
    "nontriviality_certificate",
    "direction_count",
    "stein_chi",
]


class AxiomViolation(ValueError):
    def __init__(self, which: str, witness):
        super().__init__(f"multinet axiom {which} fails: {witness}")
        self.which, self.witness = which, witness


class BudgetExceeded(RuntimeError):
    def __init__(self, partial: list):
        super().__init__(f"time budget exceeded after {len(partial)} multinets (incomplete)")
        self.partial = partial
        self.complete = False


class SpanNotTwo(ValueError):
    def __init__(self, dim: int):
        super().__init__(f"class products span a {dim}-dimensional space, not a pencil")
        self.dim = dim


class NotReduced(ValueError):
    pass


@dataclass(frozen=True)
class BasePoint:
    index: int  # position in the lattice
    point: FlatPoint
    n: int


@dataclass(frozen=True)
class MultinetStructure:
    support: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    mu: tuple[int, ...]  # indexed by line; 0 off the support
    e: int
    base_points: tuple[BasePoint, ...]

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def reduced(self) -> bool:
        return all(self.mu[i] == 1 for i in self.support)

    def full_support(self, d: int) -> bool:
        return len(self.support) == d

    def key(self) -> tuple:
        return (tuple(sorted(self.classes)), self.mu)

    def to_json(self) -> dict:
        return {
            "support": list(self.support),
            "classes": [list(c) for c in self.classes],
            "mu": [self.mu[i] for i in self.support],
            "k": self.k,
            "e": self.e,
            "reduced": self.reduced,
            "base_points": [{"point": bp.index, "n": bp.n} for bp in self.base_points],
            # recorded for comparison with e^2, not enforced
            "sum_n_squared": sum(bp.n ** 2 for bp in self.base_points),
        }


def _mu_vector(d: int, support: Sequence[int], mu) -> tuple[int, ...]:
    if isinstance(mu, int):
        vals = {i: mu for i in support}
    elif isinstance(mu, Mapping):
        vals = dict(mu)
    else:
        mu = list(mu)
        if len(mu) == d:
            vals = {i: mu[i] for i in support}
        elif len(mu) == len(support):
            vals = dict(zip(support, mu))
        else:
            raise ValueError("mu must have one entry per line or per support line")
    out = [0] * d
    for i in support:
        m = int(vals.get(i, 0))
        if m <= 0:
            raise ValueError(f"multiplicity of line {i} must be positive, got {m}")
        out[i] = m
    return tuple(out)


def validate_multinet(arr: Arrangement, lattice: Lattice, classes: Sequence[Sequence[int]], mu) -> MultinetStructure:
    d = arr.d
    classes = tuple(tuple(sorted(c)) for c in classes)
    support = tuple(sorted(i for c in classes for i in c))
    if len(set(support)) != len(support):
        raise ValueError("classes overlap")
    if any(not c for c in classes) or any(i < 0 or i >= d for i in support):
        raise ValueError("classes must be nonempty sets of line indices")
    k = len(classes)
    if k < 3:
        raise AxiomViolation("k", f"only {k} classes")
    muv = _mu_vector(d, support, mu)
    cls_of = {i: j for j, c in enumerate(classes) for i in c}

    weights = [sum(muv[i] for i in c) for c in classes]
    if len(set(weights)) != 1:
        raise AxiomViolation("M1", {"class_weights": weights})
    e = weights[0]

    base = []
    base_set = set()
    for idx, inc in lattice.restrict(support):
        present = {cls_of[i] for i in inc}
        if len(present) < 2:
            continue
        w = [sum(muv[i] for i in inc if cls_of[i] == j) for j in range(k)]
        if len(set(w)) != 1:
            raise AxiomViolation("M2", {"point": idx, "class_weights": w})
        base.append(BasePoint(idx, lattice.points[idx], w[0]))
        base_set.add(idx)

    for c1, c2 in combinations(range(k), 2):
        for i in classes[c1]:
            for j in classes[c2]:
                if lattice.point_of(i, j) not in base_set:
                    raise AxiomViolation("M3", {"lines": (i, j)})

    for j, c in enumerate(classes):
        seen, stack = {c[0]}, [c[0]]
        while stack:
            a = stack.pop()
            for b in c:
                if b not in seen and lattice.point_of(a, b) not in base_set:
                    seen.add(b)
                    stack.append(b)
        if len(seen) != len(c):
            raise AxiomViolation("M4", {"class": j, "disconnected": sorted(set(c) - seen)})

    return MultinetStructure(support, classes, muv, e, tuple(base))


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class EnumerationOptions:
    reduced_only: bool = False
    max_mu: int = 4
    max_support: int | None = None  # None: whole arrangement only
    time_budget_ms: int | None = None
    include_single_point: bool = False


class _Deadline:
    def __init__(self, budget_ms: int | None):
        self.end = None if budget_ms is None else time.monotonic() + budget_ms / 1000
        self.ticks = 0

    def expired(self) -> bool:
        self.ticks += 1
        if self.end is None or self.ticks % 256:
            return False
        return time.monotonic() > self.end


class _Stop(Exception):
    pass


def _partitions(support, pts, k, opts, deadline):
    """Class assignments of the support compatible with the base-point rule.

    A point with fewer than k support lines cannot be a base point, so its
    lines share a class; this is folded in up front with a union-find.
    """
    parent = {i: i for i in support}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for _, inc in pts:
        if len(inc) < k:
            for a in inc[1:]:
                ra, rb = find(inc[0]), find(a)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in support:
        groups.setdefault(find(i), []).append(i)
    blocks = sorted(groups.values(), key=lambda b: b[0])
    if len(blocks) < k:
        return
    target = len(support) // k if opts.reduced_only else None
    if opts.reduced_only and len(support) % k:
        return

    lines_pts: dict[int, list[int]] = {i: [] for i in support}
    for p, (_, inc) in enumerate(pts):
        for i in inc:
            lines_pts[i].append(p)
    cls = {}
    sizes = [0] * k

    def point_ok(p) -> bool:
        inc = pts[p][1]
        present = set()
        counts = [0] * k
        open_lines = 0
        for i in inc:
            c = cls.get(i)
            if c is None:
                open_lines += 1
            else:
                present.add(c)
                counts[c] += 1
        if len(present) < 2:
            return True
        if len(present) + open_lines < k:
            return False
        if open_lines == 0 and len(present) != k:
            return False
        if opts.reduced_only:
            hi = max(counts)
            if open_lines == 0:
                return min(counts) == hi
            need = sum(hi - counts[c] for c in range(k))
            return need <= open_lines
        return True

    def rec(b, used):
        if deadline.expired():
            raise _Stop
        if b == len(blocks):
            if used == k:
                yield {i: cls[i] for i in support}
            return
        if k - used > len(blocks) - b:
            return
        block = blocks[b]
        for c in range(min(used + 1, k)):
            if target is not None and sizes[c] + len(block) > target:
                continue
            for i in block:
                cls[i] = c
            sizes[c] += len(block)
            touched = {p for i in block for p in lines_pts[i]}
            if all(point_ok(p) for p in touched):
                yield from rec(b + 1, max(used, c + 1))
            sizes[c] -= len(block)
            for i in block:
                del cls[i]

    yield from rec(0, 0)


def _multiplicities(support, pts, k, cls, opts, deadline):
    """Multiplicity functions (1..max_mu) balanced at every base point."""
    if opts.reduced_only:
        yield {i: 1 for i in support}
        return
    base = [inc for _, inc in pts if len({cls[i] for i in inc}) >= 2]
    order = []
    for inc in base:
        for i in inc:
            if i not in order:
                order.append(i)
    order += [i for i in support if i not in order]
    pos = {i: n for n, i in enumerate(order)}
    last_at = [max(pos[i] for i in inc) for inc in base]
    checks: dict[int, list[int]] = {}
    for b, lp in enumerate(last_at):
        checks.setdefault(lp, []).append(b)
    class_lines = [[i for i in support if cls[i] == c] for c in range(k)]
    class_last = [max(pos[i] for i in cl) for cl in class_lines]
    mu = {}

    def balanced(lines) -> bool:
        w = [0] * k
        for i in lines:
            w[cls[i]] += mu[i]
        return len(set(w)) == 1

    def rec(n):
        if deadline.expired():
            raise _Stop
        if n == len(order):
            if balanced(support) and reduce(math.gcd, mu.values(), 0) == 1:
                yield dict(mu)
            return
        i = order[n]
        for m in range(1, opts.max_mu + 1):
            mu[i] = m
            if all(balanced(base[b]) for b in checks.get(n, ())):
                done = [c for c in range(k) if class_last[c] <= n]
                if len(done) < 2 or len({sum(mu[x] for x in class_lines[c]) for c in done}) == 1:
                    yield from rec(n + 1)
        del mu[i]

    yield from rec(0)


def _search_support(arr, lattice, support, k, opts, deadline, out, seen):
    pts = lattice.restrict(support)
    for cls in _partitions(support, pts, k, opts, deadline):
        classes = [tuple(i for i in support if cls[i] == c) for c in range(k)]
        for mu in _multiplicities(support, pts, k, cls, opts, deadline):
            try:
                mn = validate_multinet(arr, lattice, classes, mu)
            except AxiomViolation:
                continue
            if len(mn.base_points) < 2 and not opts.include_single_point:
                continue
            key = mn.key()
            if key not in seen:
                seen.add(key)
                out.append(mn)


def enumerate_multinets(arr: Arrangement, lattice: Lattice, k: int, opts: EnumerationOptions | None = None) -> list[MultinetStructure]:
    """Exhaustive multinet search within the bounds of ``opts``.

    Multinets are returned once per class partition (labels are canonical:
    classes ordered by their least line), with gcd(mu) = 1, and, unless
    ``include_single_point`` is set, with at least two base points (a pencil
    of concurrent lines only reproduces a local component).
    """
    if k not in (3, 4):
        raise ValueError("k must be 3 or 4")
    opts = opts or EnumerationOptions()
    deadline = _Deadline(opts.time_budget_ms)
    out: list[MultinetStructure] = []
    seen: set = set()
    if opts.max_support is None:
        supports = [tuple(range(arr.d))]
    else:
        top = min(opts.max_support, arr.d)
        supports = [s for size in range(2 * k, top + 1) for s in combinations(range(arr.d), size)]
    try:
        for s in supports:
            _search_support(arr, lattice, s, k, opts, deadline, out, seen)
    except _Stop:
        raise BudgetExceeded(out) from None
    return out


# ---------------------------------------------------------------------------
# pencils


def _monomials(e: int) -> list[tuple[int, int, int]]:
    return [(a, b, e - a - b) for a in range(e, -1, -1) for b in range(e - a, -1, -1)]


def _poly_mul_linear(poly: dict, lin: Sequence[Cyclo]) -> dict:
    out: dict = {}
    for mono, c in poly.items():
        for v, a in enumerate(lin):
            if a.is_zero():
                continue
            m = list(mono)
            m[v] += 1
            m = tuple(m)
            out[m] = out.get(m, 0) + c * a
    return {m: c for m, c in out.items() if not Cyclo.coerce(c).is_zero()}


def class_polynomial(arr: Arrangement, lines: Sequence[int], mu: Sequence[int], scales: Mapping[int, Cyclo] | None = None) -> dict:
    poly = {(0, 0, 0): Cyclo.one(arr.order)}
    for i in lines:
        lin = arr.lines[i].coeffs
        if scales and i in scales:
            lin = tuple(c * scales[i] for c in lin)
        for _ in range(mu[i]):
            poly = _poly_mul_linear(poly, lin)
    return poly


@dataclass(frozen=True)
class PencilRealization:
    e: int
    monomials: tuple[tuple[int, int, int], ...]
    q_coeffs: tuple[tuple[Cyclo, ...], ...]
    span_dim: int
    collinearity: tuple[tuple[int, Cyclo, Cyclo], ...]  # (j, alpha_j, beta_j): Q_j = a Q_1 + b Q_2
    fiber_points: tuple[tuple[Cyclo, Cyclo], ...]

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "span_dim": self.span_dim,
            "collinearity": [
                {"class": j, "alpha": a.to_json(), "beta": b.to_json()} for j, a, b in self.collinearity
            ],
            "fiber_points": [[s.to_json(), t.to_json()] for s, t in self.fiber_points],
        }


def realize_pencil(arr: Arrangement, mn: MultinetStructure, scales: Mapping[int, Cyclo] | None = None) -> PencilRealization:
    monos = _monomials(mn.e)
    zero = Cyclo.zero(arr.order)
    rows = []
    for c in mn.classes:
        poly = class_polynomial(arr, c, mn.mu, scales)
        rows.append(tuple(Cyclo.coerce(poly.get(m, zero), arr.order) for m in monos))
    dim, _ = rank_and_kernel(rows, len(monos))
    if dim != 2:
        raise SpanNotTwo(dim)
    one = Cyclo.one(arr.order)
    coll = []
    fibers = [(one, zero), (zero, one)]
    for j in range(2, mn.k):
        cols = [[rows[0][m], rows[1][m], rows[j][m]] for m in range(len(monos))]
        _, ker = rank_and_kernel(cols, 3)
        (a, b, c), = ker
        alpha, beta = -a / c, -b / c
        coll.append((j, alpha, beta))
        fibers.append((alpha, beta))
    for (s1, t1), (s2, t2) in combinations(fibers, 2):
        if (s1 * t2 - s2 * t1).is_zero():
            raise SpanNotTwo(dim)
    return PencilRealization(mn.e, tuple(monos), tuple(rows), dim, tuple(coll), tuple(fibers))


# ---------------------------------------------------------------------------
# monodromy bounds and certificates


@dataclass(frozen=True)
class Bound:
    """dim H^1(F)_lambda >= bound, with lambda = exp(2 pi i * exponent)."""

    exponent: Fraction
    bound: int

    @property
    def order(self) -> int:
        return self.exponent.denominator

    @property
    def lam(self) -> Cyclo:
        return Cyclo.root(self.exponent.denominator, self.exponent.numerator)

    def to_json(self) -> dict:
        return {
            "lambda": {"order": self.order, "exponent": self.exponent.numerator},
            "lambda_cyclo": self.lam.to_json(),
            "lower_bound": self.bound,
        }


def monodromy_lower_bounds(mn: MultinetStructure, d: int) -> list[Bound]:
    """Eigenspace lower bounds from pulling back the diagonal characters of the pencil base."""
    k = mn.k
    out = []
    for j in range(1, k):
        lam = Fraction(j, k)
        values = {(lam * mn.mu[i]) % 1 if i in mn.support else Fraction(0) for i in range(d)}
        if len(values) != 1:
            continue
        (lam0,) = values
        if lam0 == 0 or (lam0 * d).denominator != 1:
            continue
        out.append(Bound(lam0, k - 2))
    return sorted(out, key=lambda b: (b.order, b.exponent))


@dataclass(frozen=True)
class MonodromyCertificate:
    multinet: MultinetStructure
    k: int
    reduced: bool
    bounds: tuple[Bound, ...]
    dim_I: int
    dim_J_lower: int
    conclusion: str  # "NontrivialMonodromy" | "NoConclusion"
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "e": self.multinet.e,
            "reduced": self.reduced,
            "pencil_realized": True,
            "dim_I": self.dim_I,
            "dim_J_lower": self.dim_J_lower,
            "bounds": [b.to_json() for b in self.bounds],
            "conclusion": self.conclusion,
            "notes": list(self.notes),
        }


def nontriviality_certificate(mn: MultinetStructure, pencil: PencilRealization, bounds: Sequence[Bound]) -> MonodromyCertificate:
    if not mn.reduced:
        raise NotReduced("certificates need a reduced multinet (mu = 1 on every line)")
    if pencil.span_dim != 2:
        raise SpanNotTwo(pencil.span_dim)
    k = mn.k
    notes = (
        f"degree {mn.e} pencil, {k} completely reducible fibers, pulled back H^1 of dim {k - 1} (isotropic)",
        f"lift to F: subspace J of H^1(F) with dim J >= {(k - 1) ** 2} > {k - 1} = dim(J cap p*H^1(M))",
        "J is not invariant-only, so h* != id on H^1(F)",
    )
    return MonodromyCertificate(mn, k, True, tuple(bounds), k - 1, (k - 1) ** 2, "NontrivialMonodromy", notes)


def direction_count(mn: MultinetStructure) -> tuple[list[int], int]:
    m = [reduce(math.gcd, (mn.mu[i] for i in c)) for c in mn.classes]
    n = 1
    for x in m:
        if x > 1:
            n *= x
    return m, n


# ---------------------------------------------------------------------------
# Euler characteristics under a finite map of curves


@dataclass(frozen=True)
class SteinData:
    """Degree-e finite map S' -> S; s[k] points of S have exactly k preimages (k < e)."""

    e: int
    chi_S: int
    s: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("degree e must be >= 1")
        for k, v in self.s.items():
            if not 1 <= k < self.e or v < 0:
                raise ValueError(f"invalid count s_{k} = {v}")


def stein_chi(sd: SteinData) -> tuple[int, int]:
    """(chi(S'), chi(S_e)), with chi(S') evaluated by both additivity formulas."""
    e, chi = sd.e, sd.chi_S
    chi_Se = chi - sum(sd.s.values())
    via_Se = chi + (e - 1) * chi_Se + sum((k - 1) * n for k, n in sd.s.items())
    via_S = chi + (e - 1) * chi + sum((k - e) * n for k, n in sd.s.items())
    assert via_Se == via_S, (via_Se, via_S)
    return via_S, chi_Se
