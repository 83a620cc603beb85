"""Exact arithmetic over Q and the cyclotomic fields Q(zeta_N).

Elements of Q(zeta_N) are stored in the power basis of Q[x]/Phi_N(x), so two
elements of the same order are equal iff their coefficient tuples are equal.
Elements of different orders are compared after lifting both into
Q(zeta_lcm).

Linear algebra comes in two flavours:

* :func:`rank` -- fraction-free elimination over Z[zeta_N] with row content
  removal. No field inverses are needed, which keeps it fast on the large
  sparse Fox matrices produced by covers.
* :func:`rank_and_kernel` -- Gauss-Jordan over the field, returning the
  reduced-row-echelon kernel basis.

Both use the same pivot rule (first remaining row, in original order, with a
nonzero entry in the current column), so results are reproducible.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

__all__ = [
    "Cyclo",
    "cyclotomic_poly",
    "euler_phi",
    "format_rational",
    "parse_rational",
    "rank",
    "rank_and_kernel",
    "rank_mod_p",
    "mat_vec",
    "smith_normal_form",
    "smith_decomposition",
    "saturation_basis",
]


# ---------------------------------------------------------------------------
# rationals


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(s: str | int) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s).strip())


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def _mobius(n: int) -> int:
    res, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (low degree first), den monic."""
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            out[k - dn] = c
            for j, dc in enumerate(den):
                num[k - dn + j] -= c * dc
    assert not any(num[:dn]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for k in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_poly(k))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """x^k mod Phi_n as integer coefficient tuples, for 0 <= k < max(n, 2*phi-1)."""
    phi = euler_phi(n)
    cp = cyclotomic_poly(n)
    size = max(n, 2 * phi - 1, 1)
    table = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(size):
        table.append(tuple(cur))
        # multiply by x, reduce the overflow with Phi_n (monic)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * cp[j]
    return tuple(table)


@lru_cache(maxsize=None)
def _normalized_trace(n: int) -> tuple[Fraction, ...]:
    # trace of x^k divided by phi(n); invariant under field embeddings
    out = []
    for k in range(euler_phi(n)):
        m = n // math.gcd(n, k)
        out.append(Fraction(_mobius(m), euler_phi(m)))
    return tuple(out)


def _reduce(n: int, coeffs: Sequence) -> tuple:
    """Reduce a polynomial (any length, any numeric coefficient) mod Phi_n."""
    phi = euler_phi(n)
    if len(coeffs) <= phi:
        return tuple(coeffs) + (0,) * (phi - len(coeffs))
    table = _power_table(n)
    if len(coeffs) > len(table):
        reduced = [0] * phi
        for k, c in enumerate(coeffs):
            if c:
                row = table[k % n] if n > 1 else table[0]
                for j, t in enumerate(row):
                    if t:
                        reduced[j] += c * t
        return tuple(reduced)
    out = list(coeffs[:phi])
    for k in range(phi, len(coeffs)):
        c = coeffs[k]
        if c:
            for j, t in enumerate(table[k]):
                if t:
                    out[j] += c * t
    return tuple(out)


# ---------------------------------------------------------------------------
# Cyclo


class Cyclo:
    """An element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        coeffs = [Fraction(c) for c in coeffs]
        self.order = int(order)
        self.coeffs = tuple(Fraction(c) for c in _reduce(self.order, coeffs))

    # constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> "Cyclo":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        return obj

    @classmethod
    def rational(cls, q, order: int = 1) -> "Cyclo":
        phi = euler_phi(order)
        return cls._raw(order, (Fraction(q),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def zero(cls, order: int = 1) -> "Cyclo":
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "Cyclo":
        return cls.rational(1, order)

    @classmethod
    def root(cls, order: int, k: int = 1) -> "Cyclo":
        """zeta_order ** k."""
        row = _power_table(order)[k % order]
        return cls._raw(order, tuple(Fraction(c) for c in row))

    @classmethod
    def coerce(cls, x, order: int = 1) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x, order)
        if isinstance(x, str):
            return cls.rational(parse_rational(x), order)
        if isinstance(x, dict):
            return cls.from_json(x)
        raise TypeError(f"cannot coerce {x!r} to Cyclo")

    # structure ------------------------------------------------------------

    def lift(self, m: int) -> "Cyclo":
        """Embed into Q(zeta_m); requires order | m."""
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{m})")
        step = m // self.order
        poly = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for j, c in enumerate(self.coeffs):
            poly[j * step] = c
        return Cyclo._raw(m, tuple(Fraction(c) for c in _reduce(m, poly)))

    def _pair(self, other) -> tuple["Cyclo", "Cyclo"]:
        other = Cyclo.coerce(other, self.order)
        if other.order == self.order:
            return self, other
        m = self.order * other.order // math.gcd(self.order, other.order)
        return self.lift(m), other.lift(m)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        return Cyclo._raw(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo._raw(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        return Cyclo._raw(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo._raw(self.order, tuple(x * other for x in self.coeffs))
        a, b = self._pair(other)
        phi = len(a.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclo._raw(a.order, _reduce(a.order, prod))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_N)")
        if self.is_rational():
            return Cyclo.rational(1 / self.coeffs[0], self.order)
        # solve (multiplication-by-self matrix) * c = e_0 over Q
        n, phi = self.order, len(self.coeffs)
        cols = [(self * Cyclo.root(n, j)).coeffs for j in range(phi)]
        aug = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        _gauss_jordan_fractions(aug, phi)
        return Cyclo._raw(n, tuple(aug[i][phi] for i in range(phi)))

    def __truediv__(self, other):
        other = Cyclo.coerce(other, self.order)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclo.coerce(other, self.order) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Cyclo.one(self.order), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, (Cyclo, int, Fraction)):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        tr = sum(c * t for c, t in zip(self.coeffs, _normalized_trace(self.order)))
        return hash(("cyclo", tr))

    def sort_key(self) -> tuple:
        return self.coeffs

    def to_complex(self) -> complex:
        return sum(
            float(c) * complex(math.cos(2 * math.pi * j / self.order), math.sin(2 * math.pi * j / self.order))
            for j, c in enumerate(self.coeffs)
        )

    def __repr__(self):
        if self.is_rational():
            return format_rational(self.coeffs[0])
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                mono = "" if j == 0 else (f"z{self.order}" if j == 1 else f"z{self.order}^{j}")
                coef = format_rational(c)
                if mono:
                    coef = "" if c == 1 else "-" if c == -1 else coef + "*"
                terms.append(coef + mono)
        return "(" + " + ".join(terms) + ")"

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "Cyclo":
        if isinstance(data, (int, str)):
            return cls.rational(parse_rational(data))
        order = int(data["order"])
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        return cls(order, [parse_rational(c) for c in data["coeffs"]])


def common_order(values: Iterable[Cyclo]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), (v.order for v in values), 1)


# ---------------------------------------------------------------------------
# field linear algebra (Gauss-Jordan)


def _gauss_jordan_fractions(rows: list[list[Fraction]], ncols: int) -> list[int]:
    pivots, r = [], 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def _as_rows(m, ncols: int | None) -> tuple[list[list[Cyclo]], int, int]:
    rows = [[Cyclo.coerce(x) for x in row] for row in m]
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for a matrix with no rows")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("matrix is not rectangular")
    order = common_order(x for r in rows for x in r)
    rows = [[x.lift(order) for x in r] for r in rows]
    return rows, ncols, order


def rank_and_kernel(m: Sequence[Sequence], ncols: int | None = None) -> tuple[int, list[tuple[Cyclo, ...]]]:
    """Rank and a right-kernel basis of ``m`` over Q(zeta_N).

    The kernel basis is read off the reduced row echelon form: one vector per
    free column, with a 1 in that column.
    """
    rows, ncols, order = _as_rows(m, ncols)
    zero, one = Cyclo.zero(order), Cyclo.one(order)
    pivots, r = [], 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        rows.insert(r, rows.pop(p))
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y if not y.is_zero() else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    kernel = []
    pivot_set = set(pivots)
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [zero] * ncols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        kernel.append(tuple(v))
    return len(pivots), kernel


def mat_vec(m: Sequence[Sequence[Cyclo]], v: Sequence[Cyclo]) -> list[Cyclo]:
    out = []
    for row in m:
        acc = Cyclo.zero()
        for a, b in zip(row, v):
            a = Cyclo.coerce(a)
            if not a.is_zero():
                acc = acc + a * b
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# fraction-free rank over Z[zeta_N]


def _zz_mul(a: tuple[int, ...], b: tuple[int, ...], n: int) -> tuple[int, ...]:
    phi = len(a)
    if phi == 1:
        return (a[0] * b[0],)
    prod = [0] * (2 * phi - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    return _reduce(n, prod)


def _integral_rows(rows: list[list[Cyclo]], n: int) -> list[dict[int, tuple[int, ...]]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            for c in x.coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
        sparse = {}
        for j, x in enumerate(row):
            if not x.is_zero():
                sparse[j] = tuple(int(c * den) for c in x.coeffs)
        if sparse:
            out.append(sparse)
    return out


def _unit_inverse(p: tuple[int, ...], n: int) -> tuple[int, ...] | None:
    """Inverse of p in Z[zeta_n] when p = +-zeta^k with k < phi, else None."""
    nz = [(j, c) for j, c in enumerate(p) if c]
    if len(nz) != 1 or abs(nz[0][1]) != 1:
        return None
    j, c = nz[0]
    return tuple(c * t for t in _power_table(n)[(-j) % n])


def _rank_integral(rows: list[dict[int, tuple[int, ...]]], ncols: int, n: int) -> int:
    remaining = rows
    rk = 0
    for col in range(ncols):
        # prefer unit pivots, then short rows, to limit fill-in
        idx, best = None, None
        for i, r in enumerate(remaining):
            v = r.get(col)
            if v is None:
                continue
            score = (_unit_inverse(v, n) is None, len(r), sum(map(abs, v)))
            if best is None or score < best:
                idx, best = i, score
                if score[:2] == (False, 1):
                    break
        if idx is None:
            continue
        piv = remaining.pop(idx)
        p = piv[col]
        uinv = _unit_inverse(p, n)
        if uinv is not None:
            piv = {k: _zz_mul(v, uinv, n) for k, v in piv.items()}
            p = None
        nxt = []
        for row in remaining:
            a = row.get(col)
            if a is None:
                nxt.append(row)
                continue
            new = {}
            if p is None:
                for k, v in row.items():
                    if k != col:
                        new[k] = v
            else:
                for k, v in row.items():
                    if k != col:
                        new[k] = _zz_mul(p, v, n)
            for k, v in piv.items():
                if k == col:
                    continue
                av = _zz_mul(a, v, n)
                cur = new.get(k)
                new[k] = tuple(-x for x in av) if cur is None else tuple(x - y for x, y in zip(cur, av))
            new = {k: v for k, v in new.items() if any(v)}
            if not new:
                continue
            g = 0
            for v in new.values():
                for x in v:
                    g = math.gcd(g, x)
                    if g == 1:
                        break
                if g == 1:
                    break
            if g > 1:
                new = {k: tuple(x // g for x in v) for k, v in new.items()}
            nxt.append(new)
        remaining = nxt
        rk += 1
    return rk


def rank(m: Sequence[Sequence], ncols: int | None = None) -> int:
    """Exact rank over Q(zeta_N) by fraction-free elimination."""
    rows, ncols, order = _as_rows(m, ncols)
    return _rank_integral(_integral_rows(rows, order), ncols, order)


def rank_integral_sparse(rows: list[dict[int, tuple[int, ...]]], ncols: int, order: int) -> int:
    """Rank of a matrix already given as sparse rows over Z[zeta_order]."""
    return _rank_integral([dict(r) for r in rows if r], ncols, order)


# ---------------------------------------------------------------------------
# modular rank (used as an independent lower-bound oracle)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(math.isqrt(p)) + 1))


def primes_one_mod(n: int, count: int, start: int = 1000, rng: random.Random | None = None) -> list[int]:
    """``count`` primes p = 1 (mod n), p > start; randomized start if rng is given."""
    if rng is not None:
        start = rng.randrange(start, 50 * start)
    p = start - (start % n) + 1
    out = []
    while len(out) < count:
        if p > start and _is_prime(p):
            out.append(p)
        p += n
    return out


def _primitive_root_of_unity(n: int, p: int) -> int:
    for g in range(2, p):
        w = pow(g, (p - 1) // n, p)
        if all(pow(w, n // q, p) != 1 for q in range(2, n + 1) if n % q == 0 and _is_prime(q)):
            return w
    return 1


def rank_mod_p(m: Sequence[Sequence], p: int, ncols: int | None = None) -> int:
    """Rank after mapping zeta_N to a primitive N-th root of unity in F_p.

    Requires p = 1 (mod N). A lower bound for the exact rank.
    """
    rows, ncols, order = _as_rows(m, ncols)
    if (p - 1) % order:
        raise ValueError("p must be 1 mod the cyclotomic order")
    w = _primitive_root_of_unity(order, p)
    powers = [pow(w, j, p) for j in range(euler_phi(order))]

    def red(x: Cyclo) -> int:
        s = 0
        for c, wp in zip(x.coeffs, powers):
            if c:
                s += c.numerator * pow(c.denominator, -1, p) * wp
        return s % p

    mat = [[red(x) for x in row] for row in rows]
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rk], mat[piv] = mat[piv], mat[rk]
        inv = pow(mat[rk][c], -1, p)
        for i in range(rk + 1, len(mat)):
            if mat[i][c]:
                f = mat[i][c] * inv % p
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[rk])]
        rk += 1
    return rk


# ---------------------------------------------------------------------------
# Smith normal form over Z


def smith_decomposition(m: Sequence[Sequence[int]], ncols: int | None = None):
    """Smith form of an integer matrix.

    Returns ``(diagonal, W)`` where ``W`` is unimodular and the row lattice of
    ``m`` equals the row lattice of ``diag(diagonal) * W``. The diagonal has
    length ``min(nrows, ncols)`` and satisfies d_1 | d_2 | ... .
    """
    a = [[int(x) for x in row] for row in m]
    nr = len(a)
    nc = ncols if ncols is not None else (len(a[0]) if a else 0)
    w = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def col_add(dst, src, q):  # col_dst += q * col_src ; W: row_src -= q * row_dst
        for row in a:
            row[dst] += q * row[src]
        w[src] = [x - q * y for x, y in zip(w[src], w[dst])]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        w[i], w[j] = w[j], w[i]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            a[t], a[i] = a[i], a[t]
            if j != t:
                col_swap(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        if t < nr and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
    diag = [a[i][i] if i < nr and i < nc else 0 for i in range(min(nr, nc))]
    return diag, w


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    return smith_decomposition(m, ncols)[0]


def saturation_basis(vectors: Sequence[Sequence], length: int) -> list[list[int]]:
    """Z-basis of span_Q(vectors) intersected with Z^length (rational input)."""
    rows = []
    for v in vectors:
        fr = [Cyclo.coerce(x).to_fraction() for x in v]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
        rows.append([int(f * den) for f in fr])
    if not rows:
        return []
    diag, w = smith_decomposition(rows, length)
    return [w[i] for i, dgt in enumerate(diag) if dgt]
