"""Independent reference computations used only by the tests.

Each routine takes a different road from the library code: numeric SVD
instead of exact elimination, minors instead of Smith reduction, the
exterior algebra instead of the point/line basis, and so on.
"""
from __future__ import annotations

import cmath
import itertools
import math

import numpy as np
import sympy

from arrmono.exact import Cyclo


def snf_by_minors(m: list[list[int]]) -> list[int]:
    """Invariant factors d_k / d_{k-1}, d_k the gcd of the k x k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    mat = sympy.Matrix(m) if rows else sympy.zeros(0, 0)
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = math.gcd(g, int(mat.extract(list(r), list(c)).det()))
        if g == 0:
            out.extend([0] * (min(rows, cols) - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


def numeric_fox_h1(n_generators: int, relators, values, order: int) -> int:
    """dim H^1 via complex Fox matrix and singular values."""
    z = [cmath.exp(2j * math.pi * v / order) for v in values]
    if not relators:
        jac = np.zeros((0, n_generators), dtype=complex)
    else:
        jac = np.zeros((len(relators), n_generators), dtype=complex)
        for i, r in enumerate(relators):
            prefix = 1.0 + 0j
            for a in r:
                g = abs(a) - 1
                if a > 0:
                    jac[i, g] += prefix
                    prefix *= z[g]
                else:
                    prefix /= z[g]
                    jac[i, g] -= prefix
    r2 = np.linalg.matrix_rank(jac, tol=1e-8) if jac.size else 0
    r1 = 0 if all(abs(x - 1) < 1e-12 for x in z) else 1
    return int(n_generators - r2 - r1)


def brute_lattice(arr) -> dict[frozenset, int]:
    """Multiple points as {set of incident lines: multiplicity}, from all pairs."""
    out = {}
    for i, j in itertools.combinations(range(arr.d), 2):
        a, b = arr.lines[i].coeffs, arr.lines[j].coeffs
        p = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        on = frozenset(k for k in range(arr.d) if arr.lines[k](p).is_zero())
        out[on] = len(on)
    return out


def _det3(a, b, c) -> Cyclo:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def exterior_aomoto_h1(arr, alpha: list[int]) -> int:
    """dim H^1 of (A, alpha) with A^2 = Lambda^2 / span of d(e_ijk) over dependent triples.

    Only for rational arrangements and integer alpha summing to zero.
    """
    d = arr.d
    pairs = list(itertools.combinations(range(d), 2))
    pos = {p: n for n, p in enumerate(pairs)}
    rel = []
    for i, j, k in itertools.combinations(range(d), 3):
        if _det3(arr.lines[i].coeffs, arr.lines[j].coeffs, arr.lines[k].coeffs).is_zero():
            v = [0] * len(pairs)
            v[pos[(j, k)]] += 1
            v[pos[(i, k)]] -= 1
            v[pos[(i, j)]] += 1
            rel.append(v)

    def wedge(i, j):
        v = [0] * len(pairs)
        if i < j:
            v[pos[(i, j)]] = 1
        elif i > j:
            v[pos[(j, i)]] = -1
        return v

    images = []
    for i in range(d):
        v = [0] * len(pairs)
        for j, a in enumerate(alpha):
            if a:
                w = wedge(i, j)
                v = [x + a * y for x, y in zip(v, w)]
        images.append(v)
    base = sympy.Matrix(rel).rank() if rel else 0
    # kernel of A^1 -> A^2: d - (rank of images modulo relations)
    r = sympy.Matrix(rel + images).rank() - base
    kernel = d - r
    if all(a == 0 for a in alpha):
        return d - 1
    return kernel - 1

