"""Small exact linear algebra over any field whose elements support
+, −, *, / and comparison with 0 (Fraction or FieldElement)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form.  Returns the nonzero rows and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], n: int, one=Fraction(1)) -> list[list]:
    """Basis of {x : row·x = 0 for every row}."""
    zero = one - one
    if not rows:
        return [[one if j == i else zero for j in range(n)] for i in range(n)]
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [zero] * n
        v[fcol] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[fcol]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list:
    """Solve the square nonsingular system a·x = b."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def dot(u: Sequence, v: Sequence):
    acc = None
    for a, b in zip(u, v):
        acc = a * b if acc is None else acc + a * b
    return acc


def clear_denominators(v: Sequence[Fraction]) -> list[int]:
    """Smallest positive integer multiple of a rational vector."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints
