"""Exact linear algebra over fields given by Python objects (Fraction,
QuadScalar, RationalFn) and over prime fields F_p (plain ints mod p)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _reciprocal(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _row_reduce(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = _reciprocal(m[r][c])
        m[r] = [x * inv if x else x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    _, piv = _row_reduce([list(r) for r in matrix], len(matrix[0]))
    return len(piv)


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Unique solution of matrix @ x = rhs; ValueError if none or not unique."""
    n = len(matrix[0]) if matrix else 0
    aug = [list(r) + [b] for r, b in zip(matrix, rhs)]
    red, piv = _row_reduce(aug, n + 1)
    if n in piv:
        raise ValueError("inconsistent system")
    if len(piv) < n:
        raise ValueError("underdetermined system")
    x = [0] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    return x


def independent_subset(gram_of, candidates: Sequence) -> list:
    """Greedy maximal subset of candidates whose Gram matrix is nonsingular.

    gram_of(a, b) returns the pairing of two candidates.
    """
    chosen: list = []
    for c in candidates:
        trial = chosen + [c]
        g = [[gram_of(a, b) for b in trial] for a in trial]
        if rank(g) == len(trial):
            chosen.append(c)
    return chosen


# ---------------------------------------------------------------------------
# prime fields
# ---------------------------------------------------------------------------


def rref_mod(rows: list[list[int]], p: int, ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    m = [[x % p for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_mod(rows: list[list[int]], p: int, ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref_mod(rows, p, ncols)[1])


def nullspace_mod(rows: list[list[int]], p: int, ncols: int) -> list[list[int]]:
    """Basis of {x : rows @ x = 0} over F_p."""
    red, piv = rref_mod(rows, p, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, c in zip(red, piv):
            x[c] = (-row[f]) % p
        basis.append(x)
    return basis


def matmul_mod(a: list[list[int]], b: list[list[int]], p: int) -> list[list[int]]:
    if not a or not b:
        cols = len(b[0]) if b else 0
        return [[0] * cols for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) % p for c in bt] for r in a]


def inverse_mod(a: list[list[int]], p: int) -> list[list[int]]:
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rref_mod(aug, p, 2 * n)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ValueError("singular matrix")
    return [r[n:] for r in red[:n]]
