"""Exact dense linear algebra over a prime field F_p.

Matrices are lists of row lists with entries already reduced mod p.
Everything is plain integer arithmetic; the matrices coming from gluing
systems are tiny (at most a few dozen rows), so clarity beats vectorizing.
"""

from __future__ import annotations


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


def row_echelon(rows, p):
    """In-place forward elimination; returns the list of pivot columns."""
    if not rows:
        return []
    m, n = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = inverse(rows[r][c], p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots


def rank(rows, p) -> int:
    return len(row_echelon([list(r) for r in rows], p))


def nullity(rows, ncols, p) -> int:
    if not rows:
        return ncols
    return ncols - rank(rows, p)


def nullspace(rows, ncols, p):
    """Basis of the right kernel, one vector per free column of the RREF."""
    if not rows:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    work = [list(r) for r in rows]
    pivots = row_echelon(work, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-work[r][fc]) % p
        basis.append(vec)
    return basis
