"""Exact matrix ranks over Q and over prime fields.

Boundary matrices here are small (dimensions bounded by binomial
coefficients of the strand size) with entries in {-1, 0, 1}, so simple
cubic elimination with exact arithmetic is the right tool. Characteristic
zero uses fraction-free Bareiss elimination to stay in integers;
characteristic p reduces and eliminates modulo p.
"""

from __future__ import annotations


def rank_char0(rows: list[list[int]]) -> int:
    """Rank of an integer matrix over the rationals (Bareiss elimination)."""
    if not rows or not rows[0]:
        return 0
    m = [row[:] for row in rows]
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = None
        for r in range(rank, n_rows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
        pivot = m[rank][col]
        for r in range(rank + 1, n_rows):
            factor = m[r][col]
            row_r = m[r]
            row_p = m[rank]
            for c in range(col + 1, n_cols):
                # Bareiss: the division by the previous pivot is exact
                row_r[c] = (row_r[c] * pivot - factor * row_p[c]) // prev
            row_r[col] = 0
        prev = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank of an integer matrix reduced modulo the prime p."""
    if not rows or not rows[0]:
        return 0
    m = [[x % p for x in row] for row in rows]
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    for col in range(n_cols):
        piv = None
        for r in range(rank, n_rows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        row_p = m[rank]
        for c in range(col, n_cols):
            row_p[c] = row_p[c] * inv % p
        for r in range(rank + 1, n_rows):
            factor = m[r][col]
            if factor:
                row_r = m[r]
                for c in range(col, n_cols):
                    row_r[c] = (row_r[c] - factor * row_p[c]) % p
        rank += 1
        if rank == n_rows:
            break
    return rank


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True
