"""Counting top simplices: recursions and the bivariate generating function.

``f_dim1`` counts the edges of the two-process complexes (the Delannoy
recursion); ``f_top`` counts top simplices for any number of processes via
the first-concurrency-class recursion.  Both are cross-checked elsewhere
against brute-force execution enumeration.
"""

from __future__ import annotations

from typing import Iterable

_F1: dict = {}
_FTOP: dict = {}


def f_dim1(m: int, n: int) -> int:
    """Edge count of the two-process complex: f(m,n-1)+f(m-1,n)+f(m-1,n-1)."""
    if m == 0 or n == 0:
        return 1
    key = (m, n)
    if key not in _F1:
        _F1[key] = f_dim1(m, n - 1) + f_dim1(m - 1, n) + f_dim1(m - 1, n - 1)
    return _F1[key]


def f_top(values: Iterable[int]) -> int:
    """Top-simplex count: sum over the nonempty first concurrency class.

    Zero entries never participate and are dropped; the count is symmetric
    in its arguments, so memoization keys on the sorted positive multiset.
    """
    key = tuple(sorted(v for v in values if v > 0))
    if any(v < 0 for v in values):
        raise ValueError("round counts must be nonnegative")
    return _f_top_sorted(key)


def _f_top_sorted(key: tuple) -> int:
    if not key:
        return 1
    if key in _FTOP:
        return _FTOP[key]
    n = len(key)
    total = 0
    for mask in range(1, 1 << n):
        dec = tuple(key[i] - 1 if mask >> i & 1 else key[i] for i in range(n))
        total += _f_top_sorted(tuple(sorted(v for v in dec if v > 0)))
    _FTOP[key] = total
    return total


def _poly_mul(a: dict, b: dict, order: int) -> dict:
    out: dict = {}
    for (ma, na), ca in a.items():
        for (mb, nb), cb in b.items():
            m, n = ma + mb, na + nb
            if m <= order and n <= order:
                out[(m, n)] = out.get((m, n), 0) + ca * cb
    return out


def series_coefficients(order: int) -> dict:
    """Exact coefficients of 1/(1-x-y-xy) on the grid m,n <= order.

    Expanded as the geometric series of x+y+xy by iterated polynomial
    multiplication with integer coefficients; no recursion involved.
    """
    base = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    out = {(0, 0): 1}
    power = {(0, 0): 1}
    for _ in range(2 * order):
        power = _poly_mul(power, base, order)
        if not power:
            break
        for key, c in power.items():
            out[key] = out.get(key, 0) + c
    return out


def series_check(order: int) -> bool:
    """Every grid coefficient of the generating function equals the recursion."""
    coeffs = series_coefficients(order)
    for m in range(order + 1):
        for n in range(order + 1):
            if coeffs.get((m, n), 0) != f_dim1(m, n):
                return False
    return True
