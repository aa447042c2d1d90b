# cython: language_level=3
"""Compiled pivot kernel: statement-for-statement twin of pivot_py.py.

Arithmetic stays on Python ints (arbitrary precision is required), the win
comes from typed loop indices and removed interpreter dispatch.
"""

from math import gcd

BACKEND = "compiled"


cdef inline tuple _reduce(n, d):
    if d < 0:
        n, d = -n, -d
    if n == 0:
        return 0, 1
    g = gcd(n if n > 0 else -n, d)
    if g > 1:
        n //= g
        d //= g
    return n, d


def pivot(list nums, list dens, Py_ssize_t piv_r, Py_ssize_t piv_c):
    """Gauss-Jordan step: scale row piv_r to make the pivot 1, eliminate
    column piv_c from every other row (objective row included)."""
    cdef list prow_n = nums[piv_r]
    cdef list prow_d = dens[piv_r]
    pn = prow_n[piv_c]
    pd = prow_d[piv_c]
    cdef Py_ssize_t ncols = len(prow_n)
    cdef Py_ssize_t i, j
    for j in range(ncols):
        n, d = _reduce(prow_n[j] * pd, prow_d[j] * pn)
        prow_n[j] = n
        prow_d[j] = d
    cdef list row_n, row_d
    for i in range(len(nums)):
        if i == piv_r:
            continue
        row_n = nums[i]
        row_d = dens[i]
        fn = row_n[piv_c]
        if fn == 0:
            continue
        fd = row_d[piv_c]
        for j in range(ncols):
            an = row_n[j]
            ad = row_d[j]
            bn = prow_n[j]
            bd = prow_d[j]
            n = an * fd * bd - fn * bn * ad
            d = ad * fd * bd
            n, d = _reduce(n, d)
            row_n[j] = n
            row_d[j] = d
        row_n[piv_c] = 0
        row_d[piv_c] = 1


def bland_entering(list obj_n, allowed, Py_ssize_t width):
    """Lowest-index allowed column with a negative reduced cost, or -1."""
    cdef Py_ssize_t j
    for j in range(width):
        if allowed[j] and obj_n[j] < 0:
            return j
    return -1


def bland_leaving(list nums, list dens, list basis, Py_ssize_t piv_c,
                  Py_ssize_t m, Py_ssize_t rhs_c):
    """Minimum-ratio row over rows with positive pivot-column entry; ties
    broken by the smallest basis variable index (Bland).  Returns -1 when the
    column is nonpositive throughout (unbounded direction)."""
    cdef Py_ssize_t best = -1
    cdef Py_ssize_t i
    best_rn = 0
    best_rd = 1
    cdef bint better
    for i in range(m):
        an = nums[i][piv_c]
        if an <= 0:
            continue
        ad = dens[i][piv_c]
        bn = nums[i][rhs_c]
        bd = dens[i][rhs_c]
        rn = bn * ad
        rd = bd * an
        if best < 0:
            better = True
        else:
            lhs = rn * best_rd
            rhs = best_rn * rd
            if lhs < rhs:
                better = True
            elif lhs > rhs:
                better = False
            else:
                better = basis[i] < basis[best]
        if better:
            best = i
            best_rn = rn
            best_rd = rd
    return best
