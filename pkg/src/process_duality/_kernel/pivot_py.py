"""Pure-Python pivot kernel.

The tableau is held as parallel lists of lists of Python ints: numerators and
denominators (denominators always positive, entries always in lowest terms).
Row m (the last row) is the objective row; the last column is the RHS.
`_pivot_c.pyx` mirrors this module statement for statement; both backends must
produce bit-identical tableaus.
"""

from math import gcd

BACKEND = "pure"


def _reduce(n, d):
    # d may be negative only transiently; normalize sign here.
    if d < 0:
        n, d = -n, -d
    if n == 0:
        return 0, 1
    g = gcd(n if n > 0 else -n, d)
    if g > 1:
        n //= g
        d //= g
    return n, d


def pivot(nums, dens, piv_r, piv_c):
    """Gauss-Jordan step: scale row piv_r to make the pivot 1, eliminate
    column piv_c from every other row (objective row included)."""
    prow_n = nums[piv_r]
    prow_d = dens[piv_r]
    pn = prow_n[piv_c]
    pd = prow_d[piv_c]
    ncols = len(prow_n)
    # Scale pivot row by pd/pn.
    for j in range(ncols):
        n, d = _reduce(prow_n[j] * pd, prow_d[j] * pn)
        prow_n[j] = n
        prow_d[j] = d
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
            # a - f*b
            n = an * fd * bd - fn * bn * ad
            d = ad * fd * bd
            n, d = _reduce(n, d)
            row_n[j] = n
            row_d[j] = d
        row_n[piv_c] = 0
        row_d[piv_c] = 1


def bland_entering(obj_n, allowed, width):
    """Lowest-index allowed column with a negative reduced cost, or -1."""
    for j in range(width):
        if allowed[j] and obj_n[j] < 0:
            return j
    return -1


def bland_leaving(nums, dens, basis, piv_c, m, rhs_c):
    """Minimum-ratio row over rows with positive pivot-column entry; ties
    broken by the smallest basis variable index (Bland).  Returns -1 when the
    column is nonpositive throughout (unbounded direction)."""
    best = -1
    best_rn = 0
    best_rd = 1
    for i in range(m):
        an = nums[i][piv_c]
        if an <= 0:
            continue
        ad = dens[i][piv_c]
        bn = nums[i][rhs_c]
        bd = dens[i][rhs_c]
        # ratio = (bn/bd) / (an/ad) = (bn*ad) / (bd*an); denominator > 0.
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
