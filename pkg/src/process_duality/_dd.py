"""Double description over exact rationals (internal).

`cone_dd` enumerates the lineality basis and the extreme rays of
{x : A.x <= 0, E.x = 0}.  Equalities seed the initial lineality space;
inequalities are processed one at a time, consuming lineality directions
first (the classical projection step) and then combining adjacent ray pairs
(combinatorial zero-set adjacency).  A final LP pass removes any non-extreme
ray and fixes the canonical generator set, so downstream golden tests are
reproducible regardless of processing order quirks.
"""

from __future__ import annotations

import os
from math import gcd, lcm

from .rational import ONE, ZERO, Vec, dot, is_zero_vec, vec

# The classical adjacency-driven step already yields extreme rays; the final
# LP filter is belt-and-braces, switchable for audits via the environment.
EXTREMALITY_CHECK = os.environ.get("PROCESS_DUALITY_DDCHECK", "") == "1"


def scale_primitive(v) -> Vec:
    """Positive rescale to a primitive integer vector (sign preserved)."""
    denominator = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * denominator) for x in v]
    g = 0
    for value in ints:
        g = gcd(g, abs(value))
    if g > 1:
        ints = [value // g for value in ints]
    return vec(ints)


def rref(rows, dim):
    """Reduced row echelon form; returns (canonical rows, pivot columns)."""
    work = [list(vec(r)) for r in rows if not is_zero_vec(r)]
    pivots = []
    r = 0
    for col in range(dim):
        piv = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        pval = work[r][col]
        work[r] = [x / pval for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return [vec(row) for row in work[:r]], pivots


def null_space(rows, dim):
    """Canonical basis of {x : rows . x = 0}."""
    basis_rows, pivots = rref(rows, dim)
    free = [c for c in range(dim) if c not in pivots]
    out = []
    for c in free:
        v = [ZERO] * dim
        v[c] = ONE
        for i, p in enumerate(pivots):
            v[p] = -basis_rows[i][c]
        out.append(vec(v))
    return out


def reduce_mod_lines(v: Vec, lines, pivots) -> Vec:
    """Canonical coset representative of v modulo span(lines) (lines in RREF)."""
    w = list(v)
    for line, p in zip(lines, pivots):
        if w[p] != 0:
            f = w[p] / line[p]
            w = [a - f * b for a, b in zip(w, line)]
    return vec(w)


def _masks(rays, processed):
    out = []
    for r in rays:
        m = 0
        for i, a in enumerate(processed):
            if dot(a, r) == 0:
                m |= 1 << i
        out.append(m)
    return out


def cone_dd(dim, ineq_rows, eq_rows):
    """Lineality basis and extreme rays of {x : ineq.x <= 0, eq.x = 0}."""
    ineq = [vec(a) for a in ineq_rows]
    eq = [vec(a) for a in eq_rows]
    lines = null_space(eq, dim)
    rays: list[Vec] = []
    masks: list[int] = []
    processed: list[Vec] = []

    for a in ineq:
        if is_zero_vec(a):
            continue
        vals = [dot(a, l) for l in lines]
        hit = next((k for k, s in enumerate(vals) if s != 0), None)
        if hit is not None:
            l0 = lines[hit]
            s0 = vals[hit]
            if s0 > 0:
                l0 = vec(-x for x in l0)
                s0 = -s0
            new_lines = []
            for k, l in enumerate(lines):
                if k == hit:
                    continue
                s = vals[k]
                new_lines.append(
                    scale_primitive(tuple(x - (s / s0) * y for x, y in zip(l, l0)))
                )
            rays = [
                scale_primitive(
                    tuple(x - (dot(a, r) / s0) * y for x, y in zip(r, l0))
                )
                for r in rays
            ]
            rays = [r for r in rays if not is_zero_vec(r)]
            rays.append(scale_primitive(l0))
            lines = new_lines
            processed.append(a)
            masks = _masks(rays, processed)
            continue
        # All lines orthogonal to the new constraint: split rays by sign.
        signs = [dot(a, r) for r in rays]
        neg = [i for i, s in enumerate(signs) if s < 0]
        zero = [i for i, s in enumerate(signs) if s == 0]
        pos = [i for i, s in enumerate(signs) if s > 0]
        processed.append(a)
        bit = 1 << (len(processed) - 1)
        if not pos:
            masks = [
                masks[i] | (bit if signs[i] == 0 else 0) for i in range(len(rays))
            ]
            continue
        keep_idx = neg + zero
        new_rays = []
        for p in pos:
            for q in neg:
                common = masks[p] & masks[q]
                adjacent = True
                for t in range(len(rays)):
                    if t in (p, q):
                        continue
                    if common & masks[t] == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(
                    signs[p] * x - signs[q] * y for x, y in zip(rays[q], rays[p])
                )
                combo = scale_primitive(combo)
                if not is_zero_vec(combo):
                    new_rays.append(combo)
        kept = [rays[i] for i in keep_idx]
        kept_masks = [
            masks[i] | (bit if signs[i] == 0 else 0) for i in keep_idx
        ]
        for r in new_rays:
            kept.append(r)
        rays = kept
        masks = kept_masks + _masks(new_rays, processed)

    lines, pivots = rref(lines, dim)
    lines = [scale_primitive(l) for l in lines]
    reduced = []
    for r in rays:
        rr = reduce_mod_lines(r, lines, pivots)
        if not is_zero_vec(rr):
            reduced.append(scale_primitive(rr))
    rays = sorted(set(reduced))
    if EXTREMALITY_CHECK:
        rays = _drop_non_extreme(dim, rays, lines)
    return lines, sorted(rays)


def _drop_non_extreme(dim, rays, lines):
    """One LP pass: keep a ray only if it is not a nonnegative combination of
    the other kept rays plus the lineality space."""
    from .exactlp import LinearSystem, LpStatus, lp_solve

    kept = list(rays)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1 :]
        if _in_cone(dim, kept[i], others, lines):
            kept.pop(i)
        else:
            i += 1
    return kept


def _in_cone(dim, target, rays, lines):
    from .exactlp import LinearSystem, LpStatus, lp_solve

    k = len(rays)
    m = len(lines)
    width = k + 2 * m  # lambda_i >= 0; line coefficients split into +/-.
    if width == 0:
        return is_zero_vec(target)
    eq = []
    for c in range(dim):
        row = [rays[i][c] for i in range(k)]
        row += [lines[j][c] for j in range(m)]
        row += [-lines[j][c] for j in range(m)]
        eq.append((tuple(row), target[c]))
    le = [(tuple(-ONE if i == j else ZERO for i in range(width)), ZERO) for j in range(k)]
    out = lp_solve((ZERO,) * width, LinearSystem(width, le=tuple(le), eq=tuple(eq)), "min")
    return out.status is LpStatus.OPTIMAL


def cone_contains_point(dim, point, rays, lines):
    """Exact membership of a point in a finitely generated cone."""
    return _in_cone(dim, vec(point), list(rays), list(lines))
