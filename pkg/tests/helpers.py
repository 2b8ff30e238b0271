"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive: exhaustive subset search for covers,
vertex enumeration for LPs, quadratic scans for geometry.  None of it shares
code with the solvers under test.
"""
from fractions import Fraction
from itertools import combinations

from geodom.geom import intersects


def solve_linear(a, b):
    """Solve a square rational system by Gaussian elimination.

    Returns None when singular.
    """
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def lp_min_bruteforce(program) -> Fraction:
    """Covering LP optimum by enumerating basic feasible points.

    Every vertex of {sum_{j in row} x_j >= 1, x >= 0} lies on n tight
    constraints; small sizes only.
    """
    n = program.num_vars
    if n == 0:
        return Fraction(0)
    cons = []
    for row in program.rows:
        cons.append(([Fraction(1 if j in row else 0) for j in range(n)], Fraction(1)))
    for j in range(n):
        cons.append(([Fraction(1 if i == j else 0) for i in range(n)], Fraction(0)))
    best = Fraction(n)  # all-ones is always feasible
    for subset in combinations(range(len(cons)), n):
        a = [cons[i][0] for i in subset]
        b = [cons[i][1] for i in subset]
        x = solve_linear(a, b)
        if x is None:
            continue
        if any(v < 0 for v in x):
            continue
        if any(sum(x[j] for j in row) < 1 for row in program.rows):
            continue
        best = min(best, sum(x, Fraction(0)))
    return best


def naive_min_cover(sets: dict, universe) -> set:
    """Smallest key subset whose sets union to the universe; None if none."""
    universe = frozenset(universe)
    ids = sorted(sets)
    for r in range(len(ids) + 1):
        for combo in combinations(ids, r):
            got = frozenset().union(*(sets[i] for i in combo)) if combo else frozenset()
            if universe <= got:
                return set(combo)
    return None


def naive_min_stab(candidates, constraints) -> set:
    table = {
        c.id: frozenset(u.id for u in constraints if intersects(c, u))
        for c in candidates
    }
    return naive_min_cover(table, frozenset(u.id for u in constraints))


def naive_min_dominating(neighborhoods: dict) -> set:
    return naive_min_cover(neighborhoods, frozenset(neighborhoods))


def intersection_matrix(segments) -> dict:
    out = {}
    for a in segments:
        for b in segments:
            out[(a.id, b.id)] = intersects(a, b)
    return out


def ssr_cover_ok(inst, chosen_ids) -> bool:
    """Range-max check that the chosen rays stab every segment.

    Linearithmic so it can validate the 10^5-sized instances.
    """
    from bisect import bisect_left, bisect_right

    chosen = sorted(
        (r for r in inst.rays if r.id in chosen_ids), key=lambda r: r.y
    )
    if not chosen and inst.segments:
        return False
    ys = [r.y for r in chosen]
    size = 1
    while size < max(len(chosen), 1):
        size *= 2
    tree = [None] * (2 * size)
    for i, r in enumerate(chosen):
        tree[size + i] = r.x_right
    for i in range(size - 1, 0, -1):
        kids = [v for v in (tree[2 * i], tree[2 * i + 1]) if v is not None]
        tree[i] = max(kids) if kids else None

    def range_max(lo, hi):  # inclusive index range
        best = None
        lo += size
        hi += size + 1
        while lo < hi:
            if lo & 1:
                if tree[lo] is not None and (best is None or tree[lo] > best):
                    best = tree[lo]
                lo += 1
            if hi & 1:
                hi -= 1
                if tree[hi] is not None and (best is None or tree[hi] > best):
                    best = tree[hi]
            lo >>= 1
            hi >>= 1
        return best

    for seg in inst.segments:
        a = bisect_left(ys, seg.y_lo)
        b = bisect_right(ys, seg.y_hi) - 1
        if a > b:
            return False
        best = range_max(a, b)
        if best is None or best < seg.x:
            return False
    return True
