"""Domination among axis-parallel segments with proper projections.

Three layers: an exact greedy for covering intervals with intervals (LP-
integral when candidates are proper), an 8-approximation for covering
vertical targets with horizontal candidates via strip decomposition, and
the 18-approximation combining both over a mixed instance.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import ssr
from .errors import (
    InfeasibleConstraintError,
    InfeasibleTargetError,
    InvalidInputError,
    NotProperError,
)
from .geom import HRay, HSeg, OrthoInstance, Rat, VSeg, intersects
from .lp import (
    HALF,
    CoverProgram,
    CoverSolution,
    SolveCertificate,
    solve_lp,
    threshold_split,
)


@dataclass(frozen=True)
class Interval:
    id: int
    lo: Rat
    hi: Rat

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInputError(f"interval {self.id}: lo > hi")

    def meets(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


def _containment_violation(intervals) -> Optional[tuple[int, int]]:
    order = sorted(intervals, key=lambda iv: (iv.lo, -iv.hi, iv.id))
    best: Optional[Interval] = None
    for iv in order:
        if best is not None and iv.hi <= best.hi:
            return best.id, iv.id
        best = iv
    return None


@dataclass(frozen=True)
class ProperIntervalSet:
    intervals: tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        ids = [iv.id for iv in self.intervals]
        if len(ids) != len(set(ids)):
            raise InvalidInputError("duplicate interval ids")
        bad = _containment_violation(self.intervals)
        if bad is not None:
            raise InvalidInputError(
                f"interval {bad[1]} is contained in interval {bad[0]}"
            )

    def by_id(self) -> dict[int, Interval]:
        return {iv.id: iv for iv in self.intervals}


def _interval_cover(candidates, targets) -> set[int]:
    """Minimum subset of candidate intervals meeting every target interval.

    Greedy over targets by right endpoint, always taking the deepest-
    reaching candidate; exchange argument makes this optimal for arbitrary
    intervals (properness is only needed for LP integrality, not here).
    """
    chosen: list[Interval] = []
    chosen_ids: set[int] = set()
    for t in sorted(targets, key=lambda iv: (iv.hi, iv.id)):
        if any(c.meets(t) for c in chosen):
            continue
        hits = [c for c in candidates if c.meets(t)]
        if not hits:
            raise InfeasibleTargetError(t.id)
        best = min(hits, key=lambda c: (-c.hi, c.id))
        chosen.append(best)
        chosen_ids.add(best.id)
    return chosen_ids


def spid_exact(s: ProperIntervalSet, t_ids) -> set[int]:
    """Optimal domination of the sub-family T by members of S."""
    table = s.by_id()
    t_ids = set(t_ids)
    missing = t_ids - set(table)
    if missing:
        raise InvalidInputError(f"target ids not in the interval set: {sorted(missing)}")
    targets = [table[i] for i in sorted(t_ids)]
    return _interval_cover(list(s.intervals), targets)


@dataclass(frozen=True)
class StripDecomposition:
    """Hit points and per-target boundary candidate sets.

    ``points`` includes the two sentinels; strip i spans
    [points[i], points[i+1]).  ``left``/``right`` map each target id to the
    candidates that reach it across the strip's left/right boundary line.
    """

    points: tuple[Rat, ...]
    interior: tuple[Rat, ...]
    strips: tuple[frozenset[int], ...]
    strip_of: dict[int, int]
    left: dict[int, frozenset[int]]
    right: dict[int, frozenset[int]]


def build_strips(candidates: list[HSeg], targets: list[VSeg]) -> StripDecomposition:
    """Greedy disjoint-subfamily hit points plus boundary membership."""
    picked_rights: list[Rat] = []
    last_r: Optional[Rat] = None
    for c in sorted(candidates, key=lambda c: (c.x_hi, c.x_lo, c.id)):
        if last_r is None or c.x_lo > last_r:
            picked_rights.append(c.x_hi)
            last_r = c.x_hi
    coords = (
        [c.x_lo for c in candidates]
        + [c.x_hi for c in candidates]
        + [t.x for t in targets]
    )
    if not coords:
        return StripDecomposition((), (), (), {}, {}, {})
    q = min(coords) - 1
    q_prime = max(coords) + 1
    points = tuple([q] + picked_rights + [q_prime])
    strips: list[set[int]] = [set() for _ in range(len(points) - 1)]
    strip_of: dict[int, int] = {}
    left: dict[int, frozenset[int]] = {}
    right: dict[int, frozenset[int]] = {}
    for t in targets:
        i = max(k for k in range(len(points) - 1) if points[k] <= t.x)
        strips[i].add(t.id)
        strip_of[t.id] = i
        p_lo, p_hi = points[i], points[i + 1]
        left[t.id] = frozenset(
            c.id for c in candidates
            if intersects(c, t) and c.x_lo <= p_lo <= c.x_hi
        )
        right[t.id] = frozenset(
            c.id for c in candidates
            if intersects(c, t) and c.x_lo <= p_hi <= c.x_hi
        )
    return StripDecomposition(
        points, tuple(picked_rights), tuple(frozenset(s) for s in strips),
        strip_of, left, right,
    )


@dataclass(frozen=True)
class PossDetails:
    program: CoverProgram
    lp_solution: CoverSolution
    var_order: tuple[int, ...]
    decomposition: StripDecomposition
    left_rows: frozenset[int]
    right_rows: frozenset[int]
    left_vars: frozenset[int]
    right_vars: frozenset[int]
    left_selected: frozenset[int]
    right_selected: frozenset[int]


def _dedup_rays(rays: list[HRay]) -> list[HRay]:
    # same-height rays: only the farthest-reaching one can matter
    best: dict[Rat, HRay] = {}
    for r in rays:
        cur = best.get(r.y)
        if cur is None or (r.x_right, -r.id) > (cur.x_right, -cur.id):
            best[r.y] = r
    return sorted(best.values(), key=lambda r: r.id)


def _solve_boundary_side(
    candidates: dict[int, HSeg], targets: list[VSeg], mirror: bool
) -> set[int]:
    """One strip/side sub-problem as a canonical ray-stabbing instance.

    Left boundaries keep orientation (a candidate reaches rightward targets
    up to x_hi, exactly a leftward ray's coverage); right boundaries are
    mirrored so the relevant reach x_lo becomes a leftward reach again.
    """
    if not targets:
        return set()
    if mirror:
        rays = [HRay(c.id, c.y, -c.x_lo) for c in candidates.values()]
        segs = [VSeg(t.id, -t.x, t.y_lo, t.y_hi) for t in targets]
    else:
        rays = [HRay(c.id, c.y, c.x_hi) for c in candidates.values()]
        segs = [VSeg(t.id, t.x, t.y_lo, t.y_hi) for t in targets]
    inst = ssr.normalize(ssr.SsrInstance(tuple(_dedup_rays(rays)), tuple(segs)))
    chosen, _ = ssr.solve(inst)
    return chosen


def poss_solve(candidates: list[HSeg], targets: list[VSeg], want_details: bool = False):
    """8-approximate cover of vertical targets by horizontal candidates."""
    cand_intervals = [Interval(c.id, c.x_lo, c.x_hi) for c in candidates]
    bad = _containment_violation(cand_intervals)
    if bad is not None:
        raise NotProperError("h", list(bad))
    order = sorted(c.id for c in candidates)
    if len(order) != len(set(order)):
        raise InvalidInputError("duplicate candidate ids")
    index_of = {cid: i for i, cid in enumerate(order)}
    cand_by_id = {c.id: c for c in candidates}

    rows = []
    row_targets = sorted(targets, key=lambda t: t.id)
    for t in row_targets:
        row = frozenset(index_of[c.id] for c in candidates if intersects(c, t))
        if not row:
            raise InfeasibleTargetError(t.id)
        rows.append(row)
    program = CoverProgram(len(order), tuple(rows))
    lp_sol = solve_lp(program)

    dec = build_strips(candidates, targets)
    parts = {
        i: {
            "left": frozenset(index_of[c] for c in dec.left[t.id]),
            "right": frozenset(index_of[c] for c in dec.right[t.id]),
        }
        for i, t in enumerate(row_targets)
    }
    split = threshold_split(program, lp_sol, parts, HALF)
    l_rows, l_vars = split.get("left", (frozenset(), frozenset()))
    r_rows, r_vars = split.get("right", (frozenset(), frozenset()))
    left_rows = frozenset(row_targets[i].id for i in l_rows)
    right_rows = frozenset(row_targets[i].id for i in r_rows)
    left_vars = frozenset(order[j] for j in l_vars)
    right_vars = frozenset(order[j] for j in r_vars)

    target_by_id = {t.id: t for t in targets}
    left_selected: set[int] = set()
    right_selected: set[int] = set()
    for i in range(len(dec.points) - 1):
        strip_targets = dec.strips[i]
        lt = [target_by_id[tid] for tid in sorted(strip_targets & left_rows)]
        if lt:
            boundary = dec.points[i]
            cands = {
                cid: cand_by_id[cid]
                for cid in left_vars
                if cand_by_id[cid].x_lo <= boundary <= cand_by_id[cid].x_hi
            }
            left_selected |= _solve_boundary_side(cands, lt, mirror=False)
        rt = [target_by_id[tid] for tid in sorted(strip_targets & right_rows)]
        if rt:
            boundary = dec.points[i + 1]
            cands = {
                cid: cand_by_id[cid]
                for cid in right_vars
                if cand_by_id[cid].x_lo <= boundary <= cand_by_id[cid].x_hi
            }
            right_selected |= _solve_boundary_side(cands, rt, mirror=True)

    chosen = frozenset(left_selected | right_selected)
    cert = SolveCertificate(
        heuristic_ids=chosen,
        heuristic_size=len(chosen),
        lp_opt=lp_sol.objective_value,
        claimed_ratio_bound=Fraction(8),
    )
    cert.validate()
    if not want_details:
        return cert
    return cert, PossDetails(
        program=program,
        lp_solution=lp_sol,
        var_order=tuple(order),
        decomposition=dec,
        left_rows=left_rows,
        right_rows=right_rows,
        left_vars=left_vars,
        right_vars=right_vars,
        left_selected=frozenset(left_selected),
        right_selected=frozenset(right_selected),
    )


@dataclass(frozen=True)
class PsdDetails:
    program: CoverProgram
    lp_solution: CoverSolution
    var_order: tuple[int, ...]
    same_rows: frozenset[int]
    cross_rows: frozenset[int]
    same_vars: frozenset[int]
    cross_vars: frozenset[int]
    exact_selected: frozenset[int]
    cross_selected: frozenset[int]
    poss_certs: tuple[SolveCertificate, ...]


def _rotate_h(seg: HSeg) -> VSeg:
    return VSeg(seg.id, seg.y, seg.x_lo, seg.x_hi)


def _rotate_v(seg: VSeg) -> HSeg:
    return HSeg(seg.id, seg.x, seg.y_lo, seg.y_hi)


def _collinear_exact(
    constraints: list[Union[HSeg, VSeg]], candidates: list[Union[HSeg, VSeg]]
) -> set[int]:
    """Exact same-orientation cover: decompose per carrier line, then cover
    intervals greedily.  Parallel segments only meet when collinear, so the
    blocks are independent and their union is optimal."""

    def key_and_interval(seg):
        if isinstance(seg, HSeg):
            return ("h", seg.y), Interval(seg.id, seg.x_lo, seg.x_hi)
        return ("v", seg.x), Interval(seg.id, seg.y_lo, seg.y_hi)

    cands_by_line: dict[object, list[Interval]] = {}
    for seg in candidates:
        key, iv = key_and_interval(seg)
        cands_by_line.setdefault(key, []).append(iv)
    targets_by_line: dict[object, list[Interval]] = {}
    for seg in constraints:
        key, iv = key_and_interval(seg)
        targets_by_line.setdefault(key, []).append(iv)
    chosen: set[int] = set()
    for key in sorted(targets_by_line, key=str):
        chosen |= _interval_cover(cands_by_line.get(key, []), targets_by_line[key])
    return chosen


def psd_solve(inst: OrthoInstance, want_details: bool = False):
    """18-approximation for covering marked segments with marked segments."""
    h_ivs = [Interval(s.id, s.x_lo, s.x_hi) for s in inst.hsegs]
    bad = _containment_violation(h_ivs)
    if bad is not None:
        raise NotProperError("h", list(bad))
    v_ivs = [Interval(s.id, s.y_lo, s.y_hi) for s in inst.vsegs]
    bad = _containment_violation(v_ivs)
    if bad is not None:
        raise NotProperError("v", list(bad))

    table = inst.segment_by_id()
    horiz = {s.id for s in inst.hsegs}
    constraints = sorted(inst.constraint_ids)
    cand_order = sorted(inst.candidate_ids)
    index_of = {cid: i for i, cid in enumerate(cand_order)}

    rows = []
    parts = {}
    for row_idx, u in enumerate(constraints):
        seg_u = table[u]
        hits = [c for c in cand_order if intersects(seg_u, table[c])]
        if not hits:
            raise InfeasibleConstraintError(u)
        same = frozenset(index_of[c] for c in hits if (c in horiz) == (u in horiz))
        cross = frozenset(index_of[c] for c in hits if (c in horiz) != (u in horiz))
        rows.append(same | cross)
        parts[row_idx] = {"same": same, "cross": cross}
    program = CoverProgram(len(cand_order), tuple(rows))
    lp_sol = solve_lp(program)
    split = threshold_split(program, lp_sol, parts, HALF)
    s_rows, s_vars = split.get("same", (frozenset(), frozenset()))
    c_rows, c_vars = split.get("cross", (frozenset(), frozenset()))
    same_rows = frozenset(constraints[i] for i in s_rows)
    cross_rows = frozenset(constraints[i] for i in c_rows)
    same_vars = frozenset(cand_order[j] for j in s_vars)
    cross_vars = frozenset(cand_order[j] for j in c_vars)

    exact_selected = _collinear_exact(
        [table[u] for u in sorted(same_rows)],
        [table[c] for c in sorted(same_vars)],
    )

    cross_selected: set[int] = set()
    poss_certs: list[SolveCertificate] = []
    v_targets = [table[u] for u in sorted(cross_rows) if u not in horiz]
    h_cands = [table[c] for c in sorted(cross_vars) if c in horiz]
    if v_targets:
        cert = poss_solve(h_cands, v_targets)
        poss_certs.append(cert)
        cross_selected |= set(cert.heuristic_ids)
    h_targets = [table[u] for u in sorted(cross_rows) if u in horiz]
    v_cands = [table[c] for c in sorted(cross_vars) if c not in horiz]
    if h_targets:
        # quarter-turn the plane so candidates become horizontal again
        cert = poss_solve(
            [_rotate_v(s) for s in v_cands], [_rotate_h(s) for s in h_targets]
        )
        poss_certs.append(cert)
        cross_selected |= set(cert.heuristic_ids)

    chosen = frozenset(exact_selected | cross_selected)
    cert = SolveCertificate(
        heuristic_ids=chosen,
        heuristic_size=len(chosen),
        lp_opt=lp_sol.objective_value,
        claimed_ratio_bound=Fraction(18),
    )
    cert.validate()
    if not want_details:
        return cert
    return cert, PsdDetails(
        program=program,
        lp_solution=lp_sol,
        var_order=tuple(cand_order),
        same_rows=same_rows,
        cross_rows=cross_rows,
        same_vars=same_vars,
        cross_vars=cross_vars,
        exact_selected=frozenset(exact_selected),
        cross_selected=frozenset(cross_selected),
        poss_certs=tuple(poss_certs),
    )
