"""Dominating-set 8-approximation on L-paths crossed by one vertical line.

Every path is an L: a vertical leg rising from the corner plus a horizontal
leg running right from it.  The pipeline solves the domination LP, splits
each closed neighbourhood row by where its mass sits (horizontal-leg
contacts vs vertical-leg contacts), and reduces the two halves to the
ray/segment stabbing problems solved elsewhere in this package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import srs, ssr
from .errors import AssumptionViolationError, InvalidInputError
from .geom import HRay, HSeg, Rat, VSeg, intersects
from .lp import (
    HALF,
    CoverProgram,
    CoverSolution,
    SolveCertificate,
    solve_lp,
    threshold_split,
)


@dataclass(frozen=True)
class LPath:
    id: int
    corner_x: Rat
    corner_y: Rat
    vlen: Rat
    hlen: Rat

    def __post_init__(self):
        if self.vlen <= 0 or self.hlen <= 0:
            raise InvalidInputError(f"LPath {self.id}: legs need positive length")

    def vleg(self) -> VSeg:
        return VSeg(self.id, self.corner_x, self.corner_y, self.corner_y + self.vlen)

    def hleg(self) -> HSeg:
        return HSeg(self.id, self.corner_y, self.corner_x, self.corner_x + self.hlen)


@dataclass(frozen=True)
class StabbedLInstance:
    paths: tuple[LPath, ...]
    line_x: Rat = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(self.paths))
        ids = [p.id for p in self.paths]
        if len(ids) != len(set(ids)):
            raise InvalidInputError("duplicate path ids")


def paths_intersect(a: LPath, b: LPath) -> bool:
    if a.id == b.id:
        return True
    return (
        intersects(a.vleg(), b.hleg())
        or intersects(b.vleg(), a.hleg())
        or intersects(a.vleg(), b.vleg())
        or intersects(a.hleg(), b.hleg())
    )


def normalize(inst: StabbedLInstance) -> StabbedLInstance:
    """Translate the stabbing line to x=0 and validate the layout rules.

    (i) the line meets every path, (ii) no corner lies on the line, and
    (iii) no two paths share more than a single point.  Because every
    horizontal leg must cross x=0 while corners sit strictly left of it,
    equal corner heights always force an overlap, so (iii) reduces to
    distinct corner heights plus non-overlapping collinear vertical legs.
    """
    shift = inst.line_x
    paths = tuple(
        LPath(p.id, p.corner_x - shift, p.corner_y, p.vlen, p.hlen) for p in inst.paths
    )
    missing = [p.id for p in paths if p.corner_x > 0 or p.corner_x + p.hlen < 0]
    if missing:
        raise AssumptionViolationError("i", missing)
    on_line = [p.id for p in paths if p.corner_x == 0]
    if on_line:
        raise AssumptionViolationError("ii", on_line)
    by_y: dict[Rat, list[int]] = {}
    for p in paths:
        by_y.setdefault(p.corner_y, []).append(p.id)
    clashes = [ids for ids in by_y.values() if len(ids) > 1]
    if clashes:
        raise AssumptionViolationError("iii", sorted(clashes[0]))
    by_x: dict[Rat, list[LPath]] = {}
    for p in paths:
        by_x.setdefault(p.corner_x, []).append(p)
    for group in by_x.values():
        group.sort(key=lambda p: p.corner_y)
        for lo, hi in zip(group, group[1:]):
            if lo.corner_y + lo.vlen > hi.corner_y:
                raise AssumptionViolationError("iii", sorted([lo.id, hi.id]))
    return StabbedLInstance(paths, Fraction(0))


@dataclass(frozen=True)
class NeighborhoodPartition:
    """Closed neighbourhoods split by contact type.

    horizontal[u] holds the members of N[u] whose path touches u's
    horizontal leg (u always included); vertical[u] holds the remaining
    neighbours, each of which touches u's vertical leg strictly above the
    corner.
    """

    horizontal: dict[int, frozenset[int]]
    vertical: dict[int, frozenset[int]]

    def closed_neighborhood(self, u: int) -> frozenset[int]:
        return self.horizontal[u] | self.vertical[u]


def build_graph(inst: StabbedLInstance):
    """Adjacency (closed neighbourhoods) plus the leg-contact partition."""
    adjacency: dict[int, set[int]] = {p.id: {p.id} for p in inst.paths}
    horizontal: dict[int, set[int]] = {p.id: {p.id} for p in inst.paths}
    vertical: dict[int, set[int]] = {p.id: set() for p in inst.paths}
    paths = list(inst.paths)
    for i, a in enumerate(paths):
        for b in paths[i + 1:]:
            if not paths_intersect(a, b):
                continue
            adjacency[a.id].add(b.id)
            adjacency[b.id].add(a.id)
            # contact classification is per endpoint's own horizontal leg
            if intersects(b.vleg(), a.hleg()):
                horizontal[a.id].add(b.id)
            else:
                vertical[a.id].add(b.id)
            if intersects(a.vleg(), b.hleg()):
                horizontal[b.id].add(a.id)
            else:
                vertical[b.id].add(a.id)
    neighborhoods = {u: frozenset(v) for u, v in adjacency.items()}
    partition = NeighborhoodPartition(
        {u: frozenset(v) for u, v in horizontal.items()},
        {u: frozenset(v) for u, v in vertical.items()},
    )
    return neighborhoods, partition


@dataclass(frozen=True)
class StabbedLDetails:
    """Intermediate pipeline state, exposed for end-to-end auditing."""

    program: CoverProgram
    lp_solution: CoverSolution
    index_of: dict[int, int]
    h_rows: frozenset[int]
    v_rows: frozenset[int]
    h_candidates: frozenset[int]
    v_candidates: frozenset[int]
    srs_instance: Optional[srs.SrsInstance]
    ssr_instance: Optional[ssr.SsrInstance]
    srs_selected: frozenset[int]
    ssr_selected: frozenset[int]


def _vertical_shrink(paths_by_id, constraint_ids) -> Rat:
    """Half the least positive corner-height difference, capped by the
    shortest constrained vertical leg; shrinking constraint segments up by
    this keeps every genuine contact and removes only corner self-hits."""
    ys = sorted(p.corner_y for p in paths_by_id.values())
    diffs = [b - a for a, b in zip(ys, ys[1:]) if b > a]
    candidates = [p.vlen for pid in constraint_ids for p in (paths_by_id[pid],)]
    pool = diffs + candidates
    return min(pool) / 2


def solve_mds(inst: StabbedLInstance, want_details: bool = False):
    """8-approximate dominating set over the path intersection graph."""
    norm = normalize(inst)
    neighborhoods, partition = build_graph(norm)
    by_id = {p.id: p for p in norm.paths}
    order = sorted(by_id)
    index_of = {pid: i for i, pid in enumerate(order)}

    rows = tuple(
        frozenset(index_of[v] for v in neighborhoods[u]) for u in order
    )
    program = CoverProgram(len(order), rows)
    lp_sol = solve_lp(program)
    parts = {
        i: {
            "h": frozenset(index_of[v] for v in partition.horizontal[u]),
            "v": frozenset(index_of[v] for v in partition.vertical[u]),
        }
        for i, u in enumerate(order)
    }
    split = threshold_split(program, lp_sol, parts, HALF)
    h_rows, h_vars = split.get("h", (frozenset(), frozenset()))
    v_rows, v_vars = split.get("v", (frozenset(), frozenset()))
    a1 = frozenset(order[i] for i in h_rows)
    a2 = frozenset(order[i] for i in v_rows)
    h_candidates = frozenset(order[j] for j in h_vars)
    v_candidates = frozenset(order[j] for j in v_vars)

    # horizontal half: constrained paths become leftward rays (x mirrored),
    # candidate vertical legs stay exact
    srs_inst = None
    srs_selected: set[int] = set()
    if a1:
        srs_rays = tuple(
            HRay(u, by_id[u].corner_y, -by_id[u].corner_x) for u in sorted(a1)
        )
        srs_segs = tuple(
            VSeg(v, -by_id[v].corner_x, by_id[v].corner_y, by_id[v].corner_y + by_id[v].vlen)
            for v in sorted(h_candidates)
        )
        srs_inst = srs.SrsInstance(srs_rays, srs_segs)
        srs_selected, _ = srs.solve(srs_inst)

    # vertical half: candidate paths become leftward rays, constrained
    # vertical legs lose a sliver above the corner so a path cannot satisfy
    # its own row through the shared corner point
    ssr_inst = None
    ssr_selected: set[int] = set()
    if a2:
        delta = _vertical_shrink(by_id, a2)
        ssr_rays = tuple(
            HRay(v, by_id[v].corner_y, -by_id[v].corner_x) for v in sorted(v_candidates)
        )
        ssr_segs = tuple(
            VSeg(u, -by_id[u].corner_x, by_id[u].corner_y + delta, by_id[u].corner_y + by_id[u].vlen)
            for u in sorted(a2)
        )
        ssr_inst = ssr.normalize(ssr.SsrInstance(ssr_rays, ssr_segs))
        ssr_selected, _ = ssr.solve(ssr_inst)

    chosen = frozenset(srs_selected) | frozenset(ssr_selected)
    cert = SolveCertificate(
        heuristic_ids=chosen,
        heuristic_size=len(chosen),
        lp_opt=lp_sol.objective_value,
        claimed_ratio_bound=Fraction(8),
    )
    cert.validate()
    if not want_details:
        return cert
    details = StabbedLDetails(
        program=program,
        lp_solution=lp_sol,
        index_of=index_of,
        h_rows=a1,
        v_rows=a2,
        h_candidates=h_candidates,
        v_candidates=v_candidates,
        srs_instance=srs_inst,
        ssr_instance=ssr_inst,
        srs_selected=frozenset(srs_selected),
        ssr_selected=frozenset(ssr_selected),
    )
    return cert, details
