"""Dominating sets in intersection graphs of unit axis-parallel paths.

A path is a chain of unit-length legs, alternating between horizontal and
vertical.  Two paths are adjacent when any pair of legs meets.  Domination
is reduced, one contact label at a time, to segment covering with proper
projections.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InvalidInputError, InvalidPathError
from .geom import HSeg, OrthoInstance, Rat, VSeg, as_rat, intersects, properize
from .lp import CoverProgram, CoverSolution, SolveCertificate, solve_lp, threshold_split
from .psd import psd_solve

_STEP = {
    "L": (Fraction(-1), Fraction(0)),
    "R": (Fraction(1), Fraction(0)),
    "U": (Fraction(0), Fraction(1)),
    "D": (Fraction(0), Fraction(-1)),
}
_FLIP = {"L": "R", "R": "L", "U": "D", "D": "U"}


def _axis(direction: str) -> str:
    return "h" if direction in ("L", "R") else "v"


@dataclass(frozen=True)
class UnitKBendPath:
    id: int
    start_x: Rat
    start_y: Rat
    legs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "start_x", as_rat(self.start_x))
        object.__setattr__(self, "start_y", as_rat(self.start_y))
        object.__setattr__(self, "legs", tuple(self.legs))
        if not self.legs:
            raise InvalidPathError(self.id, "path needs at least one leg")
        for d in self.legs:
            if d not in _STEP:
                raise InvalidPathError(self.id, f"unknown direction {d!r}")
        for a, b in zip(self.legs, self.legs[1:]):
            if _axis(a) == _axis(b):
                raise InvalidPathError(
                    self.id, f"legs {a!r},{b!r} do not alternate orientation"
                )

    def points(self) -> list[tuple[Rat, Rat]]:
        pts = [(self.start_x, self.start_y)]
        x, y = self.start_x, self.start_y
        for d in self.legs:
            dx, dy = _STEP[d]
            x, y = x + dx, y + dy
            pts.append((x, y))
        return pts

    def leg_segments(self) -> list[Union[HSeg, VSeg]]:
        """Leg i (1-based) as a unit segment; segment id is the leg number."""
        segs: list[Union[HSeg, VSeg]] = []
        pts = self.points()
        for i, d in enumerate(self.legs):
            (x0, y0), (x1, y1) = pts[i], pts[i + 1]
            if _axis(d) == "h":
                segs.append(HSeg(i + 1, y0, min(x0, x1), max(x0, x1)))
            else:
                segs.append(VSeg(i + 1, x0, min(y0, y1), max(y0, y1)))
        return segs

    def canonical(self) -> "UnitKBendPath":
        """Reorient so traversal starts at the lexicographically smaller
        endpoint; leg numbering is only meaningful on canonical paths."""
        pts = self.points()
        if pts[-1] < pts[0]:
            flipped = tuple(_FLIP[d] for d in reversed(self.legs))
            return UnitKBendPath(self.id, pts[-1][0], pts[-1][1], flipped)
        return self


@dataclass(frozen=True)
class ContactStructure:
    neighborhoods: dict[int, frozenset[int]]
    phi: dict[tuple[int, int], tuple[int, int]]
    partition: dict[int, dict[tuple[int, int], frozenset[int]]]


def _first_contact(legs_u, legs_v):
    for i, su in enumerate(legs_u, start=1):
        for j, sv in enumerate(legs_v, start=1):
            if intersects(su, sv):
                return (i, j)
    return None


def build_graph(paths: list[UnitKBendPath]) -> ContactStructure:
    """Closed neighborhoods, first-contact labels, and the label partition.

    phi[(u, v)] is the lexicographically least pair (i, j) with leg i of u
    meeting leg j of v; minimality in lex order already rules out any
    strictly smaller crossing pair, so it matches the partition rule.
    """
    ids = [p.id for p in paths]
    if len(ids) != len(set(ids)):
        raise InvalidInputError("duplicate path ids")
    canon = {p.id: p.canonical() for p in paths}
    legs = {pid: p.leg_segments() for pid, p in canon.items()}
    neighborhoods: dict[int, set[int]] = {pid: set() for pid in canon}
    phi: dict[tuple[int, int], tuple[int, int]] = {}
    order = sorted(canon)
    for u in order:
        for v in order:
            label = _first_contact(legs[u], legs[v])
            if label is not None:
                neighborhoods[u].add(v)
                phi[(u, v)] = label
    partition: dict[int, dict[tuple[int, int], frozenset[int]]] = {}
    for u in order:
        blocks: dict[tuple[int, int], set[int]] = {}
        for v in neighborhoods[u]:
            blocks.setdefault(phi[(u, v)], set()).add(v)
        partition[u] = {lab: frozenset(vs) for lab, vs in blocks.items()}
    return ContactStructure(
        {u: frozenset(ns) for u, ns in neighborhoods.items()}, phi, partition
    )


@dataclass(frozen=True)
class LabelOutcome:
    rows: frozenset[int]
    vars: frozenset[int]
    certificate: SolveCertificate
    chosen_paths: frozenset[int]


@dataclass(frozen=True)
class UvpgDetails:
    program: CoverProgram
    lp_solution: CoverSolution
    order: tuple[int, ...]
    contacts: ContactStructure
    labels: dict[tuple[int, int], LabelOutcome]


def _label_instance(
    label: tuple[int, int],
    row_paths: list[UnitKBendPath],
    var_paths: list[UnitKBendPath],
):
    """Geometric covering instance for one contact label.

    Constraints are the i-th legs of the row paths, candidates the j-th legs
    of the column paths.  A leg playing both roles is entered twice under
    fresh ids; the maps recover path ids afterwards.
    """
    i, j = label
    hsegs: list[HSeg] = []
    vsegs: list[VSeg] = []
    constraint_ids = set()
    candidate_ids = set()
    cand_owner: dict[int, int] = {}
    next_id = 0

    def add(seg, role_constraint: bool, owner: int):
        nonlocal next_id
        rid = next_id
        next_id += 1
        if isinstance(seg, HSeg):
            hsegs.append(HSeg(rid, seg.y, seg.x_lo, seg.x_hi))
        else:
            vsegs.append(VSeg(rid, seg.x, seg.y_lo, seg.y_hi))
        if role_constraint:
            constraint_ids.add(rid)
        else:
            candidate_ids.add(rid)
            cand_owner[rid] = owner

    for p in row_paths:
        add(p.leg_segments()[i - 1], True, p.id)
    for p in var_paths:
        add(p.leg_segments()[j - 1], False, p.id)
    inst = OrthoInstance(
        tuple(hsegs), tuple(vsegs), frozenset(constraint_ids), frozenset(candidate_ids)
    )
    return inst, cand_owner


def solve_mds(paths: list[UnitKBendPath], k: int, want_details: bool = False):
    """Dominating set within 18(k+1)^4 of the fractional optimum."""
    if k < 0:
        raise InvalidInputError("negative bend bound")
    for p in paths:
        if len(p.legs) > k + 1:
            raise InvalidPathError(p.id, f"more than {k + 1} legs")
    contacts = build_graph(paths)
    order = tuple(sorted(contacts.neighborhoods))
    index_of = {pid: i for i, pid in enumerate(order)}
    rows = tuple(
        frozenset(index_of[v] for v in contacts.neighborhoods[u]) for u in order
    )
    program = CoverProgram(len(order), rows)
    lp_sol = solve_lp(program)

    theta = Fraction(1, (k + 1) ** 2)
    parts = {}
    for r, u in enumerate(order):
        parts[r] = {
            lab: frozenset(index_of[v] for v in vs)
            for lab, vs in contacts.partition[u].items()
        }
    split = threshold_split(program, lp_sol, parts, theta)

    canon = {p.id: p.canonical() for p in paths}
    chosen: set[int] = set()
    labels: dict[tuple[int, int], LabelOutcome] = {}
    for label in sorted(split):
        row_idx, var_idx = split[label]
        row_paths = [canon[order[r]] for r in sorted(row_idx)]
        var_paths = [canon[order[b]] for b in sorted(var_idx)]
        inst, cand_owner = _label_instance(label, row_paths, var_paths)
        cert = psd_solve(properize(inst))
        picked = frozenset(cand_owner[rid] for rid in cert.heuristic_ids)
        chosen |= picked
        labels[label] = LabelOutcome(
            rows=frozenset(order[r] for r in row_idx),
            vars=frozenset(order[b] for b in var_idx),
            certificate=cert,
            chosen_paths=picked,
        )

    bound = Fraction(18 * (k + 1) ** 4)
    cert = SolveCertificate(
        heuristic_ids=frozenset(chosen),
        heuristic_size=len(chosen),
        lp_opt=lp_sol.objective_value,
        claimed_ratio_bound=bound,
    )
    cert.validate()
    if not want_details:
        return cert
    return cert, UvpgDetails(
        program=program,
        lp_solution=lp_sol,
        order=order,
        contacts=contacts,
        labels=labels,
    )


def grid_to_unit_b1(height: int, width: int) -> list[UnitKBendPath]:
    """Single-bend paths whose contact graph is the height-by-width grid.

    Cell (x, y), 1-based, maps to id (x-1)*width + (y-1).  Columns are
    sheared downward by (x-1)/(height*width) so horizontal contacts happen
    strictly inside vertical legs while diagonal pairs stay apart.
    """
    if height < 1 or width < 1:
        raise InvalidInputError("grid dimensions must be positive")
    eps = Fraction(1, height * width)
    paths = []
    for x in range(1, height + 1):
        for y in range(1, width + 1):
            pid = (x - 1) * width + (y - 1)
            top = Fraction(y) - eps * (x - 1)
            paths.append(UnitKBendPath(pid, Fraction(x), top, ("D", "R")))
    return paths
