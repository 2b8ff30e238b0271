"""Stabbing leftward rays with vertical segments, factor-2 heuristic.

Round structure: take the live ray of smallest reach, keep the extreme two
segments of its live neighbourhood, and retire every ray those two touch.
A retired ray always intersects one of the kept segments, and a chosen
ray's live neighbourhood equals its input neighbourhood, which is what the
factor-2 LP argument needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InfeasibleRayError, InvalidInputError
from .geom import HRay, VSeg, intersects


@dataclass(frozen=True)
class SrsInstance:
    rays: tuple[HRay, ...]
    segments: tuple[VSeg, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(self.rays))
        object.__setattr__(self, "segments", tuple(self.segments))
        rids = [r.id for r in self.rays]
        if len(rids) != len(set(rids)):
            raise InvalidInputError("duplicate ray ids")
        sids = [s.id for s in self.segments]
        if len(sids) != len(set(sids)):
            raise InvalidInputError("duplicate segment ids")


@dataclass(frozen=True)
class SrsRound:
    index: int
    chosen_ray: int
    neighborhood: frozenset[int]
    v_top: int
    v_bot: int
    removed_rays: frozenset[int]


@dataclass(frozen=True)
class SrsTrace:
    rounds: tuple[SrsRound, ...]
    tokens: dict[int, frozenset[int]]


def solve(inst: SrsInstance, want_trace: bool = False):
    """Greedy extreme-segment selection; returns (segment ids, trace)."""
    live_rays = {r.id: r for r in inst.rays}
    live_segs = {v.id: v for v in inst.segments}
    tokens: dict[int, frozenset[int]] = {vid: frozenset() for vid in live_segs}
    selected: set[int] = set()
    rounds: list[SrsRound] = []
    index = 0
    while live_rays:
        index += 1
        r = min(live_rays.values(), key=lambda x: (x.x_right, x.id))
        hood = [v for v in live_segs.values() if intersects(r, v)]
        if not hood:
            raise InfeasibleRayError(r.id)
        v_top = min(hood, key=lambda v: (-v.y_hi, v.id))
        v_bot = min(hood, key=lambda v: (v.y_lo, v.id))
        hood_ids = frozenset(v.id for v in hood)
        selected.add(v_top.id)
        selected.add(v_bot.id)
        tokens[v_top.id] = hood_ids
        tokens[v_bot.id] = hood_ids
        removed = frozenset(
            rr.id
            for rr in live_rays.values()
            if intersects(rr, v_top) or intersects(rr, v_bot)
        )
        for rid in removed:
            del live_rays[rid]
        for vid in hood_ids:
            del live_segs[vid]
        if want_trace:
            rounds.append(SrsRound(index, r.id, hood_ids, v_top.id, v_bot.id, removed))
    trace = SrsTrace(tuple(rounds), dict(tokens)) if want_trace else None
    return selected, trace
