"""Segment-side heuristic: frozen rounds plus randomized ratio checks."""

import random
from fractions import Fraction as F

import pytest

from geodom import HRay, VSeg, SrsInstance, exact_stab, intersects
from geodom.errors import InfeasibleRayError
from geodom import instances, lp, srs

from helpers import naive_min_stab


def tiny() -> SrsInstance:
    rays = (HRay(0, F(1), F(5)),)
    segs = (VSeg(0, F(1), F(0), F(2)), VSeg(1, F(2), F(1), F(3)))
    return SrsInstance(rays, segs)


def ray_program(inst: SrsInstance) -> lp.CoverProgram:
    pos = {v.id: k for k, v in enumerate(inst.segments)}
    rows = tuple(
        frozenset(pos[v.id] for v in inst.segments if intersects(r, v))
        for r in inst.rays
    )
    return lp.CoverProgram(len(inst.segments), rows)


def test_frozen_round():
    sel, trace = srs.solve(tiny(), want_trace=True)
    assert sel == {0, 1}
    assert trace.tokens == {0: frozenset({0, 1}), 1: frozenset({0, 1})}
    (rd,) = trace.rounds
    assert rd.index == 1
    assert rd.chosen_ray == 0
    assert rd.neighborhood == frozenset({0, 1})
    assert rd.v_top == 1
    assert rd.v_bot == 0
    assert rd.removed_rays == frozenset({0})


def test_unstabbable_ray():
    rays = (HRay(3, F(1), F(5)), HRay(4, F(9), F(1)))
    segs = (VSeg(0, F(1), F(0), F(2)),)
    with pytest.raises(InfeasibleRayError) as exc:
        srs.solve(SrsInstance(rays, segs))
    assert exc.value.ray_id == 4


def test_rounds_partition_rays():
    rng = random.Random(414)
    for _ in range(150):
        inst = instances.generate(
            "srs",
            {"n": rng.randint(1, 9), "m": rng.randint(1, 9)},
            seed=rng.randrange(10**9),
        ).data
        sel, trace = srs.solve(inst, want_trace=True)
        seen: set[int] = set()
        hoods: set[int] = set()
        for rd in trace.rounds:
            assert rd.chosen_ray in rd.removed_rays
            assert not (rd.removed_rays & seen)
            seen |= rd.removed_rays
            assert {rd.v_top, rd.v_bot} <= rd.neighborhood
            assert not (rd.neighborhood & hoods)
            hoods |= rd.neighborhood
        assert seen == {r.id for r in inst.rays}
        assert {rd.v_top for rd in trace.rounds} | {
            rd.v_bot for rd in trace.rounds
        } == sel


def test_token_multiplicity():
    rng = random.Random(515)
    for _ in range(150):
        inst = instances.generate(
            "srs",
            {"n": rng.randint(2, 10), "m": rng.randint(2, 10)},
            seed=rng.randrange(10**9),
        ).data
        _, trace = srs.solve(inst, want_trace=True)
        counts: dict[int, int] = {}
        for members in trace.tokens.values():
            for vid in members:
                counts[vid] = counts.get(vid, 0) + 1
        assert all(c <= 2 for c in counts.values())
        # a segment never keeps a token unless it was kept in some round
        kept = {rd.v_top for rd in trace.rounds} | {rd.v_bot for rd in trace.rounds}
        for vid, members in trace.tokens.items():
            if members:
                assert vid in kept


def test_coverage_and_ratio_two():
    rng = random.Random(616)
    for _ in range(200):
        inst = instances.generate(
            "srs",
            {"n": rng.randint(1, 8), "m": rng.randint(1, 8)},
            seed=rng.randrange(10**9),
        ).data
        sel, _ = srs.solve(inst)
        chosen = [v for v in inst.segments if v.id in sel]
        for r in inst.rays:
            assert any(intersects(r, v) for v in chosen)
        opt = exact_stab(inst)
        assert len(sel) <= 2 * len(opt)
        relaxed = lp.solve_lp(ray_program(inst))
        assert F(len(sel)) <= 2 * relaxed.objective_value
        if len(inst.rays) <= 6 and len(inst.segments) <= 6:
            brute = naive_min_stab(inst.segments, inst.rays)
            assert brute is not None and len(opt) == len(brute)
