"""Brute-force baselines cross-checked against the LP branch-and-bound."""

import random
from fractions import Fraction as F

import pytest

from geodom import (
    AbstractGraph,
    HRay,
    HSeg,
    OrthoInstance,
    SrsInstance,
    SsrInstance,
    VSeg,
    exact_mds,
    exact_stab,
    intersects,
)
from geodom.errors import (
    InfeasibleConstraintError,
    InfeasibleRayError,
    InfeasibleSegmentError,
    InvalidInputError,
    SizeCapExceededError,
)
from geodom import instances, lp, oracle

from helpers import naive_min_dominating


def test_graph_validation():
    with pytest.raises(InvalidInputError):
        AbstractGraph(2, (frozenset({0}),))
    with pytest.raises(InvalidInputError):
        AbstractGraph(1, (frozenset(),))
    with pytest.raises(InvalidInputError):
        AbstractGraph(2, (frozenset({0, 1}), frozenset({1})))
    with pytest.raises(InvalidInputError):
        AbstractGraph(1, (frozenset({0, 3}),))


def test_mds_frozen_examples():
    triangle = AbstractGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert len(exact_mds(triangle)) == 1
    path4 = AbstractGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert exact_mds(path4) == {0, 2} or len(exact_mds(path4)) == 2
    isolated = AbstractGraph(3, tuple(frozenset({u}) for u in range(3)))
    assert exact_mds(isolated) == {0, 1, 2}


def test_mds_matches_ilp_and_bruteforce():
    rng = random.Random(1212)
    for _ in range(120):
        n = rng.randint(1, 8)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.4
        ]
        g = AbstractGraph.from_edges(n, edges)
        got = exact_mds(g)
        for u in range(n):
            assert g.closed[u] & got
        prog = lp.CoverProgram(n, tuple(g.closed))
        via_ilp = lp.solve_ilp_exact(prog)
        assert len(got) == len(via_ilp.support())
        if n <= 7:
            nb = {u: g.closed[u] for u in range(n)}
            assert len(naive_min_dominating(nb)) == len(got)


def test_mds_edge_monotone():
    # adding an edge never makes domination harder
    rng = random.Random(1313)
    for _ in range(40):
        n = rng.randint(2, 7)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.3
        ]
        g = AbstractGraph.from_edges(n, edges)
        base = len(exact_mds(g))
        missing = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if (u, v) not in edges
        ]
        if not missing:
            continue
        extra = rng.choice(missing)
        g2 = AbstractGraph.from_edges(n, edges + [extra])
        assert len(exact_mds(g2)) <= base


def test_stab_dispatch_matches_ilp():
    rng = random.Random(1414)
    for _ in range(80):
        inst = instances.generate(
            "ssr",
            {"n": rng.randint(1, 8), "m": rng.randint(1, 8)},
            seed=rng.randrange(10**9),
        ).data
        got = exact_stab(inst)
        pos = {r.id: i for i, r in enumerate(inst.rays)}
        rows = tuple(
            frozenset(pos[r.id] for r in inst.rays if intersects(r, s))
            for s in inst.segments
        )
        sol = lp.solve_ilp_exact(lp.CoverProgram(len(inst.rays), rows))
        assert len(got) == len(sol.support())


def test_stab_infeasible_kinds():
    ssr_bad = SsrInstance(
        (HRay(0, F(0), F(1)),), (VSeg(9, F(5), F(-1), F(1)),)
    )
    with pytest.raises(InfeasibleSegmentError) as e1:
        exact_stab(ssr_bad)
    assert e1.value.segment_id == 9
    srs_bad = SrsInstance(
        (HRay(4, F(10), F(1)),), (VSeg(0, F(1), F(0), F(2)),)
    )
    with pytest.raises(InfeasibleRayError) as e2:
        exact_stab(srs_bad)
    assert e2.value.ray_id == 4
    ortho_bad = OrthoInstance(
        hsegs=(HSeg(0, F(0), F(0), F(1)), HSeg(1, F(5), F(0), F(1))),
        vsegs=(),
        constraint_ids=frozenset({1}),
        candidate_ids=frozenset({0}),
    )
    with pytest.raises(InfeasibleConstraintError) as e3:
        exact_stab(ortho_bad)
    assert e3.value.constraint_id == 1
    with pytest.raises(InvalidInputError):
        exact_stab("not an instance")


def test_size_cap():
    g = AbstractGraph(20, tuple(frozenset({u}) for u in range(20)))
    with pytest.raises(SizeCapExceededError):
        exact_mds(g)
    assert len(exact_mds(g, cap=20)) == 20
    rays = tuple(HRay(i, F(i), F(1)) for i in range(20))
    segs = (VSeg(0, F(0), F(0), F(25)),)
    inst = SsrInstance(rays, segs)
    with pytest.raises(SizeCapExceededError):
        exact_stab(inst)
    assert len(exact_stab(inst, cap=25)) == 1


def test_cap_env_override(monkeypatch):
    g = AbstractGraph(18, tuple(frozenset({u}) for u in range(18)))
    with pytest.raises(SizeCapExceededError):
        exact_mds(g)
    monkeypatch.setenv("GEODOM_SIZE_CAP", "18")
    assert len(exact_mds(g)) == 18
    monkeypatch.setenv("GEODOM_SIZE_CAP", "zero")
    with pytest.raises(InvalidInputError):
        exact_mds(g)
    monkeypatch.delenv("GEODOM_SIZE_CAP")
    with pytest.raises(SizeCapExceededError):
        exact_mds(g)
    # explicit argument beats the environment
    monkeypatch.setenv("GEODOM_SIZE_CAP", "4")
    assert len(exact_mds(g, cap=18)) == 18
