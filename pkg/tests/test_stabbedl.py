"""L-path domination: layout validation, frozen graph, ratio sweeps."""

import random
from fractions import Fraction as F

import pytest

from geodom import AbstractGraph, LPath, StabbedLInstance, exact_mds
from geodom.errors import AssumptionViolationError
from geodom import instances, stabbedl

from helpers import naive_min_dominating


def crossing_triple() -> StabbedLInstance:
    return StabbedLInstance(
        (
            LPath(0, F(-3), F(0), F(4), F(5)),
            LPath(1, F(-1), F(-2), F(5), F(3)),
            LPath(2, F(-2), F(3), F(2), F(6)),
        )
    )


def test_normalize_rule_i():
    inst = StabbedLInstance((LPath(0, F(-5), F(0), F(1), F(2)),))
    with pytest.raises(AssumptionViolationError) as exc:
        stabbedl.normalize(inst)
    assert exc.value.which == "i"
    assert tuple(exc.value.ids) == (0,)
    right = StabbedLInstance((LPath(0, F(1), F(0), F(1), F(2)),))
    with pytest.raises(AssumptionViolationError):
        stabbedl.normalize(right)


def test_normalize_rule_ii():
    inst = StabbedLInstance((LPath(7, F(0), F(0), F(1), F(2)),))
    with pytest.raises(AssumptionViolationError) as exc:
        stabbedl.normalize(inst)
    assert exc.value.which == "ii"
    assert tuple(exc.value.ids) == (7,)


def test_normalize_rule_iii_equal_heights():
    inst = StabbedLInstance(
        (LPath(0, F(-2), F(1), F(1), F(3)), LPath(1, F(-4), F(1), F(2), F(5)))
    )
    with pytest.raises(AssumptionViolationError) as exc:
        stabbedl.normalize(inst)
    assert exc.value.which == "iii"
    assert tuple(exc.value.ids) == (0, 1)


def test_normalize_rule_iii_overlapping_collinear_vlegs():
    inst = StabbedLInstance(
        (LPath(0, F(-2), F(0), F(3), F(3)), LPath(1, F(-2), F(2), F(2), F(5)))
    )
    with pytest.raises(AssumptionViolationError) as exc:
        stabbedl.normalize(inst)
    assert exc.value.which == "iii"
    # touching end-to-start is a single shared point, which stays legal
    ok = StabbedLInstance(
        (LPath(0, F(-2), F(0), F(2), F(3)), LPath(1, F(-2), F(2), F(2), F(5)))
    )
    assert stabbedl.normalize(ok).paths[0].corner_x == F(-2)


def test_normalize_shifts_line():
    inst = StabbedLInstance(
        (LPath(0, F(2), F(0), F(4), F(5)), LPath(1, F(4), F(-2), F(5), F(3))),
        line_x=F(5),
    )
    norm = stabbedl.normalize(inst)
    assert norm.line_x == 0
    assert [p.corner_x for p in norm.paths] == [F(-3), F(-1)]
    assert [p.corner_y for p in norm.paths] == [F(0), F(-2)]


def test_frozen_graph_and_partition():
    norm = stabbedl.normalize(crossing_triple())
    nb, parts = stabbedl.build_graph(norm)
    assert nb == {
        0: frozenset({0, 1}),
        1: frozenset({0, 1, 2}),
        2: frozenset({1, 2}),
    }
    assert parts.horizontal == {
        0: frozenset({0, 1}),
        1: frozenset({1}),
        2: frozenset({1, 2}),
    }
    assert parts.vertical == {
        0: frozenset(),
        1: frozenset({0, 2}),
        2: frozenset(),
    }
    for u in nb:
        assert parts.closed_neighborhood(u) == nb[u]


def test_frozen_solution():
    cert = stabbedl.solve_mds(crossing_triple())
    assert cert.heuristic_ids == frozenset({1})
    assert cert.heuristic_size == 1
    assert cert.lp_opt == 1
    assert cert.claimed_ratio_bound == 8


def test_details_split_is_a_partition():
    rng = random.Random(808)
    for _ in range(80):
        inst = instances.generate(
            "stabbed_l", {"n": rng.randint(1, 9)}, seed=rng.randrange(10**9)
        ).data
        cert, det = stabbedl.solve_mds(inst, want_details=True)
        all_ids = {p.id for p in inst.paths}
        assert det.h_rows | det.v_rows == all_ids
        assert det.srs_selected <= det.h_candidates
        assert det.ssr_selected <= all_ids
        assert cert.heuristic_ids == det.srs_selected | det.ssr_selected


def test_domination_and_ratio_eight():
    rng = random.Random(909)
    for _ in range(150):
        inst = instances.generate(
            "stabbed_l", {"n": rng.randint(1, 9)}, seed=rng.randrange(10**9)
        ).data
        cert = stabbedl.solve_mds(inst)
        norm = stabbedl.normalize(inst)
        nb, _ = stabbedl.build_graph(norm)
        chosen = cert.heuristic_ids
        for u in nb:
            assert nb[u] & chosen, f"path {u} undominated"
        order = sorted(nb)
        pos = {u: i for i, u in enumerate(order)}
        g = AbstractGraph(
            len(order), tuple(frozenset(pos[v] for v in nb[u]) for u in order)
        )
        opt = exact_mds(g)
        assert cert.heuristic_size <= 8 * len(opt)
        assert F(cert.heuristic_size) <= 8 * cert.lp_opt
        if len(order) <= 7:
            brute = naive_min_dominating(nb)
            assert brute is not None and len(brute) == len(opt)
