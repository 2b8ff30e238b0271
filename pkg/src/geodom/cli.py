"""Command-line surface: gen, solve, exact, verify, bench, render.

Exit codes: 0 success, 2 infeasible instance, 3 invalid input, 4 size cap
exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import instances, oracle, psd, render, srs, ssr, stabbedl, uvpg
from .errors import (
    GenerationExhaustedError,
    InfeasibleError,
    InputError,
    InvalidInputError,
    SizeCapExceededError,
)
from .geom import OrthoInstance, intersects, rat_str
from .instances import InstanceFile, UnitBkInstance
from .lp import CoverProgram, SolveCertificate, solve_lp
from .oracle import AbstractGraph
from .srs import SrsInstance
from .ssr import SsrInstance
from .stabbedl import StabbedLInstance

_ALG_FOR_KIND = {
    "ssr": "ssr",
    "srs": "srs",
    "stabbed_l": "stabbed-l",
    "ortho_psd": "psd",
    "unit_bk": "uvpg",
}
_KIND_FOR_ALG = {v: k for k, v in _ALG_FOR_KIND.items()}


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; 2 means "infeasible" here,
    # so route usage problems through the normal invalid-input path instead
    def error(self, message):
        raise InvalidInputError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="geodom", description="stabbing and domination heuristics")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance file")
    g.add_argument("--kind", required=True, choices=instances.KINDS)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-n", type=int, default=None, help="primary entity count")
    g.add_argument("-m", type=int, default=None, help="secondary entity count")
    g.add_argument("-k", type=int, default=None, help="bend bound (unit_bk)")
    g.add_argument("--coord-range", type=int, default=None)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("solve", help="run a heuristic on an instance file")
    s.add_argument("--alg", required=True, choices=sorted(_KIND_FOR_ALG))
    s.add_argument("-i", "--infile", required=True)
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--trace", default=None, help="token trace output (ssr, srs)")
    s.add_argument("--certify", action="store_true")
    s.add_argument("--cap", type=int, default=None, help="oracle cap for --certify")
    s.set_defaults(func=_cmd_solve)

    e = sub.add_parser("exact", help="exact optimum via the oracle")
    e.add_argument("-i", "--infile", required=True)
    e.add_argument("-o", "--out", default=None)
    e.add_argument("--cap", type=int, default=None)
    e.set_defaults(func=_cmd_exact)

    v = sub.add_parser("verify", help="re-check a solution file")
    v.add_argument("-i", "--infile", required=True)
    v.add_argument("-s", "--solution", required=True)
    v.set_defaults(func=_cmd_verify)

    b = sub.add_parser("bench", help="ratio benchmark sweep, CSV output")
    b.add_argument("--kind", required=True, choices=instances.KINDS)
    b.add_argument("--max", type=int, default=10, help="largest instance size")
    b.add_argument("--trials", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-k", type=int, default=1, help="bend bound (unit_bk)")
    b.add_argument("--jobs", type=int, default=4)
    b.add_argument("--cap", type=int, default=None)
    b.add_argument("-o", "--out", required=True)
    b.set_defaults(func=_cmd_bench)

    r = sub.add_parser("render", help="draw an instance (and solution) as SVG")
    r.add_argument("-i", "--infile", required=True)
    r.add_argument("-s", "--solution", default=None)
    r.add_argument("-o", "--out", required=True)
    r.set_defaults(func=_cmd_render)
    return p


# ---------------------------------------------------------------------------
# shared pieces


def _stab_sides(data):
    """(candidates, constraints) for the plain covering kinds."""
    if isinstance(data, SsrInstance):
        return list(data.rays), list(data.segments)
    if isinstance(data, SrsInstance):
        return list(data.segments), list(data.rays)
    if isinstance(data, OrthoInstance):
        table = data.segment_by_id()
        return (
            [table[i] for i in sorted(data.candidate_ids)],
            [table[i] for i in sorted(data.constraint_ids)],
        )
    raise InvalidInputError("not a covering instance")


def _cover_program(data) -> tuple[CoverProgram, list[int]]:
    cands, cons = _stab_sides(data)
    order = [c.id for c in cands]
    index_of = {cid: i for i, cid in enumerate(order)}
    rows = tuple(
        frozenset(index_of[c.id] for c in cands if intersects(c, u)) for u in cons
    )
    return CoverProgram(len(order), rows), order


def _graph_of(f: InstanceFile) -> AbstractGraph:
    if isinstance(f.data, StabbedLInstance):
        neighborhoods, _ = stabbedl.build_graph(f.data)
    elif isinstance(f.data, UnitBkInstance):
        neighborhoods = uvpg.build_graph(list(f.data.paths)).neighborhoods
    else:
        raise InvalidInputError(f"kind {f.kind!r} has no graph form")
    n = len(neighborhoods)
    return AbstractGraph(n, tuple(neighborhoods[u] for u in range(n)))


def _exact_size(f: InstanceFile, cap: Optional[int]) -> set[int]:
    if isinstance(f.data, (SsrInstance, SrsInstance, OrthoInstance)):
        return oracle.exact_stab(f.data, cap)
    return oracle.exact_mds(_graph_of(f), cap)


def _ssr_trace_payload(trace: ssr.TokenTrace) -> dict:
    def tok(tokens: dict) -> dict:
        return {str(rid): sorted(members) for rid, members in tokens.items()}

    return {
        "iterations": [
            {
                "index": it.index,
                "live_rays": sorted(it.live_rays),
                "live_segments": sorted(it.live_segments),
                "selected": sorted(it.selected),
                "tokens": tok(it.tokens),
            }
            for it in trace.iterations
        ],
        "events": [
            {
                "iteration": ev.iteration,
                "ray": ev.ray,
                "witness": ev.witness,
                "ray_token": sorted(ev.ray_token),
                "witness_input_stabbers": sorted(ev.witness_input_stabbers),
                "other_tokens": tok(ev.other_tokens),
            }
            for ev in trace.events
        ],
        "final_tokens": tok(trace.final_tokens),
        "selected": sorted(trace.selected),
    }


def _srs_trace_payload(trace: srs.SrsTrace) -> dict:
    return {
        "rounds": [
            {
                "index": rd.index,
                "chosen_ray": rd.chosen_ray,
                "neighborhood": sorted(rd.neighborhood),
                "v_top": rd.v_top,
                "v_bot": rd.v_bot,
                "removed_rays": sorted(rd.removed_rays),
            }
            for rd in trace.rounds
        ],
        "tokens": {str(sid): sorted(members) for sid, members in trace.tokens.items()},
    }


def _certificate_payload(cert: SolveCertificate) -> dict:
    payload = {
        "lp_opt": rat_str(cert.lp_opt),
        "bound": rat_str(cert.claimed_ratio_bound),
    }
    if cert.exact_opt is not None:
        payload["exact_opt"] = cert.exact_opt
    return payload


def _with_exact(cert: SolveCertificate, f: InstanceFile, cap) -> SolveCertificate:
    """Attach the oracle optimum when the instance is within the cap."""
    try:
        exact = len(_exact_size(f, cap))
    except SizeCapExceededError:
        return cert
    out = SolveCertificate(
        heuristic_ids=cert.heuristic_ids,
        heuristic_size=cert.heuristic_size,
        lp_opt=cert.lp_opt,
        claimed_ratio_bound=cert.claimed_ratio_bound,
        exact_opt=exact,
    )
    out.validate()
    return out


def _solve_for(f: InstanceFile, want_trace: bool):
    """(selected ids, certificate or None, trace payload or None)."""
    data = f.data
    if isinstance(data, SsrInstance):
        norm = ssr.normalize(data)
        if want_trace:
            sel, trace = ssr.solve(norm, want_trace=True)
            return sel, None, _ssr_trace_payload(trace)
        return ssr.solve_fast(norm), None, None
    if isinstance(data, SrsInstance):
        sel, trace = srs.solve(data, want_trace=want_trace)
        return sel, None, _srs_trace_payload(trace) if want_trace else None
    if isinstance(data, StabbedLInstance):
        return None, stabbedl.solve_mds(data), None
    if isinstance(data, OrthoInstance):
        return None, psd.psd_solve(data), None
    if isinstance(data, UnitBkInstance):
        return None, uvpg.solve_mds(list(data.paths), data.k), None
    raise InvalidInputError(f"cannot solve kind {f.kind!r}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args) -> int:
    params = {"n": args.n, "m": args.m, "k": args.k, "coord_range": args.coord_range}
    f = instances.generate(args.kind, params, args.seed)
    instances.dump(f, args.out)
    print(f"wrote {args.kind} instance to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    f = instances.load(args.infile)
    if _ALG_FOR_KIND[f.kind] != args.alg:
        raise InvalidInputError(
            f"algorithm {args.alg!r} does not apply to kind {f.kind!r}"
        )
    if args.trace and args.alg not in ("ssr", "srs"):
        raise InvalidInputError("--trace is only available for ssr and srs")

    start = time.perf_counter()
    selected, cert, trace_payload = _solve_for(f, want_trace=bool(args.trace))
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    if cert is not None:
        selected = set(cert.heuristic_ids)
    if args.certify:
        if cert is None:
            program, _ = _cover_program(f.data)
            cert = SolveCertificate(
                heuristic_ids=frozenset(selected),
                heuristic_size=len(selected),
                lp_opt=solve_lp(program).objective_value,
                claimed_ratio_bound=Fraction(2),
            )
            cert.validate()
        cert = _with_exact(cert, f, args.cap)

    payload = {
        "kind": f.kind,
        "algorithm": args.alg,
        "selected": sorted(selected),
        "size": len(selected),
    }
    if cert is not None:
        payload["certificate"] = _certificate_payload(cert)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(instances.canonical_json(payload))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(instances.canonical_json(trace_payload))
    print(f"selected {len(selected)} of kind {f.kind} in {elapsed_ms:.1f} ms")
    return 0


def _cmd_exact(args) -> int:
    f = instances.load(args.infile)
    chosen = _exact_size(f, args.cap)
    payload = {"kind": f.kind, "selected": sorted(chosen), "size": len(chosen)}
    text = instances.canonical_json(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _load_solution(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"solution file is not valid JSON: {exc}")
    if not isinstance(payload, dict) or "selected" not in payload:
        raise InvalidInputError("solution file needs a 'selected' list")
    sel = payload["selected"]
    if not isinstance(sel, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in sel
    ):
        raise InvalidInputError("'selected' must be a list of integers")
    return payload


def _verify_problems(f: InstanceFile, selected: set[int]) -> list[str]:
    data = f.data
    problems = []
    if isinstance(data, (SsrInstance, SrsInstance, OrthoInstance)):
        cands, cons = _stab_sides(data)
        table = {c.id: c for c in cands}
        unknown = selected - set(table)
        if unknown:
            problems.append(f"selected ids not selectable: {sorted(unknown)}")
            return problems
        picked = [table[i] for i in sorted(selected)]
        for u in cons:
            if not any(intersects(c, u) for c in picked):
                problems.append(f"constraint {u.id} is not covered")
        return problems
    if isinstance(data, (StabbedLInstance, UnitBkInstance)):
        if isinstance(data, StabbedLInstance):
            neighborhoods, _ = stabbedl.build_graph(data)
        else:
            neighborhoods = uvpg.build_graph(list(data.paths)).neighborhoods
        unknown = selected - set(neighborhoods)
        if unknown:
            problems.append(f"selected ids not in the instance: {sorted(unknown)}")
            return problems
        for u, nbrs in sorted(neighborhoods.items()):
            if not (nbrs & selected):
                problems.append(f"vertex {u} is not dominated")
        return problems
    raise InvalidInputError(f"cannot verify kind {f.kind!r}")


def _cmd_verify(args) -> int:
    f = instances.load(args.infile)
    sol = _load_solution(args.solution)
    problems = _verify_problems(f, set(sol["selected"]))
    if problems:
        for line in problems:
            print(f"FAIL: {line}", file=sys.stderr)
        return 2
    print("solution verified")
    return 0


@dataclass(frozen=True)
class BenchRecord:
    kind: str
    seed: int
    sizes: str
    heuristic_size: int
    lp_opt: str
    exact_opt: Optional[int]
    ratio: str
    bound: str
    wall_time_ms: float

    def row(self) -> list:
        return [
            self.kind,
            self.seed,
            self.sizes,
            self.heuristic_size,
            self.lp_opt,
            "" if self.exact_opt is None else self.exact_opt,
            self.ratio,
            self.bound,
            f"{self.wall_time_ms:.3f}",
        ]


_BENCH_HEADER = [
    "kind", "seed", "sizes", "heuristic_size", "lp_opt", "exact_opt",
    "ratio", "bound", "wall_time_ms",
]


def _bench_one(kind: str, size: int, trial: int, seed: int, k: int, cap) -> BenchRecord:
    inst_seed = ((seed * 1000003 + size) * 1000003 + trial) % (1 << 61)
    f = instances.generate(kind, {"n": size, "m": size, "k": k}, inst_seed)
    start = time.perf_counter()
    selected, cert, _ = _solve_for(f, want_trace=False)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    if cert is not None:
        selected = set(cert.heuristic_ids)
        lp_opt = cert.lp_opt
        bound = cert.claimed_ratio_bound
    else:
        program, _ = _cover_program(f.data)
        lp_opt = solve_lp(program).objective_value
        bound = Fraction(2)
    try:
        exact: Optional[int] = len(_exact_size(f, cap))
    except SizeCapExceededError:
        exact = None
    ratio = rat_str(Fraction(len(selected), exact)) if exact else ""
    if kind == "unit_bk":
        sizes = f"n={size};k={k}"
    elif kind == "stabbed_l":
        sizes = f"n={size}"
    else:
        sizes = f"n={size};m={size}"
    return BenchRecord(
        kind=kind,
        seed=inst_seed,
        sizes=sizes,
        heuristic_size=len(selected),
        lp_opt=rat_str(lp_opt),
        exact_opt=exact,
        ratio=ratio,
        bound=rat_str(bound),
        wall_time_ms=elapsed_ms,
    )


def _cmd_bench(args) -> int:
    if args.max < 2 or args.trials < 1:
        raise InvalidInputError("need --max >= 2 and --trials >= 1")
    tasks = [
        (size, trial)
        for size in range(2, args.max + 1)
        for trial in range(args.trials)
    ]
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        records = list(
            pool.map(
                lambda st: _bench_one(args.kind, st[0], st[1], args.seed, args.k, args.cap),
                tasks,
            )
        )
    records.sort(key=lambda r: (r.seed, r.sizes))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_BENCH_HEADER)
        for rec in records:
            writer.writerow(rec.row())
    print(f"wrote {len(records)} bench records to {args.out}")
    return 0


def _cmd_render(args) -> int:
    f = instances.load(args.infile)
    selected = None
    if args.solution:
        selected = set(_load_solution(args.solution)["selected"])
    svg = render.render_svg(f, selected)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return 0


def run_cli(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help
        code = exc.code
        return 0 if code in (0, None) else int(code)
    except SizeCapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, GenerationExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run_cli())
