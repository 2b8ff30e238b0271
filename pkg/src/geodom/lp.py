"""Exact rational covering LP/ILP layer.

Programs are 0/1 covering problems: minimize the sum of all variables
subject to one "sum over a variable subset >= 1" row per constraint and
0 <= x <= 1.  The simplex solver works over exact Fractions, so objective
values are usable as certificates without tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    InvalidInputError,
    SizeCapExceededError,
    UncoveredRowError,
)
from .geom import Rat

DEFAULT_SIZE_CAP = 24

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CoverProgram:
    """min sum(x) s.t. for each row R: sum_{j in R} x_j >= 1, 0 <= x <= 1."""

    num_vars: int
    rows: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(frozenset(r) for r in self.rows))
        if self.num_vars < 0:
            raise InvalidInputError("num_vars must be nonnegative")
        for i, row in enumerate(self.rows):
            if not row:
                raise InvalidInputError(f"row {i} is empty")
            for j in row:
                if not (0 <= j < self.num_vars):
                    raise InvalidInputError(f"row {i} references unknown variable {j}")


@dataclass(frozen=True)
class CoverSolution:
    values: tuple[Rat, ...]
    objective_value: Rat
    integral: bool

    def value(self, var: int) -> Rat:
        return self.values[var]

    def mass(self, var_ids) -> Rat:
        return sum((self.values[j] for j in var_ids), ZERO)

    def support(self) -> frozenset[int]:
        return frozenset(j for j, v in enumerate(self.values) if v > 0)

    def check_feasible(self, program: CoverProgram) -> None:
        if len(self.values) != program.num_vars:
            raise InvalidInputError("solution length mismatch")
        for v in self.values:
            if not (ZERO <= v <= ONE):
                raise InvalidInputError("variable value outside [0,1]")
        for i, row in enumerate(program.rows):
            if self.mass(row) < ONE:
                raise InvalidInputError(f"row {i} not covered")
        if self.objective_value != sum(self.values, ZERO):
            raise InvalidInputError("objective_value inconsistent with values")
        if self.integral and any(v not in (ZERO, ONE) for v in self.values):
            raise InvalidInputError("integral flag set on fractional values")


@dataclass(frozen=True)
class SolveCertificate:
    """Bundles a heuristic answer with the bounds that certify its quality."""

    heuristic_ids: frozenset[int]
    heuristic_size: int
    lp_opt: Rat
    claimed_ratio_bound: Rat
    exact_opt: Optional[int] = None

    def validate(self) -> None:
        if self.heuristic_size != len(self.heuristic_ids):
            raise InvalidInputError("heuristic_size disagrees with heuristic_ids")
        if Fraction(self.heuristic_size) < self.lp_opt:
            raise InvalidInputError("heuristic smaller than the LP lower bound")
        if Fraction(self.heuristic_size) > self.claimed_ratio_bound * self.lp_opt:
            raise InvalidInputError("claimed ratio bound violated")
        if self.exact_opt is not None:
            if not (self.lp_opt <= Fraction(self.exact_opt) <= Fraction(self.heuristic_size)):
                raise InvalidInputError("exact optimum outside [lp_opt, heuristic_size]")


def solve_lp(program: CoverProgram) -> CoverSolution:
    """Exact optimal fractional solution via primal simplex (Bland's rule).

    Variable layout: x_0..x_{n-1}, surplus s per row, upper-bound slack w
    per variable.  Starting from the all-ones point gives a feasible basis
    immediately (every row is non-empty), so no phase-1 is needed.
    """
    n = program.num_vars
    m = len(program.rows)
    if n == 0:
        return CoverSolution((), ZERO, True)
    # column ids: x_j = j; s_i = n + i; w_j = n + m + j
    total = 2 * n + m

    # rows in canonical form wrt the initial basis {x_0..x_{n-1}, s_0..s_{m-1}}:
    #   x_j + w_j = 1
    #   s_i + sum_{j in row_i} w_j = |row_i| - 1
    basis: list[int] = []
    tableau: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for j in range(n):
        basis.append(j)
        tableau.append({j: ONE, n + m + j: ONE})
        rhs.append(ONE)
    for i, row in enumerate(program.rows):
        basis.append(n + i)
        entry = {n + m + j: ONE for j in row}
        entry[n + i] = ONE
        tableau.append(entry)
        rhs.append(Fraction(len(row) - 1))

    # reduced costs: z = n - sum_j w_j over the nonbasic w columns
    cost = {n + m + j: -ONE for j in range(n)}
    in_basis = [False] * total
    for b in basis:
        in_basis[b] = True

    while True:
        entering = -1
        for col in range(total):
            if not in_basis[col] and cost.get(col, ZERO) < ZERO:
                entering = col
                break
        if entering < 0:
            break
        # ratio test, Bland tie-break on the leaving basic variable's id
        leave_idx = -1
        best_ratio: Optional[Fraction] = None
        for r in range(len(tableau)):
            a = tableau[r].get(entering, ZERO)
            if a > ZERO:
                ratio = rhs[r] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leave_idx])
                ):
                    best_ratio = ratio
                    leave_idx = r
        if leave_idx < 0:
            raise InvalidInputError("unbounded covering LP (malformed program)")

        piv_row = tableau[leave_idx]
        piv = piv_row[entering]
        if piv != ONE:
            tableau[leave_idx] = piv_row = {c: v / piv for c, v in piv_row.items()}
            rhs[leave_idx] /= piv
        for r in range(len(tableau)):
            if r == leave_idx:
                continue
            a = tableau[r].get(entering, ZERO)
            if a == ZERO:
                continue
            row_r = tableau[r]
            for c, v in piv_row.items():
                nv = row_r.get(c, ZERO) - a * v
                if nv == ZERO:
                    row_r.pop(c, None)
                else:
                    row_r[c] = nv
            rhs[r] -= a * rhs[leave_idx]
        a = cost.get(entering, ZERO)
        if a != ZERO:
            for c, v in piv_row.items():
                nv = cost.get(c, ZERO) - a * v
                if nv == ZERO:
                    cost.pop(c, None)
                else:
                    cost[c] = nv
        in_basis[basis[leave_idx]] = False
        in_basis[entering] = True
        basis[leave_idx] = entering

    values = [ZERO] * n
    for r, b in enumerate(basis):
        if b < n:
            values[b] = rhs[r]
    objective = sum(values, ZERO)
    integral = all(v in (ZERO, ONE) for v in values)
    sol = CoverSolution(tuple(values), objective, integral)
    sol.check_feasible(program)
    return sol


def _greedy_rounded(program: CoverProgram, lp_sol: CoverSolution) -> set[int]:
    # every row of size <= L has a variable of mass >= 1/L, so taking all
    # variables at or above that threshold covers every row
    biggest = max(len(r) for r in program.rows) if program.rows else 1
    theta = Fraction(1, biggest)
    return {j for j in range(program.num_vars) if lp_sol.values[j] >= theta}


def solve_ilp_exact(program: CoverProgram, size_cap: int = DEFAULT_SIZE_CAP) -> CoverSolution:
    """Minimum-cardinality integral cover via branch and bound.

    LP relaxations provide the lower bounds; branching fixes the fractional
    variable closest to 1/2 first to 1, then to 0.
    """
    if program.num_vars > size_cap:
        raise SizeCapExceededError(
            f"{program.num_vars} variables exceed the exact-solve cap {size_cap}"
        )
    if not program.rows:
        return CoverSolution((ZERO,) * program.num_vars, ZERO, True)

    root_lp = solve_lp(program)
    best = _greedy_rounded(program, root_lp)

    def recurse(rows: tuple[frozenset[int], ...], chosen: set[int]) -> None:
        nonlocal best
        if len(chosen) >= len(best):
            return
        if not rows:
            best = set(chosen)
            return
        live = sorted(frozenset().union(*rows))
        remap = {v: k for k, v in enumerate(live)}
        sub = CoverProgram(len(live), tuple(frozenset(remap[j] for j in r) for r in rows))
        lp = solve_lp(sub)
        bound = lp.objective_value
        if len(chosen) + (bound.numerator + bound.denominator - 1) // bound.denominator >= len(best):
            return
        # an integral LP optimum already solves this subtree exactly
        if lp.integral:
            cand = set(chosen) | {live[j] for j in range(len(live)) if lp.values[j] == ONE}
            if len(cand) < len(best):
                best = cand
            return
        pick = min(
            (j for j in range(len(live)) if ZERO < lp.values[j] < ONE),
            key=lambda j: (abs(lp.values[j] - HALF), j),
        )
        var = live[pick]
        # branch var = 1
        kept = tuple(r for r in rows if var not in r)
        chosen.add(var)
        recurse(kept, chosen)
        chosen.discard(var)
        # branch var = 0
        reduced = []
        for r in rows:
            rr = r - {var}
            if not rr:
                return  # row became uncoverable on this branch
            reduced.append(rr)
        recurse(tuple(reduced), chosen)

    recurse(program.rows, set())
    values = tuple(ONE if j in best else ZERO for j in range(program.num_vars))
    sol = CoverSolution(values, Fraction(len(best)), True)
    sol.check_feasible(program)
    return sol


def threshold_split(
    program: CoverProgram,
    sol: CoverSolution,
    parts: dict[int, dict[object, frozenset[int]]],
    theta: Rat,
) -> dict[object, tuple[frozenset[int], frozenset[int]]]:
    """Split rows among labeled parts by fractional mass.

    ``parts[i]`` partitions row i's variable set into labeled blocks.  A row
    joins every label whose block holds mass >= theta (ties inclusive, so one
    row may land in several labels).  Returns, per label, the selected row
    ids and the union of that label's blocks over those rows.
    """
    sol.check_feasible(program)
    out_rows: dict[object, set[int]] = {}
    out_vars: dict[object, set[int]] = {}
    for i, row in enumerate(program.rows):
        if i not in parts:
            raise InvalidInputError(f"row {i} has no partition")
        blocks = parts[i]
        merged: set[int] = set()
        count = 0
        for block in blocks.values():
            merged |= block
            count += len(block)
        if merged != set(row) or count != len(row):
            raise InvalidInputError(f"row {i} partition does not tile its variable set")
        hit = False
        for label, block in blocks.items():
            if sol.mass(block) >= theta:
                hit = True
                out_rows.setdefault(label, set()).add(i)
                out_vars.setdefault(label, set()).update(block)
        if not hit:
            raise UncoveredRowError(i)
    return {
        label: (frozenset(out_rows[label]), frozenset(out_vars[label]))
        for label in out_rows
    }
