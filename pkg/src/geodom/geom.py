"""Exact axis-parallel geometry: rays, segments, gap analysis, perturbation.

All coordinates are exact rationals (``fractions.Fraction``).  Intersection
is closed: touching at a single point counts.  A leftward ray is the closed
half-line {(t, y) : t <= x_right}.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from sortedcontainers import SortedList

from .errors import InvalidInputError

Rat = Fraction

#: Designated "+infinity" marker returned by min_positive_gap when the
#: instance has no disjoint pair of segments.
NO_GAP = None


def as_rat(value) -> Rat:
    """Coerce an int, Fraction, or canonical "p/q" string to a Rat."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"bad rational literal {value!r}") from exc
    raise InvalidInputError(f"cannot interpret {value!r} as a rational")


def rat_str(value: Rat) -> str:
    """Canonical serialization: "p/q" with gcd(p,q)=1, q>0; "p" when q=1."""
    return str(value)


@dataclass(frozen=True)
class HRay:
    """Horizontal leftward ray ending at (x_right, y)."""

    id: int
    y: Rat
    x_right: Rat


@dataclass(frozen=True)
class VSeg:
    """Vertical closed segment at abscissa x spanning [y_lo, y_hi]."""

    id: int
    x: Rat
    y_lo: Rat
    y_hi: Rat

    def __post_init__(self):
        if self.y_lo > self.y_hi:
            raise InvalidInputError(f"VSeg {self.id}: y_lo > y_hi")

    @property
    def length(self) -> Rat:
        return self.y_hi - self.y_lo


@dataclass(frozen=True)
class HSeg:
    """Horizontal closed segment at ordinate y spanning [x_lo, x_hi]."""

    id: int
    y: Rat
    x_lo: Rat
    x_hi: Rat

    def __post_init__(self):
        if self.x_lo > self.x_hi:
            raise InvalidInputError(f"HSeg {self.id}: x_lo > x_hi")

    @property
    def length(self) -> Rat:
        return self.x_hi - self.x_lo


GeomObject = Union[HRay, VSeg, HSeg]


def _ranges_overlap(a_lo, a_hi, b_lo, b_hi) -> bool:
    return a_lo <= b_hi and b_lo <= a_hi


def intersects(a: GeomObject, b: GeomObject) -> bool:
    """Closed intersection test for any pair of rays/segments."""
    if isinstance(a, HRay):
        if isinstance(b, HRay):
            return a.y == b.y
        if isinstance(b, VSeg):
            return b.x <= a.x_right and b.y_lo <= a.y <= b.y_hi
        if isinstance(b, HSeg):
            return a.y == b.y and b.x_lo <= a.x_right
    elif isinstance(a, VSeg):
        if isinstance(b, HRay):
            return intersects(b, a)
        if isinstance(b, VSeg):
            return a.x == b.x and _ranges_overlap(a.y_lo, a.y_hi, b.y_lo, b.y_hi)
        if isinstance(b, HSeg):
            return b.x_lo <= a.x <= b.x_hi and a.y_lo <= b.y <= a.y_hi
    elif isinstance(a, HSeg):
        if isinstance(b, HSeg):
            return a.y == b.y and _ranges_overlap(a.x_lo, a.x_hi, b.x_lo, b.x_hi)
        return intersects(b, a)
    raise InvalidInputError(f"cannot intersect {type(a).__name__} with {type(b).__name__}")


@dataclass(frozen=True)
class OrthoInstance:
    """A mixed family of axis-parallel segments with role annotations.

    ``constraint_ids`` are the segments that must be covered, and
    ``candidate_ids`` the segments that may be selected.  The two sets may
    overlap.  Segment ids are unique across both orientation lists.
    """

    hsegs: tuple[HSeg, ...]
    vsegs: tuple[VSeg, ...]
    constraint_ids: frozenset[int]
    candidate_ids: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "hsegs", tuple(self.hsegs))
        object.__setattr__(self, "vsegs", tuple(self.vsegs))
        object.__setattr__(self, "constraint_ids", frozenset(self.constraint_ids))
        object.__setattr__(self, "candidate_ids", frozenset(self.candidate_ids))
        ids = [s.id for s in self.hsegs] + [s.id for s in self.vsegs]
        if len(ids) != len(set(ids)):
            raise InvalidInputError("duplicate segment ids in OrthoInstance")
        known = set(ids)
        if not self.constraint_ids <= known or not self.candidate_ids <= known:
            raise InvalidInputError("role ids refer to unknown segments")

    def all_segments(self) -> list[Union[HSeg, VSeg]]:
        return list(self.hsegs) + list(self.vsegs)

    def segment_by_id(self) -> dict[int, Union[HSeg, VSeg]]:
        return {s.id: s for s in self.all_segments()}


def _bbox(obj) -> tuple[Rat, Rat, Rat, Rat]:
    # (x_lo, x_hi, y_lo, y_hi); rays are unbounded on the left
    if isinstance(obj, VSeg):
        return obj.x, obj.x, obj.y_lo, obj.y_hi
    if isinstance(obj, HSeg):
        return obj.x_lo, obj.x_hi, obj.y, obj.y
    raise InvalidInputError("bbox undefined for rays")


def _chebyshev_gap(a, b) -> Rat:
    ax_lo, ax_hi, ay_lo, ay_hi = _bbox(a)
    bx_lo, bx_hi, by_lo, by_hi = _bbox(b)
    dx = max(Fraction(0), ax_lo - bx_hi, bx_lo - ax_hi)
    dy = max(Fraction(0), ay_lo - by_hi, by_lo - ay_hi)
    return max(dx, dy)


def _min_adjacent_diff(values: Iterable[Rat]) -> Optional[Rat]:
    vals = sorted(set(values))
    best = None
    for lo, hi in zip(vals, vals[1:]):
        d = hi - lo
        if best is None or d < best:
            best = d
    return best


def coordinate_family_gap(inst: OrthoInstance) -> Optional[Rat]:
    """Smallest positive difference inside any one endpoint-coordinate family.

    Families are kept per slot (VSeg.x, VSeg.y_lo, VSeg.y_hi, HSeg.y,
    HSeg.x_lo, HSeg.x_hi) so that, e.g., a segment's own height never caps
    the gap between two parallel segments.
    """
    families = (
        [s.x for s in inst.vsegs],
        [s.y_lo for s in inst.vsegs],
        [s.y_hi for s in inst.vsegs],
        [s.y for s in inst.hsegs],
        [s.x_lo for s in inst.hsegs],
        [s.x_hi for s in inst.hsegs],
    )
    best = None
    for fam in families:
        d = _min_adjacent_diff(fam)
        if d is not None and (best is None or d < best):
            best = d
    return best


def min_positive_gap(inst: OrthoInstance) -> Optional[Rat]:
    """Safety margin for perturbations: the smaller of the minimum
    separation between disjoint segments and the minimum positive
    coordinate-family difference.

    Returns NO_GAP (None) when the instance has no disjoint pair.
    Separation is measured in the Chebyshev metric, which is exact over the
    rationals and never exceeds the Euclidean distance, so any perturbation
    below half of it preserves disjointness.
    """
    segs = inst.all_segments()
    best_dist = None
    for i, a in enumerate(segs):
        for b in segs[i + 1:]:
            if intersects(a, b):
                continue
            d = _chebyshev_gap(a, b)
            if best_dist is None or d < best_dist:
                best_dist = d
    if best_dist is None:
        return NO_GAP
    fam = coordinate_family_gap(inst)
    if fam is not None and fam < best_dist:
        return fam
    return best_dist


def properize(inst: OrthoInstance) -> OrthoInstance:
    """Stretch equal-length segments so each orientation's projection family
    becomes proper (no interval contains another) without changing any
    pairwise intersection.

    Every segment must have the same length.  Within one orientation the
    segments are ranked by (low endpoint, id); rank i is extended by i*eps
    at its low end and (N - i)*eps at its high end, so all modified lengths
    stay equal and containment would force two identical intervals, which
    distinct ranks rule out.  eps is chosen well below half the instance
    gap, so disjoint segments stay disjoint.
    """
    segs = inst.all_segments()
    if not segs:
        return inst
    lengths = {s.length for s in segs}
    if len(lengths) != 1:
        raise InvalidInputError("properize requires all segments of equal length")

    gap = min_positive_gap(inst)
    if gap is NO_GAP:
        # Everything pairwise intersects; new intersections are impossible,
        # but distinct anchors must keep their order, so fall back to the
        # coordinate-family gap before the unit default.
        gap = coordinate_family_gap(inst)
        if gap is None:
            gap = Fraction(1)

    def stretch_h(items: list[HSeg]) -> list[HSeg]:
        n = len(items)
        if n == 0:
            return []
        eps = gap / (4 * (n + 1))
        order = sorted(items, key=lambda s: (s.x_lo, s.id))
        out = []
        for i, s in enumerate(order):
            out.append(HSeg(s.id, s.y, s.x_lo - i * eps, s.x_hi + (n - i) * eps))
        return out

    def stretch_v(items: list[VSeg]) -> list[VSeg]:
        n = len(items)
        if n == 0:
            return []
        eps = gap / (4 * (n + 1))
        order = sorted(items, key=lambda s: (s.y_lo, s.id))
        out = []
        for i, s in enumerate(order):
            out.append(VSeg(s.id, s.x, s.y_lo - i * eps, s.y_hi + (n - i) * eps))
        return out

    new_h = sorted(stretch_h(list(inst.hsegs)), key=lambda s: s.id)
    new_v = sorted(stretch_v(list(inst.vsegs)), key=lambda s: s.id)
    return OrthoInstance(tuple(new_h), tuple(new_v), inst.constraint_ids, inst.candidate_ids)


def is_proper(intervals: list[tuple[Rat, Rat]]) -> bool:
    """True when no interval in the list contains another (identity included)."""
    order = sorted(range(len(intervals)), key=lambda i: (intervals[i][0], -intervals[i][1]))
    best_hi = None
    for idx in order:
        lo, hi = intervals[idx]
        if best_hi is not None and hi <= best_hi:
            return False
        best_hi = hi
    return True


class RayIndex:
    """Ordered live set of pairwise-disjoint leftward rays, keyed by y.

    Supports range enumeration with deletion: a query reports each live ray
    at most once over its whole lifetime because reported rays are removed.
    """

    def __init__(self, rays: Iterable[HRay]):
        rays = list(rays)
        self._by_id: dict[int, HRay] = {}
        for r in rays:
            if r.id in self._by_id:
                raise InvalidInputError(f"duplicate ray id {r.id}")
            self._by_id[r.id] = r
        ys = [r.y for r in rays]
        if len(set(ys)) != len(ys):
            raise InvalidInputError("rays must have pairwise distinct y")
        self._live = SortedList((r.y, r.id) for r in rays)
        self._alive = set(self._by_id)

    def __len__(self) -> int:
        return len(self._live)

    def __contains__(self, ray_id: int) -> bool:
        return ray_id in self._alive

    def ray(self, ray_id: int) -> HRay:
        return self._by_id[ray_id]

    def live_ids(self) -> list[int]:
        return [i for _, i in self._live]

    def query_delete(self, seg: VSeg) -> set[int]:
        """Report and remove every live ray intersecting ``seg``."""
        hits = []
        for y, rid in self._live.irange((seg.y_lo, -math.inf), (seg.y_hi, math.inf)):
            if self._by_id[rid].x_right >= seg.x:
                hits.append((y, rid))
        for item in hits:
            self._live.remove(item)
            self._alive.discard(item[1])
        return {rid for _, rid in hits}

    def delete(self, ray_id: int) -> None:
        if ray_id in self._alive:
            r = self._by_id[ray_id]
            self._live.remove((r.y, ray_id))
            self._alive.discard(ray_id)

    def neighbors(self, ray_id: int) -> tuple[Optional[int], Optional[int]]:
        """Live rays just below and just above a live ray, by y."""
        r = self._by_id[ray_id]
        pos = self._live.index((r.y, ray_id))
        below = self._live[pos - 1][1] if pos > 0 else None
        above = self._live[pos + 1][1] if pos + 1 < len(self._live) else None
        return below, above

    def first_at_or_above(self, y: Rat) -> Optional[int]:
        pos = self._live.bisect_left((y, -math.inf))
        return self._live[pos][1] if pos < len(self._live) else None

    def last_at_or_below(self, y: Rat) -> Optional[int]:
        pos = self._live.bisect_right((y, math.inf)) - 1
        return self._live[pos][1] if pos >= 0 else None


def sweep_index_build(rays: Iterable[HRay]) -> RayIndex:
    return RayIndex(rays)


def sweep_index_query_delete(idx: RayIndex, seg: VSeg) -> set[int]:
    return idx.query_delete(seg)


def rank_interval(sorted_ys: list[Rat], y_lo: Rat, y_hi: Rat) -> tuple[int, int]:
    """Inclusive index range of sorted_ys values falling inside [y_lo, y_hi].

    Returns (a, b) with a > b when the range is empty.
    """
    a = bisect_left(sorted_ys, y_lo)
    b = bisect_right(sorted_ys, y_hi) - 1
    return a, b
