"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: InputError -> 3, InfeasibleError -> 2,
SizeCapExceededError -> 4.
"""


class GeodomError(Exception):
    """Base class for every error raised by this package."""


class InputError(GeodomError):
    """Malformed or invalid input data."""


class InfeasibleError(GeodomError):
    """The instance admits no solution."""


class SizeCapExceededError(GeodomError):
    """An exact solver was asked to exceed its configured size cap."""


class InvalidInputError(InputError):
    pass


class InfeasibleSegmentError(InfeasibleError):
    """A constraint segment meets no candidate ray."""

    def __init__(self, segment_id: int):
        super().__init__(f"segment {segment_id} intersects no ray")
        self.segment_id = segment_id


class InfeasibleRayError(InfeasibleError):
    """A constraint ray meets no candidate segment."""

    def __init__(self, ray_id: int):
        super().__init__(f"ray {ray_id} intersects no segment")
        self.ray_id = ray_id


class InfeasibleTargetError(InfeasibleError):
    """A target segment meets no candidate segment."""

    def __init__(self, target_id: int):
        super().__init__(f"target {target_id} intersects no candidate")
        self.target_id = target_id


class InfeasibleConstraintError(InfeasibleError):
    """A constraint segment meets no candidate segment."""

    def __init__(self, constraint_id: int):
        super().__init__(f"constraint {constraint_id} intersects no candidate")
        self.constraint_id = constraint_id


class AssumptionViolationError(InputError):
    """A grounded L-path instance breaks one of its structural assumptions.

    ``which`` is one of "i" (some path misses the grounding line), "ii" (a
    corner lies on the grounding line or right of it), "iii" (two paths meet
    in more than one point).
    """

    def __init__(self, which: str, ids=()):
        super().__init__(f"assumption ({which}) violated by paths {sorted(ids)}")
        self.which = which
        self.ids = tuple(sorted(ids))


class NotProperError(InputError):
    """A projection family contains nested intervals."""

    def __init__(self, orientation: str, ids=()):
        super().__init__(f"{orientation} projections are not proper: {sorted(ids)}")
        self.orientation = orientation
        self.ids = tuple(sorted(ids))


class InvalidPathError(InputError):
    """A rectilinear path breaks alternation or leg-count rules."""

    def __init__(self, path_id: int, reason: str = ""):
        super().__init__(f"path {path_id} is invalid: {reason}")
        self.path_id = path_id


class UncoveredRowError(GeodomError):
    """A threshold split left some constraint row in no part."""

    def __init__(self, row_index: int):
        super().__init__(f"row {row_index} reaches the threshold in no part")
        self.row_index = row_index


class GenerationExhaustedError(GeodomError):
    """A random generator ran out of retries while enforcing validity."""
