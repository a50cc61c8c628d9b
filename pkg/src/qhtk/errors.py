"""Exception hierarchy shared across the toolkit."""


class QhtkError(Exception):
    """Base class for all toolkit errors."""


class DomainMembershipError(QhtkError):
    """A point is outside the domain or on its boundary."""

    def __init__(self, point, domain_name=""):
        self.point = tuple(float(c) for c in point)
        self.domain_name = domain_name
        super().__init__(
            f"point {self.point} is not interior to domain {domain_name!r}"
        )


class SpecValidationError(QhtkError):
    """A structured spec document violates the schema or an invariant.

    `field` carries the path of the offending field, e.g. "radius" or
    "vertices[3]".
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class SamplingError(QhtkError):
    """Rejection sampling exhausted its budget (margin too large)."""


class ResolutionError(QhtkError):
    """Two query points fall in graph components disconnected at the
    requested resolution; the caller should refine."""


class PathError(QhtkError):
    """A path invariant is broken (a point of a supposedly interior
    segment fails containment)."""


class MapConsistencyError(QhtkError):
    """A mapped point failed a containment or roundtrip check in the
    target domain."""


class UsageError(QhtkError):
    """Bad command-line arguments or an unknown command token."""
