"""Exception hierarchy shared across the engine."""


class PlanVerifyError(Exception):
    """Base class for all engine errors."""


class ParseError(PlanVerifyError):
    """Input text is not well-formed JSON."""


class SchemaError(PlanVerifyError):
    """JSON is well-formed but violates the document schema."""


class ConstraintError(PlanVerifyError):
    """Schema-level values violate a semantic constraint (e.g. both area and height/width)."""


class NonSimplePolygonError(PlanVerifyError):
    """Polygon self-intersects; geometric operations are undefined."""


class DegenerateAfterSnapError(PlanVerifyError):
    """Grid snapping collapsed a polygon below 3 distinct vertices."""


class GraphTooLargeError(PlanVerifyError):
    """Graph exceeds the exact GED solver's node bound."""


class EmptyGroupError(PlanVerifyError):
    """Advantage normalization requires at least one reward."""


class InvalidTargetError(PlanVerifyError):
    """Total-area target must be positive."""


class EmptyCandidateListError(PlanVerifyError):
    """Best-of-n selection requires at least one candidate."""


class DisconnectedGraphError(PlanVerifyError):
    """Derived adjacency graph is disconnected; the sample is filtered."""


class MultiComponentInstanceError(PlanVerifyError):
    """A grid label occupies more than one 4-connected component."""


class DoorAdjacencyDefectError(PlanVerifyError):
    """A door in a label grid touches the wrong number of rooms."""
