"""Exception types shared across the package."""


class CayleyError(Exception):
    """Base class for all package errors."""


class UnsupportedFamily(CayleyError):
    """The group descriptor names no known family."""


class InvalidParameter(CayleyError):
    """A family parameter is out of range (e.g. tree degree 2)."""


class MalformedElement(CayleyError):
    """An element does not belong to the model or fails to parse."""


class NoFormula(CayleyError):
    """The model has no closed-form word length; use BFS instead."""


class NoOracle(CayleyError):
    """The model has no exact infinite-component / component oracle."""


class LengthMismatch(CayleyError):
    """An element's length disagrees with the radius the caller supplied."""


class BudgetExceeded(CayleyError):
    """Enumeration ran out of its element budget.

    ``completed_radius`` is the largest radius whose sphere was finished,
    so the caller can retry with a smaller N.
    """

    def __init__(self, message, completed_radius):
        super().__init__(message)
        self.completed_radius = completed_radius


class RadiusOutOfRange(CayleyError):
    """A sphere index exceeds the table radius."""


class InsufficientRadius(CayleyError):
    """The ball table is too small for the requested certified operation."""


class WrongModel(CayleyError):
    """The operation only applies to a specific group model."""


class VertexNotInAnnulus(CayleyError):
    """A queried vertex is missing from the annulus."""


class DisconnectedAnnulus(CayleyError):
    """Sprawl was requested on a disconnected annulus."""


class NotInInfiniteComponent(CayleyError):
    """A path constructor demands a start in S(n)^infty."""


class UnsupportedRadius(CayleyError):
    """The path constructor does not handle this radius."""


class WrongRadiusForm(CayleyError):
    """The tree constructor only supports n = 2|B_T(e,R)| - R."""


class OutsideAnnulus(CayleyError):
    """The start element lies outside the prescribed annulus."""
