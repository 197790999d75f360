"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RainbowLabError(Exception):
    """Base class for all errors raised by rainbowlab."""


class ParameterError(RainbowLabError, ValueError):
    """Invalid parameters for a gadget, case or procedure."""


class SpecSyntaxError(ParameterError):
    """A graph spec string could not be parsed."""


class UndefinedDensityError(RainbowLabError, ValueError):
    """The requested density functional is undefined for this graph."""


class ResourceError(RainbowLabError):
    """The input exceeds an enumeration budget."""


class TotalityError(RainbowLabError, ValueError):
    """An edge coloring does not cover every edge of its host."""


class PropernessError(RainbowLabError, ValueError):
    """Two edges sharing a vertex carry the same color."""

    def __init__(self, vertex: int, color: int):
        super().__init__(f"color {color} appears twice at vertex {vertex}")
        self.vertex = vertex
        self.color = color


class DomainError(RainbowLabError, ValueError):
    """An object does not live in the host it is used with."""


class InapplicableError(RainbowLabError, ValueError):
    """A bound or procedure does not apply to the given input."""


class GadgetStateError(RainbowLabError):
    """A construction's precondition on the coloring failed."""

    def __init__(self, stage: str, detail: str = ""):
        msg = f"{stage}: {detail}" if detail else stage
        super().__init__(msg)
        self.stage = stage


class StructureError(RainbowLabError, ValueError):
    """A component structure is malformed."""


class BoundViolationError(RainbowLabError, AssertionError):
    """An exact count exceeded a bound that is supposed to hold."""


class DegenerateRecordError(RainbowLabError):
    """Every trial of an experiment was indeterminate."""
