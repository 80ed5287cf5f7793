"""Exception hierarchy shared by all solver paths."""


class DGPError(Exception):
    """Base class for every error raised by this package."""


class InstanceError(DGPError, ValueError):
    pass


class MissingConsecutiveEdge(InstanceError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"edge {{{k - 1},{k}}} is missing")


class MissingClosingEdge(InstanceError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"closing edge {{1,{n}}} is missing")


class ExtraEdge(InstanceError):
    def __init__(self, u, v):
        self.u, self.v = u, v
        super().__init__(f"edge {{{u},{v}}} is not allowed in a paradoxical instance")


class DuplicateEdge(InstanceError):
    def __init__(self, u, v):
        self.u, self.v = u, v
        super().__init__(f"edge {{{u},{v}}} given more than once")


class NegativeWeight(InstanceError):
    pass


class InvalidSize(InstanceError):
    pass


class InstanceSyntaxError(InstanceError):
    """Malformed instance document; carries the offending line and/or field."""

    def __init__(self, msg, *, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)


class SizeLimit(DGPError, ValueError):
    pass


class IndexOutOfRange(DGPError, IndexError):
    pass


class LayerOutOfRange(IndexOutOfRange):
    pass


class BadSign(DGPError, ValueError):
    pass


class SizeMismatch(DGPError, ValueError):
    pass


class ValueOutOfRange(DGPError, ValueError):
    pass


class FrameOverflow(DGPError, ValueError):
    pass


class ShapeMismatch(DGPError, ValueError):
    pass


class ZeroDistanceWarning(UserWarning):
    """A consecutive distance of exactly zero was accepted."""


class AllZeroWarning(UserWarning):
    """Every distance is zero; the instance is trivially feasible."""
