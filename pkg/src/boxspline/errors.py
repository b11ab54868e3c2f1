"""Exception types raised by the engine."""


class BoxSplineError(ValueError):
    """Base class for every domain error."""


class NonSpanningList(BoxSplineError):
    pass


class UnsupportedSize(BoxSplineError):
    pass


class NonRegularPoint(BoxSplineError):
    pass


class SegmentInsideArrangement(BoxSplineError):
    pass


class NonAdmissibleSubspace(BoxSplineError):
    pass


class FormHitsInteger(BoxSplineError):
    pass


class IntegerTwist(BoxSplineError):
    pass


class NotAToricVertex(BoxSplineError):
    pass


class NotInDMSpace(BoxSplineError):
    pass


class UnsupportedDimension(BoxSplineError):
    pass


class NodeSelectionError(BoxSplineError):
    """Could not find regular interpolation nodes; points at an arrangement bug."""
