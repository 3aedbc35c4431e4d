"""Exception types shared by all ncdyn modules.

Every contract violation raises a named subclass of :class:`NcdynError`,
so callers (and the CLI, which maps them to exit code 4) can react to the
specific failure without parsing messages.
"""


class NcdynError(ValueError):
    """Base class for all ncdyn contract violations."""


# matrix primitives
class NonSquare(NcdynError):
    pass


class NonHermitian(NcdynError):
    pass


class DimensionMismatch(NcdynError):
    pass


class NotAState(NcdynError):
    """Matrix fails the density-matrix invariants (PSD, unit trace)."""


# eigenvalue lists
class TruncationLoss(NcdynError):
    pass


class NotNormalized(NcdynError):
    pass


# CP maps and generators
class NotCP(NcdynError):
    pass


class NotUnital(NcdynError):
    pass


class DegenerateKernel(NcdynError):
    pass


class InvalidList(NcdynError):
    pass


# moments
class LengthMismatch(NcdynError):
    pass


class NotSorted(NcdynError):
    pass


# dilation
class BudgetExceeded(NcdynError):
    pass


class NotProjection(NcdynError):
    pass


# product systems
class NotCondPD(NcdynError):
    pass


# off-white noise toolkit
class AtZero(NcdynError):
    pass


class InvalidCorrelation(NcdynError):
    pass


class BadGrid(NcdynError):
    pass


class OverlappingIntervals(NcdynError):
    pass


class AtomMismatch(NcdynError):
    pass


class SingularGram(NcdynError):
    pass


class SumMapSingular(NcdynError):
    pass
