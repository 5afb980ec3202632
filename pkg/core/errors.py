"""
CORE: ERRORS
- One hierarchy rooted at ChannelError (a ValueError), so the CLI can map
  every domain failure to exit code 2.
"""

from typing import Sequence


class ChannelError(ValueError):
    """Base class for every domain error raised by the toolkit."""


class DimensionError(ChannelError):
    """Matrix dimension outside {2, 4} or mismatched operands."""


class NotHermitianError(ChannelError):
    pass


class InvalidStateError(ChannelError):
    """Input is not a density matrix, or a Bloch vector lies outside the ball."""


class ParameterError(ChannelError):
    """Negative or out-of-range physical parameter, or negative time."""


class CompletePositivityError(ParameterError):
    pass


class DegenerateEllipsoidError(ChannelError):
    """Some contraction is zero, so the image of the sphere is flat."""

    def __init__(self, flattened_axes: Sequence[int]):
        self.flattened_axes = tuple(flattened_axes)
        names = ", ".join("uvw"[i] for i in self.flattened_axes)
        super().__init__(f"image ellipsoid is degenerate: flattened along {names}")


class NoSignChangeError(ChannelError):
    pass


CP_RESERVOIR_MESSAGE = "complete positivity violated: M^2 > N(N+1)"
