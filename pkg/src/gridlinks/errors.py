"""Exception types raised across the package."""


class GridError(ValueError):
    """Base class for invalid grid-diagram input."""


class NotAPermutation(GridError):
    pass


class Collision(GridError):
    """A row holds its black and white dot in the same column.

    The link sampler treats this as its rejection signal.
    """


class NotADerangement(GridError):
    pass


class SizeLimitExceeded(ValueError):
    pass


class TruncationTooSmall(ValueError):
    pass


class DegenerateSample(ValueError):
    pass


class DegenerateDesign(ValueError):
    pass
