class DegenerateLattice(ValueError):
    pass


class NonPositiveDefinite(ValueError):
    pass


class BoxTooSmall(ValueError):
    pass


class GridTooCoarse(ValueError):
    pass


class NotANullMode(ValueError):
    pass


class InexactBoundary(UserWarning):
    """Float backend found lattice points within tolerance of the ellipse boundary."""
