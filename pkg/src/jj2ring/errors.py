"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested system size exceeds what the dense solver supports."""


class NumericalValidityError(ArithmeticError):
    """A computed quantity violates a physical constraint beyond round-off."""
