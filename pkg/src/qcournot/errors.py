"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class DimensionError(DomainError):
    """Two objects that must agree in dimension do not."""


class NormalizationError(DomainError):
    """Squared amplitudes do not sum to one within tolerance."""


class NegativePriceWarning(UserWarning):
    """Total output exceeds the demand intercept, so the price went negative."""
