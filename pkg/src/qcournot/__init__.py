"""Quantum-inspired Cournot duopoly simulator.

Classical Cournot economics, real-amplitude strategy states, simulated
Grover amplitude amplification and Durr-Hoyer threshold search, composed
into duopoly scenarios with a welfare comparison.
"""

from qcournot.errors import DimensionError, DomainError, NormalizationError
from qcournot.market import CsConvention, MarketParams

__version__ = "0.1.0"

__all__ = [
    "CsConvention",
    "DimensionError",
    "DomainError",
    "MarketParams",
    "NormalizationError",
    "__version__",
]
