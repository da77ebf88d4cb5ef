"""qortho: numerical verification of q-Laguerre / big q-Bessel orthogonality.

The package evaluates the q-series special functions attached to a
doubly infinite Jacobi operator (q-Laguerre polynomials, their bilateral
M-companions, big q-Bessel functions, big q-Jacobi polynomials) and
machine-checks the orthogonality, completeness and limit identities that
tie them together.
"""

from .context import QContext, SeriesValue
from .errors import (
    DegenerateParameter,
    DivergentSeries,
    FormMismatch,
    NegativeBaseFractionalPower,
    NegativeWeight,
    NonSummable,
    PoleInLowerParameter,
    QNumericsError,
    SingularWronskian,
    TruncationCapExceeded,
    UnknownFunction,
    UsageError,
    WeightPole,
)

__version__ = "0.1.0"

__all__ = [
    "QContext",
    "SeriesValue",
    "QNumericsError",
    "TruncationCapExceeded",
    "PoleInLowerParameter",
    "DivergentSeries",
    "DegenerateParameter",
    "FormMismatch",
    "SingularWronskian",
    "NonSummable",
    "WeightPole",
    "NegativeWeight",
    "NegativeBaseFractionalPower",
    "UnknownFunction",
    "UsageError",
    "__version__",
]
