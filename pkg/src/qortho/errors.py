"""Exception taxonomy for the q-series numerics.

Every failure mode that a caller can reasonably branch on gets its own
class.  All of them derive from :class:`QNumericsError` so that suite
runners can catch the whole family at once.
"""


class QNumericsError(Exception):
    """Base class for all numeric / domain errors raised by this package."""


class TruncationCapExceeded(QNumericsError):
    """A series or product failed to meet the stop rule within max_terms."""


class PoleInLowerParameter(QNumericsError):
    """A lower parameter of a basic hypergeometric series hits q^{-m}
    before the series terminates, so a coefficient divides by zero."""


class DivergentSeries(QNumericsError):
    """The requested series diverges for the given argument."""


class DegenerateParameter(QNumericsError):
    """A parameter sits on (or within tolerance of) a degenerate value
    where the requested formula breaks down, e.g. s = +-q^{-m/2} for the
    spectral eigensolution."""


class FormMismatch(QNumericsError):
    """Two analytically equal evaluation forms disagree beyond their
    combined error estimate; signals numeric breakdown, not math."""


class SingularWronskian(QNumericsError):
    """Green function requested at (or too close to) a spectral point,
    where the defining Wronskian vanishes."""


class NonSummable(QNumericsError):
    """A bilateral lattice sum failed to converge inside the hard window
    cap, or produced non-finite terms."""


class WeightPole(QNumericsError):
    """A discrete weight evaluates on top of a pole of its defining
    infinite product."""


class NegativeWeight(QNumericsError):
    """A perturbed measure came out with a negative mass; the requested
    perturbation is outside the admissible range."""


class NegativeBaseFractionalPower(QNumericsError):
    """x^alpha requested for x < 0 with non-integer alpha."""


class UnknownFunction(QNumericsError):
    """CLI eval asked for a function name this package does not export."""


class UsageError(QNumericsError):
    """Malformed CLI invocation: bad suite name, missing or unparsable
    parameter. Maps to exit code 2."""
