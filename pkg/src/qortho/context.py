"""Numeric context and scale-safe arithmetic building blocks.

Everything downstream funnels through three small pieces:

* :class:`QContext` -- the base q plus the tolerance knobs, passed
  explicitly to every evaluator (no module-level state).
* :class:`CompensatedSum` -- Neumaier-compensated accumulation that also
  tracks the sum of absolute values, so each result can report a
  cancellation index (absolute mass / |net sum|).
* :class:`LogReal` / :class:`ScaledSum` -- sign + log-magnitude numbers
  and a compensated accumulator for them.  Lattice weights and
  eigensolution prefactors routinely leave binary64 range even though
  every quantity a caller sees is modest; these carry the scale
  explicitly instead of overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Magnitude floor used when a relative threshold needs a nonzero anchor.
TINY = 1e-300


@dataclass(frozen=True)
class QContext:
    """Base q and tolerance configuration shared by all evaluators.

    eps_term   -- relative threshold for the series stop rules
    eps_verify -- tolerance used by identity self-checks
    max_terms  -- hard cap on series / product length before
                  TruncationCapExceeded
    """

    q: float
    eps_term: float = 1e-16
    eps_verify: float = 1e-10
    max_terms: int = 10000

    def __post_init__(self) -> None:
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if not (0.0 < self.eps_term < 1.0):
            raise ValueError("eps_term must lie in (0, 1)")
        if not (0.0 < self.eps_verify < 1.0):
            raise ValueError("eps_verify must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")

    @property
    def log_q(self) -> float:
        return math.log(self.q)


@dataclass(frozen=True)
class SeriesValue:
    """Value of a truncated series together with its error bookkeeping.

    abs_err is a (heuristic but honest) bound combining the last neglected
    term with rounding noise; cancellation is sum(|terms|)/|sum| and is the
    factor by which relative accuracy degrades in the worst case.
    """

    value: float
    abs_err: float
    n_terms: int
    cancellation: float

    def __float__(self) -> float:
        return self.value


class CompensatedSum:
    """Neumaier variant of Kahan summation with absolute-mass tracking."""

    __slots__ = ("_s", "_c", "abs_total", "n")

    def __init__(self) -> None:
        self._s = 0.0
        self._c = 0.0
        self.abs_total = 0.0
        self.n = 0

    def add(self, x: float) -> None:
        s = self._s
        t = s + x
        if abs(s) >= abs(x):
            self._c += (s - t) + x
        else:
            self._c += (x - t) + s
        self._s = t
        self.abs_total += abs(x)
        self.n += 1

    @property
    def value(self) -> float:
        return self._s + self._c

    @property
    def cancellation(self) -> float:
        v = abs(self.value)
        if self.abs_total == 0.0:
            return 1.0
        return self.abs_total / max(v, TINY)


@dataclass(frozen=True)
class LogReal:
    """A real number stored as sign and natural log of magnitude.

    sign is -1, 0 or +1; log is -inf exactly when sign == 0.  Supports
    the handful of operations the evaluators need; conversion back to
    float underflows gracefully to 0.0 and raises OverflowError only
    when the true magnitude exceeds binary64 range.
    """

    sign: int
    log: float

    @staticmethod
    def of(x: float) -> "LogReal":
        if x == 0.0:
            return LogReal(0, -math.inf)
        if not math.isfinite(x):
            raise ValueError(f"cannot represent non-finite value {x}")
        return LogReal(1 if x > 0 else -1, math.log(abs(x)))

    @staticmethod
    def from_log(sign: int, log: float) -> "LogReal":
        if sign == 0:
            return LogReal(0, -math.inf)
        return LogReal(1 if sign > 0 else -1, log)

    def __mul__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0 or other.sign == 0:
            return LogReal(0, -math.inf)
        return LogReal(self.sign * other.sign, self.log + other.log)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal(0, -math.inf)
        return LogReal(self.sign * other.sign, self.log - other.log)

    def __neg__(self) -> "LogReal":
        return LogReal(-self.sign, self.log)

    def pow_int(self, n: int) -> "LogReal":
        if self.sign == 0:
            if n < 0:
                raise ZeroDivisionError("0 to a negative power")
            return ONE if n == 0 else self
        sign = 1 if (self.sign > 0 or n % 2 == 0) else -1
        return LogReal(sign, n * self.log)

    def sqrt(self) -> "LogReal":
        if self.sign < 0:
            raise ValueError("sqrt of negative LogReal")
        if self.sign == 0:
            return self
        return LogReal(1, 0.5 * self.log)

    def float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log > 709.0:  # just under log(DBL_MAX)
            raise OverflowError(f"LogReal magnitude exp({self.log}) exceeds float range")
        return self.sign * math.exp(self.log)


ONE = LogReal(1, 0.0)
ZERO = LogReal(0, -math.inf)


class ScaledSum:
    """Compensated accumulation of LogReal terms.

    Terms are accumulated relative to a running reference magnitude, so a
    bilateral sum whose individual terms span hundreds of orders of
    magnitude never overflows.  Cancellation is tracked the same way as in
    CompensatedSum.
    """

    __slots__ = ("ref", "_s", "_c", "_abs", "n")

    def __init__(self) -> None:
        self.ref = -math.inf
        self._s = 0.0
        self._c = 0.0
        self._abs = 0.0
        self.n = 0

    def add(self, term: LogReal) -> None:
        self.n += 1
        if term.sign == 0:
            return
        if self.ref == -math.inf:
            self.ref = term.log
        elif term.log > self.ref + 1.0:
            # rescale accumulated state down to the new, larger reference
            shift = math.exp(self.ref - term.log)
            self._s *= shift
            self._c *= shift
            self._abs *= shift
            self.ref = term.log
        x = term.sign * math.exp(term.log - self.ref)
        s = self._s
        t = s + x
        if abs(s) >= abs(x):
            self._c += (s - t) + x
        else:
            self._c += (x - t) + s
        self._s = t
        self._abs += abs(x)

    @property
    def value_scaled(self) -> float:
        """Net sum divided by exp(ref)."""
        return self._s + self._c

    @property
    def abs_scaled(self) -> float:
        return self._abs

    def total(self) -> LogReal:
        v = self.value_scaled
        if v == 0.0 or self.ref == -math.inf:
            return ZERO
        return LogReal(1 if v > 0 else -1, math.log(abs(v)) + self.ref)

    def total_float(self) -> float:
        return self.total().float()

    def abs_total_log(self) -> float:
        """log of sum(|terms|), -inf if empty."""
        if self._abs == 0.0 or self.ref == -math.inf:
            return -math.inf
        return math.log(self._abs) + self.ref

    @property
    def cancellation(self) -> float:
        v = abs(self.value_scaled)
        if self._abs == 0.0:
            return 1.0
        return self._abs / max(v, TINY)
