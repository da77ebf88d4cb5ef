"""Core q-series primitives.

q-Pochhammer symbols (finite, infinite, multi), the basic hypergeometric
series r_phi_s with the standard ((-1)^j q^{j(j-1)/2})^{1+s-r} factor, a
regularized 1phi1 evaluator that stays finite across lower-parameter
poles, the theta / shift / Heine transformation identities, and the
Jackson q-integral on [-c_end, a_end].

All evaluators take an explicit :class:`~qortho.context.QContext`; series
use Neumaier-compensated accumulation and report a cancellation index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .context import (
    TINY,
    ZERO,
    CompensatedSum,
    LogReal,
    QContext,
    ScaledSum,
    SeriesValue,
)
from .errors import (
    DegenerateParameter,
    DivergentSeries,
    PoleInLowerParameter,
    TruncationCapExceeded,
)

# Tolerance for recognizing x = q^{-m}: |x - q^{-m}| <= NEG_POWER_RTOL * q^{-m}.
NEG_POWER_RTOL = 1e-12


def neg_q_power_index(x: float, q: float) -> int | None:
    """Smallest integer m >= 0 with x within tolerance of q^{-m}, else None.

    Recognizes both terminating upper parameters and poles in lower
    parameters of a basic hypergeometric series.
    """
    if x <= 0.0:
        return None
    m = round(math.log(x) / -math.log(q))
    if m < 0:
        return None
    ref = q ** (-m)
    if abs(x - ref) <= NEG_POWER_RTOL * ref:
        return m
    return None


def _logadd(x: float, y: float) -> float:
    """log(exp(x) + exp(y)) without overflow."""
    if x == -math.inf:
        return y
    if y == -math.inf:
        return x
    m = max(x, y)
    return m + math.log(math.exp(x - m) + math.exp(y - m))


def qpoch_finite(a: float, n: int, ctx: QContext) -> float:
    """Finite q-Pochhammer (a; q)_n = prod_{j<n} (1 - a q^j), n >= 0.

    Negative order is rejected rather than extended by the 1/(aq^n;q)_{-n}
    convention; callers that need that form divide explicitly.  Parameters
    of the shape q^{-p} are ordinary inputs here, so e.g. (q^{-p}; q)_p is
    the plain finite product: 1 at p = 0 and nonzero for p >= 1.
    """
    if n < 0:
        raise ValueError(f"qpoch_finite requires n >= 0, got {n}")
    q = ctx.q
    val = 1.0
    aq = a
    for _ in range(n):
        val *= 1.0 - aq
        aq *= q
    return val


def qpoch_finite_log(a: float, n: int, ctx: QContext) -> LogReal:
    """(a; q)_n in sign/log form for scale-safe downstream products."""
    if n < 0:
        raise ValueError(f"qpoch_finite_log requires n >= 0, got {n}")
    q = ctx.q
    sign = 1
    logv = 0.0
    aq = a
    for _ in range(n):
        f = 1.0 - aq
        if f == 0.0:
            return ZERO
        if f < 0.0:
            sign = -sign
        logv += math.log(abs(f))
        aq *= q
    return LogReal(sign, logv)


def qpoch_inf(a: float, ctx: QContext) -> SeriesValue:
    """Infinite q-Pochhammer (a; q)_inf.

    Truncated once the remaining factors change the product by less than
    eps_term relatively; the reported abs_err includes that tail.
    """
    q = ctx.q
    if a == 0.0:
        return SeriesValue(1.0, 0.0, 1, 1.0)
    val = 1.0
    aq = a
    n = 0
    while abs(aq) >= ctx.eps_term:
        if n >= ctx.max_terms:
            raise TruncationCapExceeded(
                f"(a;q)_inf with a={a}, q={q} needs more than {ctx.max_terms} factors"
            )
        val *= 1.0 - aq
        aq *= q
        n += 1
    rel_tail = abs(aq) / (1.0 - q)
    abs_err = abs(val) * (rel_tail + 4e-16 * max(n, 1))
    return SeriesValue(val, abs_err, max(n, 1), 1.0)


def qpoch_inf_log(a: float, ctx: QContext) -> LogReal:
    """(a; q)_inf in sign/log form.  Exact zero when a = q^{-m} exactly."""
    q = ctx.q
    if a == 0.0:
        return LogReal(1, 0.0)
    sign = 1
    logv = 0.0
    aq = a
    n = 0
    while abs(aq) >= ctx.eps_term:
        if n >= ctx.max_terms:
            raise TruncationCapExceeded(
                f"(a;q)_inf with a={a}, q={q} needs more than {ctx.max_terms} factors"
            )
        f = 1.0 - aq
        if f == 0.0:
            return ZERO
        if f < 0.0:
            sign = -sign
        logv += math.log(abs(f))
        aq *= q
        n += 1
    logv += -aq / (1.0 - q)  # first-order tail of sum log(1 - a q^j)
    return LogReal(sign, logv)


def qpoch_multi(params: tuple[float, ...], ctx: QContext) -> SeriesValue:
    """Product (a_1, ..., a_r; q)_inf."""
    val = 1.0
    rel = 0.0
    n = 0
    for a in params:
        s = qpoch_inf(a, ctx)
        if s.value != 0.0:
            rel += s.abs_err / abs(s.value)
        val *= s.value
        n += s.n_terms
    return SeriesValue(val, abs(val) * rel, max(n, 1), 1.0)


def qpoch_multi_log(params: tuple[float, ...], ctx: QContext) -> LogReal:
    out = LogReal(1, 0.0)
    for a in params:
        out = out * qpoch_inf_log(a, ctx)
    return out


def phi_rs(
    upper: tuple[float, ...],
    lower: tuple[float, ...],
    z: float,
    ctx: QContext,
) -> SeriesValue:
    """Basic hypergeometric series r_phi_s(upper; lower; q, z).

    Term j carries the standard extra factor ((-1)^j q^{j(j-1)/2})^e with
    e = 1 + s - r, so the confluent cases are included.  A parameter equal
    to q^{-n} (within NEG_POWER_RTOL relative) terminates the series after
    n + 1 terms; a lower parameter of that shape that is not shielded by
    earlier termination raises PoleInLowerParameter.  Non-terminating
    series apply the stop rule: three consecutive terms below eps_term
    times the current partial-sum magnitude.
    """
    q = ctx.q
    upper = tuple(float(a) for a in upper)
    lower = tuple(float(b) for b in lower)
    e = 1 + len(lower) - len(upper)

    n_term: int | None = None
    for a in upper:
        m = neg_q_power_index(a, q)
        if m is not None and (n_term is None or m < n_term):
            n_term = m
    for b in lower:
        m = neg_q_power_index(b, q)
        if m is not None and (n_term is None or m < n_term):
            raise PoleInLowerParameter(
                f"lower parameter {b} = q^(-{m}) poles the series before termination"
            )

    if z == 0.0:
        return SeriesValue(1.0, 0.0, 1, 1.0)
    if n_term is None:
        if e < 0:
            raise DivergentSeries(
                f"{len(upper)}phi{len(lower)} diverges for z != 0 (radius 0)"
            )
        if e == 0 and abs(z) >= 1.0:
            raise DivergentSeries(f"|z| = {abs(z)!r} is outside the unit disc")

    acc = CompensatedSum()
    term = 1.0
    acc.add(term)
    qj = 1.0
    j = 0
    consec = 0
    while True:
        if n_term is not None:
            if j >= n_term:
                break
        elif consec >= 3:
            break
        if j >= ctx.max_terms:
            raise TruncationCapExceeded(
                f"phi_rs did not meet the stop rule within {ctx.max_terms} terms"
            )
        num = z
        for a in upper:
            num *= 1.0 - a * qj
        den = 1.0 - q * qj
        for b in lower:
            den *= 1.0 - b * qj
        if e != 0:
            num *= (-qj) ** e
        term *= num / den
        j += 1
        qj *= q
        acc.add(term)
        if n_term is None:
            if abs(term) < ctx.eps_term * max(abs(acc.value), TINY):
                consec += 1
            else:
                consec = 0

    trunc = 0.0 if n_term is not None else 3.0 * abs(term)
    abs_err = trunc + 8e-16 * acc.abs_total
    return SeriesValue(acc.value, abs_err, acc.n, acc.cancellation)


@dataclass(frozen=True)
class LogSeriesValue:
    """Series value in sign/log form with a log-domain error bound."""

    value: LogReal
    err_log: float  # log of the absolute error bound
    n_terms: int
    cancellation: float

    def rel_err(self) -> float:
        if self.value.sign == 0:
            return math.inf
        return math.exp(min(self.err_log - self.value.log, 700.0))


def phi11_reg_log(a: float, cpar: float, z: float, ctx: QContext) -> LogSeriesValue:
    """Regularized 1phi1:  (cpar; q)_inf * 1phi1(a; cpar; q, z).

    Summed as  sum_j (a;q)_j (cpar q^j;q)_inf / (q;q)_j
                      * (-1)^j q^{j(j-1)/2} z^j,
    which is entire in cpar (no pole at cpar = q^{-m}) and, unlike the
    direct series, free of subtractive blowup for lattice arguments with
    |z| >> 1: every coefficient is a convergent product, evaluated here in
    log space with block-precomputed tails (cpar q^j; q)_inf obtained by
    one downward recurrence per block.

    Leading terms may be exact zeros (that is the regularization working);
    the stop rule only arms once a nonzero term has been seen.

    Representation choice: for z on the inverse lattice (z = q^{-m} within
    NEG_POWER_RTOL) the alternating series cancels catastrophically exactly
    when the answer is a recessive solution, so we route through the Heine
    symmetry  phi11_reg(a, c, z) = phi11_reg(az/c, z, c),  which moves the
    large argument into the lower slot where its lattice zeros kill the
    offending leading terms exactly.  The lower parameter is then carried
    as an integer exponent so 1 - q^0 vanishes in floating point for any q.
    Off-lattice large z stays in the direct form (the swap would trade mild
    cancellation for severe).
    """
    q = ctx.q
    logq = math.log(q)
    if z == 0.0:
        v = qpoch_inf_log(cpar, ctx)
        return LogSeriesValue(v, v.log + math.log(1e-15), 1, 1.0)

    if z > 1.0 and cpar != 0.0 and abs(cpar) < z:
        mz = round(math.log(z) / logq)
        if abs(z - q**mz) <= NEG_POWER_RTOL * z:
            zz = q**mz
            return phi11_reg_log(a * zz / cpar, zz, cpar, ctx)

    cpar_exp: int | None = None
    if cpar > 1.0:
        mc = round(math.log(cpar) / logq)
        if abs(cpar - q**mc) <= NEG_POWER_RTOL * cpar:
            cpar_exp = mc
            cpar = q**mc

    log_abs_z = math.log(abs(z))
    sign_z = 1 if z > 0.0 else -1

    tails: list[LogReal] = []
    block = 32

    def extend_tails() -> None:
        lo = len(tails)
        hi = lo + block
        if cpar_exp is not None:
            cur = qpoch_inf_log(q ** (cpar_exp + hi), ctx)
        else:
            cur = qpoch_inf_log(cpar * q**hi, ctx)
        seg = [ZERO] * block
        for j in range(hi - 1, lo - 1, -1):
            if cpar_exp is not None:
                f = 1.0 - q ** (cpar_exp + j)
            else:
                f = 1.0 - cpar * q**j
            cur = LogReal.of(f) * cur
            seg[j - lo] = cur
        tails.extend(seg)

    acc = ScaledSum()
    apoch_sign, apoch_log = 1, 0.0  # (a; q)_j
    qfac_log = 0.0  # (q; q)_j
    log_eps = math.log(ctx.eps_term)

    j = 0
    consec = 0
    started = False
    peak_log = -math.inf
    last_log = -math.inf
    while True:
        if j >= len(tails):
            extend_tails()
        tail = tails[j]
        if apoch_sign != 0 and tail.sign != 0:
            t_log = apoch_log + tail.log + 0.5 * j * (j - 1) * logq + j * log_abs_z - qfac_log
            t_sign = apoch_sign * tail.sign * (1 if j % 2 == 0 else -1) * (1 if sign_z > 0 or j % 2 == 0 else -1)
            acc.add(LogReal(t_sign, t_log))
            last_log = t_log
            if not started:
                started = True
            peak_log = max(peak_log, t_log)
            total = acc.total()
            floor = max(total.log, peak_log - 37.0)
            if t_log < log_eps + floor:
                consec += 1
                if consec >= 3:
                    break
            else:
                consec = 0
        else:
            acc.add(ZERO)
        if j >= ctx.max_terms:
            raise TruncationCapExceeded(
                f"phi11_reg did not meet the stop rule within {ctx.max_terms} terms"
            )
        # advance (a;q)_j -> (a;q)_{j+1} and (q;q)_j -> (q;q)_{j+1}
        fa = 1.0 - a * q**j
        if fa == 0.0:
            break  # upper parameter terminated the series exactly
        if fa < 0.0:
            apoch_sign = -apoch_sign
        apoch_log += math.log(abs(fa))
        qfac_log += math.log(1.0 - q ** (j + 1))
        j += 1

    value = acc.total()
    err_log = _logadd(
        math.log(3.0) + last_log if last_log > -math.inf else -math.inf,
        math.log(8e-16) + acc.abs_total_log(),
    )
    return LogSeriesValue(value, err_log, acc.n, acc.cancellation)


def phi11_reg(a: float, cpar: float, z: float, ctx: QContext) -> SeriesValue:
    """Float front end of :func:`phi11_reg_log`."""
    r = phi11_reg_log(a, cpar, z, ctx)
    v = r.value.float()
    abs_err = math.exp(min(r.err_log, 700.0)) if r.err_log > -math.inf else 0.0
    return SeriesValue(v, abs_err, r.n_terms, r.cancellation)


def theta_shift(a: float, k: int, ctx: QContext) -> tuple[float, float]:
    """Theta-product shift:  both sides of

        (a q^k, q^{1-k}/a; q)_inf = (-a)^{-k} q^{-k(k-1)/2} (a, q/a; q)_inf.

    Returned as (lhs, rhs) so callers can difference them at their own
    tolerance.  Requires a != 0.
    """
    if a == 0.0:
        raise DegenerateParameter("theta shift needs a != 0")
    q = ctx.q
    lhs = qpoch_inf(a * q**k, ctx).value * qpoch_inf(q ** (1 - k) / a, ctx).value
    rhs = (
        (-a) ** (-k)
        * q ** (-(k * (k - 1)) // 2)
        * qpoch_inf(a, ctx).value
        * qpoch_inf(q / a, ctx).value
    )
    return lhs, rhs


def shift_1phi1(a: float, p: int, z: float, ctx: QContext) -> tuple[float, float]:
    """Both sides of the regularized 1phi1 lower-parameter shift

        (q^{1-p};q)_inf 1phi1(a q^{-p}; q^{1-p}; q, z)
          = (q/a;q)_inf / (q^{p+1}/a;q)_inf * (a z / q)^p
            * (q^{1+p};q)_inf 1phi1(a; q^{1+p}; q, z q^p).

    The left side is evaluated through the regularized series, which is
    exactly what makes it meaningful for p >= 1 where the unregularized
    1phi1 has a lower-parameter pole.  The Pochhammer ratio is reduced to
    a finite product so no 0/0 ever forms.
    """
    q = ctx.q
    if a == 0.0 and p != 0:
        raise DegenerateParameter("shift_1phi1 needs a != 0 for p != 0")
    lhs = phi11_reg(a * q ** (-p), q ** (1 - p), z, ctx).value
    if p >= 0:
        ratio = qpoch_finite(q / a, p, ctx) if p > 0 else 1.0
    else:
        den = qpoch_finite(q ** (1 + p) / a, -p, ctx)
        if den == 0.0:
            raise DegenerateParameter("shift ratio hits a zero factor")
        ratio = 1.0 / den
    pref = ratio * (a * z / q) ** p if p != 0 else 1.0
    rhs = pref * phi11_reg(a, q ** (1 + p), z * q**p, ctx).value
    return lhs, rhs


def transform_1phi1_heine(a: float, c: float, z: float, ctx: QContext) -> tuple[float, float]:
    """Both sides of the Heine-type 1phi1 argument exchange

        1phi1(a; c; q, z) = (z;q)_inf / (c;q)_inf * 1phi1(a z / c; z; q, c).
    """
    if c == 0.0:
        raise DegenerateParameter("transform needs c != 0")
    lhs = phi_rs((a,), (c,), z, ctx).value
    rhs = (
        qpoch_inf(z, ctx).value
        / qpoch_inf(c, ctx).value
        * phi_rs((a * z / c,), (z,), c, ctx).value
    )
    return lhs, rhs


def qdiff_residual_2phi1(
    a: float,
    b: float,
    c: float,
    z: float,
    ctx: QContext,
    confluent: bool = False,
) -> float:
    """Residual of the contiguous q-difference equation at argument z.

    For u = 2phi1(a, b; c; q, .):
        (1 - w) u(w) - (1 + c/q - (a+b) w) u(q w) + (c/q - a b w) u(q^2 w) = 0
    with w = z/q, i.e. u is evaluated at z/q, z, q z.  With confluent=True
    the same residual for u = 1phi1(a; c; q, .):
        u(w) - (1 + c/q - w) u(q w) + (c/q - a w) u(q^2 w) = 0.

    Returns the raw residual; callers judge it against the magnitude of
    the three terms.
    """
    q = ctx.q
    w = z / q
    if confluent:
        u0 = phi_rs((a,), (c,), w, ctx).value
        u1 = phi_rs((a,), (c,), z, ctx).value
        u2 = phi_rs((a,), (c,), q * z, ctx).value
        return u0 - (1.0 + c / q - w) * u1 + (c / q - a * w) * u2
    u0 = phi_rs((a, b), (c,), w, ctx).value
    u1 = phi_rs((a, b), (c,), z, ctx).value
    u2 = phi_rs((a, b), (c,), q * z, ctx).value
    return (1.0 - w) * u0 - (1.0 + c / q - (a + b) * w) * u1 + (c / q - a * b * w) * u2


def jackson_qintegral(f, a_end: float, c_end: float, ctx: QContext) -> SeriesValue:
    """Jackson q-integral of f over [-c_end, a_end] on the q^{n+1} lattice:

        (1-q) sum_{n>=0} q^n [ a_end q f(a_end q^{n+1}) + c_end q f(-c_end q^{n+1}) ].

    For f == 1 this evaluates to q (a_end + c_end).
    """
    q = ctx.q
    acc = CompensatedSum()
    qn = 1.0
    consec = 0
    n = 0
    while consec < 3:
        if n >= ctx.max_terms:
            raise TruncationCapExceeded(
                f"q-integral did not meet the stop rule within {ctx.max_terms} points"
            )
        term = qn * q * (a_end * f(a_end * q ** (n + 1)) + c_end * f(-c_end * q ** (n + 1)))
        acc.add(term)
        if abs(term) < ctx.eps_term * max(abs(acc.value), TINY):
            consec += 1
        else:
            consec = 0
        qn *= q
        n += 1
    val = (1.0 - q) * acc.value
    abs_err = (1.0 - q) * (3.0 * abs(val) * ctx.eps_term + 8e-16 * acc.abs_total)
    return SeriesValue(val, abs_err, n, acc.cancellation)
