"""Special-function families built on the q-series core.

* q-Laguerre polynomials L_n^{(alpha)}(x; q)
* the bilateral companion functions M_p attached to the same measure
  (two analytically equal 1phi1 forms with opposite conditioning)
* Jackson's second q-Bessel function
* big q-Bessel functions
* big q-Jacobi polynomials and their tilde-normalized relatives

Every function takes parameters explicitly; the measure data
(alpha, c, ctx) travels as a :class:`MeasureSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .context import QContext
from .errors import FormMismatch, NegativeBaseFractionalPower
from .qseries import phi11_reg, phi_rs, qpoch_finite, qpoch_inf, qpoch_multi

# |z| threshold separating the direct 1phi1 regime from the regularized
# large-argument regime; inside the overlap both forms carry full accuracy.
FORM_SWITCH = 0.9


@dataclass(frozen=True)
class MeasureSpec:
    """Parameters of the discrete measure on the bilateral lattice c q^k:

        weight(k) ~ q^{k(alpha+1)} / (-c q^k; q)_inf.

    Requires alpha > -1 and c > 0.
    """

    alpha: float
    c: float
    ctx: QContext

    def __post_init__(self) -> None:
        if not self.alpha > -1.0:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if not self.c > 0.0:
            raise ValueError(f"c must be positive, got {self.c}")

    @property
    def q(self) -> float:
        return self.ctx.q


def q_laguerre(n: int, alpha: float, x: float, ctx: QContext) -> float:
    """q-Laguerre polynomial

        L_n^{(alpha)}(x; q) = (q^{alpha+1}; q)_n / (q; q)_n
                              * 1phi1(q^{-n}; q^{alpha+1}; q, -x q^{n+alpha+1}).

    Degree n in x; the series terminates after n + 1 terms.
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    q = ctx.q
    pref = qpoch_finite(q ** (alpha + 1), n, ctx) / qpoch_finite(q, n, ctx)
    body = phi_rs((q ** (-n),), (q ** (alpha + 1),), -x * q ** (n + alpha + 1), ctx)
    return pref * body.value


def m_func(p: int, spec: MeasureSpec, x: float, form: str = "both") -> float:
    """Bilateral companion function M_p for the measure in ``spec``.

    Two analytically equal evaluations:

      form A:  (q^{a1};q)_inf / ((q, -c q^{a1};q)_inf)
                 * 1phi1(-c q^{alpha-p}; q^{a1}; q, x q^{p+1}/c)
      form B:  phi11_reg(-x, x q^{p+1}/c, q^{a1}) / (q, -c q^{a1};q)_inf

    with a1 = alpha + 1.  Their conditioning is opposite: A degrades as
    |x q^{p+1}/c| grows, B is the regularized route that stays clean
    there.  form="auto" picks the well-conditioned one; "A"/"B" force a
    form; "both" (default) evaluates both, raises FormMismatch if they
    disagree beyond the combined error estimate, and returns form A.
    """
    ctx = spec.ctx
    q = ctx.q
    a1 = spec.alpha + 1.0
    z_a = x * q ** (p + 1) / spec.c
    denom = qpoch_multi((q, -spec.c * q**a1), ctx).value

    def form_a():
        s = phi_rs((-spec.c * q ** (spec.alpha - p),), (q**a1,), z_a, ctx)
        pref = qpoch_inf(q**a1, ctx).value / denom
        return pref * s.value, abs(pref) * s.abs_err

    def form_b():
        s = phi11_reg(-x, z_a, q**a1, ctx)
        return s.value / denom, s.abs_err / abs(denom)

    if form == "A":
        return form_a()[0]
    if form == "B":
        return form_b()[0]
    if form == "auto":
        return form_a()[0] if abs(z_a) <= FORM_SWITCH else form_b()[0]
    if form != "both":
        raise ValueError(f"unknown form {form!r}")
    va, ea = form_a()
    vb, eb = form_b()
    scale = max(abs(va), abs(vb))
    if abs(va - vb) > max(ctx.eps_verify * scale, 2.0 * (ea + eb)):
        raise FormMismatch(
            f"M_{p} forms disagree at x={x}: A={va!r}, B={vb!r}, "
            f"error budget {2.0 * (ea + eb):.3e}"
        )
    return va


def jackson_j2(alpha: float, x: float, ctx: QContext) -> float:
    """Jackson's second q-Bessel function

        J^{(2)}_alpha(x; q) = (q^{alpha+1};q)_inf / (q;q)_inf * (x/2)^alpha
                              * 0phi1(-; q^{alpha+1}; q, -x^2 q^{alpha+1} / 4).

    For x < 0 the prefactor (x/2)^alpha only makes sense for integer
    alpha; otherwise NegativeBaseFractionalPower is raised.
    """
    q = ctx.q
    a1 = alpha + 1.0
    is_int = abs(alpha - round(alpha)) < 1e-12
    if x < 0.0 and not is_int:
        raise NegativeBaseFractionalPower(
            f"(x/2)^alpha with x={x} < 0 and non-integer alpha={alpha}"
        )
    if x == 0.0:
        if alpha == 0.0:
            pref_x = 1.0
        elif alpha > 0.0:
            return 0.0
        else:
            raise ValueError("J2 is singular at x = 0 for alpha < 0")
    elif x < 0.0:
        pref_x = (x / 2.0) ** round(alpha)
    else:
        pref_x = (x / 2.0) ** alpha
    pref = qpoch_inf(q**a1, ctx).value / qpoch_inf(q, ctx).value
    body = phi_rs((), (q**a1,), -(x * x) * q**a1 / 4.0, ctx)
    return pref * pref_x * body.value


def big_qbessel(alpha: float, k: int, c: float, x: float, ctx: QContext, check: bool = True) -> float:
    """Big q-Bessel function on lattice index k:

        J_{alpha,k}(x)
            = 1phi1(1/x; q^{alpha+1}; q, -x q^{k+alpha+2} / c)            (x != 0)
            = (-q^{k+1}/c; q)_inf
              * 2phi1(q^{alpha+1} x, 0; q^{alpha+1}; q, -q^{k+1}/c)       (alt form)

    The two displays agree wherever the second converges (q^{k+1} < c);
    with check=True that agreement is asserted within the combined error
    estimate.  For |x q^{k+alpha+2}/c| beyond FORM_SWITCH the first form
    is summed through the regularized route

        (q^{alpha+1};q)_inf^{-1} phi11_reg(-q^{k+1}/c, -x q^{k+alpha+2}/c, q^{alpha+1}),

    which is the same function by the Heine argument exchange and does
    not suffer the large-argument cancellation.  x = 0 is served by the
    alternative form (or the regularized route when it diverges).
    """
    q = ctx.q
    a1 = alpha + 1.0
    z = -x * q ** (k + alpha + 2) / c
    w = q ** (k + 1) / c  # |argument| of the alternative form

    def alt_form():
        pref = qpoch_inf(-w, ctx)
        body = phi_rs((q**a1 * x, 0.0), (q**a1,), -w, ctx)
        return pref.value * body.value, abs(pref.value) * body.abs_err + pref.abs_err * abs(body.value)

    def reg_form():
        s = phi11_reg(-w, z, q**a1, ctx)
        d = qpoch_inf(q**a1, ctx).value
        return s.value / d, s.abs_err / d

    if x == 0.0:
        return alt_form()[0] if w <= FORM_SWITCH else reg_form()[0]

    if abs(z) <= FORM_SWITCH:
        s = phi_rs((1.0 / x,), (q**a1,), z, ctx)
        primary, perr = s.value, s.abs_err
    else:
        primary, perr = reg_form()

    if check and w <= FORM_SWITCH:
        va, ea = alt_form()
        scale = max(abs(primary), abs(va))
        if abs(primary - va) > max(ctx.eps_verify * scale, 2.0 * (perr + ea)):
            raise FormMismatch(
                f"big q-Bessel forms disagree at (alpha={alpha}, k={k}, c={c}, x={x}): "
                f"{primary!r} vs {va!r}"
            )
    return primary


@dataclass(frozen=True)
class BigJacobiParams:
    """Parameters (a, b, c) of the big q-Jacobi family.

    Validity (checked against a QContext at call time): 0 < a < 1/q,
    b > -1/q, c > 0.
    """

    a: float
    b: float
    c: float

    def validate(self, ctx: QContext) -> None:
        if not (0.0 < self.a < 1.0 / ctx.q):
            raise ValueError(f"need 0 < a < 1/q, got a={self.a}")
        if not self.b > -1.0 / ctx.q:
            raise ValueError(f"need b > -1/q, got b={self.b}")
        if not self.c > 0.0:
            raise ValueError(f"need c > 0, got c={self.c}")


def big_qjacobi(k: int, params: BigJacobiParams, x: float, ctx: QContext) -> float:
    """Big q-Jacobi polynomial of degree k:

        P_k(x) = 3phi2(q^{-k}, a b q^{k+1}, x; a q, -c q; q, q).

    x enters as an upper parameter, so P_k is a polynomial in x of
    degree k; the series terminates after k + 1 terms.
    """
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    params.validate(ctx)
    q = ctx.q
    s = phi_rs(
        (q ** (-k), params.a * params.b * q ** (k + 1), x),
        (params.a * q, -params.c * q),
        q,
        ctx,
    )
    return s.value


def big_qjacobi_tilde(
    k: int,
    a: float,
    c: float,
    x: float,
    ctx: QContext,
    via_scaling: bool = False,
) -> float:
    """Tilde-normalized big q-Jacobi polynomial (b = 0 family):

        Ptilde_k(x) = 2phi1(q^{-k}, a q / x; a q; q, -x / c)
                    = (-q^{-k}/c; q)_k  P_k(x; a, 0, c).

    Requires x != 0 (x appears inverted in an upper parameter).  The
    second display is exposed through via_scaling=True, mostly so tests
    can pin the two routes against each other.
    """
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    if x == 0.0:
        raise ValueError("tilde normalization needs x != 0")
    q = ctx.q
    if via_scaling:
        scale = qpoch_finite(-q ** (-k) / c, k, ctx)
        return scale * big_qjacobi(k, BigJacobiParams(a, 0.0, c), x, ctx)
    s = phi_rs((q ** (-k), a * q / x), (a * q,), -x / c, ctx)
    return s.value
