"""Orthogonality, completeness and moment checks on the bilateral lattice.

Everything here is organized around one discrete functional

    L(f) = sum_{k in Z} q^{k(alpha+1)} / (-c q^k; q)_inf * f(c q^k),

summed adaptively in sign/log form.  The checks pair an adaptively
computed quantity with an independently evaluated closed form and return
:class:`VerificationReport` rows that the suite runner serializes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .context import QContext, LogReal, ScaledSum, SeriesValue
from .errors import (
    DivergentSeries,
    NegativeWeight,
    NonSummable,
    PoleInLowerParameter,
)
from .families import FORM_SWITCH, MeasureSpec, jackson_j2, m_func, q_laguerre
from .qseries import (
    phi11_reg_log,
    phi_rs,
    qpoch_finite,
    qpoch_finite_log,
    qpoch_inf_log,
    qpoch_multi_log,
)
from . import operator


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class VerificationReport:
    """One computed-vs-predicted comparison.

    passed is (abs_err <= atol) or (rel_err <= rtol); rel_err is measured
    against max(|computed|, |predicted|).  truncation_window records the
    lattice range the adaptive sum actually visited (None for closed-form
    only comparisons), cancellation the worst sum(|terms|)/|sum| ratio
    seen while accumulating.
    """

    name: str
    params: dict
    computed: float
    predicted: float
    abs_err: float
    rel_err: float
    passed: bool
    truncation_window: tuple[int, int] | None
    cancellation: float

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "computed": self.computed,
            "predicted": self.predicted,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "cancellation": self.cancellation,
            "pass": self.passed,
        }


def make_report(
    name: str,
    params: dict,
    computed: float,
    predicted: float,
    *,
    rtol: float,
    atol: float,
    window: tuple[int, int] | None = None,
    cancellation: float = 1.0,
) -> VerificationReport:
    abs_err = abs(computed - predicted)
    denom = max(abs(computed), abs(predicted))
    rel_err = abs_err / denom if denom > 0.0 else 0.0
    passed = abs_err <= atol or rel_err <= rtol
    return VerificationReport(
        name, params, computed, predicted, abs_err, rel_err, passed,
        window, cancellation,
    )


# ---------------------------------------------------------------------------
# weight and adaptive lattice summation

def weight_log(spec: MeasureSpec, k: int) -> LogReal:
    """log-form mass at lattice site c q^k:  q^{k(alpha+1)} / (-c q^k; q)_inf."""
    num = LogReal.from_log(1, k * (spec.alpha + 1.0) * spec.ctx.log_q)
    return num / qpoch_inf_log(-spec.c * spec.q**k, spec.ctx)


def weight(spec: MeasureSpec, k: int) -> float:
    return weight_log(spec, k).float()


def _lattice_sum_log(
    term_log,
    ctx: QContext,
    *,
    lo0: int = -10,
    hi0: int = 10,
    extend_lo: bool = True,
    extend_hi: bool = True,
    cap: int = 200,
    consec: int = 5,
    what: str = "lattice sum",
) -> tuple[ScaledSum, tuple[int, int]]:
    """Sum term_log(k) over an adaptively grown index window.

    Seeds [lo0, hi0], then extends each enabled side until ``consec``
    consecutive terms fall below eps_term * max(|sum|, peak term).  The
    peak enters the stop scale so that a sum whose value cancels to near
    zero is still cut off relative to the size of what was summed.
    """
    acc = ScaledSum()
    peak = -math.inf

    def eat(k: int) -> LogReal:
        nonlocal peak
        t = term_log(k)
        if t.sign != 0 and not (t.log < math.inf):
            raise NonSummable(f"{what}: non-finite term at index {k}")
        acc.add(t)
        if t.sign != 0 and t.log > peak:
            peak = t.log
        return t

    for k in range(lo0, hi0 + 1):
        eat(k)

    log_eps = math.log(ctx.eps_term)
    hi = hi0
    if extend_hi:
        run = 0
        while run < consec:
            hi += 1
            if hi > cap:
                raise NonSummable(f"{what}: no decay up to index +{cap}")
            t = eat(hi)
            floor = log_eps + max(acc.total().log, peak)
            run = run + 1 if (t.sign == 0 or t.log <= floor) else 0
    lo = lo0
    if extend_lo:
        run = 0
        while run < consec:
            lo -= 1
            if lo < -cap:
                raise NonSummable(f"{what}: no decay down to index -{cap}")
            t = eat(lo)
            floor = log_eps + max(acc.total().log, peak)
            run = run + 1 if (t.sign == 0 or t.log <= floor) else 0
    return acc, (lo, hi)


def _series_value(acc: ScaledSum, window: tuple[int, int], ctx: QContext) -> SeriesValue:
    total = acc.total()
    scale_log = max(total.log, acc.abs_total_log())
    tail = 5.0 * ctx.eps_term * math.exp(min(scale_log, 700.0))
    round_err = 8e-16 * math.exp(min(acc.abs_total_log(), 700.0))
    return SeriesValue(
        value=acc.total_float(),
        abs_err=tail + round_err,
        n_terms=window[1] - window[0] + 1,
        cancellation=acc.cancellation,
    )


def _functional_sum(
    spec: MeasureSpec, f, g=None, *, extra_log=None, what: str = "L(f g)"
) -> tuple[SeriesValue, tuple[int, int], float]:
    """Core of the functional: returns (value, window, cancellation)."""

    def term(k: int) -> LogReal:
        t = weight_log(spec, k) * LogReal.of(f(k))
        if g is not None:
            t = t * LogReal.of(g(k))
        if extra_log is not None:
            t = t * extra_log(k)
        return t

    acc, window = _lattice_sum_log(term, spec.ctx, what=what)
    return _series_value(acc, window, spec.ctx), window, acc.cancellation


def functional_L(spec: MeasureSpec, f, g=None) -> SeriesValue:
    """L(f g) with f, g given as lattice functions k -> f(c q^k)."""
    sv, _, _ = _functional_sum(spec, f, g)
    return sv


# ---------------------------------------------------------------------------
# lattice function builders (cached per measure)

@lru_cache(maxsize=None)
def laguerre_lattice(spec: MeasureSpec, n: int):
    """k -> L_n^{(alpha)}(c q^k; q)."""

    @lru_cache(maxsize=None)
    def val(k: int) -> float:
        return q_laguerre(n, spec.alpha, spec.c * spec.q**k, spec.ctx)

    return val


@lru_cache(maxsize=None)
def m_lattice(spec: MeasureSpec, p: int):
    """k -> M_p(c q^k), picking the well-conditioned evaluation form."""

    @lru_cache(maxsize=None)
    def val(k: int) -> float:
        return m_func(p, spec, spec.c * spec.q**k, form="auto")

    return val


@lru_cache(maxsize=None)
def m_hat_lattice(spec: MeasureSpec, p: int):
    """k -> M_p(c q^k) * (-c q^{alpha+1}; q)_inf, the companion function
    normalized so its defining series has no measure-dependent prefactor.

    Two routes: the direct series in z = q^{k+p+1} while it is small, the
    regularized form (which re-expands around the large-z end) otherwise.
    """
    ctx = spec.ctx
    q = ctx.q
    a1 = spec.alpha + 1.0
    a = -spec.c * q ** (spec.alpha - p)
    pref = qpoch_inf_log(q**a1, ctx) / qpoch_inf_log(q, ctx)
    qinf = qpoch_inf_log(q, ctx)

    @lru_cache(maxsize=None)
    def val(k: int) -> float:
        z = q ** (k + p + 1)
        if z <= FORM_SWITCH:
            body = phi_rs((a,), (q**a1,), z, ctx)
            return (pref * LogReal.of(body.value)).float()
        r = phi11_reg_log(a, q**a1, z, ctx)
        return (r.value / qinf).float()

    return val


@lru_cache(maxsize=None)
def monomial_lattice(spec: MeasureSpec, m: int):
    """k -> (c q^k)^m."""

    def val(k: int) -> float:
        return (spec.c * spec.q**k) ** m

    return val


# ---------------------------------------------------------------------------
# closed-form norms

def l_functional_const_log(spec: MeasureSpec) -> LogReal:
    """L(1) = (q, -c q^{alpha+1}, -q^{-alpha}/c; q)_inf
              / ((q^{alpha+1}, -c, -q/c; q)_inf)."""
    q, c, al = spec.q, spec.c, spec.alpha
    num = qpoch_multi_log((q, -c * q ** (al + 1.0), -(q ** (-al)) / c), spec.ctx)
    den = qpoch_multi_log((q ** (al + 1.0), -c, -q / c), spec.ctx)
    return num / den


def laguerre_norm_log(spec: MeasureSpec, n: int) -> LogReal:
    """L(L_n^2) = q^{-n} (q^{alpha+1}; q)_n / (q; q)_n * L(1)."""
    q = spec.q
    ratio = qpoch_finite_log(q ** (spec.alpha + 1.0), n, spec.ctx) / qpoch_finite_log(
        q, n, spec.ctx
    )
    shift = LogReal.from_log(1, -n * spec.ctx.log_q)
    return ratio * shift * l_functional_const_log(spec)


def m_norm_log(spec: MeasureSpec, p: int) -> LogReal:
    """L(M_p^2) in closed form.

    c q^alpha q^{-p} * (-q^{p+1}/c; q)_inf (-q^{-alpha}/c; q)_inf
      / ((-q^{p+1-alpha}/c; q)_inf (-c q^{alpha+1}; q)_inf (-c; q)_inf (-q/c; q)_inf)
    """
    q, c, al = spec.q, spec.c, spec.alpha
    ctx = spec.ctx
    pref = LogReal.of(c) * LogReal.from_log(1, (al - p) * ctx.log_q)
    num = qpoch_multi_log((-(q ** (p + 1)) / c, -(q ** (-al)) / c), ctx)
    den = qpoch_multi_log(
        (-(q ** (p + 1 - al)) / c, -c * q ** (al + 1.0), -c, -q / c), ctx
    )
    return pref * num / den


# ---------------------------------------------------------------------------
# gram matrices

def laguerre_gram(
    spec: MeasureSpec,
    n_max: int = 8,
    *,
    rtol: float = 1e-9,
    atol_scale: float = 1e-10,
) -> list[VerificationReport]:
    """L(L_n L_p) against delta_{n,p} q^{-p} (q^{alpha+1};q)_p/(q;q)_p L(1)."""
    reports = []
    norms = [laguerre_norm_log(spec, n).float() for n in range(n_max + 1)]
    for n in range(n_max + 1):
        fn = laguerre_lattice(spec, n)
        for p in range(n, n_max + 1):
            sv, window, canc = _functional_sum(
                spec, fn, laguerre_lattice(spec, p), what=f"L(L_{n} L_{p})"
            )
            predicted = norms[n] if n == p else 0.0
            scale = math.sqrt(norms[n] * norms[p])
            reports.append(
                make_report(
                    f"laguerre_gram[n={n},p={p}]",
                    {"n": n, "p": p},
                    sv.value,
                    predicted,
                    rtol=rtol,
                    atol=atol_scale * scale,
                    window=window,
                    cancellation=canc,
                )
            )
    return reports


def m_gram(
    spec: MeasureSpec,
    p_lo: int = -4,
    p_hi: int = 4,
    *,
    rtol: float = 1e-9,
    atol_scale: float = 1e-10,
) -> list[VerificationReport]:
    """L(M_p M_r) against its diagonal closed form."""
    reports = []
    norms = {p: m_norm_log(spec, p).float() for p in range(p_lo, p_hi + 1)}
    for p in range(p_lo, p_hi + 1):
        fp = m_lattice(spec, p)
        for r in range(p, p_hi + 1):
            sv, window, canc = _functional_sum(
                spec, fp, m_lattice(spec, r), what=f"L(M_{p} M_{r})"
            )
            predicted = norms[p] if p == r else 0.0
            scale = math.sqrt(norms[p] * norms[r])
            reports.append(
                make_report(
                    f"m_gram[p={p},r={r}]",
                    {"p": p, "r": r},
                    sv.value,
                    predicted,
                    rtol=rtol,
                    atol=atol_scale * scale,
                    window=window,
                    cancellation=canc,
                )
            )
    return reports


def cross_gram(
    spec: MeasureSpec,
    n_max: int = 8,
    p_lo: int = -4,
    p_hi: int = 4,
    *,
    atol_scale: float = 1e-10,
) -> list[VerificationReport]:
    """L(L_n M_p) = 0: the two families are mutually orthogonal."""
    reports = []
    for p in range(p_lo, p_hi + 1):
        fp = m_lattice(spec, p)
        m_diag = m_norm_log(spec, p).float()
        for n in range(n_max + 1):
            sv, window, canc = _functional_sum(
                spec, laguerre_lattice(spec, n), fp, what=f"L(L_{n} M_{p})"
            )
            scale = math.sqrt(laguerre_norm_log(spec, n).float() * m_diag)
            reports.append(
                make_report(
                    f"cross_gram[n={n},p={p}]",
                    {"n": n, "p": p},
                    sv.value,
                    0.0,
                    rtol=0.0,
                    atol=atol_scale * scale,
                    window=window,
                    cancellation=canc,
                )
            )
    return reports


def monomial_orthogonality(
    spec: MeasureSpec,
    r_lo: int = -2,
    r_hi: int = 2,
    m_max: int = 5,
    *,
    atol_scale: float = 1e-10,
) -> list[VerificationReport]:
    """L(M_r x^m) = 0 for every monomial power m >= 0."""
    reports = []
    moments = {}
    for m in range(m_max + 1):
        sv = functional_L(spec, monomial_lattice(spec, 2 * m))
        moments[m] = sv.value
    for r in range(r_lo, r_hi + 1):
        fr = m_lattice(spec, r)
        m_diag = m_norm_log(spec, r).float()
        for m in range(m_max + 1):
            sv, window, canc = _functional_sum(
                spec, fr, monomial_lattice(spec, m), what=f"L(M_{r} x^{m})"
            )
            scale = math.sqrt(m_diag * abs(moments[m]))
            reports.append(
                make_report(
                    f"monomial_orth[r={r},m={m}]",
                    {"r": r, "m": m},
                    sv.value,
                    0.0,
                    rtol=0.0,
                    atol=atol_scale * scale,
                    window=window,
                    cancellation=canc,
                )
            )
    return reports


# ---------------------------------------------------------------------------
# Hankel-type double identity for the companion family

@lru_cache(maxsize=None)
def _member2_lattice(spec: MeasureSpec, p: int):
    # independent representation of m_hat: series in q^{alpha+1} with the
    # lattice point moved into the parameters
    ctx = spec.ctx
    q = ctx.q
    a1 = spec.alpha + 1.0
    qinf = qpoch_inf_log(q, ctx)

    @lru_cache(maxsize=None)
    def val(k: int) -> float:
        r = phi11_reg_log(-spec.c * q**k, q ** (k + p + 1), q**a1, ctx)
        return (r.value / qinf).float()

    return val


def hankel_identity(
    spec: MeasureSpec,
    p: int,
    r: int,
    *,
    rtol: float = 1e-9,
    atol_scale: float = 1e-10,
) -> list[VerificationReport]:
    """Double representation of the companion-family gram entry.

    member1 sums weight * m_hat_p * m_hat_r with m_hat evaluated by its
    defining series; member2 replaces both factors by the re-expanded
    representation; both must hit the same closed form (the m_gram norm
    scaled by (-c q^{alpha+1}; q)_inf^2).
    """
    ctx = spec.ctx
    scale_poch = qpoch_inf_log(-spec.c * spec.q ** (spec.alpha + 1.0), ctx)
    closed = 0.0
    if p == r:
        closed = (m_norm_log(spec, p) * scale_poch * scale_poch).float()
    diag_p = (m_norm_log(spec, p) * scale_poch * scale_poch).float()
    diag_r = (m_norm_log(spec, r) * scale_poch * scale_poch).float()
    scale = math.sqrt(abs(diag_p) * abs(diag_r))

    sv1, w1, c1 = _functional_sum(
        spec, m_hat_lattice(spec, p), m_hat_lattice(spec, r),
        what=f"hankel m1[{p},{r}]",
    )
    sv2, w2, c2 = _functional_sum(
        spec, _member2_lattice(spec, p), _member2_lattice(spec, r),
        what=f"hankel m2[{p},{r}]",
    )
    params = {"p": p, "r": r}
    return [
        make_report(
            f"hankel_m1_vs_closed[p={p},r={r}]", params, sv1.value, closed,
            rtol=rtol, atol=atol_scale * scale, window=w1, cancellation=c1,
        ),
        make_report(
            f"hankel_m2_vs_closed[p={p},r={r}]", params, sv2.value, closed,
            rtol=rtol, atol=atol_scale * scale, window=w2, cancellation=c2,
        ),
        make_report(
            f"hankel_m1_vs_m2[p={p},r={r}]", params, sv1.value, sv2.value,
            rtol=rtol, atol=atol_scale * scale, window=w1, cancellation=max(c1, c2),
        ),
    ]


# ---------------------------------------------------------------------------
# dual orthogonality: eigenvector rows against the spectral measure

def _dual_opspec(spec: MeasureSpec) -> operator.OperatorSpec:
    # spectral parameter tied to the measure by t^{-2} = q^alpha
    return operator.OperatorSpec(
        spec.c, spec.q ** (-spec.alpha / 2.0), spec.ctx
    )


def dual_orthogonality(
    spec: MeasureSpec,
    k: int,
    l: int,
    *,
    rtol: float = 1e-7,
    atol: float = 1e-7,
) -> VerificationReport:
    """sum over the spectrum of V_k V_l / ||V||^2 = delta_{k,l}.

    The sum runs over both spectral families; each is extended adaptively.
    """
    osp = _dual_opspec(spec)
    ctx = spec.ctx
    q = ctx.q
    s2 = 1.0 / osp.t

    def eta_term(p: int) -> LogReal:
        x = -osp.sqrt_c * q**p / osp.t
        vk = operator.v_sol_log(osp, s2, k, x)
        vl = operator.v_sol_log(osp, s2, l, x)
        return vk * vl / operator.eta_norm_log(osp, p)

    def xi_term(p: int) -> LogReal:
        x = osp.t * q**p / osp.sqrt_c
        vk = operator.v_sol_log(osp, s2, k, x)
        vl = operator.v_sol_log(osp, s2, l, x)
        return vk * vl / operator.xi_norm_log(osp, p)

    acc_eta, w_eta = _lattice_sum_log(
        eta_term, ctx, lo0=0, hi0=10, extend_lo=False, what=f"dual eta[{k},{l}]"
    )
    acc_xi, w_xi = _lattice_sum_log(xi_term, ctx, what=f"dual xi[{k},{l}]")
    computed = acc_eta.total_float() + acc_xi.total_float()
    return make_report(
        f"dual[k={k},l={l}]",
        {"k": k, "l": l},
        computed,
        1.0 if k == l else 0.0,
        rtol=rtol,
        atol=atol,
        window=(min(w_eta[0], w_xi[0]), max(w_eta[1], w_xi[1])),
        cancellation=max(acc_eta.cancellation, acc_xi.cancellation),
    )


def dual_orthogonality_matrix(
    spec: MeasureSpec,
    k_lo: int = -4,
    k_hi: int = 4,
    *,
    rtol: float = 1e-7,
    atol: float = 1e-7,
    p_eta: int = 70,
    p_xi_lo: int = -40,
    p_xi_hi: int = 70,
) -> list[VerificationReport]:
    """Whole dual gram block at once, sharing eigenvector columns.

    Fixed spectral windows wide enough that the neglected tails sit far
    below the comparison tolerance (the per-entry adaptive version is
    dual_orthogonality; this one is for the k-range sweeps where
    recomputing columns per entry would be wasteful).
    """
    osp = _dual_opspec(spec)
    q = spec.ctx.q
    s2 = 1.0 / osp.t
    ks = list(range(k_lo, k_hi + 1))

    columns: list[list[float]] = []

    def add_column(x: float, norm_log: LogReal) -> float:
        inv = norm_log.sqrt()
        col = [(operator.v_sol_log(osp, s2, kk, x) / inv).float() for kk in ks]
        columns.append(col)
        return max(abs(v) for v in col)

    small = 0
    for p in range(0, p_eta + 1):
        top = add_column(-osp.sqrt_c * q**p / osp.t, operator.eta_norm_log(osp, p))
        small = small + 1 if top < 1e-12 else 0
        if small >= 5:
            break
    small = 0
    for p in range(0, p_xi_hi + 1):
        top = add_column(osp.t * q**p / osp.sqrt_c, operator.xi_norm_log(osp, p))
        small = small + 1 if top < 1e-12 else 0
        if small >= 5:
            break
    small = 0
    for p in range(-1, p_xi_lo - 1, -1):
        top = add_column(osp.t * q**p / osp.sqrt_c, operator.xi_norm_log(osp, p))
        small = small + 1 if top < 1e-12 else 0
        if small >= 5:
            break

    reports = []
    for i, k in enumerate(ks):
        for j in range(i, len(ks)):
            l = ks[j]
            entry = math.fsum(col[i] * col[j] for col in columns)
            reports.append(
                make_report(
                    f"dual[k={k},l={l}]",
                    {"k": k, "l": l},
                    entry,
                    1.0 if k == l else 0.0,
                    rtol=rtol,
                    atol=atol,
                    window=(p_xi_lo, max(p_eta, p_xi_hi)),
                    cancellation=math.fsum(abs(col[i] * col[j]) for col in columns)
                    / max(abs(entry), 1e-300),
                )
            )
    return reports


# ---------------------------------------------------------------------------
# Christoffel-Darboux kernel and its hard limit

def _cd_coeff_ratio(spec: MeasureSpec, p: int) -> float:
    # coef_{p+1}/coef_p for coef_p = q^p (q;q)_p / (q^{alpha+1};q)_p
    q = spec.q
    return q * (1.0 - q ** (p + 1)) / (1.0 - q ** (spec.alpha + 1.0 + p))


def cd_kernel(spec: MeasureSpec, n_order: int, x: float, y: float) -> tuple[float, float, float]:
    """(partial sum, closed kernel form, cancellation of the partial sum).

    partial = sum_{p=0}^{N} q^p (q;q)_p/(q^{alpha+1};q)_p L_p(x) L_p(y)
    closed  = (q;q)_N/(q^{alpha+1};q)_N
              * (x L_N^{(a+1)}(x) L_N^{(a)}(y) - y L_N^{(a+1)}(y) L_N^{(a)}(x))
                / (x - y)
    with the diagonal handled by a symmetric difference quotient plus one
    Richardson step.
    """
    ctx = spec.ctx
    al = spec.alpha
    coef = 1.0
    acc = ScaledSum()
    for p in range(n_order + 1):
        acc.add(
            LogReal.of(
                coef * q_laguerre(p, al, x, ctx) * q_laguerre(p, al, y, ctx)
            )
        )
        coef *= _cd_coeff_ratio(spec, p)
    partial = acc.total_float()

    pref = qpoch_finite(spec.q, n_order, ctx) / qpoch_finite(
        spec.q ** (al + 1.0), n_order, ctx
    )

    def num(u: float, v: float) -> float:
        return (
            u * q_laguerre(n_order, al + 1.0, u, ctx) * q_laguerre(n_order, al, v, ctx)
            - v * q_laguerre(n_order, al + 1.0, v, ctx) * q_laguerre(n_order, al, u, ctx)
        )

    if x != y:
        closed = pref * num(x, y) / (x - y)
    else:
        h = 1e-4 * max(abs(x), spec.q**10)

        def f(step: float) -> float:
            return num(x + step, x - step) / (2.0 * step)

        closed = pref * (4.0 * f(h / 2.0) - f(h)) / 3.0
    return partial, closed, acc.cancellation


def cd_kernel_check(
    spec: MeasureSpec,
    n_order: int,
    x: float,
    y: float,
    *,
    rtol: float = 1e-10,
    atol: float = 0.0,
) -> VerificationReport:
    partial, closed, canc = cd_kernel(spec, n_order, x, y)
    return make_report(
        f"cd_kernel[N={n_order},x={x!r},y={y!r}]",
        {"N": n_order, "x": x, "y": y},
        partial,
        closed,
        rtol=rtol,
        atol=atol,
        window=(0, n_order),
        cancellation=canc,
    )


def bessel_cd_limit(spec: MeasureSpec, x: float, y: float) -> float:
    """Large-order limit of the kernel in terms of the q-Bessel function.

    (q;q)_inf/(q^{alpha+1};q)_inf * (xy)^{-alpha/2}
      * (sqrt(x) J_{a+1}(2 sqrt(x)) J_a(2 sqrt(y))
         - sqrt(y) J_{a+1}(2 sqrt(y)) J_a(2 sqrt(x))) / (x - y)
    """
    if not (x > 0.0 and y > 0.0):
        raise ValueError("kernel limit needs x, y > 0")
    ctx = spec.ctx
    al = spec.alpha
    pref = (
        qpoch_inf_log(spec.q, ctx) / qpoch_inf_log(spec.q ** (al + 1.0), ctx)
    ).float() * (x * y) ** (-al / 2.0)

    def num(u: float, v: float) -> float:
        ju1 = jackson_j2(al + 1.0, 2.0 * math.sqrt(u), ctx)
        jv1 = jackson_j2(al + 1.0, 2.0 * math.sqrt(v), ctx)
        ju = jackson_j2(al, 2.0 * math.sqrt(u), ctx)
        jv = jackson_j2(al, 2.0 * math.sqrt(v), ctx)
        return math.sqrt(u) * ju1 * jv - math.sqrt(v) * jv1 * ju

    if x != y:
        return pref * num(x, y) / (x - y)
    h = 1e-4 * x

    def f(step: float) -> float:
        return num(x + step, x - step) / (2.0 * step)

    return pref * (4.0 * f(h / 2.0) - f(h)) / 3.0


def cd_limit_check(
    spec: MeasureSpec,
    n_order: int = 60,
    x: float | None = None,
    y: float | None = None,
    *,
    rtol: float = 1e-6,
    atol: float = 1e-6,
) -> VerificationReport:
    q = spec.q
    if x is None:
        x = spec.c * q**2
    if y is None:
        y = spec.c * q**3
    _, closed, canc = cd_kernel(spec, n_order, x, y)
    limit = bessel_cd_limit(spec, x, y)
    return make_report(
        f"cd_limit[N={n_order},x={x!r},y={y!r}]",
        {"N": n_order, "x": x, "y": y},
        closed,
        limit,
        rtol=rtol,
        atol=atol,
        window=(0, n_order),
        cancellation=canc,
    )


# ---------------------------------------------------------------------------
# orthogonality of the Bessel-type rows (spectral expansion on the lattice)

def jackson_bessel_orthogonality(
    spec: MeasureSpec,
    k: int,
    l: int,
    *,
    rtol: float = 1e-7,
    atol_scale: float = 1e-7,
) -> VerificationReport:
    """Row orthogonality mixing a kernel-limit part and a bilateral sum.

    bessel_part + q^{alpha((k+l)/2 - 1)} *
        sum_p q^p (-q^{p+1-alpha}/c;q)_inf/(-q^{p+1}/c;q)_inf m_hat_p(k) m_hat_p(l)
      = delta_{k,l} c q^{-k} (-c q^k;q)_inf
          (-c q^{alpha+1}, -q^{-alpha}/c;q)_inf / ((-c, -q/c;q)_inf)
    """
    ctx = spec.ctx
    q, c, al = spec.q, spec.c, spec.alpha

    def closed_diag(kk: int) -> float:
        num = qpoch_multi_log(
            (-c * q**kk, -c * q ** (al + 1.0), -(q ** (-al)) / c), ctx
        )
        den = qpoch_multi_log((-c, -q / c), ctx)
        return (
            LogReal.of(c) * LogReal.from_log(1, -kk * ctx.log_q) * num / den
        ).float()

    predicted = closed_diag(k) if k == l else 0.0
    scale = math.sqrt(closed_diag(k) * closed_diag(l))

    bessel_part = (
        c
        * q ** (al * (k + l) / 2.0)
        * (qpoch_inf_log(q ** (al + 1.0), ctx) / qpoch_inf_log(q, ctx)).float()
        * bessel_cd_limit(spec, c * q**k, c * q**l)
    )

    def term(p: int) -> LogReal:
        # family index is p here, the lattice sites k, l are fixed
        mh = m_hat_lattice(spec, p)
        ratio = qpoch_inf_log(-(q ** (p + 1 - al)) / c, ctx) / qpoch_inf_log(
            -(q ** (p + 1)) / c, ctx
        )
        return (
            LogReal.from_log(1, p * ctx.log_q)
            * ratio
            * LogReal.of(mh(k))
            * LogReal.of(mh(l))
        )

    acc, window = _lattice_sum_log(term, ctx, what=f"bessel dual[{k},{l}]")
    psum = q ** (al * ((k + l) / 2.0 - 1.0)) * acc.total_float()
    return make_report(
        f"bessel_orth[k={k},l={l}]",
        {"k": k, "l": l},
        bessel_part + psum,
        predicted,
        rtol=rtol,
        atol=atol_scale * scale,
        window=window,
        cancellation=acc.cancellation,
    )


# ---------------------------------------------------------------------------
# moment-indeterminacy witness: perturbed measures with identical grams

def berg_admissible_p(spec: MeasureSpec) -> int:
    """Smallest p >= 0 with |q^{p-alpha}/c| < 1 (perturbation index range)."""
    p = max(0, math.ceil(spec.alpha + math.log(spec.c) / spec.ctx.log_q))
    while not spec.q ** (p - spec.alpha) / spec.c < 1.0:
        p += 1
    return p


def berg_perturbed_gram(
    spec: MeasureSpec,
    s: float,
    p: int | None = None,
    n_max: int = 3,
    *,
    rtol: float = 1e-9,
    atol_scale: float = 1e-10,
    window: int = 60,
) -> list[VerificationReport]:
    """Gram of the polynomials under the mass perturbation
    w(k) * (1 + s M_p(c q^k) / K), |s| <= 1.

    K normalizes the perturbation so the factor stays in [0, 2]; every
    mass must remain nonnegative (NegativeWeight otherwise), and the gram
    must be unchanged: the perturbing function has all moments zero.
    """
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"perturbation size must lie in [-1, 1], got {s}")
    if p is None:
        p = berg_admissible_p(spec)
    if not spec.q ** (p - spec.alpha) / spec.c < 1.0:
        raise ValueError(f"perturbation index p={p} is outside the admissible range")
    mp = m_lattice(spec, p)
    big_k = 1.05 * max(abs(mp(k)) for k in range(-window, window + 1))
    # |M_p| keeps growing toward k -> -inf, so big_k is a window bound,
    # not a global one; every mass the sums below actually touch is
    # checked at evaluation time and a negative one aborts the run
    min_factor = min(1.0 + s * mp(k) / big_k for k in range(-window, window + 1))

    def factor_log(k: int) -> LogReal:
        f = 1.0 + s * mp(k) / big_k
        if f < 0.0:
            raise NegativeWeight(
                f"perturbed mass negative at k={k}: factor {f!r} (s={s}, p={p})"
            )
        return LogReal.of(f)

    reports = []
    norms = [laguerre_norm_log(spec, n).float() for n in range(n_max + 1)]
    for n in range(n_max + 1):
        fn = laguerre_lattice(spec, n)
        for m in range(n, n_max + 1):
            sv, win, canc = _functional_sum(
                spec, fn, laguerre_lattice(spec, m),
                extra_log=factor_log, what=f"berg gram[{n},{m}]",
            )
            predicted = norms[n] if n == m else 0.0
            scale = math.sqrt(norms[n] * norms[m])
            reports.append(
                make_report(
                    f"berg_gram[s={s},n={n},m={m}]",
                    {"s": s, "p": p, "n": n, "m": m},
                    sv.value,
                    predicted,
                    rtol=rtol,
                    atol=atol_scale * scale,
                    window=win,
                    cancellation=canc,
                )
            )
    reports.append(
        make_report(
            f"berg_nonneg[s={s}]",
            {"s": s, "p": p, "min_factor": min_factor},
            1.0 if min_factor >= 0.0 else 0.0,
            1.0,
            rtol=0.0,
            atol=0.0,
        )
    )
    return reports


# ---------------------------------------------------------------------------
# generating-function identities for the regularized series

def genfun_i(
    a: float,
    b: float,
    z: float,
    x: float,
    ctx: QContext,
    *,
    rtol: float = 1e-10,
    atol: float = 0.0,
) -> VerificationReport:
    """Bilateral generating function, first kind.

    sum_p (z b)^p / (a q^p / b; q)_inf * phi11_reg(a q^p / b, q^{p+1}, b x)
      = (q, a z, x/z; q)_inf / ((a/b; q)_inf (b z; q)_inf),   0 < |z| < 1/|b|.
    """
    q = ctx.q
    if not (0.0 < abs(z) and abs(b) * abs(z) < 1.0):
        raise DivergentSeries(f"need 0 < |z| < 1/|b|, got z={z}, b={b}")
    lzb = LogReal.of(z * b)

    def term(p: int) -> LogReal:
        den = qpoch_inf_log(a * q**p / b, ctx)
        if den.sign == 0:
            raise PoleInLowerParameter(
                f"(a q^p / b; q)_inf vanishes at p={p} (a={a}, b={b})"
            )
        body = phi11_reg_log(a * q**p / b, q ** (p + 1), b * x, ctx)
        return lzb.pow_int(p) * body.value / den

    acc, window = _lattice_sum_log(term, ctx, what="genfun_i")
    rhs = (
        qpoch_multi_log((q, a * z, x / z), ctx)
        / (qpoch_inf_log(a / b, ctx) * qpoch_inf_log(b * z, ctx))
    ).float()
    return make_report(
        "genfun_i",
        {"a": a, "b": b, "z": z, "x": x},
        acc.total_float(),
        rhs,
        rtol=rtol,
        atol=atol,
        window=window,
        cancellation=acc.cancellation,
    )


def genfun_ii(
    d: float,
    w: float,
    y: float,
    ctx: QContext,
    *,
    rtol: float = 1e-10,
    atol: float = 0.0,
) -> VerificationReport:
    """Bilateral generating function, second kind.

    sum_r w^r * phi11_reg(d q^{r+1} / y, q^{r+1}, y)
      = (d, q, y/w; q)_inf / ((w; q)_inf (d/w; q)_inf),   |d| < |w| < 1.

    y = 0 is allowed only together with d = 0, where the summand
    degenerates to w^r (q^{r+1}; q)_inf.
    """
    q = ctx.q
    if not abs(d) < abs(w) < 1.0:
        raise DivergentSeries(f"need |d| < |w| < 1, got d={d}, w={w}")
    if y == 0.0 and d != 0.0:
        raise ValueError("y = 0 needs d = 0 (the summand has no finite limit)")
    lw = LogReal.of(w)

    def term(r: int) -> LogReal:
        if y == 0.0:
            body = qpoch_inf_log(q ** (r + 1), ctx)
        else:
            body = phi11_reg_log(d * q ** (r + 1) / y, q ** (r + 1), y, ctx).value
        return lw.pow_int(r) * body

    acc, window = _lattice_sum_log(term, ctx, what="genfun_ii")
    rhs = (
        qpoch_multi_log((d, q, y / w), ctx)
        / (qpoch_inf_log(w, ctx) * qpoch_inf_log(d / w, ctx))
    ).float()
    return make_report(
        "genfun_ii",
        {"d": d, "w": w, "y": y},
        acc.total_float(),
        rhs,
        rtol=rtol,
        atol=atol,
        window=window,
        cancellation=acc.cancellation,
    )


def phi_product_orthogonality(
    a: float,
    b: float,
    d: float,
    y: float,
    l: int,
    ctx: QContext,
    *,
    rtol: float = 1e-9,
    atol: float = 0.0,
) -> VerificationReport:
    """Biorthogonality of two regularized-series families.

    sum_k y^k / (a q^k / b; q)_inf
          * phi11_reg(a q^k / b, q^{k+1}, y)
          * phi11_reg(d q^{k-l+1} / y, q^{k-l+1}, y)
      = 0                                            (l < 0)
      = prod_{j<l}(d - a y q^j / b)
          * (d; q)_inf (q; q)_inf^2 / ((q; q)_l (a/b; q)_inf)   (l >= 0)

    valid for |y| < 1 and every d (the sum converges regardless; the
    right side continues analytically in d).
    """
    q = ctx.q
    if not abs(y) < 1.0:
        raise DivergentSeries(f"need |y| < 1, got y={y}")
    ly = LogReal.of(y)

    def term(k: int) -> LogReal:
        den = qpoch_inf_log(a * q**k / b, ctx)
        if den.sign == 0:
            raise PoleInLowerParameter(
                f"(a q^k / b; q)_inf vanishes at k={k} (a={a}, b={b})"
            )
        f1 = phi11_reg_log(a * q**k / b, q ** (k + 1), y, ctx)
        f2 = phi11_reg_log(d * q ** (k - l + 1) / y, q ** (k - l + 1), y, ctx)
        return ly.pow_int(k) * f1.value * f2.value / den

    acc, window = _lattice_sum_log(term, ctx, what="phi_product_orth")
    if l < 0:
        rhs = 0.0
        # scale for the zero target: the closed form at l = 0
        scale_ref = abs(
            (
                qpoch_inf_log(d, ctx)
                * qpoch_inf_log(q, ctx)
                * qpoch_inf_log(q, ctx)
                / qpoch_inf_log(a / b, ctx)
            ).float()
        )
        atol_eff = max(atol, 1e-9 * max(scale_ref, math.exp(min(acc.abs_total_log(), 700.0))))
    else:
        fin = LogReal.of(1.0)
        for j in range(l):
            fin = fin * LogReal.of(d - a * y * q**j / b)
        rhs = (
            fin
            * qpoch_inf_log(d, ctx)
            * qpoch_inf_log(q, ctx)
            * qpoch_inf_log(q, ctx)
            / (qpoch_finite_log(q, l, ctx) * qpoch_inf_log(a / b, ctx))
        ).float()
        atol_eff = atol
    return make_report(
        f"phi_product_orth[l={l}]",
        {"a": a, "b": b, "d": d, "y": y, "l": l},
        acc.total_float(),
        rhs,
        rtol=rtol,
        atol=atol_eff,
        window=window,
        cancellation=acc.cancellation,
    )
