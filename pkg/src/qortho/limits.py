"""Big q-Jacobi orthogonality and its rigorous large-degree limit.

The chain verified here: q-integral orthogonality of the big q-Jacobi
polynomials -> re-parametrized finite-r orthogonality on a mixed lattice
-> (r to infinity, with pointwise limits and dominating bounds) the big
q-Bessel orthogonality, which is the same statement as the kernel-limit
row orthogonality of the measure module in different variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .context import QContext, LogReal, ScaledSum
from .errors import WeightPole
from .families import (
    BigJacobiParams,
    big_qbessel,
    big_qjacobi,
    big_qjacobi_tilde,
    MeasureSpec,
)
from .qseries import (
    phi_rs,
    qpoch_finite_log,
    qpoch_inf_log,
    qpoch_multi_log,
)
from .orthogonality import (
    VerificationReport,
    _lattice_sum_log,
    make_report,
)


@dataclass(frozen=True)
class LimitStudyConfig:
    """Parameters of one (k, l) limit study.

    r_values must be ascending and every r must dominate max(k, l):
    the polynomial degree r - k may not go negative.
    """

    alpha: float
    c: float
    k: int
    l: int
    ctx: QContext
    r_values: tuple[int, ...] = (10, 20, 30, 40)
    sample_points: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not self.alpha > -1.0:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if not self.c > 0.0:
            raise ValueError(f"c must be positive, got {self.c}")
        if list(self.r_values) != sorted(self.r_values):
            raise ValueError("r_values must be ascending")
        if self.r_values and self.r_values[0] < max(self.k, self.l):
            raise ValueError("every r must be >= max(k, l)")

    def points(self) -> tuple[float, ...]:
        if self.sample_points is not None:
            return self.sample_points
        q = self.ctx.q
        return (1.0, q, q * q)


# ---------------------------------------------------------------------------
# q-integral orthogonality of the polynomial family
#
# The diagonal of this gram decays like (a c q^2)^k q^{k(k-1)/2} while the
# terminating series behind each polynomial value holds internal terms many
# orders of magnitude larger, so double precision tops out near 1e-8 for
# degree six. The gram is therefore evaluated in fixed 30-digit arithmetic;
# the lattice data (weights, polynomial columns) is cached per parameter set.

_MP_DPS = 30
_mp_lattice_cache: dict = {}


class _MpBqjLattice:
    """All q-integral lattice data for one (a, b, c, q), in mpf arithmetic."""

    def __init__(self, params: BigJacobiParams, ctx: QContext):
        import mpmath as mp

        self._mp = mp
        old = mp.mp.dps
        mp.mp.dps = _MP_DPS
        try:
            qq = mp.mpf(repr(ctx.q))
            aa = mp.mpf(repr(params.a))
            bb = mp.mpf(repr(params.b))
            cc = mp.mpf(repr(params.c))
            self.qq, self.aa, self.bb, self.cc = qq, aa, bb, cc
            n_pts = int(math.ceil((_MP_DPS + 8) * math.log(10) / -math.log(ctx.q))) + 4
            self.xs = [aa * qq ** (n + 1) for n in range(n_pts)]
            self.xs += [-cc * qq ** (n + 1) for n in range(n_pts)]
            # fold every x-independent factor of the q-integral into the mass
            self.mass = [
                (1 - qq) * aa * qq * qq**n * self._weight(self.xs[n])
                for n in range(n_pts)
            ] + [
                (1 - qq) * cc * qq * qq**n * self._weight(self.xs[n_pts + n])
                for n in range(n_pts)
            ]
            self._cols: dict[int, list] = {}
        finally:
            mp.mp.dps = old

    def _poch_inf(self, x):
        tot = self._mp.mpf(1)
        p = x
        floor = self._mp.mpf(10) ** (-(_MP_DPS + 10))
        while abs(p) > floor:
            f = 1 - p
            if f == 0:
                raise WeightPole(f"infinite product hits a zero factor at {x}")
            tot *= f
            p *= self.qq
        return tot

    def _weight(self, x):
        return (
            self._poch_inf(x / self.aa)
            * self._poch_inf(-x / self.cc)
            / self._poch_inf(x)
            / self._poch_inf(-self.bb * x / self.cc)
        )

    def _col(self, k: int) -> list:
        if k not in self._cols:
            mp = self._mp
            old = mp.mp.dps
            mp.mp.dps = _MP_DPS
            try:
                qq, aa, bb, cc = self.qq, self.aa, self.bb, self.cc
                vals = []
                for x in self.xs:
                    tot = mp.mpf(1)
                    term = mp.mpf(1)
                    for j in range(k):
                        term *= (
                            (1 - qq ** (j - k))
                            * (1 - aa * bb * qq ** (k + 1 + j))
                            * (1 - x * qq**j)
                            * qq
                            / (1 - aa * qq ** (j + 1))
                            / (1 + cc * qq ** (j + 1))
                            / (1 - qq ** (j + 1))
                        )
                        tot += term
                    vals.append(tot)
                self._cols[k] = vals
            finally:
                mp.mp.dps = old
        return self._cols[k]

    def gram(self, k: int, l: int) -> float:
        mp = self._mp
        old = mp.mp.dps
        mp.mp.dps = _MP_DPS
        try:
            pk, pl = self._col(k), self._col(l)
            return float(mp.fsum(m * u * v for m, u, v in zip(self.mass, pk, pl)))
        finally:
            mp.mp.dps = old

    def norm(self, k: int) -> float:
        mp = self._mp
        old = mp.mp.dps
        mp.mp.dps = _MP_DPS
        try:
            qq, aa, bb, cc = self.qq, self.aa, self.bb, self.cc
            m_const = (
                (1 - qq)
                * aa
                * qq
                * self._poch_inf(qq)
                * self._poch_inf(-cc / aa)
                * self._poch_inf(-aa * qq / cc)
                * self._poch_inf(aa * bb * qq * qq)
                / self._poch_inf(aa * qq)
                / self._poch_inf(bb * qq)
                / self._poch_inf(-cc * qq)
                / self._poch_inf(-aa * bb * qq / cc)
            )
            deg = (1 - aa * bb * qq) / (1 - aa * bb * qq ** (2 * k + 1))
            for j in range(k):
                deg *= (
                    (1 - qq ** (j + 1))
                    * (1 - bb * qq ** (j + 1))
                    * (1 + aa * bb * qq ** (j + 1) / cc)
                    / (1 - aa * bb * qq ** (j + 1))
                    / (1 - aa * qq ** (j + 1))
                    / (1 + cc * qq ** (j + 1))
                )
            deg *= (aa * cc * qq * qq) ** k * qq ** (k * (k - 1) // 2)
            return float(m_const * deg)
        finally:
            mp.mp.dps = old


def _mp_lattice(params: BigJacobiParams, ctx: QContext) -> _MpBqjLattice:
    key = (repr(params.a), repr(params.b), repr(params.c), repr(ctx.q))
    if key not in _mp_lattice_cache:
        _mp_lattice_cache[key] = _MpBqjLattice(params, ctx)
    return _mp_lattice_cache[key]


def bqj_norm(params: BigJacobiParams, k: int, ctx: QContext) -> float:
    """Closed-form diagonal value of the q-integral gram.

    The degree-dependent factor carries (a c q^2)^k; the commonly cited
    (-ac)^k variant is wrong, which the cross-check below would flag
    immediately.
    """
    return _mp_lattice(params, ctx).norm(k)


def bqj_orthogonality(
    params: BigJacobiParams,
    k: int,
    l: int,
    ctx: QContext,
    *,
    rtol: float = 1e-9,
    atol_scale: float = 1e-10,
) -> VerificationReport:
    """q-integral of P_k P_l against the measure weight vs. closed form."""
    params.validate(ctx)
    lat = _mp_lattice(params, ctx)
    computed = lat.gram(k, l)
    predicted = lat.norm(k) if k == l else 0.0
    scale = math.sqrt(abs(lat.norm(k) * lat.norm(l)))
    return make_report(
        f"bqj_orth[k={k},l={l},b={params.b!r}]",
        {"a": params.a, "b": params.b, "c": params.c, "k": k, "l": l},
        computed,
        predicted,
        rtol=rtol,
        atol=atol_scale * scale,
        window=(0, len(lat.xs)),
    )


# ---------------------------------------------------------------------------
# the re-parametrized polynomial and its Bessel limit, point by point

def _ptilde_point(
    alpha: float, c: float, r: int, k: int, x: float, ctx: QContext
) -> float:
    """Ptilde_{r-k} of the limit study, evaluated at the scaled point
    q^{alpha+1} x; c sits in the third parameter slot as c q^{-r-1}."""
    q = ctx.q
    a = q**alpha
    c_slot = c * q ** (-r - 1)
    if x == 0.0:
        # argument-zero limit of the 2phi1: only the (aq/y)(-y) product survives
        s = phi_rs((q ** (-(r - k)),), (a * q,), -a * q / c_slot, ctx)
        return s.value
    return big_qjacobi_tilde(r - k, a, c_slot, q ** (alpha + 1.0) * x, ctx)


def _ptilde_lattice(
    alpha: float, c: float, r: int, k: int, p: int, ctx: QContext
) -> float:
    """Ptilde_{r-k} at the negative lattice point -c q^p (p >= -r).

    For p > -k the defining series is well conditioned; at and below -k
    it collapses catastrophically and the re-summed form (a 2phi2 with
    the lattice offset moved into the parameters) is used instead.
    """
    q = ctx.q
    if p > -k:
        return big_qjacobi_tilde(r - k, q**alpha, c * q ** (-r - 1), -c * q**p, ctx)
    s = -k - p  # >= 0
    pref = (
        qpoch_finite_log(q, r - k, ctx)
        * qpoch_finite_log(-c * q**p, s, ctx)
        / qpoch_finite_log(q ** (alpha + 1.0), s, ctx)
        / qpoch_finite_log(q, s, ctx)
        * LogReal.of(-q ** (alpha - p + 1.0) / c).pow_int(s)
    )
    body = phi_rs(
        (q ** (-r - p), -c * q ** (-k)),
        (q ** (alpha + 1.0 + s), q ** (s + 1)),
        -q ** (alpha + s + r + 2.0) / c,
        ctx,
    )
    return (pref * LogReal.of(body.value)).float()


def _ptilde_direct_mp(
    alpha: float, c: float, r: int, k: int, p: int, ctx: QContext
) -> float:
    """The defining series of _ptilde_lattice, summed in 30-digit
    arithmetic. At deep lattice points the value sits many orders of
    magnitude below the series' internal terms, so the double-precision
    evaluation carries no correct digits there and cannot serve as an
    independent witness for the re-summed form."""
    import mpmath as mp

    old = mp.mp.dps
    mp.mp.dps = _MP_DPS
    try:
        qq = mp.mpf(repr(ctx.q))
        aa = qq ** mp.mpf(repr(alpha))
        cs = mp.mpf(repr(c)) * qq ** (-r - 1)
        y = -mp.mpf(repr(c)) * qq**p
        z = -y / cs
        tot = mp.mpf(1)
        term = mp.mpf(1)
        for j in range(r - k):
            term *= (
                (1 - qq ** (j - (r - k)))
                * (1 - (aa * qq / y) * qq**j)
                / (1 - aa * qq ** (j + 1))
                / (1 - qq ** (j + 1))
                * z
            )
            tot += term
        return float(tot)
    finally:
        mp.mp.dps = old


def _bessel_lattice(alpha: float, c: float, k: int, p: int, ctx: QContext) -> float:
    """Big q-Bessel row value at -c q^{p-alpha-1} through the re-summed
    1phi2 form (the companion of _ptilde_lattice, valid for p <= -k)."""
    q = ctx.q
    s = -k - p
    if s < 0:
        raise ValueError(f"re-summed form needs p <= -k, got p={p}, k={k}")
    pref = (
        qpoch_inf_log(q, ctx)
        * qpoch_finite_log(-c * q**p, s, ctx)
        / qpoch_finite_log(q ** (alpha + 1.0), s, ctx)
        / qpoch_finite_log(q, s, ctx)
        * LogReal.of(-q ** (alpha - p + 1.0) / c).pow_int(s)
    )
    body = phi_rs(
        (-c * q ** (-k),),
        (q ** (s + 1), q ** (alpha + 1.0 + s)),
        -q ** (alpha - 2.0 * p - k + 2.0) / c,
        ctx,
    )
    return (pref * LogReal.of(body.value)).float()


def pointwise_bound(alpha: float, c: float, k: int, big_m: float, ctx: QContext) -> float:
    """Majorant dominating both Ptilde_{r-k}(q^{alpha+1}x) for all r >= k
    and the Bessel limit, uniformly over |x| <= big_m (positive terms,
    increasing in big_m)."""
    if big_m <= 0.0:
        raise ValueError("bound needs a positive magnitude cap")
    q = ctx.q
    s = phi_rs(
        (-1.0 / big_m,),
        (q ** (alpha + 1.0),),
        -q ** (alpha + k + 2.0) * big_m / c,
        ctx,
    )
    return s.value


def lattice_bound(alpha: float, c: float, k: int, p: int, ctx: QContext) -> float:
    """Majorant for the lattice values, p <= -k; sharper than the
    pointwise one by a q^{p^2}-type prefactor."""
    q = ctx.q
    s = -k - p
    if s < 0:
        raise ValueError(f"lattice bound needs p <= -k, got p={p}, k={k}")
    pref = (
        qpoch_finite_log(-c * q**p, s, ctx)
        / qpoch_finite_log(q ** (alpha + 1.0), s, ctx)
        / qpoch_finite_log(q, s, ctx)
        * LogReal.of(q ** (alpha - p + 1.0) / c).pow_int(s)
    )
    body = phi_rs(
        (-c * q ** (-k),),
        (q ** (alpha + 1.0), q),
        q ** (alpha + k + 2.0) / c,
        ctx,
    )
    return (pref * LogReal.of(body.value)).float()


def limit_pointwise(
    cfg: LimitStudyConfig, r: int, x: float
) -> tuple[float, float, float]:
    """(polynomial value, Bessel limit value, dominating bound) at x.

    The bound is evaluated at big_m = |x|; for x = 0 the q^10 bound is
    used instead (the majorant is increasing in big_m, so any positive
    cap dominates the x = 0 value)."""
    ptilde = _ptilde_point(cfg.alpha, cfg.c, r, cfg.k, x, cfg.ctx)
    bessel = big_qbessel(cfg.alpha, cfg.k, cfg.c, x, cfg.ctx)
    big_m = abs(x) if x != 0.0 else cfg.ctx.q**10
    bound = pointwise_bound(cfg.alpha, cfg.c, cfg.k, big_m, cfg.ctx)
    return ptilde, bessel, bound


def lattice_values(
    cfg: LimitStudyConfig, r: int, p: int
) -> tuple[float, float, float, float]:
    """Four-way consistency data at the lattice point -c q^p with
    -r <= p <= -k: (re-summed polynomial, directly evaluated polynomial,
    re-summed Bessel value, dominating bound).

    The lower cutoff is not cosmetic: the re-summed polynomial form only
    terminates for r + p >= 0, and no bound of this shape can dominate a
    fixed-degree polynomial as p -> -infinity. The mixed-lattice sums
    never evaluate below p = -r, so nothing is lost."""
    if p > -cfg.k or p < -r:
        raise ValueError(
            f"lattice estimate needs -r <= p <= -k, got p={p}, k={cfg.k}, r={r}"
        )
    pt_resummed = _ptilde_lattice(cfg.alpha, cfg.c, r, cfg.k, p, cfg.ctx)
    pt_direct = _ptilde_direct_mp(cfg.alpha, cfg.c, r, cfg.k, p, cfg.ctx)
    bes = _bessel_lattice(cfg.alpha, cfg.c, cfg.k, p, cfg.ctx)
    bound = lattice_bound(cfg.alpha, cfg.c, cfg.k, p, cfg.ctx)
    return pt_resummed, pt_direct, bes, bound


# ---------------------------------------------------------------------------
# finite-r orthogonality (exact at every r) and the r -> infinity target

def _finite_r_weight1_log(cfg: LimitStudyConfig, r: int, n: int) -> LogReal:
    q = cfg.ctx.q
    return (
        LogReal.from_log(1, n * cfg.ctx.log_q)
        * qpoch_inf_log(q ** (n + 1), cfg.ctx)
        * qpoch_inf_log(-q ** (cfg.alpha + n + r + 2.0) / cfg.c, cfg.ctx)
        / qpoch_inf_log(q ** (cfg.alpha + n + 1.0), cfg.ctx)
    )


def _finite_r_weight2_log(cfg: LimitStudyConfig, r: int, p: int) -> LogReal:
    q = cfg.ctx.q
    return (
        LogReal.of(cfg.c)
        * LogReal.from_log(1, (p - cfg.alpha - 1.0) * cfg.ctx.log_q)
        * qpoch_inf_log(-cfg.c * q ** (p - cfg.alpha), cfg.ctx)
        * qpoch_inf_log(q ** (p + r + 1), cfg.ctx)
        / qpoch_inf_log(-cfg.c * q**p, cfg.ctx)
    )


def _limit_weight1_log(cfg: LimitStudyConfig, n: int) -> LogReal:
    q = cfg.ctx.q
    return (
        LogReal.from_log(1, n * cfg.ctx.log_q)
        * qpoch_inf_log(q ** (n + 1), cfg.ctx)
        / qpoch_inf_log(q ** (cfg.alpha + n + 1.0), cfg.ctx)
    )


def _limit_weight2_log(cfg: LimitStudyConfig, p: int) -> LogReal:
    q = cfg.ctx.q
    return (
        LogReal.of(cfg.c)
        * LogReal.from_log(1, (p - cfg.alpha - 1.0) * cfg.ctx.log_q)
        * qpoch_inf_log(-cfg.c * q ** (p - cfg.alpha), cfg.ctx)
        / qpoch_inf_log(-cfg.c * q**p, cfg.ctx)
    )


def finite_r_norm(cfg: LimitStudyConfig, r: int, k: int) -> float:
    """Closed-form diagonal of the finite-r relations."""
    q = cfg.ctx.q
    al, c = cfg.alpha, cfg.c
    ctx = cfg.ctx
    head = qpoch_multi_log(
        (q, -c * q ** (-r - al - 1.0), -q ** (al + r + 2.0) / c), ctx
    ) / qpoch_multi_log((q ** (al + 1.0), -c * q ** (-r)), ctx)
    deg = (
        qpoch_finite_log(q, r - k, ctx)
        * qpoch_finite_log(-q ** (k + 1) / c, r - k, ctx)
        / qpoch_finite_log(q ** (al + 1.0), r - k, ctx)
        * LogReal.from_log(1, (al + 1.0) * (r - k) * ctx.log_q)
    )
    return (head * deg).float()


def _finite_r_term1(cfg: LimitStudyConfig, r: int, n: int) -> LogReal:
    pk = _ptilde_point(cfg.alpha, cfg.c, r, cfg.k, cfg.ctx.q**n, cfg.ctx)
    pl = _ptilde_point(cfg.alpha, cfg.c, r, cfg.l, cfg.ctx.q**n, cfg.ctx)
    return LogReal.of(pk) * LogReal.of(pl) * _finite_r_weight1_log(cfg, r, n)


def _finite_r_term2(cfg: LimitStudyConfig, r: int, p: int) -> LogReal:
    if p < -r:
        return LogReal(0, -math.inf)  # weight factor (q^{p+r+1};q)_inf kills these
    pk = _ptilde_lattice(cfg.alpha, cfg.c, r, cfg.k, p, cfg.ctx)
    pl = _ptilde_lattice(cfg.alpha, cfg.c, r, cfg.l, p, cfg.ctx)
    return LogReal.of(pk) * LogReal.of(pl) * _finite_r_weight2_log(cfg, r, p)


def _limit_term1(cfg: LimitStudyConfig, n: int) -> LogReal:
    x = cfg.ctx.q**n
    jk = big_qbessel(cfg.alpha, cfg.k, cfg.c, x, cfg.ctx)
    jl = big_qbessel(cfg.alpha, cfg.l, cfg.c, x, cfg.ctx)
    return LogReal.of(jk) * LogReal.of(jl) * _limit_weight1_log(cfg, n)


def _limit_term2(cfg: LimitStudyConfig, p: int) -> LogReal:
    # per-factor route: each index switches to its own re-summed form
    x = -cfg.c * cfg.ctx.q ** (p - cfg.alpha - 1.0)
    if p <= -cfg.k:
        jk = _bessel_lattice(cfg.alpha, cfg.c, cfg.k, p, cfg.ctx)
    else:
        jk = big_qbessel(cfg.alpha, cfg.k, cfg.c, x, cfg.ctx)
    if p <= -cfg.l:
        jl = _bessel_lattice(cfg.alpha, cfg.c, cfg.l, p, cfg.ctx)
    else:
        jl = big_qbessel(cfg.alpha, cfg.l, cfg.c, x, cfg.ctx)
    return LogReal.of(jk) * LogReal.of(jl) * _limit_weight2_log(cfg, p)


def finite_r_orth(cfg: LimitStudyConfig, r: int) -> tuple[float, float]:
    """(lhs, rhs) of the finite-r orthogonality; an exact identity."""
    acc1, _ = _lattice_sum_log(
        lambda n: _finite_r_term1(cfg, r, n), cfg.ctx,
        lo0=0, hi0=10, extend_lo=False, what=f"finite-r n-sum (r={r})",
    )
    acc2, _ = _lattice_sum_log(
        lambda p: _finite_r_term2(cfg, r, p), cfg.ctx,
        lo0=-r, hi0=10, extend_lo=False, what=f"finite-r p-sum (r={r})",
    )
    lhs = acc1.total_float() + acc2.total_float()
    rhs = finite_r_norm(cfg, r, cfg.k) if cfg.k == cfg.l else 0.0
    return lhs, rhs


def finite_r_report(
    cfg: LimitStudyConfig, r: int, *, rtol: float = 1e-9, atol_scale: float = 1e-9
) -> VerificationReport:
    lhs, rhs = finite_r_orth(cfg, r)
    scale = math.sqrt(
        abs(finite_r_norm(cfg, r, cfg.k) * finite_r_norm(cfg, r, cfg.l))
    )
    return make_report(
        f"finite_r_orth[r={r},k={cfg.k},l={cfg.l}]",
        {"r": r, "k": cfg.k, "l": cfg.l, "alpha": cfg.alpha, "c": cfg.c},
        lhs,
        rhs,
        rtol=rtol,
        atol=atol_scale * scale,
    )


def bessel_row_norm(cfg: LimitStudyConfig, k: int) -> float:
    """Closed-form diagonal of the Bessel-row orthogonality."""
    q = cfg.ctx.q
    al, c = cfg.alpha, cfg.c
    ctx = cfg.ctx
    ratio = qpoch_inf_log(q, ctx) / qpoch_inf_log(q ** (al + 1.0), ctx)
    tail = qpoch_multi_log(
        (-c * q ** (-al - 1.0), -q ** (al + 2.0) / c, -q ** (k + 1) / c), ctx
    ) / qpoch_multi_log((-c, -q / c), ctx)
    return (
        LogReal.from_log(1, -k * (al + 1.0) * ctx.log_q) * ratio * ratio * tail
    ).float()


def big_qbessel_orthogonality(
    cfg: LimitStudyConfig,
    *,
    rtol: float = 1e-9,
    atol_scale: float = 1e-9,
    cross_rtol: float = 1e-7,
) -> list[VerificationReport]:
    """Bessel-row orthogonality summed directly, vs. its closed form and,
    member by member, vs. the measure-side kernel-limit relation.

    The dictionary between the two pipelines: this relation at (k, l)
    with lattice parameter c is the measure-side relation at indices
    (k+1, l+1) with parameter 1/c, scaled by q^{-alpha (k+l)/2} times one
    index-independent constant. Both members (the positive-lattice sum
    against the kernel part, the bilateral sum against the bilateral sum)
    must scale by the SAME factor.
    """
    k, l = cfg.k, cfg.l
    acc1, w1 = _lattice_sum_log(
        lambda n: _limit_term1(cfg, n), cfg.ctx,
        lo0=0, hi0=10, extend_lo=False, what=f"bessel-orth n-sum[{k},{l}]",
    )
    acc2, w2 = _lattice_sum_log(
        lambda p: _limit_term2(cfg, p), cfg.ctx, what=f"bessel-orth p-sum[{k},{l}]"
    )
    sum1 = acc1.total_float()
    sum2 = acc2.total_float()
    predicted = bessel_row_norm(cfg, k) if k == l else 0.0
    scale = math.sqrt(abs(bessel_row_norm(cfg, k) * bessel_row_norm(cfg, l)))
    reports = [
        make_report(
            f"bessel_row_orth[k={k},l={l}]",
            {"k": k, "l": l, "alpha": cfg.alpha, "c": cfg.c},
            sum1 + sum2,
            predicted,
            rtol=rtol,
            atol=atol_scale * scale,
            window=(w2[0], max(w1[1], w2[1])),
            cancellation=max(acc1.cancellation, acc2.cancellation),
        )
    ]

    # cross-check against the measure-side pipeline
    mspec = MeasureSpec(alpha=cfg.alpha, c=1.0 / cfg.c, ctx=cfg.ctx)
    m_bessel, m_psum = _jackson_row_members(mspec, k + 1, l + 1)
    const = (
        bessel_row_norm(cfg, 0)
        / _jackson_row_diag(mspec, 1)
        * cfg.ctx.q ** (-cfg.alpha * (k + l) / 2.0)
    )
    reports.append(
        make_report(
            f"bessel_row_cross_kernel[k={k},l={l}]",
            {"k": k, "l": l, "mapped_k": k + 1, "mapped_l": l + 1},
            sum1,
            const * m_bessel,
            rtol=cross_rtol,
            atol=cross_rtol * scale,
            window=w1,
            cancellation=acc1.cancellation,
        )
    )
    reports.append(
        make_report(
            f"bessel_row_cross_bilateral[k={k},l={l}]",
            {"k": k, "l": l, "mapped_k": k + 1, "mapped_l": l + 1},
            sum2,
            const * m_psum,
            rtol=cross_rtol,
            atol=cross_rtol * scale,
            window=w2,
            cancellation=acc2.cancellation,
        )
    )
    return reports


def _jackson_row_members(spec: MeasureSpec, k: int, l: int) -> tuple[float, float]:
    """The two members of the measure-side kernel-limit relation."""
    from .orthogonality import (
        _lattice_sum_log as _ls,
        bessel_cd_limit,
        m_hat_lattice,
    )

    ctx = spec.ctx
    q, c, al = spec.q, spec.c, spec.alpha
    bessel_part = (
        c
        * q ** (al * (k + l) / 2.0)
        * (qpoch_inf_log(q ** (al + 1.0), ctx) / qpoch_inf_log(q, ctx)).float()
        * bessel_cd_limit(spec, c * q**k, c * q**l)
    )

    def term(p: int) -> LogReal:
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

    acc, _ = _ls(term, ctx, what=f"cross-dict psum[{k},{l}]")
    psum = q ** (al * ((k + l) / 2.0 - 1.0)) * acc.total_float()
    return bessel_part, psum


def _jackson_row_diag(spec: MeasureSpec, k: int) -> float:
    ctx = spec.ctx
    q, c, al = spec.q, spec.c, spec.alpha
    num = qpoch_multi_log(
        (-c * q**k, -c * q ** (al + 1.0), -(q ** (-al)) / c), ctx
    )
    den = qpoch_multi_log((-c, -q / c), ctx)
    return (
        LogReal.of(c) * LogReal.from_log(1, -k * ctx.log_q) * num / den
    ).float()


# ---------------------------------------------------------------------------
# convergence structure of the limit

def _split_ranges(cfg: LimitStudyConfig) -> tuple[int, int]:
    # the four-way split assumes the larger index first
    return max(cfg.k, cfg.l), min(cfg.k, cfg.l)


def _sum_logterms(terms) -> float:
    acc = ScaledSum()
    for t in terms:
        acc.add(t)
    return acc.total_float()


def convergence_study(
    cfg: LimitStudyConfig, *, noise_scale: float = 1e-12
) -> list[VerificationReport]:
    """Distance of each finite-r piece to its limit piece, split the way
    the dominated-convergence argument splits the lattice, plus fitted
    decay-rate checks of the dominating bounds.

    Reports: one monotonicity report per consecutive r pair (total
    distance may not grow beyond twice the noise floor), then three
    rate reports (n-sum terms geometric, upper p-sum terms geometric,
    deep p-sum terms super-geometric with a q^{p^2}-type profile).
    """
    import numpy as np

    ctx = cfg.ctx
    kk, ll = _split_ranges(cfg)
    n_hi = 80
    p_hi = 80

    def pieces_finite(r: int) -> list[float]:
        s1 = _sum_logterms(_finite_r_term1(cfg, r, n) for n in range(n_hi))
        s2 = _sum_logterms(_finite_r_term2(cfg, r, p) for p in range(-ll + 1, p_hi))
        s3 = _sum_logterms(_finite_r_term2(cfg, r, p) for p in range(-kk + 1, ll + 1))
        s4 = _sum_logterms(_finite_r_term2(cfg, r, p) for p in range(-r, -kk + 1))
        return [s1, s2, s3, s4]

    def pieces_limit() -> list[float]:
        e1 = _sum_logterms(_limit_term1(cfg, n) for n in range(n_hi))
        e2 = _sum_logterms(_limit_term2(cfg, p) for p in range(-ll + 1, p_hi))
        e3 = _sum_logterms(_limit_term2(cfg, p) for p in range(-kk + 1, ll + 1))
        p_deep = -kk
        acc = ScaledSum()
        while True:
            t = _limit_term2(cfg, p_deep)
            acc.add(t)
            if t.sign == 0 or t.log < math.log(ctx.eps_term) + acc.total().log - 10:
                break
            p_deep -= 1
            if p_deep < -200:
                break
        return [e1, e2, e3, acc.total_float()]

    limit_pieces = pieces_limit()
    scale = max(abs(x) for x in limit_pieces + [bessel_row_norm(cfg, cfg.k)])
    noise = noise_scale * scale

    dists = []
    for r in cfg.r_values:
        fp = pieces_finite(r)
        dists.append(sum(abs(a - b) for a, b in zip(fp, limit_pieces)))

    reports = []
    for i in range(1, len(cfg.r_values)):
        grow = max(0.0, dists[i] - dists[i - 1] - 2.0 * noise)
        reports.append(
            make_report(
                f"conv_monotone[r={cfg.r_values[i - 1]}->{cfg.r_values[i]}]",
                {
                    "r_from": cfg.r_values[i - 1],
                    "r_to": cfg.r_values[i],
                    "dist_from": dists[i - 1],
                    "dist_to": dists[i],
                },
                grow,
                0.0,
                rtol=0.0,
                atol=0.0,
                cancellation=1.0,
            )
        )

    # decay-rate fits at the largest r
    r_big = cfg.r_values[-1]
    logq = ctx.log_q

    def fit_slope(logs: list[tuple[float, float]]) -> float:
        arr = np.array(logs)
        a = np.vstack([arr[:, 0], np.ones(len(arr))]).T
        sol, *_ = np.linalg.lstsq(a, arr[:, 1], rcond=None)
        return float(sol[0])

    t1 = [
        (float(n), t.log)
        for n in range(5, 45)
        if (t := _finite_r_term1(cfg, r_big, n)).sign != 0 and t.log > -500.0
    ]
    slope1 = fit_slope(t1)
    reports.append(
        make_report(
            "conv_rate_nsum",
            {"slope": slope1, "log_q": logq, "r": r_big},
            max(0.0, slope1 - (logq + 0.01)),
            0.0,
            rtol=0.0,
            atol=0.0,
        )
    )

    t2 = [
        (float(p), t.log)
        for p in range(max(-ll + 1, 0) + 5, 45)
        if (t := _finite_r_term2(cfg, r_big, p)).sign != 0 and t.log > -500.0
    ]
    slope2 = fit_slope(t2)
    reports.append(
        make_report(
            "conv_rate_psum_upper",
            {"slope": slope2, "log_q": logq, "r": r_big},
            max(0.0, slope2 - (logq + 0.01)),
            0.0,
            rtol=0.0,
            atol=0.0,
        )
    )

    t4 = [
        (float(p), t.log)
        for p in range(-r_big, -kk + 1)
        if (t := _finite_r_term2(cfg, r_big, p)).sign != 0 and t.log > -600.0
    ]
    arr = np.array(t4)
    a = np.vstack([arr[:, 0] ** 2, arr[:, 0], np.ones(len(arr))]).T
    sol, *_ = np.linalg.lstsq(a, arr[:, 1], rcond=None)
    c2 = float(sol[0])
    reports.append(
        make_report(
            "conv_rate_psum_deep",
            {"quad_coeff": c2, "log_q": logq, "lin_coeff": float(sol[1]), "r": r_big},
            max(0.0, c2 - 0.5 * logq),
            0.0,
            rtol=0.0,
            atol=0.0,
        )
    )
    return reports


# ---------------------------------------------------------------------------
# general-b pointwise limit (diagnostic; no dominating bound exists here)

def limit_diag_general_b(
    cfg: LimitStudyConfig, b: float, r: int, x: float, *, rtol: float = 1e-4
) -> VerificationReport:
    """Pointwise comparison of the general-b polynomial against the
    Bessel limit; the limit is only termwise here, so this is a
    diagnostic with a deliberately loose tolerance, not a proof."""
    q = cfg.ctx.q
    params = BigJacobiParams(q**cfg.alpha, b, cfg.c * q ** (-r - 1))
    poly = big_qjacobi(r - cfg.k, params, q ** (cfg.alpha + 1.0) * x, cfg.ctx)
    limit = big_qbessel(cfg.alpha, cfg.k, cfg.c, x, cfg.ctx) / (
        qpoch_inf_log(-q ** (cfg.k + 1) / cfg.c, cfg.ctx).float()
    )
    return make_report(
        f"limit_general_b[b={b!r},r={r},x={x!r}]",
        {"b": b, "r": r, "x": x, "k": cfg.k},
        poly,
        limit,
        rtol=rtol,
        atol=0.0,
    )
