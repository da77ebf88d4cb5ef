"""Series primitives against independently computed high-precision values
and against the transformation identities they must satisfy."""

import math

import pytest

from qortho.context import QContext
from qortho.errors import DivergentSeries, PoleInLowerParameter
from qortho.qseries import (
    jackson_qintegral,
    phi11_reg,
    phi_rs,
    qdiff_residual_2phi1,
    qpoch_finite,
    qpoch_inf,
    qpoch_inf_log,
    qpoch_multi,
    shift_1phi1,
    theta_shift,
    transform_1phi1_heine,
)

# 40-digit mpmath products / sums, frozen
POCH_INF_03 = 0.5101178266339875718322722176806279452756
POCH_FIN_03_5 = 0.519803388671875
PHI21_ORACLE = 4.772301256376235192652682455474101959539  # 2phi1(0.3,0.1;0.7;0.4)
PHI11_ORACLE = -0.4507742374825583361838456141223060457192  # 1phi1(0.25;0.6;0.8)
PHI01_ORACLE = -0.4668577457848500653542313792073008152627  # 0phi1(;0.6;-0.35)


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_qpoch_inf_oracle(ctx):
    got = qpoch_inf(0.3, ctx)
    assert _rel(got.value, POCH_INF_03) < 1e-14
    assert got.abs_err < 1e-12
    assert got.n_terms > 0


def test_qpoch_finite_oracle(ctx):
    assert _rel(qpoch_finite(0.3, 5, ctx), POCH_FIN_03_5) < 1e-15
    assert qpoch_finite(0.3, 0, ctx) == 1.0


def test_qpoch_log_form_consistent(ctx):
    for a in (0.3, -0.7, 1.9, -2.5):
        lg = qpoch_inf_log(a, ctx)
        assert _rel(lg.float(), qpoch_inf(a, ctx).value) < 1e-13


def test_qpoch_multi_is_product(ctx):
    params = (0.3, -0.7, 0.2)
    prod = 1.0
    for a in params:
        prod *= qpoch_inf(a, ctx).value
    assert _rel(qpoch_multi(params, ctx).value, prod) < 1e-13


def test_phi_rs_oracles(ctx):
    assert _rel(phi_rs((0.3, 0.1), (0.7,), 0.4, ctx).value, PHI21_ORACLE) < 1e-13
    assert _rel(phi_rs((0.25,), (0.6,), 0.8, ctx).value, PHI11_ORACLE) < 1e-13
    assert _rel(phi_rs((), (0.6,), -0.35, ctx).value, PHI01_ORACLE) < 1e-13


def test_phi_rs_terminating(ctx):
    # q^{-3} upper parameter cuts the sum to 4 terms; compare with the
    # finite sum written out directly
    q = ctx.q
    a = q**-3
    b, c, z = 0.3, 0.7, 0.6
    s = 0.0
    for j in range(4):
        num = qpoch_finite(a, j, ctx) * qpoch_finite(b, j, ctx)
        den = qpoch_finite(c, j, ctx) * qpoch_finite(q, j, ctx)
        s += num / den * z**j
    got = phi_rs((a, b), (c,), z, ctx)
    assert got.n_terms <= 5
    assert _rel(got.value, s) < 1e-14


def test_phi_rs_pole_raises(ctx):
    with pytest.raises(PoleInLowerParameter):
        phi_rs((0.3,), (4.0,), 0.2, ctx)  # 4.0 = q^{-2}


def test_phi_rs_divergent_raises(ctx):
    with pytest.raises(DivergentSeries):
        phi_rs((0.3, 0.1), (0.7,), 1.5, ctx)


def test_phi11_reg_matches_unregularized(ctx):
    a, c, z = 0.25, 0.6, 0.8
    reg = phi11_reg(a, c, z, ctx).value
    plain = qpoch_inf(c, ctx).value * phi_rs((a,), (c,), z, ctx).value
    assert _rel(reg, plain) < 1e-12


def test_phi11_reg_vanishing_lower_parameter(ctx):
    # at c = q^{-m} the prefactor kills the would-be pole; the value must
    # stay finite
    v = phi11_reg(0.3, ctx.q**-2, 0.2, ctx).value
    assert math.isfinite(v)


def test_theta_shift_identity(ctx):
    for a, k in ((0.7, 3), (-1.3, -4), (0.35, 0), (2.2, 6)):
        lhs, rhs = theta_shift(a, k, ctx)
        assert _rel(lhs, rhs) < 1e-11


def test_shift_1phi1_identity(ctx):
    for a, p, z in ((0.7, 2, 0.5), (-0.4, 4, -1.1), (1.6, 1, 0.9)):
        lhs, rhs = shift_1phi1(a, p, z, ctx)
        assert _rel(lhs, rhs) < 1e-11


def test_transform_1phi1_heine_identity(ctx):
    for a, c, z in ((0.7, 0.3, 0.5), (-0.4, -0.6, 0.2), (1.6, 0.45, -0.7)):
        lhs, rhs = transform_1phi1_heine(a, c, z, ctx)
        assert _rel(lhs, rhs) < 1e-11


def test_qdiff_residual_small(ctx):
    # tame parameters: all three stencil terms are O(1), so the raw
    # residual is itself the scaled one
    assert abs(qdiff_residual_2phi1(0.3, 0.5, 0.6, 0.3, ctx)) < 1e-12
    assert abs(qdiff_residual_2phi1(0.3, 0.5, 0.6, 0.3, ctx, confluent=True)) < 1e-12
    assert abs(qdiff_residual_2phi1(-0.8, 0.2, -0.4, 0.25, ctx)) < 1e-12


def test_jackson_qintegral_closed_forms(ctx):
    # endpoints (aq, cq): constant integrates to q(a+c), x to
    # q^2 (a^2-c^2)/(1+q)
    q = ctx.q
    a, c = 0.7, 1.3
    got1 = jackson_qintegral(lambda x: 1.0, a, c, ctx).value
    assert _rel(got1, q * (a + c)) < 1e-13
    gotx = jackson_qintegral(lambda x: x, a, c, ctx).value
    assert _rel(gotx, q * q * (a * a - c * c) / (1 + q)) < 1e-13


def test_context_validation():
    with pytest.raises(ValueError):
        QContext(1.5)
    with pytest.raises(ValueError):
        QContext(0.0)


# ---------------------------------------------------------------------------
# property-based checks

from hypothesis import given, settings, strategies as st


def _off_power_lattice(v):
    # keep clear of the zeros a = q^j, where both sides vanish and the
    # relative comparison loses meaning
    return all(abs(abs(v) - 0.5**j) > 0.02 for j in range(1, 12))


_safe_a = st.floats(min_value=-0.9, max_value=0.9).filter(
    lambda v: abs(v) > 1e-3 and _off_power_lattice(v)
)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(a=_safe_a, n=st.integers(min_value=0, max_value=12))
def test_qpoch_splitting_property(a, n):
    # (a;q)_inf = (a;q)_n (a q^n;q)_inf for every n
    ctx = QContext(0.5)
    whole = qpoch_inf(a, ctx).value
    split = qpoch_finite(a, n, ctx) * qpoch_inf(a * ctx.q**n, ctx).value
    assert _rel(whole, split) < 1e-12


@settings(max_examples=40, deadline=None, derandomize=True)
@given(a=_safe_a, k=st.integers(min_value=-6, max_value=6))
def test_theta_shift_property(a, k):
    ctx = QContext(0.5)
    lhs, rhs = theta_shift(a, k, ctx)
    assert _rel(lhs, rhs) < 1e-9
