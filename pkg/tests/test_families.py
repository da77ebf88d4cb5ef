"""The special-function families: pinned values, structural checks, and
cross-form consistency."""

import numpy as np
import pytest

from qortho.families import (
    BigJacobiParams,
    MeasureSpec,
    big_qbessel,
    big_qjacobi,
    big_qjacobi_tilde,
    jackson_j2,
    m_func,
    q_laguerre,
)

# regression pins at q=0.5 (values cross-checked against the 30-digit
# engine and the orthogonality identities)
LAGUERRE_3_PIN = -1.1059552457364903      # q_laguerre(3, 0.25, 2.0)
BQBESSEL_PIN = 1.7474624120299729         # big_qbessel(0.25, 2, 2.0, 8.0)
J2_PIN = 0.7673224110636946               # jackson_j2(0.25, 0.3)


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_laguerre_degree_zero_is_one(ctx):
    for x in (0.0, 0.5, -1.3, 7.0):
        assert q_laguerre(0, 0.25, x, ctx) == 1.0


def test_laguerre_pin(ctx):
    assert _rel(q_laguerre(3, 0.25, 2.0, ctx), LAGUERRE_3_PIN) < 1e-13


def test_laguerre_is_polynomial_of_the_right_degree(ctx):
    # fit degree-n polynomial through n+3 samples; the residual vanishes
    # only if L_n really is a degree-n polynomial in x
    n = 4
    xs = np.linspace(-2.0, 2.0, n + 3)
    ys = np.array([q_laguerre(n, 0.25, float(x), ctx) for x in xs])
    coef = np.polynomial.polynomial.polyfit(xs, ys, n)
    resid = ys - np.polynomial.polynomial.polyval(xs, coef)
    assert np.max(np.abs(resid)) < 1e-10
    assert abs(coef[n]) > 1e-12  # leading coefficient nonzero


def test_big_qbessel_pin_and_cross_form(ctx):
    assert _rel(big_qbessel(0.25, 2, 2.0, 8.0, ctx), BQBESSEL_PIN) < 1e-13
    # check=True evaluates two independent series forms and raises
    # FormMismatch if they disagree
    for k in (-3, 0, 4):
        for x in (0.25, 1.0, 4.0):
            v = big_qbessel(0.25, k, 2.0, x, ctx, check=True)
            assert np.isfinite(v)


def test_jackson_j2_pin(ctx):
    assert _rel(jackson_j2(0.25, 0.3, ctx), J2_PIN) < 1e-13


def test_m_func_forms_agree(mspec):
    for p in (-2, 0, 3):
        for x in (0.5, 2.0):
            va = m_func(p, mspec, x, form="A")
            vb = m_func(p, mspec, x, form="B")
            assert _rel(va, vb) < 1e-10
            assert m_func(p, mspec, x, form="both") == va


def test_big_qjacobi_tilde_routes_agree(ctx):
    q = ctx.q
    a, c = q**0.25, 2.0 * q**-11
    for k in (1, 4):
        for x in (q**2, -2.0 * q**3):
            v0 = big_qjacobi_tilde(k, a, c, x, ctx)
            v1 = big_qjacobi_tilde(k, a, c, x, ctx, via_scaling=True)
            assert _rel(v0, v1) < 1e-11


def test_big_qjacobi_b_zero_matches_tilde_scaling(ctx):
    # at b=0 the two families coincide up to the leading normalization;
    # verify the ratio is constant in x
    q = ctx.q
    a, c, k = q**0.25, 2.0, 3
    params = BigJacobiParams(a, 0.0, c)
    xs = (q, q**2, -c * q**2)
    ratios = [
        big_qjacobi(k, params, x, ctx) / big_qjacobi_tilde(k, a, c, x, ctx)
        for x in xs
    ]
    assert _rel(ratios[0], ratios[1]) < 1e-11
    assert _rel(ratios[0], ratios[2]) < 1e-11


def test_measure_spec_validation(ctx):
    with pytest.raises(ValueError):
        MeasureSpec(alpha=-2.0, c=2.0, ctx=ctx)
    with pytest.raises(ValueError):
        MeasureSpec(alpha=0.25, c=-1.0, ctx=ctx)
