"""Measure-side verifications: Gram matrices, dual system, kernel limits,
perturbed measures, generating functions."""

import pytest

from qortho.orthogonality import (
    berg_admissible_p,
    berg_perturbed_gram,
    cd_kernel_check,
    cd_limit_check,
    cross_gram,
    dual_orthogonality,
    genfun_i,
    genfun_ii,
    hankel_identity,
    jackson_bessel_orthogonality,
    laguerre_gram,
    m_gram,
    make_report,
    monomial_orthogonality,
    phi_product_orthogonality,
    weight,
)


def _all_pass(reports):
    bad = [r for r in reports if not r.passed]
    assert not bad, [(r.name, r.rel_err, r.abs_err) for r in bad]


def test_make_report_semantics():
    r = make_report("t", {}, 1.0, 1.0 + 1e-12, rtol=1e-10, atol=0.0)
    assert r.passed and r.rel_err < 1e-10
    r = make_report("t", {}, 1.0, 2.0, rtol=1e-10, atol=0.0)
    assert not r.passed
    r = make_report("t", {}, 1e-14, 0.0, rtol=1e-10, atol=1e-12)
    assert r.passed  # absolute window catches the zero prediction


def test_weights_positive(mspec):
    for k in range(-10, 11):
        assert weight(mspec, k) > 0


def test_laguerre_gram(mspec):
    _all_pass(laguerre_gram(mspec, 5))


def test_m_gram(mspec):
    _all_pass(m_gram(mspec, -3, 3))


def test_cross_gram(mspec):
    _all_pass(cross_gram(mspec, 5, -3, 3))


def test_monomial_orthogonality(mspec):
    _all_pass(monomial_orthogonality(mspec, -2, 2, 4))


def test_hankel_identity(mspec):
    _all_pass(hankel_identity(mspec, 1, 1))
    _all_pass(hankel_identity(mspec, 0, 2))


def test_dual_orthogonality_entries(mspec):
    assert dual_orthogonality(mspec, 0, 0).passed
    assert dual_orthogonality(mspec, 2, -1).passed
    assert dual_orthogonality(mspec, -3, 4).passed


def test_cd_kernel_partial_sum_equals_closed_form(mspec):
    q, c = mspec.ctx.q, mspec.c
    for n in (1, 5, 15, 30):
        assert cd_kernel_check(mspec, n, c * q**2, c * q**3).passed
        assert cd_kernel_check(mspec, n, c * q**2, c * q**2).passed


def test_cd_kernel_limit_reaches_bessel(mspec):
    assert cd_limit_check(mspec, 60).passed


def test_jackson_bessel_orthogonality_entries(mspec):
    for k, l in ((0, 0), (2, 5), (-3, -3), (-4, 4)):
        assert jackson_bessel_orthogonality(mspec, k, l).passed


def test_berg_perturbed_measures(mspec):
    assert isinstance(berg_admissible_p(mspec), int)
    for s in (-1.0, -0.5, 0.5, 1.0):
        _all_pass(berg_perturbed_gram(mspec, s))
    with pytest.raises(ValueError):
        berg_perturbed_gram(mspec, 5.0)


def test_generating_function_i(ctx):
    assert genfun_i(0.7, 0.45, 0.3, 0.9, ctx).passed
    assert genfun_i(-0.5, 0.8, -0.4, 0.25, ctx).passed
    assert genfun_i(0.7, 0.45, 0.3, 0.0, ctx).passed  # x = 0 edge


def test_generating_function_ii(ctx):
    assert genfun_ii(0.45, -0.6, 1.7, ctx).passed
    assert genfun_ii(0.0, 0.5, 0.8, ctx).passed  # d = 0 edge
    assert genfun_ii(0.0, 0.5, 0.0, ctx).passed  # y = 0 needs d = 0
    with pytest.raises(ValueError):
        genfun_ii(0.3, 0.5, 0.0, ctx)


def test_phi_product_orthogonality(ctx):
    # l sweep including a case with |d| > 1
    for d in (0.6, 1.6):
        for l in (-3, 0, 2, 5):
            assert phi_product_orthogonality(0.7, 0.45, d, 0.35, l, ctx).passed
