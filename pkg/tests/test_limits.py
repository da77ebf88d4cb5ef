"""Large-degree limit study: polynomial orthogonality at every finite
degree, convergence to the Bessel-type relation, domination bounds."""

import pytest

from qortho.context import QContext
from qortho.families import BigJacobiParams
from qortho.limits import (
    LimitStudyConfig,
    bessel_row_norm,
    big_qbessel_orthogonality,
    bqj_norm,
    bqj_orthogonality,
    convergence_study,
    finite_r_orth,
    finite_r_report,
    lattice_values,
    limit_pointwise,
)

Q, ALPHA, C = 0.5, 0.25, 2.0


@pytest.fixture(scope="module")
def cfg():
    return LimitStudyConfig(alpha=ALPHA, c=C, k=0, l=0, ctx=QContext(Q))


@pytest.fixture(scope="module")
def cfg_off():
    # unequal row indices exercise the off-diagonal zero
    return LimitStudyConfig(alpha=ALPHA, c=C, k=2, l=0, ctx=QContext(Q))


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_config_validation(ctx):
    with pytest.raises(ValueError):
        LimitStudyConfig(alpha=-2.0, c=C, k=0, l=0, ctx=ctx)
    with pytest.raises(ValueError):
        LimitStudyConfig(alpha=ALPHA, c=C, k=0, l=0, ctx=ctx, r_values=(20, 10))
    with pytest.raises(ValueError):
        LimitStudyConfig(alpha=ALPHA, c=C, k=5, l=0, ctx=ctx, r_values=(3,))


def test_bqj_gram(ctx):
    for b in (0.0, 0.5):
        params = BigJacobiParams(Q**ALPHA, b, C)
        assert bqj_orthogonality(params, 3, 3, ctx).passed
        assert bqj_orthogonality(params, 2, 5, ctx).passed
        assert bqj_norm(params, 4, ctx) > 0


def test_finite_degree_orthogonality(cfg, cfg_off):
    for r in (10, 20, 30):
        assert finite_r_report(cfg, r).passed
        assert finite_r_report(cfg_off, r).passed
    lhs, rhs = finite_r_orth(cfg, 10)
    assert _rel(lhs, rhs) < 1e-10


def test_pointwise_limit_under_bound(cfg):
    q = cfg.ctx.q
    for x in (1.0, q, q * q):
        ptilde, bessel, bound = limit_pointwise(cfg, 30, x)
        assert abs(ptilde - bessel) < 1e-6
        assert abs(ptilde - bessel) <= bound


def test_lattice_values_agree_and_obey_bound(cfg):
    # the direct-series witness runs at 30 digits; below p = -6 its own
    # cancellation floor swallows the value, so the comparison stops there
    for r in (5, 15):
        for p in (max(-6, -r), -3, 0):
            pt, pt_direct, bessel, bound = lattice_values(cfg, r, p)
            assert _rel(pt, pt_direct) < 1e-9
            assert abs(pt - bessel) <= bound


def test_lattice_values_domain(cfg):
    # the re-summed form terminates only for p >= -r, and the row index
    # caps the other side at p <= -k
    with pytest.raises(ValueError):
        lattice_values(cfg, 5, -6)
    cfg2 = LimitStudyConfig(alpha=ALPHA, c=C, k=2, l=2, ctx=cfg.ctx)
    with pytest.raises(ValueError):
        lattice_values(cfg2, 5, -1)


def test_limit_row_orthogonality(cfg, cfg_off):
    for c in (cfg, cfg_off):
        reports = big_qbessel_orthogonality(c)
        bad = [r for r in reports if not r.passed]
        assert not bad, [(r.name, r.rel_err) for r in bad]


def test_row_norm_positive(cfg):
    for k in (0, 3, -2):
        assert bessel_row_norm(cfg, k) > 0


def test_convergence_study(cfg):
    reports = convergence_study(cfg)
    bad = [r for r in reports if not r.passed]
    assert not bad, [(r.name, r.computed) for r in bad]
