"""Jacobi-type lattice operator: eigenvectors, Wronskians, Green function,
finite sections against a dense eigensolver."""

import math

import numpy as np

from qortho.operator import (
    apply_operator,
    coeffs,
    connection_residual,
    degenerate_t_relation,
    eigen_residual,
    ell2_tail_check,
    eta_norm,
    eta_weight,
    finite_section_eigenvalues,
    green_function,
    lattice_v,
    spectrum,
    wronskian_closed_forms,
    wronskian_constancy,
    xi_norm,
    xi_weight,
)


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _spectral_points(ospec):
    q, c, t = ospec.ctx.q, ospec.c, ospec.t
    rc = math.sqrt(c)
    return {
        "eta0": -rc / t,
        "eta1": -rc * q / t,
        "xi-1": t / (q * rc),
        "xi0": t / rc,
        "xi1": t * q / rc,
    }


def test_eigen_residuals_at_spectral_points(ospec):
    for tag, x in _spectral_points(ospec).items():
        u = lattice_v(ospec, 1.0 / ospec.t, x)
        worst = 0.0
        for k in range(-8, 9):
            res, scale = eigen_residual(ospec, u, x, k)
            worst = max(worst, abs(res) / scale)
        assert worst < 1e-10, (tag, worst)


def test_wronskian_constant_across_lattice(ospec):
    d = wronskian_constancy(ospec, 0.3, -10, 10)
    assert d["max_dev"] / abs(d["mean"]) < 1e-10


def test_wronskian_closed_forms(ospec):
    d = wronskian_closed_forms(ospec, 0.3)
    assert d["w_vv_reading"] == "a"
    assert _rel(d["w_vv"], d["w_vv_closed_a"]) < 1e-9
    assert _rel(d["w_uv_t"], d["w_uv_t_closed"]) < 1e-9
    assert _rel(d["w_uv_1t"], d["w_uv_1t_closed"]) < 1e-9


def test_green_function_is_resolvent_kernel(ospec):
    x = 0.37  # off the point spectrum
    for m, n in ((0, 0), (1, 0), (0, 1), (3, 3), (-2, 1)):
        g_col = lambda j: green_function(ospec, x, j, n)
        lhs = apply_operator(ospec, g_col, m) - x * g_col(m)
        want = 1.0 if m == n else 0.0
        assert abs(lhs - want) < 1e-8, (m, n, lhs)


def test_connection_residual_vanishes(ospec):
    for k in (-4, 0, 5):
        for x in (0.2, -0.9):
            assert abs(connection_residual(ospec, k, x)) < 1e-10


def test_degenerate_t_relation(ospec):
    for m, k, sign in ((1, 0, 1), (2, 3, -1), (1, -2, 1)):
        lhs, rhs = degenerate_t_relation(ospec, m, k, x=0.45, sign=sign)
        assert _rel(lhs, rhs) < 1e-9


def test_spectrum_is_ordered_and_signed(ospec):
    pts = spectrum(ospec, -3, 5)
    xs = [p.x for p in pts]
    assert xs == sorted(xs)
    for p in pts:
        if p.kind == "eta":
            assert p.x < 0
        elif p.kind == "xi":
            assert p.x > 0
        else:
            assert p.x == 0.0


def test_norms_and_weights_positive(ospec):
    for p in range(0, 6):
        assert eta_norm(ospec, p) > 0
        assert eta_weight(ospec, p) > 0
    for p in range(-4, 6):
        assert xi_norm(ospec, p) > 0
        assert xi_weight(ospec, p) > 0


def test_finite_section_matches_dense_eigensolver(ospec):
    K = 4
    n = 2 * K + 1
    mat = np.zeros((n, n))
    for i, k in enumerate(range(-K, K + 1)):
        a_k, b_k = coeffs(ospec, k)
        mat[i, i] = b_k
        if i + 1 < n:
            mat[i, i + 1] = mat[i + 1, i] = a_k
    want = np.sort(np.linalg.eigvalsh(mat))
    got = np.array(finite_section_eigenvalues(ospec, K))
    scale = np.max(np.abs(want))
    assert np.max(np.abs(got - want)) < 1e-12 * scale


def test_eigenvector_tails_are_square_summable(ospec):
    d = ell2_tail_check(ospec, 1.0 / ospec.t, 0.3, +1)
    assert d["cauchy_ok"]
    d = ell2_tail_check(ospec, None, 0.3, -1, k_start=-10)
    assert d["cauchy_ok"]
