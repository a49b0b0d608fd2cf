import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from axblab import semiclassic as sc
from axblab.algebra import conv_s_support
from axblab.errors import DeformationOutOfRange, SupportTooLarge
from axblab.funcspace import IntervalSet, tensor_bump
from conftest import np_bump

F1 = ((0.2, 1.3), (0.5, 0.4))
F2 = ((-0.1, 1.1), (0.6, 0.3))


def bump_and_da(c, w):
    """Reference ``f(b, a)`` and ``d_a f`` for a tensor bump."""
    def db(x, cc, ww):
        u = (x - cc) / ww
        return 0.0 if abs(u) >= 1 else math.exp(-1 / (1 - u * u)) * (-2 * u / (1 - u * u) ** 2) / ww
    f = lambda b, a: np_bump(np.array([b]), c[0], w[0])[0] * np_bump(np.array([a]), c[1], w[1])[0]
    fa = lambda b, a: np_bump(np.array([b]), c[0], w[0])[0] * db(a, c[1], w[1])
    return f, fa


def test_deformation_parameter():
    assert sc.DeformationParam(0.2, 2.0).admissible
    assert not sc.DeformationParam(0.25, 2.0).admissible
    with pytest.raises(DeformationOutOfRange):
        sc.DeformationParam(-0.3, 2.0).require()
    f = tensor_bump((0.0, 1.0), (2.5, 0.2), chart="ba")
    with pytest.raises(SupportTooLarge):
        sc.q_s(f, sc.DeformationParam(0.1, 2.0))


def test_k_m_box():
    kb, ka = sc.k_m_box(2.0)
    assert kb.pieces == ((-2.0, 2.0),)
    assert ka.pieces == ((-2.0, -0.5), (0.5, 2.0))


def test_loglog_slope_recovers_power_law():
    s = sc.s_grid()
    slope, (lo, hi) = sc.loglog_slope(s, [3.0 * x ** 1.5 for x in s])
    assert slope == pytest.approx(1.5, abs=1e-12)
    assert lo <= 1.5 <= hi
    assert s == pytest.approx([0.1, 10 ** -1.5, 0.01, 10 ** -2.5, 0.001])


def test_table_grid_validation():
    f = tensor_bump(*F1, chart="ba")
    with pytest.raises(ValueError):
        sc.convergence_table(f, f, [0.01, 0.1, 0.001])
    with pytest.raises(DeformationOutOfRange):
        sc.convergence_table(f, f, [0.1, 0.01, 1e-4])


def test_poisson_bracket_against_quad():
    f, fa = bump_and_da(*F1)
    g, ga = bump_and_da(*F2)
    pb = sc.poisson_bracket(tensor_bump(*F1, chart="ba"), tensor_bump(*F2, chart="ba"))
    for b, a in [(0.1, 1.2), (0.3, 1.25), (-0.2, 1.15)]:
        k = lambda t: fa(t, a) * (b - t) * g(b - t, a) - t * f(t, a) * ga(b - t, a)
        ref = (a - 1) * quad(k, -0.3, 0.7, epsabs=1e-15, limit=200)[0]
        assert pb(b, a) == pytest.approx(ref, rel=1e-7, abs=1e-13)


def test_bracket_antisymmetry_is_exact():
    f, g = tensor_bump(*F1, chart="ba"), tensor_bump(*F2, chart="ba")
    P = (np.linspace(-0.5, 0.8, 7), np.full(7, 1.2))
    np.testing.assert_allclose(sc.poisson_bracket(f, g)(*P), -sc.poisson_bracket(g, f)(*P), atol=1e-12)


def test_involution_residual_vanishes_at_zero():
    f = tensor_bump(*F1, chart="ba")
    P = (np.linspace(-0.3, 0.7, 5), np.full(5, 1.3))
    assert np.max(np.abs(sc.involution_residual(f, 0.0)(*P))) == 0.0


def test_product_residual_is_first_order():
    f, g = tensor_bump(*F1, chart="ba"), tensor_bump(*F2, chart="ba")
    P = (np.array([0.1, 0.3]), np.array([1.2, 1.3]))
    r1 = np.max(np.abs(sc.product_residual(f, g, 1e-2)(*P)))
    r2 = np.max(np.abs(sc.product_residual(f, g, 1e-3)(*P)))
    assert 7 < r1 / r2 < 13


@given(st.floats(1.25, 3.0), st.floats(-0.2, 0.2))
def test_product_support_inside_box(M, t):
    # the enclosure ignores the constraint from the first factor, so its lower
    # |a| bound (1 - |s| M)/M only beats the box when |s| <= (M - 1)/M^2
    s = t / M ** 2
    kb, ka = sc.k_m_box(M)
    assert sc.box_contains(conv_s_support((kb, ka), (kb, ka), s), sc.product_support_box(M, s))


def test_coproduct_support_box_holds_at_m_1_1():
    M = 1.1
    kb, ka = sc.k_m_box(M)
    for s in sc.s_grid():
        for sign in (1, -1):
            box = sc.delta_s_support((kb, ka), (kb, ka, kb, ka), sign * s)
            assert sc.box_contains(box, sc.coproduct_support_box(M))


def test_coproduct_support_box_counterexample_at_m_1_5():
    """A point of the support of delta_s(f)F outside the k = 4 box, with f, F in K_1.5."""
    M, s = 1.5, 0.1
    b, u1, v1, u2, v2 = -1.5, -1.5, -2 / 3, 1.5, -1.5
    a1 = v1 * (1 + s * b)
    b1 = b + u1 * (1 + s * b)
    D = a1 - s * b1
    b2 = u2 * (1 + s * b / D) + b / D
    a2 = v2 * (1 + s * b / D)
    # the integrand arguments at this point
    f_arg = (b, s * b + D * (a2 - s * b2))
    F_arg = ((b1 - b) / (1 + s * b), a1 / (1 + s * b), (b2 * D - b) / (D + s * b), a2 * D / (D + s * b))
    assert F_arg == pytest.approx((u1, v1, u2, v2), abs=1e-12)
    for bb, aa in (f_arg, F_arg[:2], F_arg[2:]):
        assert abs(bb) <= M + 1e-12 and 1 / M - 1e-12 <= abs(aa) <= M + 1e-12
    box = sc.coproduct_support_box(M)
    assert abs(s) < 1 / (sc.COPRODUCT_BOX_K * M * M)
    assert not box[2].contains(b2)
    assert b2 == pytest.approx(7.4654, abs=1e-4)
    assert not sc.box_contains(sc.delta_s_support(sc.k_m_box(M), sc.k_m_box(M) * 2, s), box)


def test_deformed_coproduct_reduces_at_zero():
    f = tensor_bump((0.1, 1.0), (0.3, 0.2), chart="ba")
    F = tensor_bump((0.0, 1.0, 0.2, 1.1), (0.3, 0.2, 0.3, 0.2), chart="ba")
    d = sc.DeformationParam(0.0, 1.5)
    P = tuple(np.array(v) for v in ([0.1, 0.2], [1.0, 1.05], [0.1, 0.3], [1.05, 1.0]))
    np.testing.assert_allclose(sc.delta_s_hat(f, F, d)(*P), sc.delta0_hat_flat(f, F)(*P), atol=1e-14)
    with pytest.raises(DeformationOutOfRange):
        sc.delta_s_hat(f, F, sc.DeformationParam(0.2, 1.5))


def test_rescaling_transports_norms():
    f = tensor_bump(*F1, chart="ba")
    a, b = sc.norm_transport(f, 0.05, 0.1, n=15)
    assert a == pytest.approx(b, rel=1e-5)


def test_derivation_and_jacobi():
    f, g = tensor_bump(*F1, chart="ba"), tensor_bump(*F2, chart="ba")
    h = tensor_bump((0.0, 1.2), (0.5, 0.35), chart="ba")
    P = (np.array([0.1, -0.2]), np.array([1.2, 1.25]))
    assert sc.jacobi_residual(f, g, h, P) < 1e-6
    assert sc.derivation_residual(f, g, h, P) < 1e-6


def test_fourier_bracket_consistency():
    # wide a-profiles keep the fourth-order grid derivatives accurate
    f = tensor_bump((0.0, 1.05), (0.4, 0.6), chart="ba", scale=math.e ** 2)
    g = tensor_bump((0.1, 1.1), (0.35, 0.55), chart="ba", scale=math.e ** 2)
    beta, a = np.linspace(-0.5, 0.5, 41), np.linspace(0.8, 1.3, 101)
    res, scale = sc.bracket_consistency(f, g, beta, a)
    assert scale > 1e-4 and res < 1e-5
