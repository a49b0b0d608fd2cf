import math

import numpy as np
import pytest
from scipy.integrate import quad

from axblab.algebra import (
    BA, HALF_DENSITIES, ZC, conv_gb, conv_s, conv_s_support, involution_gb, involution_s, norm_l2, norm_l_s,
    norm_0_s, random_bump_ba, random_bump_gb,
)
from axblab.errors import ChartMismatch
from axblab.funcspace import tensor_bump
from conftest import np_bump


def ref_fn(c, w, scale=1.0):
    return lambda x, y: scale * np_bump(np.array([x]), c[0], w[0])[0] * np_bump(np.array([y]), c[1], w[1])[0]


F1 = ((0.2, 1.3), (0.5, 0.4))
F2 = ((-0.1, 0.9), (0.6, 0.3))


def test_gb_convolution_against_quad():
    f, g = tensor_bump(*F1, chart=ZC), tensor_bump(*F2, chart=ZC)
    rf, rg = ref_fn(*F1), ref_fn(*F2)
    h = conv_gb(f, g)
    for z, c in [(0.3, 1.2), (0.0, 1.0), (0.5, 1.5)]:
        ref = quad(lambda c1: rf(z, c1) * rg(z / c1, c / c1) / abs(c1), 0.9, 1.7, epsabs=1e-15)[0]
        assert h(z, c) == pytest.approx(ref, rel=1e-7, abs=1e-14)


def test_gb_involution_reverses_products():
    f, g = tensor_bump(*F1, chart=ZC), tensor_bump(*F2, chart=ZC)
    lhs = involution_gb(conv_gb(f, g))
    rhs = conv_gb(involution_gb(g), involution_gb(f))
    pts = (np.array([0.1, 0.3, 0.05]), np.array([0.8, 0.75, 0.9]))
    np.testing.assert_allclose(lhs(*pts), rhs(*pts), rtol=1e-7, atol=1e-12)
    assert np.max(np.abs(lhs(*pts))) > 1e-3


@pytest.mark.parametrize("s", [0.0, 0.3, -0.2])
def test_deformed_convolution_against_quad(s):
    f, g = tensor_bump(*F1, chart=BA), tensor_bump(*F2, chart=BA)
    rf, rg = ref_fn(*F1), ref_fn(*F2)
    h = conv_s(f, g, s)
    for b, a in [(0.1, 1.2), (0.3, 1.1)]:
        def k(t):
            d = 1 + s * t
            return rf(t, a + s * (t - b)) * rg((b - t) / d, a / d) / abs(d)
        ref = quad(k, -0.3, 0.7, epsabs=1e-15, limit=200)[0]
        assert h(b, a) == pytest.approx(ref, rel=1e-7, abs=1e-13)


@pytest.mark.parametrize("s", [0.0, 0.4])
def test_deformed_convolution_forms_agree(s):
    f, g = tensor_bump(*F1, chart=BA), tensor_bump(*F2, chart=BA)
    pts = (np.array([0.1, 0.3, -0.2]), np.array([1.2, 1.1, 1.3]))
    np.testing.assert_allclose(conv_s(f, g, s, form=1)(*pts), conv_s(f, g, s, form=2)(*pts), rtol=1e-7, atol=1e-13)


def test_deformed_product_is_associative(rng):
    s = 0.25
    f, g, h = (tensor_bump(c, w, chart=BA) for c, w in [F1, F2, ((0.3, 1.0), (0.5, 0.4))])
    lhs, rhs = conv_s(conv_s(f, g, s), h, s), conv_s(f, conv_s(g, h, s), s)
    pts = (np.array([0.4, 0.1, 0.6]), np.array([1.2, 1.25, 1.1]))
    np.testing.assert_allclose(lhs(*pts), rhs(*pts), rtol=1e-6, atol=1e-12)
    assert np.min(np.abs(lhs(*pts))) > 1e-5


@pytest.mark.parametrize("s", [0.0, 0.3])
def test_deformed_involution(s):
    f, g = tensor_bump(*F1, chart=BA), tensor_bump(*F2, chart=BA)
    ff = involution_s(involution_s(f, s), s)
    pts = (np.array([0.1, 0.4, -0.2]), np.array([1.2, 1.5, 1.0]))
    np.testing.assert_allclose(ff(*pts), f(*pts), atol=1e-15)
    lhs = involution_s(conv_s(f, g, s), s)
    rhs = conv_s(involution_s(g, s), involution_s(f, s), s)
    pts = (np.array([-0.1, -0.05]), np.array([1.0, 1.1]))
    np.testing.assert_allclose(lhs(*pts), rhs(*pts), rtol=1e-7, atol=1e-13)
    assert np.min(np.abs(lhs(*pts))) > 1e-3


@pytest.mark.parametrize("s", [0.5, 1.0])
def test_deformed_involution_is_the_groupoid_inverse(s):
    from axblab.group import GroupElement, groupoid_maps
    f = tensor_bump(*F1, chart=BA)
    x = GroupElement(np.array([0.4, -0.3]), np.array([1.3, 0.8]))
    xi = groupoid_maps("GammaS_A", s).inverse(x)
    np.testing.assert_allclose(involution_s(f, s)(x.b, x.a), f(xi.u, xi.v), atol=1e-15)


def test_support_box_contains_product():
    f, g = tensor_bump(*F1, chart=BA), tensor_bump(*F2, chart=BA)
    s = 0.3
    bs, as_ = conv_s_support(f.support, g.support, s)
    h = conv_s(f, g, s)
    b = np.linspace(bs.lo - 0.5, bs.hi + 0.5, 25)
    a = np.linspace(as_.lo - 0.5, as_.hi + 0.5, 25)
    B, A = np.meshgrid(b, a, indexing="ij")
    outside = ~(bs.contains(B) & as_.contains(A))
    from axblab.funcspace import Integral
    bare = Integral(h.kernel, h.tsets, h.spec, narrow=True)
    assert np.max(np.abs(bare(B[outside], A[outside]))) == 0.0


def test_norms_at_s_zero():
    # at s = 0 the left norm is sup_a int |f(b, a)| db
    f = tensor_bump(*F1, chart=BA, scale=2.0)
    ref = 2 * math.exp(-1) * quad(lambda b: np_bump(np.array([b]), 0.2, 0.5)[0], -0.3, 0.7, epsabs=1e-15)[0]
    assert norm_l_s(f, 0.0) == pytest.approx(ref, rel=1e-6)
    assert norm_0_s(f, 0.0) == pytest.approx(ref, rel=1e-6)


def test_l2_norm():
    f = tensor_bump(*F1, chart=ZC)
    rf = ref_fn(*F1)
    from scipy.integrate import dblquad
    ref = dblquad(lambda c, z: rf(z, c) ** 2 / c ** 2, -0.3, 0.7, 0.9, 1.7, epsabs=1e-14)[0]
    assert norm_l2(f) == pytest.approx(math.sqrt(ref), rel=1e-7)


def test_chart_tags_are_enforced():
    f = tensor_bump(*F1, chart=BA)
    with pytest.raises(ChartMismatch):
        conv_gb(f, f)
    with pytest.raises(ChartMismatch):
        involution_s(tensor_bump(*F1, chart=ZC), 0.1)


def test_half_density_weights():
    assert HALF_DENSITIES.haar_c(-2.0) == 0.5
    assert HALF_DENSITIES.deformed(1.0, 0.5) == pytest.approx(1 / 1.5)
    assert HALF_DENSITIES.l2_gamma(2.0) == 0.25


def test_random_bumps_respect_ranges(rng):
    for _ in range(20):
        f = random_bump_ba(rng, M=2.0)
        assert f.support[0].lo >= -2 and f.support[0].hi <= 2
        assert f.support[1].lo >= 0.5 and f.support[1].hi <= 2
        g = random_bump_gb(rng)
        assert g.support[1].lo > 0
