import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from axblab.errors import SingularSupport, ToleranceNotMet
from axblab.funcspace import (
    DEFAULT_SPEC, Integral, IntervalSet, QuadratureSpec, bump, coord, integrate, mul, pullback, sup_norm,
    tensor, tensor_bump,
)
from axblab.funcspace.quadrature import panel_rule
from conftest import np_bump

finite = st.floats(-5, 5, allow_nan=False)


@st.composite
def intervals(draw):
    a, b = sorted((draw(finite), draw(finite)))
    return IntervalSet.of(a, b)


@given(intervals(), intervals(), finite, finite)
def test_interval_arithmetic_encloses(X, Y, t1, t2):
    # any x in X, y in Y lands inside the computed image set
    x = X.lo + (X.hi - X.lo) * (t1 + 5) / 10
    y = Y.lo + (Y.hi - Y.lo) * (t2 + 5) / 10
    assert (X + Y).contains(x + y)
    assert (X - Y).contains(x - y)
    assert bool((X * Y).contains(x * y)) or math.isclose(x * y, (X * Y).lo, abs_tol=1e-12) \
        or math.isclose(x * y, (X * Y).hi, abs_tol=1e-12)
    if abs(y) > 1e-6:
        q = x / y
        Q = X / Y
        assert Q.contains(q) or min(abs(q - a) for p in Q.pieces for a in p) < 1e-9 * (1 + abs(q))


def test_recip_splits_at_zero():
    R = IntervalSet.of(-1.0, 2.0).recip()
    assert R.pieces == ((-math.inf, -1.0), (0.5, math.inf))
    assert IntervalSet.of(0.5, 2.0).recip().pieces == ((0.5, 2.0),)


def test_set_operations():
    U = IntervalSet.of(0, 1) | IntervalSet.of(0.5, 2) | IntervalSet.of(3, 4)
    assert U.pieces == ((0, 2), (3, 4))
    assert (U & IntervalSet.of(1, 3.5)).pieces == ((1, 2), (3, 3.5))
    assert IntervalSet.of(0.2, 0.4).subset_of(U)
    assert not IntervalSet.of(1.5, 3.5).subset_of(U)
    assert IntervalSet.of(-3, 1).abs_range() == (0.0, 3)


def test_bump_values_and_support():
    f = bump(0.5, 2.0)
    x = np.linspace(-3, 4, 57)
    np.testing.assert_allclose(f(x), np_bump(x, 0.5, 2.0), rtol=1e-14, atol=0)
    assert f.support[0].pieces == ((-1.5, 2.5),)
    assert f(0.5) == pytest.approx(math.exp(-1))


@pytest.mark.parametrize("order", [1, 2, 3])
def test_derivatives_match_finite_differences(order):
    f = tensor_bump((0.2, 1.0), (0.9, 0.6)) * (coord(0, 2) * coord(1, 2) + 2.0)
    g = f
    for _ in range(order):
        g = g.diff(0)
    x, y = np.array([0.1, 0.4, -0.3]), np.array([1.1, 0.8, 1.2])
    h = 1e-3
    num = f
    for _ in range(order - 1):
        num = num.diff(0)
    fd = (num(x + h, y) - num(x - h, y)) / (2 * h)
    np.testing.assert_allclose(g(x, y), fd, rtol=1e-4, atol=1e-6)


def test_bump_integral_against_scipy():
    ref = quad(lambda u: math.exp(-1 / (1 - u * u)), -1, 1, epsabs=1e-14)[0]
    assert integrate(bump(0.0, 1.0)) == pytest.approx(ref, rel=1e-8)
    tight = DEFAULT_SPEC.replace(tol=1e-13, max_depth=12)
    assert integrate(bump(0.0, 1.0), spec=tight) == pytest.approx(ref, rel=1e-12)
    f = tensor_bump((0.3, 1.5), (0.4, 0.5))
    assert integrate(f) == pytest.approx(ref ** 2 * 0.4 * 0.5, rel=1e-8)


def test_haar_measure_integral():
    f = tensor_bump((0.0, 1.5), (0.5, 0.5))
    ref = quad(lambda c: np_bump(np.array([c]), 1.5, 0.5)[0] / abs(c), 1.0, 2.0, epsabs=1e-14)[0]
    zpart = quad(lambda z: np_bump(np.array([z]), 0.0, 0.5)[0], -0.5, 0.5, epsabs=1e-14)[0]
    assert integrate(f, "haar_c") == pytest.approx(ref * zpart, rel=1e-9)
    with pytest.raises(SingularSupport):
        integrate(tensor_bump((0.0, 0.2), (0.5, 0.5)), "haar_c")


def test_panel_rule_integrates_polynomials_exactly():
    x, w = panel_rule(IntervalSet.of(-1, 2) | IntervalSet.of(3, 4), 3, 8)
    assert np.sum(w * x ** 5) == pytest.approx((2 ** 6 - 1) / 6 + (4 ** 6 - 3 ** 6) / 6, rel=1e-13)


def test_tolerance_not_met():
    spec = QuadratureSpec(order=2, max_depth=1, tol=1e-15)
    with pytest.raises(ToleranceNotMet):
        integrate(bump(0.0, 1.0), spec=spec)


def test_sup_norm_of_bump():
    f = tensor_bump((0.1, -0.4), (0.7, 0.3), scale=2.0)
    assert sup_norm(f) == pytest.approx(2 * math.exp(-2), rel=1e-8)


def test_integral_node_is_a_convolution():
    # (f * g)(x) = int f(t) g(x - t) dt on the real line
    f1, g1 = bump(0.0, 1.0), bump(0.5, 0.7)
    x, t = coord(0, 2), coord(1, 2)
    from axblab.funcspace import Compose
    kernel = mul(Compose(f1, [t]), Compose(g1, [x - t]))
    conv = Integral(kernel, [f1.support[0]], DEFAULT_SPEC)
    for xv in (-0.3, 0.4, 1.2):
        ref = quad(lambda s: np_bump(np.array([s]), 0, 1)[0] * np_bump(np.array([xv - s]), 0.5, 0.7)[0],
                   -1, 1, epsabs=1e-14, points=[xv - 1.2, xv + 0.2])[0]
        assert conv(xv) == pytest.approx(ref, rel=1e-8, abs=1e-14)
    # the derivative of a lazy integral differentiates under the sign
    h = 1e-4
    assert conv.diff(0)(0.4) == pytest.approx((conv(0.4 + h) - conv(0.4 - h)) / (2 * h), rel=1e-5)


def test_tensor_and_pullback():
    f, g = bump(0.0, 1.0), bump(1.0, 0.5)
    F = tensor(f, g)
    assert F(0.3, 1.2) == pytest.approx(f(0.3) * g(1.2))
    P = pullback(f, [coord(0, 2) + coord(1, 2)])
    assert P(0.2, 0.1) == pytest.approx(f(0.3))
