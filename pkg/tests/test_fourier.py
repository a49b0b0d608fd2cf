import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from axblab.errors import GridMismatch
from axblab.funcspace import (
    DUAL_IDENTITY, GridFn, dual_inv, dual_mul, fourier_at, fourier_bracket, inverse_fourier, partial_fourier,
    tensor_bump,
)
from axblab.funcspace.fourier import fd4


@pytest.fixture(scope="module")
def f():
    return tensor_bump((0.2, 1.0), (0.6, 0.4), chart="ba")


def test_gaussian_like_transform_at_zero(f):
    # at beta = 0 the transform is the b-integral
    from axblab.funcspace import integrate
    G = partial_fourier(f, np.array([0.0]), np.array([1.0]))
    g1 = tensor_bump((0.2,), (0.6,))
    assert G.values[0, 0] == pytest.approx(integrate(g1) * f(0.2, 1.0) / g1(0.2), rel=1e-10)


def test_translation_becomes_phase(f):
    from axblab.funcspace import Compose, coord
    shift = 0.3
    g = Compose(f, [coord(0, 2) - shift, coord(1, 2)], support=(f.support[0] + shift, f.support[1]))
    beta = np.linspace(-2, 2, 9)
    Ff = partial_fourier(f, beta, np.array([1.1])).values[:, 0]
    Fg = partial_fourier(g, beta, np.array([1.1])).values[:, 0]
    np.testing.assert_allclose(Fg, np.exp(-2j * np.pi * beta * shift) * Ff, atol=1e-12)


def test_round_trip_and_parseval(f):
    beta = np.arange(-12, 12 + 1e-9, 0.02)
    a = np.array([0.9, 1.0, 1.2])
    G = partial_fourier(f, beta, a)
    b = np.linspace(-0.5, 0.9, 15)
    back = inverse_fourier(G, b)
    B, Aa = np.meshgrid(b, a, indexing="ij")
    np.testing.assert_allclose(back.real, f(B, Aa), atol=1e-3)
    # Parseval in b at fixed a
    from scipy.integrate import quad
    lhs = np.sum(np.abs(G.values[:, 1]) ** 2) * G.dbeta
    rhs = quad(lambda x: float(f(x, 1.0)) ** 2, -0.4, 0.8, epsabs=1e-14)[0]
    assert lhs == pytest.approx(rhs, rel=1e-4)


def test_scattered_evaluation_matches_grid(f):
    beta, a = np.array([0.5, -1.0, 0.5]), np.array([1.0, 1.0, 1.2])
    G = partial_fourier(f, np.array([-1.0, 0.5]), np.array([1.0, 1.2]))
    np.testing.assert_allclose(fourier_at(f, beta, a), [G.values[1, 0], G.values[0, 0], G.values[1, 1]],
                               atol=1e-13)


def test_fd4_is_exact_on_quartics():
    x = np.linspace(-1, 2, 13)
    v = 3 * x ** 4 - x ** 3 + 2 * x
    np.testing.assert_allclose(fd4(v, x[1] - x[0], 0), 12 * x ** 3 - 3 * x ** 2 + 2, atol=1e-10)
    with pytest.raises(GridMismatch):
        fd4(np.ones(4), 0.1, 0)


def test_bracket_needs_shared_grid():
    G = GridFn(np.linspace(0, 1, 6), np.linspace(1, 2, 6), np.zeros((6, 6), complex))
    H = GridFn(np.linspace(0, 1, 6), np.linspace(1, 3, 6), np.zeros((6, 6), complex))
    with pytest.raises(GridMismatch):
        fourier_bracket(G, H)
    with pytest.raises(GridMismatch):
        GridFn(np.zeros(3), np.zeros(2), np.zeros((2, 3)))


def test_bracket_of_coordinates():
    beta, a = np.linspace(-1, 1, 9), np.linspace(0.5, 2, 9)
    Bg, Ag = np.meshgrid(beta, a, indexing="ij")
    F = GridFn(beta, a, Bg.astype(complex))
    G = GridFn(beta, a, Ag.astype(complex))
    # {beta, a} = -(a - 1)/(2 pi)
    np.testing.assert_allclose(fourier_bracket(F, G).values, -(Ag - 1) / (2 * np.pi), atol=1e-12)


frac = st.fractions(min_value=-5, max_value=5, max_denominator=20)
nz = frac.filter(lambda x: x != 0)


@given(frac, nz, frac, nz, frac, nz)
def test_dual_group_axioms_exact(b1, a1, b2, a2, b3, a3):
    p, q, r = (b1, a1), (b2, a2), (b3, a3)
    assert dual_mul(*dual_mul(*p, *q), *r) == dual_mul(*p, *dual_mul(*q, *r))
    assert dual_mul(*p, *DUAL_IDENTITY) == p and dual_mul(*DUAL_IDENTITY, *p) == p
    assert dual_mul(*p, *dual_inv(*p)) == DUAL_IDENTITY
