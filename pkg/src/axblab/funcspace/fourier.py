"""Partial Fourier transform in the ``b`` variable and grid calculus on the dual side.

``(F f)(beta, a) = int db exp(-2 pi i beta b) f(b, a)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GridMismatch, ToleranceNotMet
from .quadrature import DEFAULT_SPEC, panel_rule


@dataclass(frozen=True)
class GridFn:
    """Complex samples on a rectangular ``(beta, a)`` grid; cubic interpolation off-grid."""

    beta: np.ndarray
    a: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.beta.size, self.a.size):
            raise GridMismatch("values do not match the grid axes")

    @property
    def dbeta(self):
        return float(self.beta[1] - self.beta[0])

    @property
    def da(self):
        return float(self.a[1] - self.a[0])

    def same_grid(self, other):
        return (self.beta.shape == other.beta.shape and self.a.shape == other.a.shape
                and np.array_equal(self.beta, other.beta) and np.array_equal(self.a, other.a))

    def like(self, values):
        return GridFn(self.beta, self.a, np.asarray(values))

    def __call__(self, beta, a):
        from scipy.interpolate import RegularGridInterpolator

        pts = np.stack(np.broadcast_arrays(np.asarray(beta, float), np.asarray(a, float)), axis=-1)
        re = RegularGridInterpolator((self.beta, self.a), self.values.real, method="cubic")
        im = RegularGridInterpolator((self.beta, self.a), self.values.imag, method="cubic")
        return re(pts) + 1j * im(pts)


def _transform(f, beta, a, spec, max_width, tol):
    """Direct quadrature of the transform on the tensor grid ``beta x a``."""
    bs = f.support[0]

    def run(p):
        x, w = panel_rule(bs, p, spec.order, max_width=max_width)
        B, Aa = np.meshgrid(x, a, indexing="ij")
        fv = f.values((B.ravel(), Aa.ravel())).reshape(x.size, a.size)
        E = np.exp(-2j * np.pi * np.outer(beta, x))
        return E @ (w[:, None] * fv)

    prev = run(spec.initial_panels)
    p = spec.initial_panels
    for _ in range(spec.max_depth):
        p *= 2
        cur = run(p)
        err, scale = np.max(np.abs(cur - prev)), np.max(np.abs(cur))
        if err <= tol * max(scale, 1.0) + spec.atol:
            return cur
        prev = cur
    raise ToleranceNotMet(f"partial Fourier transform: error {err:.3e}")


def partial_fourier(f, beta, a, spec=DEFAULT_SPEC, tol=None):
    """Transform of a two-variable ``(b, a)`` function on the grid ``beta x a``.

    Panels are no wider than ``1 / (4 max|beta|)`` so each holds at most a
    quarter period of the oscillation.
    """
    beta, a = np.asarray(beta, float), np.asarray(a, float)
    bmax = float(np.max(np.abs(beta))) if beta.size else 0.0
    width = 1.0 / (4.0 * bmax) if bmax > 0 else None
    vals = _transform(f, beta, a, spec, width, spec.tol if tol is None else tol)
    return GridFn(beta, a, vals)


def fourier_at(f, beta, a, spec=DEFAULT_SPEC):
    """Transform at scattered points ``(beta_k, a_k)``."""
    beta, a = np.broadcast_arrays(np.asarray(beta, float), np.asarray(a, float))
    shape = beta.shape
    beta, a = beta.ravel(), a.ravel()
    out = np.empty(beta.size, complex)
    for av in np.unique(a):
        sel = a == av
        out[sel] = partial_fourier(f, beta[sel], np.array([av]), spec).values[:, 0]
    return out.reshape(shape)


def inverse_fourier(G: GridFn, b):
    """``b -> int dbeta exp(2 pi i beta b) G(beta, a)`` by the trapezoid rule on the grid.

    Accurate when ``G`` has decayed at the window edges; returns shape ``(b, a)``.
    """
    b = np.asarray(b, float)
    w = np.full(G.beta.size, G.dbeta)
    w[0] = w[-1] = 0.5 * G.dbeta
    E = np.exp(2j * np.pi * np.outer(b, G.beta))
    return E @ (w[:, None] * G.values)


def fourier_2leg(F, beta1, a1, beta2, a2, spec=DEFAULT_SPEC, tol=None):
    """Transform of a four-variable ``(b1, a1, b2, a2)`` function in both ``b`` variables.

    Returns an array indexed ``[beta1, beta2]`` for each fixed ``(a1, a2)``.
    """
    tol = spec.tol if tol is None else tol
    beta1, beta2 = np.asarray(beta1, float), np.asarray(beta2, float)
    bmax = max(np.max(np.abs(beta1)), np.max(np.abs(beta2)), 1e-300)
    width = 1.0 / (4.0 * bmax)

    def run(p):
        x1, w1 = panel_rule(F.support[0], p, spec.order, max_width=width)
        x2, w2 = panel_rule(F.support[2], p, spec.order, max_width=width)
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")
        v = F.values((X1.ravel(), np.full(X1.size, a1), X2.ravel(), np.full(X1.size, a2))).reshape(X1.shape)
        E1 = np.exp(-2j * np.pi * np.outer(beta1, x1))
        E2 = np.exp(-2j * np.pi * np.outer(beta2, x2))
        return E1 @ (w1[:, None] * v * w2[None, :]) @ E2.T

    p = spec.initial_panels
    prev = run(p)
    for _ in range(spec.max_depth):
        p *= 2
        cur = run(p)
        err, scale = np.max(np.abs(cur - prev)), np.max(np.abs(cur))
        if err <= tol * max(scale, 1.0) + spec.atol:
            return cur
        prev = cur
    raise ToleranceNotMet(f"two-leg Fourier transform: error {err:.3e}")


# finite differences -----------------------------------------------------------------

_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_EDGE = [np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0,
         np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0]


def fd4(values, h, axis):
    """Fourth-order first derivative along ``axis``; one-sided stencils at the edges."""
    v = np.moveaxis(np.asarray(values), axis, 0)
    n = v.shape[0]
    if n < 5:
        raise GridMismatch("need at least 5 grid points for fourth-order differences")
    out = np.empty_like(v)
    out[2:-2] = sum(c * v[k:n - 4 + k] for k, c in enumerate(_CENTRAL) if c != 0)
    out[0] = sum(c * v[k] for k, c in enumerate(_EDGE[0]))
    out[1] = sum(c * v[k] for k, c in enumerate(_EDGE[1]))
    out[-1] = -sum(c * v[n - 1 - k] for k, c in enumerate(_EDGE[0]))
    out[-2] = -sum(c * v[n - 1 - k] for k, c in enumerate(_EDGE[1]))
    return np.moveaxis(out / h, 0, axis)


def grid_partials(G: GridFn):
    """``(d/dbeta, d/da)`` of a grid function."""
    return fd4(G.values, G.dbeta, 0), fd4(G.values, G.da, 1)


def fourier_bracket(F: GridFn, G: GridFn):
    """``(a - 1)/(2 pi) (dF/da dG/dbeta - dG/da dF/dbeta)`` on the shared grid."""
    if not F.same_grid(G):
        raise GridMismatch("bracket needs functions on the same grid")
    Fb, Fa = grid_partials(F)
    Gb, Ga = grid_partials(G)
    factor = (F.a[None, :] - 1.0) / (2.0 * np.pi)
    return F.like(factor * (Fa * Gb - Ga * Fb))


# the dual group --------------------------------------------------------------------

def dual_mul(beta1, a1, beta2, a2):
    """``(beta1, a1)(beta2, a2) = (beta1 + beta2 / a1, a1 a2)``."""
    return beta1 + beta2 / a1, a1 * a2


def dual_inv(beta, a):
    return -a * beta, 1 / a


DUAL_IDENTITY = (0, 1)


__all__ = [
    "GridFn", "partial_fourier", "fourier_at", "inverse_fourier", "fourier_2leg", "fd4", "grid_partials",
    "fourier_bracket", "dual_mul", "dual_inv", "DUAL_IDENTITY",
]
