"""Convolution algebras of the groupoids, norms and the coproduct morphisms.

Functions on ``G_B`` live in the ``(z, c)`` chart (tag ``"zc"``), functions on
the deformed groupoids ``Gamma_s`` in group coordinates (tag ``"ba"``).
Convolutions are lazy: they return :class:`~axblab.funcspace.Integral`
nodes that integrate on demand and can be differentiated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ChartMismatch
from .funcspace import (
    Abs2, AbsPow, Compose, Const, Coord, Integral, IntervalSet, Recip, add, bump, integrate, mul, tensor_bump,
)
from .funcspace.intervals import FULL, support_bounded
from .funcspace.quadrature import DEFAULT_SPEC, adaptive, panel_rule
from .group import modular_coefficients

ZC, BA = "zc", "ba"


@dataclass(frozen=True)
class HalfDensityConvention:
    """Normalizations that turn the density-valued formulas into scalar integrals.

    Each constant is the value of the reference density on its reference
    vector; the induced weights are the factors that appear in the
    convolution, norm and representation integrals.
    """

    left_haar_on_dc: float = 1.0        # lambda_0(z, 1)(d_c)
    deformed_left_on_db: float = 1.0    # lambda_s(0, a)(d_b + s d_a)
    fiber_half_density: str = "|dz|^(1/2)"
    psi_on_da: str = "1/|a|"

    def haar_c(self, c):
        """Weight of ``dc/|c|`` in the ``G_B`` convolution."""
        return self.left_haar_on_dc / np.abs(c)

    def deformed(self, b, s):
        """Weight of ``db/|1+sb|`` in the ``Gamma_s`` convolution."""
        return self.deformed_left_on_db / np.abs(1.0 + s * b)

    def l2_gamma(self, c):
        """Weight of ``dz dc/c^2`` in the ``G_B`` inner product."""
        return self.left_haar_on_dc ** 2 / np.asarray(c, float) ** 2

    def psi(self, a):
        return 1.0 / np.abs(a)


HALF_DENSITIES = HalfDensityConvention()


def _need(f, chart):
    if f.chart is not None and f.chart != chart:
        raise ChartMismatch(f"expected a function in chart {chart!r}, got {f.chart!r}")


def modular_weight(which, b, a, power):
    """``j_which(b, a)^power`` as an expression, from the group-core coefficients."""
    alpha, beta, gamma = modular_coefficients(which)
    n = b.nvars
    det = add(mul(Const(alpha, n), a), mul(Const(beta, n), b), Const(gamma, n))
    if isinstance(det, Const):
        return Const(abs(det.value) ** power, n)
    return AbsPow(det, power)


def c_param_coords(gamma):
    """Group coordinates ``(gamma - 1, gamma)`` of the ``C`` element with parameter ``gamma``."""
    return gamma - 1.0, gamma


# G_B --------------------------------------------------------------------------

def conv_gb(f1, f2, spec=DEFAULT_SPEC):
    """``(f1 * f2)(z, c) = int dc1/|c1| f1(z, c1) f2(z/c1, c/c1)``."""
    _need(f1, ZC)
    _need(f2, ZC)
    z, c, t = Coord(0, 3), Coord(1, 3), Coord(2, 3)
    zf, cf = f1.support
    kernel = mul(
        Compose(f1, [z, t], support=(zf, FULL, cf)),
        Compose(f2, [z * Recip(t), c * Recip(t)]),
        AbsPow(t, -1.0),
    )
    zs = zf & (cf * f2.support[0])
    cs = cf * f2.support[1]
    return Integral(kernel, [cf], spec, narrow=True, support=(zs, cs), chart=ZC)


def pi_id(f, psi, spec=DEFAULT_SPEC):
    """The identity representation acts by left convolution."""
    return conv_gb(f, psi, spec)


def involution_gb(f):
    """``f*(z, c) = conj f(z/c, 1/c)``."""
    _need(f, ZC)
    z, c = Coord(0, 2), Coord(1, 2)
    cs = f.support[1].recip()
    zs = f.support[0] * cs
    return Compose(f, [z * Recip(c), Recip(c)], support=(zs, cs), chart=ZC).conj().with_chart(ZC)


def _sup_over(fiber, lo, hi, n, refine):
    grid = np.linspace(lo, hi, n)
    vals = fiber(grid)
    k = int(np.argmax(vals))
    best = float(vals[k])
    if refine and best > 0 and n > 1:
        step = grid[1] - grid[0]
        a, b = max(lo, grid[k] - step), min(hi, grid[k] + step)
        res = minimize_scalar(lambda x: -float(fiber(np.array([x]))[0]), bounds=(a, b),
                              method="bounded", options={"xatol": 1e-6 * (hi - lo + 1), "maxiter": 25})
        best = max(best, -res.fun)
    return best


def _fiber_integral(F, outer, inner_set, point, weight, spec):
    """``outer -> int |F(point(outer, t))| weight(t) dt`` on a batch of outer values."""

    def run(p):
        t, w = panel_rule(inner_set, p, spec.order)
        O = np.repeat(outer, t.size)
        T = np.tile(t, outer.size)
        X = point(O, T)
        v = np.abs(F.values(X)) * weight(T)
        return v.reshape(outer.size, t.size) @ w

    return adaptive(run, spec, tol=spec.norm_tol, what="fiber integral")


def norm_l_gb(f, spec=DEFAULT_SPEC, n=25, refine=True):
    """``sup_z int dc/|c| |f(z, c)|``."""
    zs, cs = f.support
    if not support_bounded(f.support):
        raise ValueError("needs bounded support")

    def fiber(zz):
        return _fiber_integral(f, zz, cs, lambda O, T: (O, T), lambda T: 1.0 / np.abs(T), spec)

    return max(_sup_over(fiber, a, b, n, refine) for a, b in zs.pieces)


def norm_r_gb(f, spec=DEFAULT_SPEC, n=25, refine=True):
    return norm_l_gb(involution_gb(f), spec, n, refine)


def norm_0_gb(f, spec=DEFAULT_SPEC, n=25, refine=True):
    return max(norm_l_gb(f, spec, n, refine), norm_r_gb(f, spec, n, refine))


def norm_l2(f, spec=DEFAULT_SPEC):
    """``(int dz dc/c^2 |f|^2)^(1/2)``; the same formula serves ``db da/a^2``."""
    sq = Abs2(f)
    val = integrate(sq, "l2_gamma", spec, tol=spec.norm_tol)
    return float(np.sqrt(abs(val)))


def norm_two_weighted(f, spec=DEFAULT_SPEC):
    """``(int dz dc / |z c| |f|^2)^(1/2)``; infinite when the z-support meets 0."""
    if f.support[0].distance_to(0.0) == 0.0:
        return float("inf")
    sq = Abs2(f)
    val = integrate(sq, lambda X: 1.0 / np.abs(X[0] * X[1]), spec, tol=spec.norm_tol)
    return float(np.sqrt(abs(val)))


PROBES_VERSION = "probes-v1"


def probe_set_gb():
    """Fixed probe vectors for operator-norm lower bounds on ``L^2(G_B)``."""
    spots = [((0.0, 1.0), (0.8, 0.4)), ((0.5, 1.5), (0.6, 0.5)), ((-0.6, 0.8), (0.7, 0.4)),
             ((1.2, 2.0), (0.8, 0.8)), ((0.0, -1.2), (1.0, 0.5)), ((-1.0, 0.6), (0.5, 0.3)),
             ((0.3, 1.0), (2.0, 0.6)), ((0.8, -0.8), (0.6, 0.5))]
    return [tensor_bump(c, h, chart=ZC) for c, h in spots]


def op_lower_bound_gb(f, probes=None, spec=DEFAULT_SPEC):
    """``max ||f * psi|| / ||psi||`` over the probe set."""
    probes = probes or probe_set_gb()
    return max(norm_l2(conv_gb(f, p, spec), spec) / norm_l2(p, spec) for p in probes)


def identity_rep_bound(f, psi, spec=DEFAULT_SPEC):
    """Return ``(||pi_id(f) psi||, ||psi|| ||f||_2)``."""
    return norm_l2(pi_id(f, psi, spec), spec), norm_l2(psi, spec) * norm_two_weighted(f, spec)


def crossed_product_conv(F, G, spec=DEFAULT_SPEC):
    """Crossed-product convolution for ``R`` with the right action ``x . h = x / h``.

    ``(F * G)(x, h) = int dh'/|h'| F(x, h') G(x . h', h'^{-1} h)``.
    """
    x, h, t = Coord(0, 3), Coord(1, 3), Coord(2, 3)
    kernel = mul(Compose(F, [x, t]), Compose(G, [x * Recip(t), h * Recip(t)]), AbsPow(t, -1.0))
    return Integral(kernel, [F.support[1]], spec, narrow=True, support=(FULL, F.support[1] * G.support[1]))


def dilation_modulus(h):
    """``|det Ad_h|^{-1}`` for the abelian group of non-zero reals."""
    ad = np.ones(np.shape(h) + (1, 1))
    return 1.0 / np.abs(np.linalg.det(ad))


def crossed_product_embed(f):
    """``f -> delta^{-1/2} f``; the modulus is computed from ``Ad`` and is constant."""
    return mul(Const(float(dilation_modulus(1.0)) ** -0.5, 2), f)


# Gamma_s ------------------------------------------------------------------------

def conv_s(f, g, s, spec=DEFAULT_SPEC, form=1):
    """Deformed convolution on ``Gamma_s`` in group coordinates.

    ``form=1`` integrates over the first argument of ``f``; ``form=2`` uses
    the equivalent expression integrating over the first argument of ``g``.
    """
    _need(f, BA)
    _need(g, BA)
    b, a, t = Coord(0, 3), Coord(1, 3), Coord(2, 3)
    one = Const(1.0, 3)
    den = one + s * t
    if form == 1:
        kernel = mul(
            Compose(f, [t, a + s * (t - b)], support=(FULL, FULL, f.support[0])),
            Compose(g, [(b - t) * Recip(den), a * Recip(den)]),
            AbsPow(den, -1.0),
        )
        tset = f.support[0]
    else:
        kernel = mul(
            Compose(f, [(b - t) * Recip(den), a - s * t * (one + s * b) * Recip(den)]),
            Compose(g, [t, a * den * Recip(one + s * b)], support=(FULL, FULL, g.support[0])),
            AbsPow(den, -1.0),
        )
        tset = g.support[0]
    return Integral(kernel, [tset], spec, narrow=True, support=conv_s_support(f.support, g.support, s), chart=BA)


def conv_s_support(sf, sg, s):
    """Interval-arithmetic support box of ``f *_s g``."""
    bf, af = sf
    bg, ag = sg
    scale = 1.0 + s * bf
    return (bf + bg * scale, ag * scale)


def involution_s(f, s):
    """``f^{*s}(b, a) = conj f(-b/(1+sb), (a - sb)/(1+sb))``, the pullback along the groupoid inverse."""
    _need(f, BA)
    b, a = Coord(0, 2), Coord(1, 2)
    den = Const(1.0, 2) + s * b
    bs, as_ = f.support
    scale = (1.0 + s * bs).recip()
    sup = ((-bs) * scale, (as_ - s * bs) * scale)
    return Compose(f, [-b * Recip(den), (a - s * b) * Recip(den)], support=sup, chart=BA).conj().with_chart(BA)


def norm_l_s(f, s, spec=DEFAULT_SPEC, n=21, refine=True):
    """``sup_a int db/|1+sb| |f(b, a + s b)|``."""
    bs, as_ = f.support
    if not support_bounded(f.support):
        raise ValueError("needs bounded support")
    arange = as_ - s * bs

    def fiber(aa):
        return _fiber_integral(f, aa, bs, lambda O, T: (T, O + s * T), lambda T: 1.0 / np.abs(1 + s * T), spec)

    return max(_sup_over(fiber, lo, hi, n, refine) for lo, hi in arange.pieces)


def norm_r_s(f, s, spec=DEFAULT_SPEC, n=21, refine=True):
    return norm_l_s(involution_s(f, s), s, spec, n, refine)


def norm_0_s(f, s, spec=DEFAULT_SPEC, n=21, refine=True):
    return max(norm_l_s(f, s, spec, n, refine), norm_r_s(f, s, spec, n, refine))


def probe_set_s():
    spots = [((0.0, 1.0), (0.8, 0.4)), ((0.5, 1.4), (0.6, 0.4)), ((-0.7, 0.9), (0.7, 0.3)),
             ((0.2, -1.0), (1.0, 0.5))]
    return [tensor_bump(c, h, chart=BA) for c, h in spots]


def op_lower_bound_s(f, s, probes=None, spec=DEFAULT_SPEC):
    probes = probes or probe_set_s()
    return max(norm_l2(conv_s(f, p, s, spec), spec) / norm_l2(p, spec) for p in probes)


# coproduct morphisms ---------------------------------------------------------------

def _leg_coords(n):
    return [Coord(i, n) for i in range(n)]


def delta0_hat(f, F, spec=DEFAULT_SPEC):
    """Undeformed coproduct morphism acting on a two-leg function.

    ``(z1, c1, z2, c2) -> int dg/|g| j_C^{-1/2} f(z1 + z2, g) F(z1/g, c1/g, z2/g, c2/g)``.
    """
    _need(f, ZC)
    z1, c1, z2, c2, g = _leg_coords(5)
    inv = Recip(g)
    cf = f.support[1]
    gb, ga = c_param_coords(g)
    kernel = mul(
        Compose(f, [z1 + z2, g], support=(FULL, FULL, FULL, FULL, cf)),
        Compose(F, [z1 * inv, c1 * inv, z2 * inv, c2 * inv]),
        AbsPow(g, -1.0),
        modular_weight("C", gb, ga, -0.5),
    )
    sup = (F.support[0] * cf, F.support[1] * cf, F.support[2] * cf, F.support[3] * cf)
    return Integral(kernel, [cf], spec, narrow=True, support=sup, chart=ZC)


def delta0_hat_3leg(kind, F1, F2, spec=DEFAULT_SPEC):
    """``(id x delta0)^`` (``kind="id_delta"``) or ``(delta0 x id)^`` (``"delta_id"``).

    ``F1`` is a two-leg function, ``F2`` a three-leg function; the result is
    a three-leg function given by a double integral over the ``C`` factors.
    """
    z1, c1, z2, c2, z3, c3, g1, g2 = _leg_coords(8)
    i1, i2 = Recip(g1), Recip(g2)
    ranges = [F1.support[1], F1.support[3]]
    if kind == "id_delta":
        outer = [z1, g1, z2 + z3, g2]
        inner = [z1 * i1, c1 * i1, z2 * i2, c2 * i2, z3 * i2, c3 * i2]
        wb, wa = c_param_coords(g2)
        sup = (F2.support[0] * ranges[0], F2.support[1] * ranges[0], F2.support[2] * ranges[1],
               F2.support[3] * ranges[1], F2.support[4] * ranges[1], F2.support[5] * ranges[1])
    elif kind == "delta_id":
        outer = [z1 + z2, g1, z3, g2]
        inner = [z1 * i1, c1 * i1, z2 * i1, c2 * i1, z3 * i2, c3 * i2]
        wb, wa = c_param_coords(g1)
        sup = (F2.support[0] * ranges[0], F2.support[1] * ranges[0], F2.support[2] * ranges[0],
               F2.support[3] * ranges[0], F2.support[4] * ranges[1], F2.support[5] * ranges[1])
    else:
        raise ValueError(f"unknown kind {kind!r}")
    kernel = mul(
        Compose(F1, outer, support=(FULL,) * 6 + tuple(ranges)),
        Compose(F2, inner),
        AbsPow(g1, -1.0),
        AbsPow(g2, -1.0),
        modular_weight("C", wb, wa, -0.5),
    )
    return Integral(kernel, ranges, spec, narrow=True, support=sup, chart=ZC)


def random_bump_gb(rng, zc=(-1.5, 1.5), cc=(0.6, 2.0), width=(0.2, 0.6), negative_c=False, avoid_z=None):
    """Random tensor bump in the ``(z, c)`` chart with c-support away from 0."""
    while True:
        zw = rng.uniform(*width)
        cw = rng.uniform(*width)
        z0 = rng.uniform(*zc)
        c0 = rng.uniform(max(cc[0], cw + 0.1), cc[1])
        if avoid_z is not None and abs(z0 - avoid_z) <= zw + 0.1:
            continue
        if negative_c and rng.random() < 0.5:
            c0 = -c0
        return tensor_bump((z0, c0), (zw, cw), chart=ZC, scale=rng.uniform(0.5, 1.5))


def random_bump_ba(rng, M=2.0, width=(0.2, 0.5)):
    """Random tensor bump whose support sits inside ``K_M``."""
    bw = rng.uniform(*width)
    aw = rng.uniform(*width)
    b0 = rng.uniform(-M + bw, M - bw)
    a0 = rng.uniform(1.0 / M + aw, M - aw)
    return tensor_bump((b0, a0), (bw, aw), chart=BA, scale=rng.uniform(0.5, 1.5))


__all__ = [
    "HalfDensityConvention", "HALF_DENSITIES",
    "conv_gb", "pi_id", "involution_gb", "norm_l_gb", "norm_r_gb", "norm_0_gb", "norm_l2",
    "norm_two_weighted", "probe_set_gb", "op_lower_bound_gb", "identity_rep_bound", "crossed_product_conv",
    "crossed_product_embed", "conv_s", "conv_s_support", "involution_s", "norm_l_s", "norm_r_s",
    "norm_0_s", "probe_set_s", "op_lower_bound_s", "delta0_hat", "delta0_hat_3leg", "modular_weight",
    "random_bump_gb", "random_bump_ba", "bump", "IntervalSet",
]
