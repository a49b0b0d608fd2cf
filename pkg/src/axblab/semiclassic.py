"""The deformation family ``Gamma_s``: deformed products, the Poisson bracket and their limits.

Functions live in group coordinates ``(b, a)``.  Differences that are small
for small ``s`` are always built as one integral of a difference kernel, so
the ``O(s)`` residuals do not come out of cancellations between separately
rounded integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import BA, conv_s, conv_s_support, involution_s, norm_0_s, norm_l2, op_lower_bound_s
from .errors import DeformationOutOfRange, SupportTooLarge
from .funcspace import AbsPow, Compose, Const, Coord, Integral, IntervalSet, Recip, add, mul
from .funcspace.fourier import fourier_2leg, fourier_at, partial_fourier, fourier_bracket
from .funcspace.intervals import FULL
from .funcspace.quadrature import DEFAULT_SPEC, adaptive, tensor_rule

COPRODUCT_BOX_K = 4.0
# residual tables only need a few digits to fit a slope
TABLE_SPEC = DEFAULT_SPEC.replace(norm_tol=1e-3, tol=1e-5)


@dataclass(frozen=True)
class DeformationParam:
    s: float
    M: float = 2.0

    def __post_init__(self):
        if self.M <= 1:
            raise ValueError("M must exceed 1")

    @property
    def admissible(self):
        return abs(self.s) < 1.0 / self.M ** 2

    def require(self):
        if not self.admissible:
            raise DeformationOutOfRange(f"|s| = {abs(self.s)} is not below 1/M^2 = {1.0 / self.M ** 2}")
        return self


def k_m_box(M):
    """``K_M = {|b| <= M, 1/M <= |a| <= M}``."""
    return (IntervalSet.of(-M, M), IntervalSet.of(-M, -1.0 / M) | IntervalSet.of(1.0 / M, M))


def in_k_m(support, M):
    kb, ka = k_m_box(M)
    return support[0].subset_of(kb) and support[1].subset_of(ka)


def q_s(f, d: DeformationParam):
    """``Q_s``: the same function read on ``Gamma_s``."""
    d.require()
    if not in_k_m(f.support, d.M):
        raise SupportTooLarge(f"support {f.support} is not inside K_{d.M}")
    return f


# the Poisson bracket ---------------------------------------------------------------

def _ba(n=2):
    return Coord(0, n), Coord(1, n)


def poisson_bracket(f, g, spec=DEFAULT_SPEC):
    """``{f, g} = (a - 1)[(d_a f) * (b g) - (d_a g) * (b f)]`` with the undeformed product."""
    b, a = _ba()
    bf, bg = mul(b, f).with_chart(BA), mul(b, g).with_chart(BA)
    left = conv_s(f.diff(1).with_chart(BA), bg, 0.0, spec)
    right = conv_s(g.diff(1).with_chart(BA), bf, 0.0, spec)
    return mul(a - 1.0, add(left, -right)).with_chart(BA)


def _pieces(f, g, s):
    """Kernels of ``f *_s g`` and ``g *_s f`` over the ``b``-support of ``f``.

    Variables ``(b, a, t)``; the second product uses the expression that
    integrates over the first argument of its right factor.
    """
    b, a, t = Coord(0, 3), Coord(1, 3), Coord(2, 3)
    one = Const(1.0, 3)
    den = one + s * t
    fs = (FULL, FULL, f.support[0])
    fg = mul(Compose(f, [t, a + s * (t - b)], support=fs),
             Compose(g, [(b - t) * Recip(den), a * Recip(den)]), AbsPow(den, -1.0))
    gf = mul(Compose(g, [(b - t) * Recip(den), a - s * t * (one + s * b) * Recip(den)]),
             Compose(f, [t, a * den * Recip(one + s * b)], support=fs), AbsPow(den, -1.0))
    return fg, gf


def _flat_pieces(f, g):
    """The ``s = 0`` kernels ``f(t, a) g(b - t, a)`` and the bracket kernel."""
    b, a, t = Coord(0, 3), Coord(1, 3), Coord(2, 3)
    fs = (FULL, FULL, f.support[0])
    ft = Compose(f, [t, a], support=fs)
    dft = Compose(f.diff(1), [t, a], support=fs)
    gt = Compose(g, [b - t, a])
    dgt = Compose(g.diff(1), [b - t, a])
    prod = mul(ft, gt)
    bracket = mul(a - 1.0, add(mul(dft, b - t, gt), -mul(t, ft, dgt)))
    return prod, bracket


def _hull_support(*sups):
    out = sups[0]
    for s in sups[1:]:
        out = tuple((x | y).hull() for x, y in zip(out, s))
    return out


def product_residual(f, g, s, spec=DEFAULT_SPEC):
    """``f *_s g - f * g`` as one integral."""
    fg, _ = _pieces(f, g, s)
    prod, _ = _flat_pieces(f, g)
    sup = _hull_support(conv_s_support(f.support, g.support, s), conv_s_support(f.support, g.support, 0.0))
    return Integral(add(fg, -prod), [f.support[0]], spec, support=sup, chart=BA, narrow=True)


def commutator_residual(f, g, s, spec=DEFAULT_SPEC):
    """``(1/s)[f, g]_s - {f, g}`` as one integral (``s != 0``)."""
    fg, gf = _pieces(f, g, s)
    _, bracket = _flat_pieces(f, g)
    kernel = add(mul(Const(1.0 / s, 3), add(fg, -gf)), -bracket)
    sup = _hull_support(conv_s_support(f.support, g.support, s), conv_s_support(g.support, f.support, s),
                        conv_s_support(f.support, g.support, 0.0), conv_s_support(g.support, f.support, 0.0))
    return Integral(kernel, [f.support[0]], spec, support=sup, chart=BA, narrow=True)


def involution_residual(f, s):
    """``Q_s(f*)^{*s} - Q_s(f)``."""
    return add(involution_s(involution_s(f, 0.0), s), -f).with_chart(BA)


# residual tables ---------------------------------------------------------------------

@dataclass
class ResidualTable:
    s: list
    columns: dict
    slopes: dict = field(default_factory=dict)
    intervals: dict = field(default_factory=dict)
    seed: int | None = None
    spec: dict = field(default_factory=dict)

    def fit(self):
        for name, col in self.columns.items():
            self.slopes[name], self.intervals[name] = loglog_slope(self.s, col)
        return self

    def rows(self):
        names = sorted(self.columns)
        return [dict(s=s, **{n: self.columns[n][i] for n in names}) for i, s in enumerate(self.s)]

    def monotone(self, name, slack=0.05):
        """Values decrease along the (decreasing) ``s`` grid, allowing ``slack`` relative noise."""
        col = self.columns[name]
        return all(col[i + 1] <= col[i] * (1 + slack) for i in range(len(col) - 1))


def loglog_slope(s, values):
    """Least-squares slope of ``log values`` against ``log |s|`` with a 95% interval."""
    from scipy import stats

    x, y = np.log(np.abs(np.asarray(s, float))), np.log(np.asarray(values, float))
    fit = stats.linregress(x, y)
    n = x.size
    half = stats.t.ppf(0.975, n - 2) * fit.stderr if n > 2 else math.inf
    return float(fit.slope), (float(fit.slope - half), float(fit.slope + half))


def s_grid(exponents=(-1.0, -1.5, -2.0, -2.5, -3.0)):
    return [10.0 ** e for e in exponents]


def convergence_table(f, g, s_values, M=2.0, spec=TABLE_SPEC, n=11, refine=False, seed=None):
    """``r2, r3, r4`` in the ``||.||_{0,s}`` norm along a decreasing ``s`` grid."""
    s_values = list(s_values)
    if any(b >= a for a, b in zip(s_values, s_values[1:])):
        raise ValueError("s grid must be strictly decreasing")
    if min(abs(x) for x in s_values) < 100 * spec.tol * (1 - 1e-9):
        raise DeformationOutOfRange(f"smallest s must be at least 100 * tol = {100 * spec.tol}")
    cols = {"r2": [], "r3": [], "r4": []}
    for s in s_values:
        d = DeformationParam(s, M).require()
        q_s(f, d), q_s(g, d)
        cols["r2"].append(norm_0_s(involution_residual(f, s), s, spec, n=n, refine=refine))
        cols["r3"].append(norm_0_s(product_residual(f, g, s, spec), s, spec, n=n, refine=refine))
        cols["r4"].append(norm_0_s(commutator_residual(f, g, s, spec), s, spec, n=n, refine=refine))
    snap = {k: getattr(spec, k) for k in ("order", "tol", "max_depth", "grid_density", "norm_tol")}
    return ResidualTable(s_values, cols, seed=seed, spec=snap).fit()


# support boxes -----------------------------------------------------------------------

def product_support_box(M, s):
    """Support bound for ``f *_s g`` with ``f, g`` supported in ``K_M``."""
    s = abs(s)
    amin, amax = 1.0 / (M * (1.0 + M * M * s)), M * (1.0 + s * M)
    bmax = M * (2.0 + s * M)
    return (IntervalSet.of(-bmax, bmax), IntervalSet.of(-amax, -amin) | IntervalSet.of(amin, amax))


def box_contains(inner, outer, rtol=1e-12):
    """Box containment; endpoints computed in floating point may differ from the bound in the last bits."""
    return all(i.subset_of(o, rtol) for i, o in zip(inner, outer))


def product_support_escape(f, g, s, rng, n=400, spec=DEFAULT_SPEC):
    """Largest ``|f *_s g|`` at random points outside its computed support box.

    The product is rebuilt without a declared support so the values come from
    the integral itself.
    """
    ref = conv_s(f, g, s, spec)
    bare = Integral(ref.kernel, ref.tsets, spec, narrow=True, chart=BA)
    box = ref.support
    pad = [(s_.lo - 1.0, s_.hi + 1.0) for s_ in (x.hull() for x in box)]
    P = [rng.uniform(lo, hi, 4 * n) for lo, hi in pad]
    inside = box[0].contains(P[0]) & box[1].contains(P[1])
    P = tuple(p[~inside][:n] for p in P)
    return float(np.max(np.abs(bare.values(P)))) if P[0].size else 0.0


def coproduct_support_box(M, k=COPRODUCT_BOX_K):
    """The support bound for ``delta_s(f) F`` when ``|s| < 1/(k M^2)``."""

    def sym(lo, hi):
        return IntervalSet.of(-hi, -lo) | IntervalSet.of(lo, hi)

    return (IntervalSet.of(-(2 * M + 1 / k), 2 * M + 1 / k), sym(1 / M - 1 / (k * M * M), M + 1 / k),
            IntervalSet.of(-(2 * M * M + M * (1 + 2 / k)), 2 * M * M + M * (1 + 2 / k)),
            sym(1 / M - 2 / (k * M), M * (1 + 2 / k)))


def delta_s_support(f_support, F_support, s):
    """Interval-arithmetic support box of ``delta_s(f) F``.

    Points in the support satisfy ``a1 = v1 (1 + s b)``, ``b1 = b + u1 (1 + s b)``
    and, with ``D = a1 - s b1``, ``b2 = u2 (1 + s b/D) + b/D``, ``a2 = v2 (1 + s b/D)``
    for ``b`` in the support of ``f`` and ``(u1, v1, u2, v2)`` in that of ``F``.
    """
    bf = f_support[0]
    u1, v1, u2, v2 = F_support
    scale = 1.0 + s * bf
    a1 = v1 * scale
    b1 = bf + u1 * scale
    D = v1 * scale - s * bf - s * u1 * scale
    ratio = bf * D.recip()
    b2 = u2 * (1.0 + s * ratio) + ratio
    a2 = v2 * (1.0 + s * ratio)
    return (b1, a1, b2, a2)


# the deformed coproduct ------------------------------------------------------------

def _delta_kernel(f, F, s):
    b1, a1, b2, a2, b = (Coord(i, 5) for i in range(5))
    one = Const(1.0, 5)
    den = one + s * b
    D = a1 - s * b1
    fs = (FULL,) * 4 + (f.support[0],)
    return mul(
        Compose(f, [b, s * b + D * (a2 - s * b2)], support=fs),
        Compose(F, [(b1 - b) * Recip(den), a1 * Recip(den), (b2 * D - b) * Recip(D + s * b),
                    a2 * D * Recip(D + s * b)]),
        AbsPow(den, -1.0),
    )


def delta_s_hat(f, F, d: DeformationParam, spec=DEFAULT_SPEC, k=COPRODUCT_BOX_K):
    """``(delta_s(f) F)(b1, a1, b2, a2) = int db/|1+sb| f(b, sb + (a1-sb1)(a2-sb2)) F(...)``."""
    if abs(d.s) >= 1.0 / (k * d.M ** 2):
        raise DeformationOutOfRange(f"|s| must be below 1/(k M^2) = {1.0 / (k * d.M ** 2)}")
    if not in_k_m(f.support, d.M) or not (in_k_m(F.support[:2], d.M) and in_k_m(F.support[2:], d.M)):
        raise SupportTooLarge("inputs must be supported in K_M")
    return Integral(_delta_kernel(f, F, d.s), [f.support[0]], spec,
                    support=delta_s_support(f.support, F.support, d.s), chart=BA, narrow=True)


def delta0_hat_flat(f, F, spec=DEFAULT_SPEC):
    """``int db f(b, a1 a2) F(b1 - b, a1, -b/a1 + b2, a2)``."""
    b1, a1, b2, a2, b = (Coord(i, 5) for i in range(5))
    fs = (FULL,) * 4 + (f.support[0],)
    kernel = mul(Compose(f, [b, a1 * a2], support=fs), Compose(F, [b1 - b, a1, b2 - b * Recip(a1), a2]))
    return Integral(kernel, [f.support[0]], spec, support=delta_s_support(f.support, F.support, 0.0),
                    chart=BA, narrow=True)


def delta_s_residual(f, F, d: DeformationParam, spec=DEFAULT_SPEC, k=COPRODUCT_BOX_K):
    """``delta_s(f) F - delta_0(f) F`` as one integral."""
    ref = delta_s_hat(f, F, d, spec, k)
    flat = _delta_kernel(f, F, 0.0)
    sup = _hull_support(ref.support, delta_s_support(f.support, F.support, 0.0))
    return Integral(add(ref.kernel, -flat), [f.support[0]], spec, support=sup, chart=BA, narrow=True)


def norm_0_flat2(G, spec=DEFAULT_SPEC, n=7):
    """``||G||_0`` on ``Gamma_0 x Gamma_0``: ``sup_{a1, a2} int int |G| db1 db2``.

    At ``s = 0`` the involution only reflects ``b``, so the left and right
    norms coincide.  The supremum is taken over an ``n x n`` grid.
    """
    b1s, a1s, b2s, a2s = G.support
    A1, A2 = np.meshgrid(_grid_of(a1s, n), _grid_of(a2s, n), indexing="ij")
    A1, A2 = A1.ravel(), A2.ravel()

    def run(p):
        (x1, x2), w = tensor_rule([b1s, b2s], p, spec.order)
        q = x1.size
        X = (np.tile(x1, A1.size), np.repeat(A1, q), np.tile(x2, A1.size), np.repeat(A2, q))
        return np.abs(G.values(X)).reshape(A1.size, q) @ w

    return float(np.max(adaptive(run, spec, tol=spec.norm_tol, what="flat 0-norm")))


def _grid_of(ivs, n):
    return np.concatenate([np.linspace(lo, hi, n + 2)[1:-1] for lo, hi in ivs.pieces])


def delta_s_table(f, F, s_values, M=1.5, spec=TABLE_SPEC, k=COPRODUCT_BOX_K, n=7, seed=None):
    col = []
    for s in s_values:
        col.append(norm_0_flat2(delta_s_residual(f, F, DeformationParam(s, M), spec, k), spec, n=n))
    return ResidualTable(list(s_values), {"delta": col}, seed=seed).fit()


# rescaling and operator-norm brackets ---------------------------------------------------

def phi_rescale(f, s, r):
    """``(Phi_sr f)(b, a) = |s/r| f((s/r) b, a)``; carries ``Gamma_r`` norms to ``Gamma_s``."""
    if s == 0 or r == 0:
        raise ValueError("rescaling needs non-zero parameters")
    q = s / r
    b, a = _ba()
    sup = (f.support[0] * (1.0 / q), f.support[1])
    return mul(Const(abs(q), 2), Compose(f, [q * b, a], support=sup)).with_chart(BA)


def opnorm_bracket_diagnostic(f, s_values, M=2.0, spec=TABLE_SPEC, n=11, seed=None):
    """``[lower, upper]`` operator-norm brackets of ``Q_s f`` along the grid.

    Also records, for consecutive grid values ``s > r``, the ``||.||_0``
    transport residual of the rescaling ``Phi_rs`` (zero up to quadrature).
    """
    s_values = list(s_values)
    cols = {"lower": [], "upper": [], "transport": []}
    for i, s in enumerate(s_values):
        q_s(f, DeformationParam(s, M).require())
        cols["lower"].append(op_lower_bound_s(f, s, spec=spec))
        cols["upper"].append(norm_0_s(f, s, spec, n=n, refine=True))
        r = s_values[i + 1] if i + 1 < len(s_values) else s
        a, b = norm_transport(f, r, s, spec, n=n)
        cols["transport"].append(abs(a - b) / max(a, 1e-300))
    snap = {k: getattr(spec, k) for k in ("order", "tol", "max_depth", "grid_density", "norm_tol")}
    return ResidualTable(s_values, cols, seed=seed, spec=snap)


def norm_transport(f, s, r, spec=DEFAULT_SPEC, n=15):
    """``(||Q_r f||_{0,r}, ||Q_s(Phi_sr f)||_{0,s})``, equal by the change of variables."""
    return norm_0_s(f, r, spec, n=n), norm_0_s(phi_rescale(f, s, r), s, spec, n=n)


def derivation_residual(f, g, h, points, spec=DEFAULT_SPEC):
    """``{f, g * h} - ({f, g} * h + g * {f, h})`` at ``points`` (undeformed product)."""
    lhs = poisson_bracket(f, conv_s(g, h, 0.0, spec), spec)
    rhs = add(conv_s(poisson_bracket(f, g, spec), h, 0.0, spec), conv_s(g, poisson_bracket(f, h, spec), 0.0, spec))
    return float(np.max(np.abs(lhs.values(points) - rhs.values(points))))


def jacobi_residual(f, g, h, points, spec=DEFAULT_SPEC):
    pb = lambda x, y: poisson_bracket(x, y, spec)
    total = sum(pb(x, pb(y, z)).values(points) for x, y, z in ((f, g, h), (g, h, f), (h, f, g)))
    return float(np.max(np.abs(total)))


# Fourier side ---------------------------------------------------------------------------

def bracket_consistency(f, g, beta, a, spec=DEFAULT_SPEC):
    """``sup |{F f, F g} + i F({f, g})|`` on the grid, with grid-bracket partials."""
    Ff, Fg = partial_fourier(f, beta, a, spec), partial_fourier(g, beta, a, spec)
    lhs = fourier_bracket(Ff, Fg).values
    rhs = -1j * partial_fourier(poisson_bracket(f, g, spec), beta, a, spec).values
    return float(np.max(np.abs(lhs - rhs))), float(np.max(np.abs(rhs)))


def dual_coproduct_check(f, F, beta1, beta2, a1s, a2s, spec=DEFAULT_SPEC):
    """``(F x F)(delta_0(f) F)`` against ``f~(beta1 + beta2/a1, a1 a2) F~`` on a coarse grid."""
    G = delta0_hat_flat(f, F, spec)
    worst, scale = 0.0, 0.0
    B1, B2 = np.meshgrid(beta1, beta2, indexing="ij")
    for a1 in a1s:
        for a2 in a2s:
            lhs = fourier_2leg(G, beta1, a1, beta2, a2, spec)
            Ft = fourier_2leg(F, beta1, a1, beta2, a2, spec)
            ft = fourier_at(f, B1 + B2 / a1, np.full(B1.shape, a1 * a2), spec)
            worst = max(worst, float(np.max(np.abs(lhs - ft * Ft))))
            scale = max(scale, float(np.max(np.abs(lhs))))
    return worst, scale


__all__ = [
    "DeformationParam", "k_m_box", "in_k_m", "q_s", "poisson_bracket", "product_residual",
    "commutator_residual", "involution_residual", "ResidualTable", "loglog_slope", "s_grid",
    "convergence_table", "product_support_box", "box_contains", "product_support_escape", "coproduct_support_box",
    "delta_s_support", "delta_s_hat", "delta0_hat_flat", "delta_s_residual", "norm_0_flat2",
    "delta_s_table", "phi_rescale", "norm_transport", "bracket_consistency",
    "dual_coproduct_check", "opnorm_bracket_diagnostic", "derivation_residual", "jacobi_residual", "COPRODUCT_BOX_K", "TABLE_SPEC",
]
