"""Symbolic smooth functions with exact first and higher partials.

Every function is a small expression graph over real coordinates.  Values
are computed vectorised on flat point batches; derivatives are new graphs
built by the chain and product rules, so no finite differences appear
anywhere.  Supports are tracked as boxes of interval unions and values
outside a declared support are exactly zero.
"""

from __future__ import annotations

import itertools

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import ChartMismatch, ToleranceNotMet
from .intervals import FULL, IntervalSet, full_support, intersect_support, support_mask, union_support
from .quadrature import CHUNK, DEFAULT_SPEC, tensor_rule

EMPTY = IntervalSet(())


def _take(X, idx):
    return tuple(x[idx] for x in X)


class SmoothFn:
    """Base class: a smooth (possibly complex) function of ``nvars`` reals."""

    priority = 3
    is_real = True

    def __init__(self, nvars, support=None, chart=None):
        self.nvars = nvars
        self.support = tuple(support) if support is not None else full_support(nvars)
        self.chart = chart
        self._dcache = {}

    # evaluation -----------------------------------------------------------
    def __call__(self, *xs):
        if len(xs) != self.nvars:
            raise TypeError(f"expected {self.nvars} coordinates, got {len(xs)}")
        arrs = np.broadcast_arrays(*[np.asarray(x, dtype=float) for x in xs])
        shape = arrs[0].shape
        out = self.values(tuple(a.ravel() for a in arrs)).reshape(shape)
        return out[()] if shape == () else out

    def values(self, X):
        X = tuple(np.asarray(x, dtype=float) for x in X)
        with np.errstate(all="ignore"):
            v = self.ev(X, {})
        return np.broadcast_to(v, X[0].shape)

    def ev(self, X, cache):
        key = id(self)
        hit = cache.get(key)
        if hit is not None:
            return hit[1]
        v = self._ev(X, cache)
        cache[key] = (self, v)
        return v

    def _ev(self, X, cache):
        raise NotImplementedError

    # calculus ---------------------------------------------------------------
    def diff(self, i):
        if i not in self._dcache:
            self._dcache[i] = self._diff(i)
        return self._dcache[i]

    def _diff(self, i):
        raise NotImplementedError

    def grad(self):
        return [self.diff(i) for i in range(self.nvars)]

    # algebra ----------------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, SmoothFn):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Const(other, self.nvars)

    def __add__(self, other):
        return add(self, self._lift(other))

    __radd__ = __add__

    def __neg__(self):
        return mul(Const(-1.0, self.nvars), self)

    def __sub__(self, other):
        return add(self, -self._lift(other))

    def __rsub__(self, other):
        return add(self._lift(other), -self)

    def __mul__(self, other):
        return mul(self, self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SmoothFn):
            return mul(self, Recip(other))
        return mul(self, Const(1.0 / other, self.nvars))

    def __rtruediv__(self, other):
        return mul(self._lift(other), Recip(self))

    def conj(self):
        return self if self.is_real else Conj(self)

    @property
    def is_zero(self):
        return False

    def with_chart(self, chart):
        self.chart = chart
        return self


class Const(SmoothFn):
    priority = 4

    def __init__(self, value, nvars):
        value = complex(value) if np.iscomplexobj(value) else float(value)
        sup = None if value != 0 else (EMPTY,) * nvars
        super().__init__(nvars, sup)
        self.value = value
        self.is_real = not isinstance(value, complex) or value.imag == 0

    def _ev(self, X, cache):
        return np.full(X[0].shape, self.value)

    def _diff(self, i):
        return Const(0.0, self.nvars)

    @property
    def is_zero(self):
        return self.value == 0


class Coord(SmoothFn):
    def __init__(self, index, nvars):
        super().__init__(nvars)
        self.index = index

    def _ev(self, X, cache):
        return X[self.index]

    def _diff(self, i):
        return Const(1.0 if i == self.index else 0.0, self.nvars)


class BumpPoly(SmoothFn):
    """``exp(-1/(1-u^2)) P(u) / (1-u^2)^p`` with ``u = (x - center)/halfwidth``."""

    priority = 0

    def __init__(self, index, nvars, center, halfwidth, coeffs=(1.0,), power=0):
        sup = list(full_support(nvars))
        sup[index] = IntervalSet.of(center - halfwidth, center + halfwidth)
        super().__init__(nvars, sup)
        self.index, self.center, self.halfwidth = index, float(center), float(halfwidth)
        self.poly = Polynomial(coeffs)
        self.power = power
        self._plain = power == 0 and len(self.poly.coef) == 1 and self.poly.coef[0] == 1.0

    def _ev(self, X, cache):
        u = (X[self.index] - self.center) * (1.0 / self.halfwidth)
        m = np.abs(u) < 1.0
        out = np.zeros(u.shape)
        um = u[m]
        q = 1.0 - um * um
        v = np.exp(-1.0 / q)
        if self._plain:
            out[m] = v
            return out
        c = self.poly.coef
        acc = np.full(um.shape, c[-1])
        for ck in c[-2::-1]:
            acc = acc * um + ck
        out[m] = v * acc / q ** self.power
        return out

    def _diff(self, i):
        if i != self.index:
            return Const(0.0, self.nvars)
        u = Polynomial([0.0, 1.0])
        q = 1.0 - u * u
        P, p = self.poly, self.power
        Q = -2.0 * u * P + P.deriv() * q * q + 2.0 * p * u * q * P
        return BumpPoly(self.index, self.nvars, self.center, self.halfwidth,
                        tuple(Q.coef / self.halfwidth), p + 2)


class Sum(SmoothFn):
    priority = 3

    def __init__(self, terms):
        n = terms[0].nvars
        sup = terms[0].support
        for t in terms[1:]:
            sup = union_support(sup, t.support)
        super().__init__(n, sup)
        self.terms = terms
        self.is_real = all(t.is_real for t in terms)

    def _ev(self, X, cache):
        out = self.terms[0].ev(X, cache)
        for t in self.terms[1:]:
            out = out + t.ev(X, cache)
        return out

    def _diff(self, i):
        return add(*[t.diff(i) for t in self.terms])


class Prod(SmoothFn):
    """Product that evaluates factors on a shrinking set of live points."""

    def __init__(self, factors):
        n = factors[0].nvars
        sup = factors[0].support
        for f in factors[1:]:
            sup = intersect_support(sup, f.support)
        super().__init__(n, sup)
        self.factors = sorted(factors, key=lambda f: f.priority)
        self.is_real = all(f.is_real for f in factors)
        self.priority = min(f.priority for f in factors)

    def _ev(self, X, cache):
        N = X[0].shape[0]
        m = support_mask(self.support, X)
        if m is None:
            live = np.arange(N)
            Xa, ca = X, cache
        else:
            live = np.nonzero(m)[0]
            Xa, ca = _take(X, live), {}
        acc = None
        for f in self.factors:
            if live.size == 0:
                break
            v = f.ev(Xa, ca)
            if acc is None:
                acc = v
            else:
                acc = np.where(nz, acc * v, 0.0)
            nz = acc != 0
            frac = np.count_nonzero(nz) / max(nz.size, 1)
            if frac < 0.6:
                live, acc = live[nz], acc[nz]
                Xa, ca = _take(Xa, nz), {}
                nz = np.ones(acc.shape, bool)
        dtype = complex if (acc is not None and np.iscomplexobj(acc)) else float
        out = np.zeros(N, dtype)
        if acc is not None and live.size:
            out[live] = acc
        return out

    def _diff(self, i):
        terms = []
        for k, f in enumerate(self.factors):
            d = f.diff(i)
            if d.is_zero:
                continue
            terms.append(mul(*(self.factors[:k] + [d] + self.factors[k + 1:])))
        return add(*terms) if terms else Const(0.0, self.nvars)


class Compose(SmoothFn):
    """``outer(inner_1(x), ..., inner_m(x))`` with an optional declared support."""

    def __init__(self, outer, inner, support=None, chart=None):
        if len(inner) != outer.nvars:
            raise ValueError("inner map count must match outer variable count")
        super().__init__(inner[0].nvars, support, chart)
        self.outer, self.inner = outer, list(inner)
        self.is_real = outer.is_real
        bounded_outer = any(not s.is_full for s in outer.support)
        self.priority = 1 if bounded_outer else 3

    def _ev(self, X, cache):
        N = X[0].shape[0]
        m = support_mask(self.support, X)
        if m is None:
            live, Xa, ca = None, X, cache
        else:
            live = np.nonzero(m)[0]
            Xa, ca = _take(X, live), {}
        G = tuple(np.broadcast_to(g.ev(Xa, ca), Xa[0].shape) for g in self.inner)
        m2 = support_mask(self.outer.support, G)
        if m2 is None:
            v = self.outer.ev(G, {})
        else:
            idx = np.nonzero(m2)[0]
            sub = self.outer.ev(_take(G, idx), {})
            v = np.zeros(Xa[0].shape, complex if np.iscomplexobj(sub) else float)
            v[idx] = sub
        if live is None:
            return v
        out = np.zeros(N, v.dtype)
        out[live] = v
        return out

    def _diff(self, i):
        terms = []
        for k, g in enumerate(self.inner):
            dg = g.diff(i)
            if dg.is_zero:
                continue
            df = self.outer.diff(k)
            if df.is_zero:
                continue
            terms.append(mul(Compose(df, self.inner, self.support), dg))
        return add(*terms) if terms else Const(0.0, self.nvars)


class Recip(SmoothFn):
    def __init__(self, e):
        super().__init__(e.nvars)
        self.e = e
        self.is_real = e.is_real

    def _ev(self, X, cache):
        return 1.0 / self.e.ev(X, cache)

    def _diff(self, i):
        d = self.e.diff(i)
        if d.is_zero:
            return Const(0.0, self.nvars)
        return mul(Const(-1.0, self.nvars), d, self, self)


class AbsPow(SmoothFn):
    """``|e|^p`` for real ``e`` bounded away from zero."""

    def __init__(self, e, p):
        super().__init__(e.nvars)
        self.e, self.p = e, float(p)

    def _ev(self, X, cache):
        return np.abs(self.e.ev(X, cache)) ** self.p

    def _diff(self, i):
        d = self.e.diff(i)
        if d.is_zero or self.p == 0:
            return Const(0.0, self.nvars)
        return mul(Const(self.p, self.nvars), self, d, Recip(self.e))


class LogAbs(SmoothFn):
    def __init__(self, e):
        super().__init__(e.nvars)
        self.e = e

    def _ev(self, X, cache):
        return np.log(np.abs(self.e.ev(X, cache)))

    def _diff(self, i):
        d = self.e.diff(i)
        if d.is_zero:
            return Const(0.0, self.nvars)
        return mul(d, Recip(self.e))


class Sign(SmoothFn):
    """Locally constant sign of ``e``; only used away from its zero set."""

    def __init__(self, e):
        super().__init__(e.nvars)
        self.e = e

    def _ev(self, X, cache):
        return np.sign(self.e.ev(X, cache)).astype(float)

    def _diff(self, i):
        return Const(0.0, self.nvars)


class Conj(SmoothFn):
    def __init__(self, e):
        super().__init__(e.nvars, e.support, e.chart)
        self.e = e
        self.is_real = False
        self.priority = e.priority

    def _ev(self, X, cache):
        return np.conj(self.e.ev(X, cache))

    def _diff(self, i):
        return self.e.diff(i).conj()


class Abs2(SmoothFn):
    """``|e|^2``."""

    def __init__(self, e):
        super().__init__(e.nvars, e.support, e.chart)
        self.e = e
        self.priority = e.priority

    def _ev(self, X, cache):
        v = self.e.ev(X, cache)
        return (v * np.conj(v)).real if np.iscomplexobj(v) else v * v

    def _diff(self, i):
        d = self.e.diff(i)
        return add(mul(d, self.e.conj()), mul(self.e, d.conj()))


def _depends_on(g, var):
    return not g.diff(var).is_zero


def _bisect_level(g, base, tv, lo, hi, level, increasing, iters=52):
    """Crossing of a monotone ``g`` with ``level`` inside ``[lo, hi]``."""
    a, b = lo.copy(), hi.copy()
    for _ in range(iters):
        m = 0.5 * (a + b)
        X = base[:tv] + (m,) + base[tv + 1:]
        v = np.broadcast_to(g.ev(X, {}), m.shape)
        go_left = (v >= level) == increasing
        b = np.where(go_left, m, b)
        a = np.where(go_left, a, m)
    return 0.5 * (a + b)


def _at(g, base, tv, t):
    X = base[:tv] + (t,) + base[tv + 1:]
    return np.broadcast_to(g.ev(X, {}), t.shape)


def _mobius_solve(t, y, level):
    """Invert the Moebius map through ``(t_i, y_i)`` at ``level`` via the cross-ratio."""
    t0, t1, t2 = t
    y0, y1, y2 = y
    k = ((level - y1) * (y0 - y2)) / ((level - y2) * (y0 - y1))
    num = t1 * (t0 - t2) - k * t2 * (t0 - t1)
    den = (t0 - t2) - k * (t0 - t1)
    out = num / den
    out = np.where(np.isinf(k), t2, out)
    return out


def _crossing(g, base, tv, lo, hi, level, increasing, ts, ys, mobius):
    t = _mobius_solve(ts, ys, level)
    bad = ~mobius | ~np.isfinite(t) | (t < lo) | (t > hi)
    if np.any(bad):
        idx = np.nonzero(bad)[0]
        sub = tuple(x[idx] if np.ndim(x) else x for x in base)
        t = t.copy()
        t[idx] = _bisect_level(g, sub, tv, lo[idx], hi[idx], level, increasing[idx])
    return t


def _narrow(node, Xa, nx, lo, hi, mids):
    """Shrink per-point boxes ``[lo, hi]`` to cover the support of ``node`` in the t-variables.

    Relies on every inner map being monotone in each integration variable
    across the cell, which holds for all kernels built by this package.
    """
    if isinstance(node, Conj) or isinstance(node, Abs2):
        return _narrow(node.e, Xa, nx, lo, hi, mids)
    if isinstance(node, Prod):
        for f in node.factors:
            lo, hi = _narrow(f, Xa, nx, lo, hi, mids)
        return lo, hi
    if isinstance(node, Sum):
        los, his = [], []
        for t in node.terms:
            l2, h2 = _narrow(t, Xa, nx, [x.copy() for x in lo], [x.copy() for x in hi], mids)
            los.append(l2)
            his.append(h2)
        out_lo, out_hi = [], []
        for j in range(len(lo)):
            L = np.stack([l[j] for l in los])
            H = np.stack([h[j] for h in his])
            ok = L <= H
            out_lo.append(np.where(ok, L, np.inf).min(axis=0))
            out_hi.append(np.where(ok, H, -np.inf).max(axis=0))
        return out_lo, out_hi
    if isinstance(node, Const) and node.is_zero:
        return [np.full_like(x, np.inf) for x in lo], [np.full_like(x, -np.inf) for x in hi]
    if not isinstance(node, Compose):
        return lo, hi
    for k, ivs in enumerate(node.outer.support):
        if ivs.is_full or ivs.empty:
            continue
        g = node.inner[k]
        deps = [j for j in range(len(lo)) if _depends_on(g, nx + j)]
        if len(deps) != 1:
            continue
        j = deps[0]
        L, H = ivs.lo, ivs.hi
        tv = nx + j
        base = tuple(Xa) + tuple(mids)
        X0 = base[:tv] + (lo[j],) + base[tv + 1:]
        X1 = base[:tv] + (hi[j],) + base[tv + 1:]
        g0 = np.broadcast_to(g.ev(X0, {}), lo[j].shape)
        g1 = np.broadcast_to(g.ev(X1, {}), lo[j].shape)
        inc = g1 >= g0
        gmin, gmax = np.minimum(g0, g1), np.maximum(g0, g1)
        empty = (gmax < L) | (gmin > H)
        tm = 0.5 * (lo[j] + hi[j])
        tq = lo[j] + 0.25 * (hi[j] - lo[j])
        gm, gq = _at(g, base, tv, tm), _at(g, base, tv, tq)
        ts, ys = (lo[j], tm, hi[j]), (g0, gm, g1)
        scale = np.abs(g0) + np.abs(g1) + 1.0
        mobius = np.abs(_mobius_solve(ts, ys, gq) - tq) <= 1e-9 * (hi[j] - lo[j] + 1e-300)
        mobius &= np.abs(g1 - g0) > 1e-14 * scale
        valid = lo[j] < hi[j]
        need_L = np.where(inc, g0 < L, g1 < L) & ~empty & valid
        need_H = np.where(inc, g1 > H, g0 > H) & ~empty & valid
        tL = np.where(need_L, _crossing(g, base, tv, lo[j], hi[j], L, inc, ts, ys, mobius | ~need_L), np.nan)
        tH = np.where(need_H, _crossing(g, base, tv, lo[j], hi[j], H, inc, ts, ys, mobius | ~need_H), np.nan)
        new_lo = np.where(inc, np.where(need_L, tL, lo[j]), np.where(need_H, tH, lo[j]))
        new_hi = np.where(inc, np.where(need_H, tH, hi[j]), np.where(need_L, tL, hi[j]))
        new_lo = np.where(empty, np.inf, new_lo)
        new_hi = np.where(empty, -np.inf, new_hi)
        lo = lo[:j] + [np.maximum(lo[j], new_lo)] + lo[j + 1:]
        hi = hi[:j] + [np.minimum(hi[j], new_hi)] + hi[j + 1:]
    return lo, hi


class Integral(SmoothFn):
    """``x -> int kernel(x, t) dt`` over a fixed box of interval unions.

    The kernel has ``nvars + len(tsets)`` variables, the integration
    variables last.  Derivatives in ``x`` are taken under the integral.
    With ``narrow=True`` each point integrates only over the exact support
    of its kernel slice, found by bisection on the kernel's inner maps; this
    keeps support edges on panel boundaries, where Gauss-Legendre converges
    fast.
    """

    priority = 2

    def __init__(self, kernel, tsets, spec=DEFAULT_SPEC, support=None, tol=None, chart=None, narrow=False):
        k = len(tsets)
        super().__init__(kernel.nvars - k, support, chart)
        self.kernel, self.tsets, self.spec, self.tol = kernel, tuple(tsets), spec, tol
        self.narrow = narrow
        self.is_real = kernel.is_real

    def _cells(self, Xa):
        n = Xa[0].shape[0]
        out = []
        for cell in itertools.product(*[s.pieces for s in self.tsets]):
            lo = [np.full(n, a) for a, _ in cell]
            hi = [np.full(n, b) for _, b in cell]
            if self.narrow:
                mids = [np.full(n, 0.5 * (a + b)) for a, b in cell]
                lo, hi = _narrow(self.kernel, Xa, self.nvars, lo, hi, mids)
            out.append((lo, hi))
        return out

    def _ev(self, X, cache):
        N = X[0].shape[0]
        m = support_mask(self.support, X)
        live = np.arange(N) if m is None else np.nonzero(m)[0]
        Xa = _take(X, live)
        n = live.size
        if n == 0 or any(s.empty for s in self.tsets):
            return np.zeros(N)
        cells = self._cells(Xa)
        k = len(self.tsets)

        def run(p, pts):
            U, w = tensor_rule([_UNIT] * k, p, self.spec.order)
            Q = w.size
            total = None
            for lo, hi in cells:
                width = [np.maximum(h[pts] - l[pts], 0.0) for l, h in zip(lo, hi)]
                low = [l[pts] for l in lo]
                ok = np.all([wd > 0 for wd in width], axis=0)
                idx = np.nonzero(ok)[0]
                vals = np.zeros(pts.size)
                if idx.size:
                    step = max(1, CHUNK // max(Q, 1))
                    parts = []
                    for a in range(0, idx.size, step):
                        sel = idx[a:a + step]
                        r = sel.size
                        Xr = tuple(np.repeat(x[pts[sel]], Q) for x in Xa)
                        T = tuple((np.repeat(l[sel], Q) + np.repeat(wd[sel], Q) * np.tile(u, r))
                                  for l, wd, u in zip(low, width, U))
                        v = self.kernel.ev(Xr + T, {})
                        v = np.broadcast_to(v, (r * Q,)).reshape(r, Q)
                        jac = np.prod([wd[sel] for wd in width], axis=0)
                        parts.append((v @ w) * jac)
                    res = np.concatenate(parts)
                    if np.iscomplexobj(res):
                        vals = vals.astype(complex)
                    vals[idx] = res
                total = vals if total is None else total + vals
            return total

        vals = self._adapt(run, n)
        out = np.zeros(N, vals.dtype)
        out[live] = vals
        return out

    def _adapt(self, run, n):
        """Panel doubling per point: converged points drop out of later levels.

        A point is converged when its last two values differ by at most
        ``tol`` times the largest value seen so far (plus ``atol``).
        """
        spec = self.spec
        tol = spec.tol if self.tol is None else self.tol
        p = 1 if self.narrow else spec.initial_panels
        active = np.arange(n)
        prev = run(p, active)
        vals = prev.copy()
        err = np.inf
        for _ in range(spec.max_depth):
            p *= 2
            cur = run(p, active)
            if np.iscomplexobj(cur) and not np.iscomplexobj(vals):
                vals = vals.astype(complex)
            vals[active] = cur
            scale = float(np.max(np.abs(vals))) if vals.size else 0.0
            diff = np.abs(cur - prev)
            done = diff <= tol * scale + spec.atol
            err = float(np.max(diff)) if diff.size else 0.0
            active, prev = active[~done], cur[~done]
            if active.size == 0:
                return vals
        raise ToleranceNotMet(f"integral node: error {err:.3e} vs scale {scale:.3e} after {p} panels")

    def _diff(self, i):
        d = self.kernel.diff(i)
        if d.is_zero:
            return Const(0.0, self.nvars)
        return Integral(d, self.tsets, self.spec, self.support, self.tol, narrow=self.narrow)


_UNIT = IntervalSet.of(0.0, 1.0)


# construction helpers -------------------------------------------------------

def add(*terms):
    flat, const = [], 0.0
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        elif isinstance(t, Const):
            const = const + t.value
        else:
            flat.append(t)
    if const != 0:
        flat.append(Const(const, terms[0].nvars))
    if not flat:
        return Const(0.0, terms[0].nvars)
    return flat[0] if len(flat) == 1 else Sum(flat)


def mul(*factors):
    flat, coef = [], 1.0
    for f in factors:
        if isinstance(f, Prod):
            flat.extend(f.factors)
        elif isinstance(f, Const):
            coef = coef * f.value
        else:
            flat.append(f)
    n = factors[0].nvars
    if coef == 0:
        return Const(0.0, n)
    if coef != 1:
        flat.append(Const(coef, n))
    if not flat:
        return Const(coef, n)
    return flat[0] if len(flat) == 1 else Prod(flat)


def const(value, nvars):
    return Const(value, nvars)


def coord(index, nvars):
    return Coord(index, nvars)


def bump(center=0.0, halfwidth=1.0, index=0, nvars=1):
    """Standard bump ``exp(-1/(1-u^2))`` on ``[center - hw, center + hw]``."""
    return BumpPoly(index, nvars, center, halfwidth)


def tensor_bump(centers, halfwidths, chart=None, scale=1.0):
    """Product of one-dimensional bumps, one per coordinate."""
    n = len(centers)
    f = mul(*[bump(c, h, i, n) for i, (c, h) in enumerate(zip(centers, halfwidths))])
    if scale != 1.0:
        f = mul(Const(scale, n), f)
    return f.with_chart(chart) if chart else f


def tensor(*fns, chart=None):
    """``(f1 x f2 x ...)(x1, x2, ...) = f1(x1) f2(x2) ...`` on concatenated variables."""
    n = sum(f.nvars for f in fns)
    out, off = [], 0
    for f in fns:
        out.append(Compose(f, [Coord(off + k, n) for k in range(f.nvars)],
                           support=_embed_support(f.support, off, n)))
        off += f.nvars
    g = mul(*out)
    return g.with_chart(chart) if chart else g


def _embed_support(sup, off, n):
    full = list(full_support(n))
    full[off:off + len(sup)] = sup
    return tuple(full)


def pullback(f, maps, weight=None, support=None, chart=None, expect_chart=None):
    """``x -> weight(x) * f(maps(x))``.

    ``support`` should be a superset of the true support; it is used to
    skip evaluation and is what integrators will see.
    """
    if expect_chart is not None and f.chart is not None and f.chart != expect_chart:
        raise ChartMismatch(f"function lives in chart {f.chart!r}, expected {expect_chart!r}")
    g = Compose(f, maps, support=support)
    if weight is not None and not (isinstance(weight, Const) and weight.value == 1):
        g = mul(weight, g)
    return g.with_chart(chart) if chart else g


__all__ = [
    "SmoothFn", "Const", "Coord", "BumpPoly", "Sum", "Prod", "Compose", "Recip", "AbsPow",
    "LogAbs", "Sign", "Conj", "Abs2", "Integral", "add", "mul", "const", "coord", "bump",
    "tensor_bump", "tensor", "pullback", "FULL",
]
