"""Composite Gauss-Legendre quadrature with panel doubling."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from ..errors import SingularSupport, ToleranceNotMet
from .intervals import IntervalSet

CHUNK = 1_500_000


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature settings.

    ``tol`` is relative to the largest magnitude in the evaluated batch;
    ``norm_tol`` is used for integrals of absolute values, whose kinks slow
    down Gauss-Legendre convergence.
    """

    order: int = 16
    tol: float = 1e-8
    max_depth: int = 9
    grid_density: int = 41
    norm_tol: float = 1e-6
    initial_panels: int = 2
    atol: float = 1e-15

    def replace(self, **kw):
        return replace(self, **kw)


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=None)
def _leggauss(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_rule(ivs: IntervalSet, panels: int, order: int, max_width=None):
    """Nodes and weights covering every piece of ``ivs``."""
    if not ivs.bounded:
        raise ValueError(f"cannot integrate over unbounded set {ivs}")
    x, w = _leggauss(order)
    nodes, weights = [], []
    for lo, hi in ivs.pieces:
        if hi <= lo:
            continue
        n = panels
        if max_width is not None:
            n = max(n, int(np.ceil((hi - lo) / max_width)))
        edges = np.linspace(lo, hi, n + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
        weights.append((half[:, None] * w[None, :]).ravel())
    if not nodes:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(nodes), np.concatenate(weights)


def tensor_rule(sets, panels, order):
    """Tensor-product rule over a product of interval sets."""
    rules = [panel_rule(s, panels, order) for s in sets]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrid = np.ones_like(grids[0]) if grids else np.ones(())
    for k, r in enumerate(rules):
        shape = [1] * len(rules)
        shape[k] = -1
        wgrid = wgrid * r[1].reshape(shape)
    return [g.ravel() for g in grids], wgrid.ravel()


def adaptive(evaluate, spec: QuadratureSpec, tol=None, start=None, what="integral"):
    """Double panel counts until two successive batches agree.

    ``evaluate(panels)`` returns an array of integral values.
    """
    tol = spec.tol if tol is None else tol
    p = start or spec.initial_panels
    prev = evaluate(p)
    err = scale = np.inf
    for _ in range(spec.max_depth):
        p *= 2
        cur = evaluate(p)
        err = np.max(np.abs(cur - prev)) if cur.size else 0.0
        scale = np.max(np.abs(cur)) if cur.size else 0.0
        if err <= tol * scale + spec.atol:
            return cur
        prev = cur
    raise ToleranceNotMet(f"{what}: error {err:.3e} vs scale {scale:.3e} after {p} panels")


def c_coords(nvars):
    """Indices of the multiplicative coordinates in the (z, c) charts."""
    if nvars == 1:
        return (0,)
    return tuple(range(1, nvars, 2))


def measure_weight(measure, nvars):
    if callable(measure):
        return measure
    cs = c_coords(nvars)
    if measure == "lebesgue":
        return None
    if measure == "haar_c":
        return lambda X: np.prod([1.0 / np.abs(X[i]) for i in cs], axis=0)
    if measure == "l2_gamma":
        return lambda X: np.prod([1.0 / X[i] ** 2 for i in cs], axis=0)
    raise ValueError(f"unknown measure {measure!r}")


def integrate(f, measure="lebesgue", spec: QuadratureSpec = DEFAULT_SPEC, box=None, tol=None):
    """Integrate ``f`` over its support box (or ``box``) against ``measure``.

    ``measure`` is ``"lebesgue"``, ``"haar_c"`` (dc/|c| on every c-coordinate),
    ``"l2_gamma"`` (dz dc/c^2 per leg) or a callable weight of the coordinates.
    """
    region = tuple(box) if box is not None else f.support
    if measure in ("haar_c", "l2_gamma"):
        for i in c_coords(f.nvars):
            if region[i].distance_to(0.0) == 0.0:
                raise SingularSupport(f"c-coordinate {i} support {region[i]} touches 0")
    weight = measure_weight(measure, f.nvars)
    if any(r.empty for r in region):
        return 0.0
    start = spec.initial_panels if f.nvars <= 2 else 1

    def run(p):
        X, w = tensor_rule(region, p, spec.order)
        total = 0.0
        step = max(1, CHUNK)
        for k in range(0, w.size, step):
            Xs = tuple(x[k:k + step] for x in X)
            v = f.values(Xs)
            if weight is not None:
                v = v * weight(Xs)
            total = total + np.sum(v * w[k:k + step])
        return np.array([total])

    return adaptive(run, spec, tol=tol, start=start, what="integrate")[0]


def sup_norm(f, spec: QuadratureSpec = DEFAULT_SPEC, box=None, refine=True):
    """Grid scan of ``|f|`` over the support box followed by local refinement."""
    from scipy.optimize import minimize

    region = tuple(box) if box is not None else f.support
    d = f.nvars
    n = max(5, int(round(spec.grid_density ** (2.0 / max(d, 2)))))
    axes = []
    for s in region:
        if not s.bounded:
            raise ValueError("sup_norm needs a bounded support box")
        axes.append(np.concatenate([np.linspace(a, b, n) for a, b in s.pieces]))
    grids = np.meshgrid(*axes, indexing="ij")
    X = tuple(g.ravel() for g in grids)
    vals = np.abs(f.values(X))
    best = float(vals.max()) if vals.size else 0.0
    if not refine or best == 0.0:
        return best
    lo = np.array([s.lo for s in region])
    hi = np.array([s.hi for s in region])
    for k in np.argsort(vals)[-3:]:
        x0 = np.array([x[k] for x in X])

        def neg(x):
            return -float(np.abs(f.values(tuple(np.atleast_1d(v) for v in x)))[0])

        res = minimize(neg, x0, method="Nelder-Mead", bounds=list(zip(lo, hi)),
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 400})
        best = max(best, -res.fun)
    return best


def cell_product(sets):
    """Iterate over products of pieces, used for per-cell work."""
    return itertools.product(*[s.pieces for s in sets])
