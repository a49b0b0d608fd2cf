"""The ``ax+b`` group, its one-parameter subgroups and the groupoids they cut out.

Elements are pairs ``(b, a)`` with ``a != 0`` and product
``(b1, a1)(b2, a2) = (b1 + a1 b2, a1 a2)``.  Every operation is written with
plain arithmetic so that fields may be floats, numpy arrays or Fractions.

Subgroups are labelled by a slope ``s``: ``C_s = {(b, 1 + s b)}``, with
``s = 0`` the translations ``B``, ``s = inf`` the dilations ``A`` and
``s = 1`` the subgroup ``C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotComposable, NotDecomposable, OutsideCarrier, ZeroParam

INF = math.inf
B, C, A = 0.0, 1.0, INF
CARRIER_EPS = 1e-12


def _any(x):
    return bool(np.any(x))


def _small(x, eps):
    """True if a numeric field is within ``eps`` of zero; symbolic fields never are."""
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError):
        return False
    return bool(np.any(np.abs(arr) <= eps))


@dataclass(frozen=True)
class GroupElement:
    b: object
    a: object

    def __post_init__(self):
        if _small(self.a, 0.0):
            raise ZeroParam("group element needs a != 0")

    def __mul__(self, other):
        return GroupElement(self.b + self.a * other.b, self.a * other.a)

    def inv(self):
        return GroupElement(-self.b / self.a, 1 / self.a)

    @staticmethod
    def identity():
        return GroupElement(0.0, 1.0)

    def dist(self, other):
        return np.maximum(np.abs(self.b - other.b), np.abs(self.a - other.a))


def mul(g, h):
    return g * h


def inv(g):
    return g.inv()


def identity():
    return GroupElement.identity()


def subgroup_element(s, param):
    """Element of ``C_s`` from its parameter.

    For ``s = 0`` the parameter is ``b``; for ``s = inf`` and every other
    slope it is the ``a`` component.
    """
    if s == INF:
        if _small(param, 0.0):
            raise ZeroParam("dilation parameter must be non-zero")
        return GroupElement(0 * param, param)
    if s == 0:
        return GroupElement(param, 1 + 0 * param)
    if _small(param, 0.0):
        raise ZeroParam(f"C_{s} parameter must be non-zero")
    return GroupElement((param - 1) / s, param)


def subgroup_param(s, g):
    return g.b if s == 0 else g.a


def in_subgroup(s, g, tol=1e-12):
    if s == INF:
        return np.abs(g.b) <= tol
    return np.abs(g.a - 1 - s * g.b) <= tol * (1 + np.abs(g.a))


def gamma_st_contains(s, t, g, eps=CARRIER_EPS):
    """Membership in ``C_s C_t`` intersected with ``C_t C_s``."""
    if s == t:
        raise ValueError("slopes must differ")
    if s == INF:
        s, t = t, s
    b, a = g.b, g.a
    if t == INF:
        return (np.abs(1 + s * b) > eps) & (np.abs(a - s * b) > eps)
    return (np.abs(s * t * b - s * a + t) > eps) & (np.abs(s * t * b - t * a + s) > eps)


def decompose(g, left, right, eps=CARRIER_EPS):
    """Split ``g = p q`` with ``p`` in ``C_left`` and ``q`` in ``C_right``."""
    if left == right:
        raise ValueError("left and right subgroups must differ")
    b, a = g.b, g.a
    if right == INF:
        P = 1 + left * b
        if _small(P, eps):
            raise NotDecomposable(f"not in C_{left} A")
        return GroupElement(b, P), GroupElement(0 * b, a / P)
    if left == INF:
        alpha = a - right * b
        if _small(alpha, eps):
            raise NotDecomposable(f"not in A C_{right}")
        gamma = b / alpha
        return GroupElement(0 * b, alpha), GroupElement(gamma, 1 + right * gamma)
    beta = (a - 1 - right * b) / (left - right)
    P = 1 + left * beta
    if _small(P, eps):
        raise NotDecomposable(f"not in C_{left} C_{right}")
    gamma = (b - beta) / P
    return GroupElement(beta, P), GroupElement(gamma, 1 + right * gamma)


# modular functions ---------------------------------------------------------

_SUBSPACE = {"B": np.array([1.0, 0.0]), "C": np.array([1.0, 1.0])}


def _projector(which):
    v = _SUBSPACE[which]
    w = _SUBSPACE["C" if which == "B" else "B"]
    basis = np.column_stack([v, w])
    return basis @ np.diag([1.0, 0.0]) @ np.linalg.inv(basis)


def adjoint(g):
    """Matrix of ``Ad(g)`` on the basis ``(d/db, d/da)``, shape ``(..., 2, 2)``."""
    b, a = np.broadcast_arrays(np.asarray(g.b, float), np.asarray(g.a, float))
    M = np.zeros(b.shape + (2, 2))
    M[..., 0, 0] = a
    M[..., 0, 1] = -b
    M[..., 1, 1] = 1.0
    return M


def modular_j(g, which):
    """``|det (P Ad(g))|`` restricted to the subalgebra of ``B`` or ``C``."""
    v = _SUBSPACE[which]
    P = _projector(which)
    img = np.einsum("ij,...jk,k->...i", P, adjoint(g), v)
    return np.abs(img @ v / (v @ v))


def modular_coefficients(which):
    """``(alpha, beta, gamma)`` with ``det = alpha a + beta b + gamma``.

    ``Ad`` is affine in ``(b, a)`` so the restricted determinant is too;
    the coefficients are read off from the same projector as ``modular_j``.
    """
    v = _SUBSPACE[which]
    P = _projector(which)
    parts = (np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, -1.0], [0.0, 0.0]]),
             np.array([[0.0, 0.0], [0.0, 1.0]]))
    return tuple(float((P @ E @ v) @ v / (v @ v)) for E in parts)


# groupoids ------------------------------------------------------------------

@dataclass(frozen=True)
class GroupoidPoint:
    """A point in one of the charts: ``"ba"`` (group coordinates) or ``"zc"``.

    In the ``zc`` chart ``(z, c)`` stands for ``(z, 1)(c - 1, c) = (z + c - 1, c)``.
    """

    u: object
    v: object
    chart: str = "ba"

    def to_group(self):
        if self.chart == "zc":
            return GroupElement(self.u + self.v - 1, self.v)
        return GroupElement(self.u, self.v)

    @staticmethod
    def from_group(g, chart="ba"):
        if chart == "zc":
            return GroupoidPoint(g.b - g.a + 1, g.a, "zc")
        return GroupoidPoint(g.b, g.a, "ba")


class Groupoid:
    """The groupoid ``X Y`` intersected with ``Y X`` over the unit subgroup ``X``.

    Units are ``X``; ``e_L`` is the ``X`` factor of ``g = x y`` and ``e_R`` the
    ``X`` factor of ``g = y x``.  Composition of a composable pair is the
    group product ``x e_R(x)^{-1} y``.
    """

    def __init__(self, name, units, complement, chart="ba"):
        self.name, self.units, self.complement, self.chart = name, units, complement, chart

    def _g(self, p):
        if isinstance(p, GroupElement):
            return p
        return p.to_group()

    def _p(self, g):
        return GroupoidPoint.from_group(g, self.chart)

    def contains(self, p, eps=CARRIER_EPS):
        return gamma_st_contains(self.units, self.complement, self._g(p), eps)

    def _check(self, g):
        if not np.all(gamma_st_contains(self.units, self.complement, g)):
            raise OutsideCarrier(f"point outside the carrier of {self.name}")

    def _eL(self, g):
        return decompose(g, self.units, self.complement)[0]

    def _eR(self, g):
        return decompose(g, self.complement, self.units)[1]

    def e_L(self, p):
        g = self._g(p)
        self._check(g)
        return self._p(self._eL(g))

    def e_R(self, p):
        g = self._g(p)
        self._check(g)
        return self._p(self._eR(g))

    def inverse(self, p):
        g = self._g(p)
        self._check(g)
        yl = decompose(g, self.complement, self.units)[0]
        return self._p(yl.inv() * self._eL(g))

    def compose(self, p, q, tol=1e-9):
        x, y = self._g(p), self._g(q)
        self._check(x)
        self._check(y)
        r, l = self._eR(x), self._eL(y)
        if _any(r.dist(l) > tol * (1 + np.abs(r.b) + np.abs(r.a))):
            raise NotComposable(f"e_R(x) != e_L(y) in {self.name}")
        return self._p(x * r.inv() * y)

    def composable_partner(self, p, param):
        """``y = e_R(x) q`` with ``q`` the complement element of ``param``."""
        x = self._g(p)
        self._check(x)
        return self._p(self._eR(x) * subgroup_element(self.complement, param))

    def unit(self, param):
        return self._p(subgroup_element(self.units, param))


def groupoid_maps(kind, s=None, chart=None):
    """Structure maps of ``GB``, ``GC``, ``GammaS_A`` or ``GammaS_C``."""
    if kind == "GB":
        return Groupoid("G_B", B, C, chart or "zc")
    if kind == "GC":
        return Groupoid("G_C", C, B, chart or "ba")
    if kind == "GammaS_A":
        return Groupoid(f"Gamma_{s} over A", A, float(s), chart or "ba")
    if kind == "GammaS_C":
        return Groupoid(f"Gamma_{s} over C_{s}", float(s), A, chart or "ba")
    raise ValueError(f"unknown groupoid kind {kind!r}")


# isomorphisms ----------------------------------------------------------------

def scale_to_gamma1(s):
    """``(b, a) -> (s b, a)``, carrying the slope-``s`` structures to slope 1."""
    return lambda g: GroupElement(s * g.b, g.a)


def conj_c_to_a(s):
    """Conjugation by ``(-1/s, -1)``; swaps ``C_s`` and ``A``."""
    return lambda g: GroupElement(-g.b + (g.a - 1) / s, g.a)


def to_transformation_chart(g):
    """``g -> (z, c)`` with ``(z, 1)`` the ``B`` factor of ``g = b c``."""
    bl, cr = decompose(g, B, C)
    return GroupoidPoint(bl.b, cr.a, "zc")
