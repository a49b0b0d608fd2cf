"""Twist maps of ``G_B x G_B``, their actions on functions, and the generator calculus.

Every point map is written once in terms of group-core decompositions and
evaluated on whatever the coordinates are: numpy arrays for point checks,
expression graphs for function actions.  The ``(z, c)`` chart is used
throughout; ``(z, c)`` is the group element ``(z, 1)(c - 1, c)``.

Leg ``k`` of a multi-leg function occupies coordinates ``(2k, 2k + 1)``.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import ZC, delta0_hat_3leg, modular_weight
from .errors import NotDecomposable, OutsideDomain
from .funcspace import AbsPow, Compose, Const, Coord, IntervalSet, LogAbs, Recip, Sign, SmoothFn, add, mul
from .funcspace.quadrature import DEFAULT_SPEC
from .group import A, B, C, GroupoidPoint, decompose, subgroup_element

MARGIN = 0.05
ORIENTATIONS = ("reproducing", "paper")

TWIST_KINDS = ("T", "Tinv", "T1", "T1inv", "T2", "T2inv", "T12", "T12inv", "T23", "T23inv", "Tt", "K")
_LEGS = {"T": 2, "Tinv": 2, "Tt": 2, "K": 2, "T1": 3, "T1inv": 3, "T2": 3, "T2inv": 3,
         "T12": 3, "T12inv": 3, "T23": 3, "T23inv": 3}


# group-core building blocks -----------------------------------------------------

def _elem(z, c):
    return GroupoidPoint(z, c, "zc").to_group()


def _coords(g):
    p = GroupoidPoint.from_group(g, "zc")
    return p.u, p.v


def _b_left(g):
    return decompose(g, B, C)[0]


def _b_right(g):
    return decompose(g, C, B)[1]


def _c_left(g):
    return decompose(g, C, B)[0]


def _ct_left(g):
    """``C`` factor of the ``C A`` split."""
    return decompose(g, C, A)[0]


def _sB_shift(g, w):
    """``s_B(b w) c = c_L(b w)^{-1} g`` for ``g = b c`` and ``w`` in ``C``."""
    return _c_left(_b_left(g) * w).inv() * g


def _c_times(gamma, g):
    """Groupoid product of the bisection element with ``C`` parameter ``gamma`` and ``g``."""
    return subgroup_element(C, gamma) * g


def _abspow(x, p):
    return AbsPow(x, p) if isinstance(x, SmoothFn) else np.abs(x) ** p


def _sign(x):
    return Sign(x) if isinstance(x, SmoothFn) else np.sign(x)


def _legs_of(xs):
    return [_elem(xs[2 * k], xs[2 * k + 1]) for k in range(len(xs) // 2)]


def _flat(legs):
    out = []
    for g in legs:
        out.extend(_coords(g))
    return out


def _apply_legs(kind, legs, t=None):
    """Image of the legs under the named twist map."""
    inverse = kind.endswith("inv")
    base = kind[:-3] if inverse else kind
    if base == "T":
        g1, g2 = legs
        u = _ct_left(_b_left(g2))
        return [_sB_shift(g1, u.inv() if inverse else u), g2]
    if base == "T1":
        g1, g2, g3 = legs
        u = _ct_left(_b_left(g3))
        w = u.inv() if inverse else u
        return [_sB_shift(g1, _c_left(_b_left(g2) * w)), _sB_shift(g2, w), g3]
    if base == "T2":
        g1, g2, g3 = legs
        u = _ct_left(_b_left(g2) * _b_left(g3))
        return [_sB_shift(g1, u.inv() if inverse else u), g2, g3]
    if base == "T12":
        return _apply_legs("Tinv" if inverse else "T", legs[:2]) + [legs[2]]
    if base == "T23":
        return [legs[0]] + _apply_legs("Tinv" if inverse else "T", legs[1:])
    if base == "Tt":
        g1, g2 = legs
        u = _ct_left(_b_left(g2))
        return [_c_times(_abspow(u.a, -t), g1), g2]
    if base == "K":
        g1, g2 = legs
        u = _ct_left(_b_left(g2))
        return [_c_times(_sign(u.a), g1), g2]
    raise ValueError(f"unknown twist map {kind!r}")


def inverse_kind(kind, t=None):
    """Name (and parameter) of the inverse map."""
    if kind == "Tt":
        return "Tt", -t
    if kind == "K":
        return "K", None
    return (kind[:-3], None) if kind.endswith("inv") else (kind + "inv", None)


# domains ---------------------------------------------------------------------------

def _singular_params(kind, legs):
    """Quantities that must stay away from 0 on the domain of ``kind``."""
    base = kind[:-3] if kind.endswith("inv") else kind
    if base in ("T", "Tt", "K", "T12"):
        return [_b_left(legs[1]).b + 1]
    if base == "T23":
        return [_b_left(legs[2]).b + 1]
    if base == "T1":
        return [_b_left(legs[2]).b + 1]
    if base == "T2":
        return [(_b_left(legs[1]) * _b_left(legs[2])).b + 1]
    raise ValueError(f"unknown twist map {kind!r}")


def in_domain(kind, p, margin=MARGIN):
    p = np.asarray(p, float)
    legs = _legs_of(list(p))
    ok = np.ones(p.shape[1:], bool)
    for q in _singular_params(kind, legs):
        ok &= np.abs(q) >= margin
    return ok


def twist_point(kind, p, t=None, margin=MARGIN):
    """Apply a twist map to coordinates ``p`` of shape ``(2 * legs, ...)``."""
    p = np.asarray(p, float)
    if p.shape[0] != 2 * _LEGS[kind]:
        raise ValueError(f"{kind} acts on {2 * _LEGS[kind]} coordinates")
    if kind == "Tt" and t is None:
        raise ValueError("Tt needs a parameter t")
    if not np.all(in_domain(kind, p, margin)):
        raise OutsideDomain(f"point outside the domain of {kind}")
    return np.array(_flat(_apply_legs(kind, _legs_of(list(p)), t)))


# function actions ---------------------------------------------------------------

def _weight(kind, n):
    """Half-density weight of the hat action, built from ``j_C`` at group-core points."""
    xs = [Coord(i, n) for i in range(n)]
    legs = _legs_of(xs)
    inverse = kind.endswith("inv")
    base = kind[:-3] if inverse else kind
    sign = -1.0 if inverse else 1.0

    def j(g, power):
        return modular_weight("C", g.b, g.a, power)

    if base == "T":
        return j(_ct_left(_b_left(legs[1])), 0.5 * sign)
    if base == "T12":
        return j(_ct_left(_b_left(legs[1])), 0.5 * sign)
    if base == "T23":
        return j(_ct_left(_b_left(legs[2])), 0.5 * sign)
    if base == "T2":
        return j(_ct_left(_b_left(legs[1]) * _b_left(legs[2])), 0.5 * sign)
    if base == "T1":
        u = _ct_left(_b_left(legs[2]))
        w = u.inv() if not inverse else u
        return mul(j(u, 0.5 * sign), j(_c_left(_b_left(legs[1]) * w), -0.5 * sign))
    return Const(1.0, n)


def _scale_interval(kind, sup, t):
    """Conservative image box of ``sup`` under a twist map (leg-wise scalings)."""
    inverse = kind.endswith("inv")
    base = kind[:-3] if inverse else kind
    sup = list(sup)

    def scaled(k, factor):
        sup[2 * k] = sup[2 * k] * factor
        sup[2 * k + 1] = sup[2 * k + 1] * factor

    def flip(k, s):
        pos, neg = s.lo > 0, s.hi < 0
        if neg:
            sup[2 * k], sup[2 * k + 1] = -sup[2 * k], -sup[2 * k + 1]
        elif not pos:
            sup[2 * k] = sup[2 * k] | -sup[2 * k]
            sup[2 * k + 1] = sup[2 * k + 1] | -sup[2 * k + 1]

    if base in ("T", "T12"):
        f = 1.0 + sup[2]
        scaled(0, f if inverse else f.recip())
    elif base == "T23":
        f = 1.0 + sup[4]
        scaled(1, f if inverse else f.recip())
    elif base == "T1":
        f = 1.0 + sup[4]
        scaled(0, f if inverse else f.recip())
        scaled(1, f if inverse else f.recip())
    elif base == "T2":
        f = 1.0 + sup[2] + sup[4]
        scaled(0, f if inverse else f.recip())
    elif base == "Tt":
        lo, hi = (1.0 + sup[2]).abs_range()
        vals = [lo ** -t, hi ** -t] if lo > 0 else [0.0, math.inf]
        scaled(0, IntervalSet.of(min(vals), max(vals)))
    elif base == "K":
        flip(0, 1.0 + sup[2])
    return tuple(sup)


def check_domain(kind, F, margin=MARGIN):
    """Raise ``OutsideDomain`` unless the support of ``F`` avoids the singular locus."""
    base = kind[:-3] if kind.endswith("inv") else kind
    s = F.support
    if base in ("T", "Tt", "K", "T12"):
        sets = [1.0 + s[2]]
    elif base in ("T23", "T1"):
        sets = [1.0 + s[4]]
    elif base == "T2":
        sets = [1.0 + s[2] + s[4]]
    else:
        raise ValueError(f"unknown twist map {kind!r}")
    for q in sets:
        if not q.bounded or q.distance_to(0.0) < margin:
            raise OutsideDomain(f"support of the input meets the singular locus of {kind}")


def twist_apply(kind, F, t=None, orientation="reproducing", margin=MARGIN):
    """Hat action of a twist map on a multi-leg function.

    ``reproducing``: ``(k F)(p) = w_k(p) F(k^{-1} p)``.
    ``paper``: the roles of ``k`` and ``k^{-1}`` in the pullback are swapped.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    n = 2 * _LEGS[kind]
    if F.nvars != n:
        raise ValueError(f"{kind} acts on functions of {n} coordinates")
    if kind == "Tt" and t is None:
        raise ValueError("Tt needs a parameter t")
    check_domain(kind, F, margin)
    inv, tinv = inverse_kind(kind, t)
    pull, tp, push, tpush = (inv, tinv, kind, t) if orientation == "reproducing" else (kind, t, inv, tinv)
    xs = [Coord(i, n) for i in range(n)]
    maps = _flat(_apply_legs(pull, _legs_of(xs), tp))
    support = _scale_interval(push, F.support, tpush)
    g = Compose(F, maps, support=support)
    return mul(_weight(kind, n), g).with_chart(ZC)


def twist_weights(kind, n=None):
    """The half-density weight expression (for inspection and tests)."""
    return _weight(kind, n or 2 * _LEGS[kind])


# generators ------------------------------------------------------------------------

GENERATORS = ("Y", "X", "J", "Bt", "SgnIplusY", "LogAbsIplusY", "InvIplusY")


def _require_u_support(F, leg, margin):
    if (1.0 + F.support[2 * leg]).distance_to(0.0) < margin:
        raise OutsideDomain(f"leg {leg} z-support meets z = -1")


def generator_apply(kind, F, leg=0, t=None, margin=MARGIN):
    """Act with a generator on leg ``leg`` of ``F``."""
    n = F.nvars
    iz, ic = 2 * leg, 2 * leg + 1
    if ic >= n:
        raise ValueError(f"function has no leg {leg}")
    z, c = Coord(iz, n), Coord(ic, n)
    xs = [Coord(i, n) for i in range(n)]
    sup = list(F.support)
    if kind == "Y":
        out = mul(z, F)
    elif kind == "X":
        out = mul(Const(1j, n), add(mul(z, F.diff(iz)), mul(c, F.diff(ic))))
    elif kind == "J":
        xs[iz], xs[ic] = -z, -c
        sup[iz], sup[ic] = -sup[iz], -sup[ic]
        out = Compose(F, xs, support=tuple(sup))
    elif kind == "Bt":
        if t is None:
            raise ValueError("Bt needs a parameter t")
        k = math.exp(-t)
        xs[iz], xs[ic] = k * z, k * c
        sup[iz], sup[ic] = sup[iz] * math.exp(t), sup[ic] * math.exp(t)
        out = Compose(F, xs, support=tuple(sup))
    elif kind in ("SgnIplusY", "LogAbsIplusY", "InvIplusY"):
        _require_u_support(F, leg, margin)
        w = 1.0 + z
        fn = {"SgnIplusY": Sign, "LogAbsIplusY": LogAbs, "InvIplusY": Recip}[kind]
        out = mul(fn(w), F)
    else:
        raise ValueError(f"unknown generator {kind!r}")
    return out.with_chart(ZC) if isinstance(out, SmoothFn) else out


def tt_generator(F, margin=MARGIN):
    """``Z F`` with ``Z = X (x) log|I + Y|``; the reproducing ``T_t`` is ``exp(-i t Z)``."""
    return generator_apply("X", generator_apply("LogAbsIplusY", F, leg=1, margin=margin), leg=0)


def delta0_generator(kind, F, t=None):
    """Undeformed coproduct of a generator acting on a two-leg function."""
    if kind in ("Y", "X"):
        return add(generator_apply(kind, F, 0), generator_apply(kind, F, 1))
    if kind in ("J", "Bt"):
        return generator_apply(kind, generator_apply(kind, F, 0, t=t), 1, t=t)
    raise ValueError(f"no coproduct for generator {kind!r}")


# sampling -----------------------------------------------------------------------

def sample_box(support, rng, n, shrink=0.0):
    """Uniform points in a bounded support box, optionally shrunk towards its centre."""
    cols = []
    for s in support:
        lo, hi = s.lo, s.hi
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo) * (1.0 - shrink)
        cols.append(rng.uniform(mid - half, mid + half, n))
    return tuple(cols)


def grid_box(support, k, axes=None, fixed=None):
    """Tensor grid with ``k`` interior points per axis in ``axes``; other axes sit at ``fixed``."""
    axes = range(len(support)) if axes is None else axes
    lines = []
    for i, s in enumerate(support):
        if i in axes:
            lines.append(np.linspace(s.lo, s.hi, k + 2)[1:-1])
        else:
            lines.append(np.array([fixed[i] if fixed is not None else 0.5 * (s.lo + s.hi)]))
    G = np.meshgrid(*lines, indexing="ij")
    return tuple(g.ravel() for g in G)


def probe_grid(fn, rng, k=5, axes=None, n=200, frac=0.2):
    """``k``-point grid on ``axes`` centred at the largest sampled value of ``|fn|``.

    Each axis spans ``frac`` of the support width; the other coordinates sit at
    the maximiser.  Keeps probes where the function is not negligible.
    """
    sup = fn.support
    P = sample_box(sup, rng, n)
    v = np.abs(fn.values(P))
    centre = [p[int(np.argmax(v))] for p in P]
    axes = range(len(sup)) if axes is None else axes
    lines = []
    for i, s in enumerate(sup):
        if i in axes:
            half = 0.5 * frac * (s.hi - s.lo)
            lo, hi = max(s.lo, centre[i] - half), min(s.hi, centre[i] + half)
            lines.append(np.linspace(lo, hi, k))
        else:
            lines.append(np.array([centre[i]]))
    G = np.meshgrid(*lines, indexing="ij")
    return tuple(g.ravel() for g in G)


def relative_residual(F, G, X):
    """``sup |F - G| / sup |F|`` on points ``X`` (absolute when ``F`` vanishes there)."""
    a, b = F.values(X), G.values(X)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    r = float(np.max(np.abs(a - b))) if a.size else 0.0
    return r / scale if scale > 0 else r


def _sup_diff(F, G, X):
    return float(np.max(np.abs(F.values(X) - G.values(X)))) if X[0].size else 0.0


# identity checks -------------------------------------------------------------------

def coproduct_lhs(kind, F, orientation="reproducing", t=None):
    """``T (Delta_0(gen)) T^{-1} F``."""
    inner = twist_apply("Tinv", F, orientation=orientation)
    return twist_apply("T", delta0_generator(kind, inner, t=t), orientation=orientation)


def coproduct_closed_form(kind, F):
    """The twisted coproducts of ``Y``, ``X`` and ``J`` in closed form."""
    n = F.nvars
    z1, c1, z2, c2 = (Coord(i, n) for i in range(4))
    if kind == "Y":
        return mul(add(z1, z2, mul(z1, z2)), F)
    if kind == "X":
        first = add(mul(z1, F.diff(0)), mul(c1, F.diff(1)))
        second = add(mul(z2, F.diff(2)), mul(c2, F.diff(3)))
        return mul(Const(1j, n), add(mul(first, Recip(1.0 + z2)), second))
    if kind == "J":
        r = (1.0 + z2) * Recip(1.0 - z2)
        return Compose(F, [-(z1 * r), -(c1 * r), -z2, -c2])
    raise ValueError(f"no closed form for {kind!r}")


def coproduct_check(kind, F, X, orientation="reproducing"):
    """Sup-residual between the conjugation route and the closed form on points ``X``."""
    if kind == "J" and (1.0 - F.support[2]).distance_to(0.0) < MARGIN:
        raise OutsideDomain("the J check needs the leg-1 z-support away from z = 1")
    return _sup_diff(coproduct_lhs(kind, F, orientation), coproduct_closed_form(kind, F), X)


def khat_formula_check(F, X, orientation="reproducing"):
    """Residual of ``K F - 1/2 (I (x) (I + S) + J (x) (I - S)) F`` with ``S = sgn(I + Y)``."""
    lhs = twist_apply("K", F, orientation=orientation)
    S = lambda G: generator_apply("SgnIplusY", G, leg=1)
    JF = generator_apply("J", F, leg=0)
    rhs = mul(Const(0.5, F.nvars), add(F, S(F), JF, -S(JF)))
    return _sup_diff(lhs, rhs, X)


def generator_relations(F, X, t=0.7):
    """Residuals of the relations between ``J``, ``B_t`` and ``Y`` on one leg."""
    J = lambda G: generator_apply("J", G)
    Bt = lambda G: generator_apply("Bt", G, t=t)
    Y = lambda G: generator_apply("Y", G)
    return {
        "J_Bt_commute": _sup_diff(J(Bt(F)), Bt(J(F)), X),
        "J_Y_anticommute": float(np.max(np.abs(J(Y(F)).values(X) + Y(J(F)).values(X)))),
        "Bt_Y_scaling": _sup_diff(mul(Const(math.exp(t), F.nvars), Bt(Y(F))), Y(Bt(F)), X),
    }


def x_generator_residual(F, X, h0=0.01, levels=5):
    """``(B_h F - B_{-h} F)/(2h)`` against ``i X F`` after Richardson extrapolation in ``h^2``.

    ``B_t = exp(i t X)``, so the difference quotient tends to ``i X F``.
    """
    target = 1j * generator_apply("X", F).values(X)
    hs = [h0 / 2 ** k for k in range(levels)]
    table = [(generator_apply("Bt", F, t=h).values(X) - generator_apply("Bt", F, t=-h).values(X)) / (2 * h)
             for h in hs]
    for order in range(1, levels):
        f = 4.0 ** order
        table = [(f * table[k + 1] - table[k]) / (f - 1) for k in range(len(table) - 1)]
    return float(np.max(np.abs(table[0] - target)))


def tt_group_law(F, X, t, r, orientation="reproducing"):
    a = twist_apply("Tt", twist_apply("Tt", F, t=r, orientation=orientation), t=t, orientation=orientation)
    b = twist_apply("Tt", F, t=t + r, orientation=orientation)
    return _sup_diff(a, b, X)


def k_t1_points(P):
    """``max(|K T_1 p - T p|, |T_1 K p - T p|)`` on points ``P``."""
    T = twist_point("T", P)
    kt = twist_point("K", twist_point("Tt", P, t=1.0))
    tk = twist_point("Tt", twist_point("K", P), t=1.0)
    return float(max(np.max(np.abs(kt - T)), np.max(np.abs(tk - T))))


def cocycle_points(P):
    """``|T12 T1 p - T23 T2 p|`` on six-coordinate points."""
    lhs = twist_point("T12", twist_point("T1", P))
    rhs = twist_point("T23", twist_point("T2", P))
    return float(np.max(np.abs(lhs - rhs)))


def cocycle_functions(F, X, orientation="reproducing"):
    """``|T12 T1 F - T23 T2 F|`` on points ``X`` for a three-leg function."""
    lhs = twist_apply("T12", twist_apply("T1", F, orientation=orientation), orientation=orientation)
    rhs = twist_apply("T23", twist_apply("T2", F, orientation=orientation), orientation=orientation)
    return _sup_diff(lhs, rhs, X)


def intertwining_pair(which, F1, F2, orientation="reproducing", spec=DEFAULT_SPEC):
    """Both sides of the intertwining identity.

    ``which="T1"``: ``T1[(delta0 x id)(F1) F2]`` and ``(delta0 x id)(T F1) F2``.
    ``which="T2"``: ``T2[(id x delta0)(F1) F2]`` and ``(id x delta0)(T F1) F2``.
    """
    kind = {"T1": "delta_id", "T2": "id_delta"}[which]
    lhs = twist_apply(which, delta0_hat_3leg(kind, F1, F2, spec), orientation=orientation)
    rhs = delta0_hat_3leg(kind, twist_apply("T", F1, orientation=orientation), F2, spec)
    return lhs, rhs


def intertwining_check(which, F1, F2, rng, orientation="reproducing", spec=DEFAULT_SPEC, k=5):
    """Relative sup-residual on a ``k^3`` grid over the three ``z`` coordinates."""
    lhs, rhs = intertwining_pair(which, F1, F2, orientation, spec)
    X = probe_grid(lhs, rng, k=k, axes=(0, 2, 4))
    return relative_residual(lhs, rhs, X)


# the diffeomorphisms of the density argument -----------------------------------------

DOMAIN_KINDS = ("Bprime", "U", "DPhi1", "DPsi1", "DPhi2", "DPsi2")


def _in_ca(g, margin):
    return np.abs(1.0 + g.b) > margin


def _sB(g):
    """Groupoid inverse in ``G_B``: ``c'^{-1} b`` for ``g = b c = c' b'``."""
    return _c_left(g).inv() * _b_left(g)


def region_contains(kind, p, margin=0.0):
    """Membership in the open sets of the density argument, with an optional margin."""
    p = np.asarray(p, float)
    if kind == "Bprime":
        return np.abs(1.0 + p[0]) > margin
    g1, g2 = _legs_of(list(p))
    b1, b2 = _b_left(g1), _b_left(g2)
    if kind in ("U", "DPsi1"):
        return np.abs(1.0 + b2.b) > margin
    if kind == "DPhi1":
        return _in_ca(b2.inv() * _cpart(g1), margin)
    if kind == "DPhi2":
        x, y = b1 * b2 * _cpart(g2), b2 * _cpart(g2)
        return _in_ca(x, margin) & _in_ca(y, margin)
    if kind == "DPsi2":
        return _in_ca(g1, margin) & _in_ca(b2, margin)
    raise ValueError(f"unknown region {kind!r}")


def _cpart(g):
    return decompose(g, B, C)[1]


def phi_psi(kind, p, margin=0.0):
    """``Phi1``, ``Psi1``, ``Phi2`` or ``Psi2`` on four-coordinate points."""
    p = np.asarray(p, float)
    dom = {"Phi1": "DPhi1", "Psi1": "DPsi1", "Phi2": "DPhi2", "Psi2": "DPsi2"}[kind]
    if not np.all(region_contains(dom, p, margin)):
        raise OutsideDomain(f"point outside the domain of {kind}")
    g1, g2 = _legs_of(list(p))
    b1, c1, b2, c2 = _b_left(g1), _cpart(g1), _b_left(g2), _cpart(g2)
    try:
        if kind == "Phi1":
            c0 = _ct_left(b2.inv() * c1)
            out = [b1 * b2 * c0, _b_right(b2 * c0) * c0.inv() * c2]
        elif kind == "Psi1":
            x = b2 * c1.inv()
            br = _b_right(x)
            c0 = _ct_left(_sB(x))
            out = [b1 * br.inv() * c0, br * c1 * c2]
        elif kind == "Phi2":
            c0 = _ct_left(b2 * c2)
            out = [b1 * b2 * c2, _b_right(b1 * c0) * c0.inv() * c1]
        else:
            c0, ct0 = _ct_left(b1 * c1), _ct_left(b2)
            x = c0 * ct0.inv() * b2
            out = [x * c2, _b_left(x).inv() * b1 * c1]
    except NotDecomposable as exc:
        raise OutsideDomain(str(exc)) from exc
    return np.array(_flat(out))


def support_claim_check(which, f1, f2, rng, n=2000):
    """Count sampled support points of ``f1 (x) f2`` whose ``Psi``-image leaves ``D(Phi)``.

    The pullback ``Phi^*(f1 (x) f2)`` is then compactly supported inside ``D(Phi)``.
    """
    sup = tuple(f1.support) + tuple(f2.support)
    P = np.array(sample_box(sup, rng, n))
    live = (f1.values((P[0], P[1])) != 0) & (f2.values((P[2], P[3])) != 0)
    P = P[:, live]
    psi, dom = ("Psi1", "DPhi1") if which == "Phi1" else ("Psi2", "DPhi2")
    Q = phi_psi(psi, P)
    return int(np.count_nonzero(~region_contains(dom, Q))), int(P.shape[1])


# the measure estimate --------------------------------------------------------------

def mu_interval(z1, z2, m, delta):
    """The set ``{c : m <= |c| <= 1/m, |z1/c + z2 + 1| < delta}`` as an interval set."""
    w = 1.0 + z2
    if abs(w) <= delta:
        raise OutsideDomain("needs delta < |1 + z2|")
    if not 0 < m < 1:
        raise OutsideDomain("needs 0 < m < 1")
    if z1 == 0:
        return IntervalSet(())
    u = sorted(((-w - delta) / z1, (-w + delta) / z1))
    cset = IntervalSet.of(u[0], u[1]).recip()
    band = IntervalSet.of(-1.0 / m, -m) | IntervalSet.of(m, 1.0 / m)
    return cset & band


def mu_measure(z1, z2, m, delta, spec=DEFAULT_SPEC, analytic=False):
    """``int_Z dc/|c|`` by Gauss-Legendre over the solution intervals (or in closed form)."""
    from .funcspace.quadrature import panel_rule

    Z = mu_interval(z1, z2, m, delta)
    if analytic:
        return float(sum(abs(math.log(abs(b) / abs(a))) for a, b in Z.pieces if b > a))
    if Z.empty:
        return 0.0
    x, w = panel_rule(Z, 4, spec.order)
    return float(np.sum(w / np.abs(x)))


def mu_pointwise_bound(z1, z2, m, delta):
    return 2.0 * delta * abs(z1) / (m * ((1.0 + z2) ** 2 - delta ** 2))


def mu_uniform_bound(M, m, delta):
    return delta * 8.0 * M ** 3 / (3.0 * m)


def sample_k_sets(rng, M, n):
    """``z1`` uniform in ``|z| <= M``; ``z2`` with ``1/M <= |z2 + 1| <= M``."""
    z1 = rng.uniform(-M, M, n)
    r = rng.uniform(1.0 / M, M, n)
    z2 = np.where(rng.random(n) < 0.5, r, -r) - 1.0
    return z1, z2


# Extension of the transposed multiplication ------------------------------

def extension_sides(a1, a2, c2):
    """Both sides of the extension identity for ``A`` elements ``a1, a2`` and ``c2`` in ``C``.

    ``c1`` is fixed by ``c1 a2' = a2 c2`` (``C`` factor of the ``C A`` split of ``a2 c2``).
    """
    x = _b_right(a2)
    ct = _ct_left(x)
    y = _b_right(a1 * a2) * x.inv() * ct
    y2 = x * c2
    lhs = _b_right(y) * ct.inv() * _c_left(y2) * _ct_left(_b_right(y2))
    c1 = _ct_left(a2 * c2)
    rhs = _b_right(a1) * c1
    return lhs, rhs


def extension_identity_check(a1, a2, c2):
    """Max residual of the identity on (arrays of) ``A`` and ``C`` parameters."""
    ga1, ga2 = subgroup_element(A, np.asarray(a1, float)), subgroup_element(A, np.asarray(a2, float))
    gc2 = subgroup_element(C, np.asarray(c2, float))
    lhs, rhs = extension_sides(ga1, ga2, gc2)
    return float(np.max(lhs.dist(rhs)))


__all__ = [
    "MARGIN", "ORIENTATIONS", "TWIST_KINDS", "GENERATORS", "twist_point", "in_domain", "inverse_kind",
    "twist_apply", "twist_weights", "check_domain", "generator_apply", "tt_generator", "delta0_generator",
    "coproduct_lhs", "coproduct_closed_form", "coproduct_check", "khat_formula_check",
    "generator_relations", "x_generator_residual", "tt_group_law", "k_t1_points", "cocycle_points",
    "cocycle_functions", "intertwining_pair", "intertwining_check", "region_contains", "phi_psi",
    "support_claim_check", "mu_interval", "mu_measure", "mu_pointwise_bound", "mu_uniform_bound",
    "sample_k_sets", "extension_sides", "probe_grid", "relative_residual", "extension_identity_check", "sample_box", "grid_box",
]
