import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from axblab import twist as tw
from axblab.errors import OutsideDomain
from axblab.funcspace import tensor_bump

z = st.floats(-2, 2, allow_nan=False)
c = st.floats(0.3, 2.5).flatmap(lambda x: st.sampled_from([x, -x]))
z2 = st.floats(-0.8, 2.0)


@given(z, c, z2, c)
def test_point_maps_closed_forms(z1, c1, zz, c2):
    p = np.array([[z1], [c1], [zz], [c2]])
    w = 1.0 + zz
    np.testing.assert_allclose(tw.twist_point("T", p).ravel(), [z1 / w, c1 / w, zz, c2], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(tw.twist_point("Tinv", p).ravel(), [z1 * w, c1 * w, zz, c2], rtol=1e-12, atol=1e-12)
    r = abs(w) ** -0.7
    np.testing.assert_allclose(tw.twist_point("Tt", p, t=0.7).ravel(), [z1 * r, c1 * r, zz, c2], rtol=1e-12, atol=1e-12)
    sg = math.copysign(1.0, w)
    np.testing.assert_allclose(tw.twist_point("K", p).ravel(), [z1 * sg, c1 * sg, zz, c2], rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("kind", ["T", "T1", "T2", "T12", "T23", "K"])
def test_inverse_maps(kind, rng):
    n = 2 * tw._LEGS[kind]
    P = rng.uniform(-0.5, 0.5, (n, 200))
    P[1::2] = rng.uniform(0.5, 2.0, (n // 2, 200))
    P = P[:, tw.in_domain(kind, P, 0.1)]
    inv, _ = tw.inverse_kind(kind)
    Q = tw.twist_point(inv, tw.twist_point(kind, P), margin=0.0)
    np.testing.assert_allclose(Q, P, rtol=1e-12, atol=1e-12)


def test_cocycle_on_points(rng):
    P = rng.uniform(-0.4, 0.4, (6, 2000))
    P[1::2] = rng.uniform(0.5, 2.0, (3, 2000)) * rng.choice([-1, 1], (3, 2000))
    assert tw.cocycle_points(P) < 1e-12


def test_tt_at_one_is_t_up_to_k(rng):
    P = rng.uniform(-0.5, 0.5, (4, 500))
    P[1::2] = rng.uniform(0.5, 2.0, (2, 500))
    assert tw.k_t1_points(P) < 1e-12


def test_singular_locus_rejected():
    with pytest.raises(OutsideDomain):
        tw.twist_point("T", np.array([[0.1], [1.0], [-1.0], [1.0]]))
    F = tensor_bump((0.1, 1.0, -1.0, 1.0), (0.2, 0.3, 0.3, 0.3), chart="zc")
    with pytest.raises(OutsideDomain):
        tw.twist_apply("T", F)


@pytest.fixture(scope="module")
def F2():
    return tensor_bump((0.2, 1.0, 0.1, 1.2), (0.2, 0.3, 0.2, 0.3), chart="zc")


def test_function_action_is_the_pullback(F2, rng):
    X = tw.sample_box(tw.twist_apply("T", F2).support, rng, 300)
    z1, c1, zz, c2 = X
    ref = F2(z1 * (1 + zz), c1 * (1 + zz), zz, c2)
    np.testing.assert_allclose(tw.twist_apply("T", F2)(*X), ref, atol=1e-15)
    # the other orientation pulls back along the forward map
    ref = F2(z1 / (1 + zz), c1 / (1 + zz), zz, c2)
    np.testing.assert_allclose(tw.twist_apply("T", F2, orientation="paper")(*X), ref, atol=1e-15)


def test_function_action_inverse(F2, rng):
    G = tw.twist_apply("Tinv", tw.twist_apply("T", F2))
    X = tw.sample_box(F2.support, rng, 300)
    np.testing.assert_allclose(G(*X), F2(*X), atol=1e-15)


def test_coproduct_closed_forms(F2, rng):
    X = tw.probe_grid(F2, rng)
    assert tw.coproduct_check("Y", F2, X) < 1e-8
    assert tw.coproduct_check("X", F2, X) < 1e-8
    assert tw.coproduct_check("J", F2, X) < 1e-10


def test_flipped_orientation_breaks_the_y_coproduct(F2, rng):
    X = tw.probe_grid(F2, rng)
    assert tw.coproduct_check("Y", F2, X, orientation="paper") > 1e-3


def test_generator_relations(F2, rng):
    X = tw.probe_grid(F2, rng)
    assert max(tw.generator_relations(F2, X).values()) < 1e-12
    assert tw.x_generator_residual(F2, X) < 1e-6
    assert tw.tt_group_law(F2, X, 0.3, -0.8) < 1e-12


def test_measure_value():
    # the set of c is {c : |1/c + 1| < 0.1}, so the measure is log(1.1/0.9)
    assert tw.mu_measure(1.0, 0.0, 0.5, 0.1, analytic=True) == pytest.approx(math.log(11 / 9), rel=1e-14)
    assert tw.mu_measure(1.0, 0.0, 0.5, 0.1) == pytest.approx(math.log(11 / 9), rel=1e-12)
    with pytest.raises(OutsideDomain):
        tw.mu_measure(1.0, -0.95, 0.5, 0.1)


@given(st.floats(-2, 2), st.floats(0.5, 2).flatmap(lambda r: st.sampled_from([r - 1, -r - 1])),
       st.sampled_from([0.25, 0.5]), st.sampled_from([0.125, 0.25]))
def test_measure_bounds(z1, zz, m, delta):
    mu = tw.mu_measure(z1, zz, m, delta, analytic=True)
    assert mu <= tw.mu_pointwise_bound(z1, zz, m, delta) * (1 + 1e-12) + 1e-15
    assert mu <= tw.mu_uniform_bound(2.0, m, delta)


@given(st.floats(0.2, 4).flatmap(lambda x: st.sampled_from([x, -x])),
       st.floats(0.2, 4).flatmap(lambda x: st.sampled_from([x, -x])), st.floats(0.2, 3))
def test_extension_identity(a1, a2, c2):
    try:
        r = tw.extension_identity_check([a1], [a2], [c2])
    except Exception as exc:  # points off the decomposition locus
        assert type(exc).__name__ == "NotDecomposable"
        return
    assert r < 1e-10 * (1 + abs(a1) + abs(a2) + abs(c2)) ** 3


@pytest.mark.parametrize("phi,psi", [("Phi1", "Psi1"), ("Phi2", "Psi2")])
def test_phi_psi_inverse(phi, psi, rng):
    P = rng.uniform(-1.5, 1.5, (4, 2000))
    P[1::2] = rng.uniform(0.4, 2.0, (2, 2000)) * rng.choice([-1, 1], (2, 2000))
    dom = {"Phi1": "DPhi1", "Phi2": "DPhi2"}[phi]
    P = P[:, tw.region_contains(dom, P, 0.1)]
    Q = tw.phi_psi(phi, P)
    back = tw.phi_psi(psi, Q[:, tw.region_contains("D" + psi, Q, 0.0)])
    keep = tw.region_contains("D" + psi, Q, 0.0)
    scale = 1 + np.abs(P[:, keep])
    assert np.max(np.abs(back - P[:, keep]) / scale) < 1e-10


@pytest.mark.parametrize("which", ["Phi1", "Phi2"])
def test_pullback_support_stays_in_domain(which, rng):
    f1 = tensor_bump((0.2, 1.2), (0.3, 0.3), chart="zc")
    f2 = tensor_bump((0.1, 1.0), (0.2, 0.3), chart="zc")
    bad, n = tw.support_claim_check(which, f1, f2, rng, n=2000)
    assert n > 1000 and bad == 0
