import numpy as np
import pytest
from conftest import crandn, random_distinct
from identity_oracle import coeff_taylor, derivs_from_taylor, exponential_paths, polynomial_paths

from zerodyn.errors import SingularityError
from zerodyn.identities import (
    DerivBundle,
    identity_residuals,
    interaction_sum,
    n2_order_k_residual,
    relation_matrix,
    relation_matrix_inverse,
    zero_derivs_from_coeff_derivs,
)
from zerodyn.symmetria import coeff_derivs_from_zero_derivs, distinct_tuples


def rel_residual(res, ref):
    return np.abs(res).max() / max(1.0, np.abs(ref).max())


def test_relation_matrix_examples():
    np.testing.assert_allclose(relation_matrix([2, 1]), [[-2, -1], [1, 1]])
    np.testing.assert_allclose(relation_matrix([1, -1]), [[-0.5, -0.5], [-0.5, 0.5]])
    with pytest.raises(SingularityError):
        relation_matrix([1, 1])


def test_relation_inverse_examples():
    np.testing.assert_allclose(relation_matrix_inverse([2, 1]), [[-1, -1], [1, 2]])
    np.testing.assert_allclose(relation_matrix([2, 1]) @ relation_matrix_inverse([2, 1]), np.eye(2))


@pytest.mark.parametrize("n", range(1, 13))
def test_relation_inverse_random(n, rng):
    for _ in range(5):
        z = random_distinct(rng, n)
        dev = relation_matrix(z) @ relation_matrix_inverse(z) - np.eye(n)
        assert np.abs(dev).max() <= 1e-10


def test_zero_derivs_examples():
    (zd,) = zero_derivs_from_coeff_derivs([2, 1], [-2, 3])
    np.testing.assert_allclose(zd, [1, 1])
    zero = np.zeros(3)
    out = zero_derivs_from_coeff_derivs([1, 2j, -1], zero, zero, zero, zero)
    assert len(out) == 4 and all(np.all(o == 0) for o in out)


@pytest.mark.parametrize("n", range(1, 9))
def test_mutual_inverse(n, rng):
    for _ in range(5):
        z = random_distinct(rng, n)
        cds = [crandn(rng, n) for _ in range(3)]
        back = coeff_derivs_from_zero_derivs(z, *zero_derivs_from_coeff_derivs(z, *cds))
        for c, b in zip(cds, back):
            assert np.abs(b - c).max() <= 1e-9 * max(1.0, np.abs(c).max())


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_first_identity_is_matrix_action(n, rng):
    z = random_distinct(rng, n)
    c1 = crandn(rng, n)
    (zd,) = zero_derivs_from_coeff_derivs(z, c1)
    ref = relation_matrix(z) @ c1
    assert np.abs(zd - ref).max() <= 1e-12 * max(1.0, np.abs(ref).max())


def test_manufactured_linear_quadratic():
    # z1 = t, z2 = t^2 at t = 2; c1 = -(t + t^2), c2 = t^3
    b = DerivBundle(z=[2, 4], zd1=[1, 4], zd2=[0, 2], zd3=[0, 0], zd4=[0, 0],
                    cd1=[-5, 12], cd2=[-2, 12], cd3=[0, 6], cd4=[0, 0])
    for order in (1, 2, 3, 4):
        assert np.abs(identity_residuals(b, order)).max() <= 1e-12


def test_residual_sensitivity():
    b = DerivBundle(z=[2, 4], zd1=[2, 4], cd1=[-5, 12])
    res = identity_residuals(b, 1)
    assert abs(abs(res[0]) - 1) < 1e-12 and abs(res[1]) < 1e-12


def test_residuals_need_data():
    with pytest.raises(ValueError):
        identity_residuals(DerivBundle(z=[1, 2], zd1=[0, 0]), 1)
    with pytest.raises(SingularityError):
        identity_residuals(DerivBundle(z=[1, 1], zd1=[0, 0], cd1=[0, 0]), 1)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
@pytest.mark.parametrize("paths", [polynomial_paths, exponential_paths])
def test_identities_on_manufactured_trajectories(n, paths, rng):
    for _ in range(3):
        zser = paths(rng, n)
        cser = coeff_taylor(zser)
        zd = derivs_from_taylor(zser, 4)
        cd = derivs_from_taylor(cser, 4)
        bundle = DerivBundle(zser[:, 0], *zd, *cd)
        for order in (1, 2, 3, 4):
            assert rel_residual(identity_residuals(bundle, order), zd[order - 1]) <= 1e-9
        # and the inverse direction reproduces the zero derivatives
        back = zero_derivs_from_coeff_derivs(zser[:, 0], *cd)
        for k in range(4):
            assert rel_residual(back[k] - zd[k], zd[k]) <= 1e-9


def test_primed_sum_degeneracy():
    assert distinct_tuples(2, 3).shape[0] == 0
    assert distinct_tuples(3, 4).shape[0] == 0
    assert distinct_tuples(3, 3).shape[0] == 6
    # with two zeros the order-3 sum is only the pair term
    z, d1, d2 = np.array([1.0, -0.5j]), np.array([0.3, 1j]), np.array([2.0, -1.0])
    pair = 3 * (d2 * d1[::-1] + d2[::-1] * d1) / (z - z[::-1])
    np.testing.assert_allclose(interaction_sum(3, z, d1, d2), pair)


def _exp_pair(k, t=1.0):
    zk = np.array([[np.exp(t), 2**j * np.exp(2 * t)] for j in range(k + 1)])
    ck = np.array([-(np.exp(t) + 2**k * np.exp(2 * t)), 3**k * np.exp(3 * t)])
    return zk, ck


def test_n2_order_k_reduces_to_first_identity():
    # z1 = t, z2 = t^2 at t = 2
    res = n2_order_k_residual([[2, 4], [1, 4]], [-5, 12], 1)
    assert np.abs(res).max() <= 1e-12


@pytest.mark.parametrize("k", range(1, 7))
def test_n2_order_k_exponential(k):
    zk, ck = _exp_pair(k)
    res = n2_order_k_residual(zk, ck, k)
    assert np.abs(res).max() / np.abs(zk[k]).max() <= 1e-12


def test_n2_order_k_at_coincident_start_is_singular():
    zk = np.array([[1.0, 1.0], [1.0, 2.0]])
    with pytest.raises(SingularityError):
        n2_order_k_residual(zk, [-3, 3], 1)


@pytest.mark.parametrize("k", range(1, 7))
def test_n2_order_k_cubic_paths(k, rng):
    p1 = crandn(rng, 4)
    p2 = crandn(rng, 4) + 3
    t = 0.7
    d1 = [np.polyval(np.polyder(p1, j), t) if j else np.polyval(p1, t) for j in range(k + 1)]
    d2 = [np.polyval(np.polyder(p2, j), t) if j else np.polyval(p2, t) for j in range(k + 1)]
    c1 = -np.polyadd(p1, p2)
    c2 = np.polymul(p1, p2)
    ck = [np.polyval(np.polyder(c, k), t) for c in (c1, c2)]
    res = n2_order_k_residual(np.array([d1, d2]).T, ck, k)
    assert np.abs(res).max() <= 1e-9 * max(1.0, np.abs(d1).max(), np.abs(d2).max())


@pytest.mark.parametrize("k", [2, 3, 4])
def test_n2_order_k_agrees_with_order_k_identity(k, rng):
    zser = exponential_paths(rng, 2)
    cser = coeff_taylor(zser)
    zd = [zser[:, 0]] + derivs_from_taylor(zser, k)
    cd = derivs_from_taylor(cser, k)
    assert np.abs(n2_order_k_residual(np.array(zd), cd[k - 1], k)).max() <= 1e-9 * np.abs(zd).max()
