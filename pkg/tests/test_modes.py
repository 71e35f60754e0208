import warnings

import numpy as np
import pytest
from conftest import crandn
from hypothesis import given
from hypothesis import strategies as st

from zerodyn.errors import ConditioningWarning, DegenerateModesError
from zerodyn.modes import (
    CoeffParams,
    ModeSpec,
    eval_coefficient,
    eval_coefficients,
    fit_amplitudes,
    initial_coeff_derivs,
    params_from_decay_freq,
    params_from_modes,
    quartic_modes,
)


def same_set(a, b, tol):
    a, b = np.sort_complex(np.asarray(a)), list(np.asarray(b, dtype=complex))
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        if abs(x - b[j]) > tol:
            return False
        b.pop(j)
    return True


@pytest.mark.parametrize("params, expected", [
    ((5j, 5, 5j, 6), [-1j, 1j, 2j, 3j]),
    ((-3, -3, -3, -2), [-1j, 1j, -1, -2]),
    ((0, 0, 0, 1), [1, -1, 1j, -1j]),
])
def test_quartic_modes_examples(params, expected):
    lam = quartic_modes(*params)
    assert same_set(lam, expected, 1e-10)


def test_quartic_modes_lexicographic():
    lam = quartic_modes(0, 0, 0, 1)
    np.testing.assert_allclose(lam, [-1, -1j, 1j, 1], atol=1e-14)


@pytest.mark.parametrize("lam", [[1, 1, -1, 2], [2j, 2j, 0.5, -1 + 1j], [0, 0, 1, 2], [1, 1, 1, -3]])
def test_quartic_modes_degenerate(lam):
    with pytest.raises(DegenerateModesError):
        quartic_modes(*params_from_modes(lam))


def test_quartic_modes_close_but_distinct():
    lam = quartic_modes(*params_from_modes([1, 1 + 1e-4, -1, 2]))
    assert same_set(lam, [1, 1 + 1e-4, -1, 2], 1e-10)


def test_params_from_modes_examples():
    np.testing.assert_allclose(params_from_modes([-1j, 1j, 2j, 3j]), [5j, 5, 5j, 6], atol=1e-14)
    np.testing.assert_allclose(params_from_modes([-1j, 1j, -1, -2]), [-3, -3, -3, -2], atol=1e-14)
    assert params_from_modes([0, 0, 0, 0]) == (0, 0, 0, 0)


def test_params_from_decay_freq_examples():
    np.testing.assert_allclose(params_from_decay_freq([0, 0, 0, 0], [-1, 1, 2, 3]), [5j, 5, 5j, 6], atol=1e-14)
    np.testing.assert_allclose(params_from_decay_freq([0, 0, 1, 2], [-1, 1, 0, 0]), [-3, -3, -3, -2], atol=1e-14)
    assert params_from_decay_freq([0] * 4, [0] * 4) == (0, 0, 0, 0)


_reals = st.floats(-5, 5, allow_nan=False).map(lambda x: round(x, 9))


@given(st.lists(_reals, min_size=4, max_size=4), st.lists(_reals, min_size=4, max_size=4))
def test_decay_freq_matches_vieta(a, omega):
    lam = -np.array(a) + 1j * np.array(omega)
    p = np.array(params_from_decay_freq(a, omega))
    q = np.array(params_from_modes(lam))
    # scale of each symmetric function: the same sum over |lam|
    mag = np.abs(lam)
    scale = np.array([mag.sum(), (np.outer(mag, mag).sum() - (mag**2).sum()) / 2,
                      sum(mag[i] * mag[j] * mag[k] for i in range(4) for j in range(i + 1, 4) for k in range(j + 1, 4)),
                      mag.prod()])
    assert np.all(np.abs(p - q) <= 1e-12 * np.maximum(scale, 1e-300) + 1e-300)


def test_roundtrip_modes(rng):
    for _ in range(1000):
        lam = crandn(rng, 4)
        gap = np.abs(lam[:, None] - lam[None, :]) + 1e9 * np.eye(4)
        if gap.min() < 0.05:
            continue
        back = quartic_modes(*params_from_modes(lam))
        assert same_set(back, lam, 1e-9 * (1 + np.abs(lam).max()))


def test_fit_amplitudes_examples():
    np.testing.assert_allclose(fit_amplitudes([1, -1, 1j, -1j], [1, 1, 1, 1]), [1, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(fit_amplitudes([1j, -1j, 2j, 3j], [1, 0, -1, 0]), [0.5, 0.5, 0, 0], atol=1e-14)
    with pytest.raises(DegenerateModesError):
        fit_amplitudes([1, 1, 2, 3], [1, 0, 0, 0])


def test_fit_amplitudes_residual(rng):
    for _ in range(100):
        lam = crandn(rng, 4)
        d = crandn(rng, 4)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditioningWarning)
            b = fit_amplitudes(lam, d)
        V = lam[None, :] ** np.arange(4)[:, None]
        assert np.abs(V @ b - d).max() <= 1e-10 * np.abs(d).max() * max(1, np.linalg.cond(V) * 1e-4)


def test_fit_amplitudes_warns_when_ill_conditioned():
    lam = np.array([0, 1e-4, 2e-4, 3e-4])
    with pytest.warns(ConditioningWarning):
        fit_amplitudes(lam, [1, 0, 0, 0])


def test_eval_coefficient_examples(rng):
    spec = ModeSpec(lam=[[1j, 2, 3, 4]], amp=[[1, 0, 0, 0]])
    assert abs(eval_coefficient(spec, 0, np.pi) - (-1)) < 1e-15
    spec = ModeSpec(lam=crandn(rng, 3, 4), amp=crandn(rng, 3, 4))
    np.testing.assert_allclose(eval_coefficients(spec, 0.0), spec.amp.sum(axis=1))


def test_coefficients_solve_the_linear_ode(rng):
    for _ in range(20):
        lam = 0.3 * crandn(rng, 2, 4)
        spec = ModeSpec(lam=lam, amp=crandn(rng, 2, 4))
        params = CoeffParams.from_modes(lam)
        for t in rng.uniform(-10, 10, 5):
            c = [eval_coefficients(spec, t, order=k) for k in range(5)]
            rhs = params.combine(c[0], c[1], c[2], c[3])
            assert np.abs(c[4] - rhs).max() <= 1e-10 * max(1.0, np.abs(c[4]).max(), np.abs(rhs).max())


def test_fit_reproduces_initial_data(rng):
    for n in (1, 2, 3, 5):
        z = crandn(rng, n)
        derivs = [crandn(rng, n) for _ in range(3)]
        params = CoeffParams.from_modes(crandn(rng, n, 4))
        spec = ModeSpec.from_initial_data(params, z, *derivs)
        data = initial_coeff_derivs(z, *derivs)
        for s in range(4):
            got = eval_coefficients(spec, 0.0, order=s)
            assert np.abs(got - data[s]).max() <= 1e-10 * max(1.0, np.abs(data[s]).max())


def test_eval_order_range():
    spec = ModeSpec(lam=[[1, 2, 3, 4]], amp=[[1, 0, 0, 0]])
    with pytest.raises(ValueError):
        eval_coefficient(spec, 0, 0.0, order=5)


def test_coeffparams_helpers():
    p = CoeffParams.uniform(3, 5j, 5, 5j, 6)
    assert p.N == 3
    lam = p.modes()
    assert lam.shape == (3, 4)
    q = p.perturbed(0, 1.0)
    assert q.delta[0] == 7 and p.delta[0] == 6
    r = CoeffParams.from_decay_freq(np.zeros((3, 4)), np.tile([-1, 1, 2, 3], (3, 1)))
    np.testing.assert_allclose(r.alpha, p.alpha)
    np.testing.assert_allclose(r.delta, p.delta)
