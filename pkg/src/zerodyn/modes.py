"""Closed-form evolution of the polynomial coefficients.

Each coefficient obeys its own linear fourth-order ODE::

    c'''' = alpha c''' + beta c'' + gamma c' + delta c

whose characteristic roots ``lam`` (the *modes*) solve
``lam**4 = alpha lam**3 + beta lam**2 + gamma lam + delta``. With distinct
modes the solution is ``c(t) = sum_k b_k exp(lam_k t)``, the amplitudes
``b_k`` being fixed by ``c(0), c'(0), c''(0), c'''(0)``.

Modes are also written as ``lam = -a + i omega`` with real decay rates ``a``
and angular frequencies ``omega``.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningWarning, DegenerateModesError
from .symmetria import coeff_derivs_from_zero_derivs, coeffs_from_zeros

__all__ = [
    "CoeffParams",
    "ModeSpec",
    "quartic_modes",
    "params_from_modes",
    "params_from_decay_freq",
    "fit_amplitudes",
    "eval_coefficient",
    "eval_coefficients",
    "initial_coeff_derivs",
]

DEGENERATE_RTOL = 1e-9
COND_LIMIT = 1e12


def _lex_sort(values):
    values = np.asarray(values, dtype=complex)
    return values[np.lexsort((values.imag, values.real))]


def _check_modes_distinct(lam, rtol=DEGENERATE_RTOL):
    lam = np.asarray(lam, dtype=complex)
    gap = np.abs(lam[:, None] - lam[None, :])
    gap[np.diag_indices(lam.size)] = np.inf
    if gap.min() < rtol * (1.0 + np.abs(lam).max()):
        raise DegenerateModesError(f"modes {lam} are not pairwise distinct")


def quartic_modes(alpha, beta, gamma, delta):
    """The four roots of ``lam**4 = alpha lam**3 + beta lam**2 + gamma lam + delta``.

    Computed as companion-matrix eigenvalues and polished by Newton steps.
    Returned in lexicographic order (real part, then imaginary part).

    Raises
    ------
    DegenerateModesError
        If two roots are closer than ``1e-9 * (1 + max|lam|)``, or if a
        cluster of close roots is a multiple root to working precision (a
        k-fold root is only resolved to about ``eps**(1/k)``, so its computed
        copies can sit further apart than the distance threshold).
    """
    p = np.array([1.0, -alpha, -beta, -gamma, -delta], dtype=complex)
    companion = np.zeros((4, 4), dtype=complex)
    companion[0, :] = -p[1:]
    companion[1:, :-1] = np.eye(3)
    lam = np.linalg.eigvals(companion)
    _check_multiple_roots(p, lam)
    dp = np.polyder(p)
    f = np.polyval(p, lam)
    for _ in range(5):
        fp = np.polyval(dp, lam)
        ok = fp != 0
        trial = lam.copy()
        trial[ok] = lam[ok] - f[ok] / fp[ok]
        ft = np.polyval(p, trial)
        # keep a step only if it improves the residual
        better = np.abs(ft) < np.abs(f)
        if not better.any():
            break
        lam[better], f[better] = trial[better], ft[better]
    _check_modes_distinct(lam)
    return _lex_sort(lam)


def _check_multiple_roots(p, lam, near=1e-4):
    # a k-fold root comes out of the eigensolver as k copies spread by about
    # eps**(1/k); their mean is accurate, and p and its first k-1 derivatives
    # vanish there to rounding level
    eps = np.finfo(float).eps
    scale = 1.0 + np.abs(lam).max()
    close = np.abs(lam[:, None] - lam[None, :]) <= near * scale
    seen = np.zeros(lam.size, dtype=bool)
    for i in range(lam.size):
        if seen[i]:
            continue
        cluster = np.flatnonzero(close[i])
        seen[cluster] = True
        k = cluster.size
        if k < 2:
            continue
        m = lam[cluster].mean()
        q = p
        for _ in range(k):
            if abs(np.polyval(q, m)) > 64 * eps * np.polyval(np.abs(q), abs(m)):
                break
            q = np.polyder(q)
        else:
            raise DegenerateModesError(f"modes {lam[cluster]} form a root of multiplicity {k}")


def params_from_modes(lam):
    """``(alpha, beta, gamma, delta)`` whose characteristic roots are `lam` (Vieta)."""
    l1, l2, l3, l4 = np.asarray(lam, dtype=complex)
    e1 = l1 + l2 + l3 + l4
    e2 = l1 * l2 + l1 * l3 + l1 * l4 + l2 * l3 + l2 * l4 + l3 * l4
    e3 = l1 * l2 * l3 + l1 * l2 * l4 + l1 * l3 * l4 + l2 * l3 * l4
    e4 = l1 * l2 * l3 * l4
    return complex(e1), complex(-e2), complex(e3), complex(-e4)


def params_from_decay_freq(a, omega):
    """``(alpha, beta, gamma, delta)`` from decay rates `a` and frequencies `omega`.

    Written out in real and imaginary parts; equals
    ``params_from_modes(-a + 1j * omega)``.
    """
    a1, a2, a3, a4 = (float(x) for x in a)
    w1, w2, w3, w4 = (float(x) for x in omega)
    alpha = complex(-a1 - a2 - a3 - a4, w1 + w2 + w3 + w4)
    beta = complex(
        -a1 * a2 - a1 * a3 - a2 * a3 - a1 * a4 - a2 * a4 - a3 * a4
        + w1 * w2 + w1 * w3 + w2 * w3 + w1 * w4 + w2 * w4 + w3 * w4,
        a2 * w1 + a3 * w1 + a4 * w1 + a1 * w2 + a3 * w2 + a4 * w2
        + a1 * w3 + a2 * w3 + a4 * w3 + a1 * w4 + a2 * w4 + a3 * w4,
    )
    gamma = complex(
        -a1 * a2 * a3 - a1 * a2 * a4 - a1 * a3 * a4 - a2 * a3 * a4
        + a1 * w2 * w3 + a1 * w2 * w4 + a1 * w3 * w4 + a2 * w1 * w3
        + a2 * w1 * w4 + a2 * w3 * w4 + a3 * w1 * w2 + a3 * w1 * w4
        + a3 * w2 * w4 + a4 * w1 * w2 + a4 * w1 * w3 + a4 * w2 * w3,
        a2 * a3 * w1 + a2 * a4 * w1 + a3 * a4 * w1 + a1 * a3 * w2
        + a1 * a4 * w2 + a3 * a4 * w2 + a1 * a2 * w3 + a1 * a4 * w3
        + a2 * a4 * w3 + a1 * a2 * w4 + a1 * a3 * w4 + a2 * a3 * w4
        - w1 * w2 * w3 - w1 * w2 * w4 - w1 * w3 * w4 - w2 * w3 * w4,
    )
    delta = complex(
        -a1 * a2 * a3 * a4 + a3 * a4 * w1 * w2 + a2 * a4 * w1 * w3 + a2 * a3 * w1 * w4
        + a1 * a4 * w2 * w3 + a1 * a3 * w2 * w4 + a1 * a2 * w3 * w4 - w1 * w2 * w3 * w4,
        a2 * a3 * a4 * w1 + a1 * a3 * a4 * w2 + a1 * a2 * a4 * w3 + a1 * a2 * a3 * w4
        - a4 * w1 * w2 * w3 - a3 * w1 * w2 * w4 - a2 * w1 * w3 * w4 - a1 * w2 * w3 * w4,
    )
    return alpha, beta, gamma, delta


def fit_amplitudes(lam, d):
    """Amplitudes ``b`` with ``sum_k b_k lam_k**s = d[s]`` for ``s = 0..3``.

    Parameters
    ----------
    lam : array_like of complex, shape (4,)
        Pairwise-distinct modes.
    d : array_like of complex, shape (4,)
        ``d[s]`` is the s-th derivative of the coefficient at ``t = 0``.

    Returns
    -------
    ndarray of complex, shape (4,)

    Raises
    ------
    DegenerateModesError
        If the modes are not distinct.

    Warns
    -----
    ConditioningWarning
        If the condition number of the Vandermonde system exceeds 1e12.
    """
    lam = np.asarray(lam, dtype=complex)
    d = np.asarray(d, dtype=complex)
    _check_modes_distinct(lam)
    V = lam[None, :] ** np.arange(4)[:, None]
    cond = np.linalg.cond(V)
    if cond > COND_LIMIT:
        warnings.warn(f"amplitude system condition number {cond:.3g}", ConditioningWarning, stacklevel=2)
    # LAPACK gesv: LU with partial pivoting
    return np.linalg.solve(V, d)


@dataclass(frozen=True)
class CoeffParams:
    """Per-coefficient ODE parameters; each field has shape (N,)."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        arrs = [np.atleast_1d(np.asarray(getattr(self, f), dtype=complex))
                for f in ("alpha", "beta", "gamma", "delta")]
        if len({a.shape for a in arrs}) != 1 or arrs[0].ndim != 1:
            raise ValueError("alpha, beta, gamma, delta must be 1-d of equal length")
        for f, a in zip(("alpha", "beta", "gamma", "delta"), arrs):
            object.__setattr__(self, f, a)

    @property
    def N(self):
        return self.alpha.size

    @classmethod
    def uniform(cls, N, alpha, beta, gamma, delta):
        """Same four parameters for all N coefficients."""
        return cls(*(np.full(N, x, dtype=complex) for x in (alpha, beta, gamma, delta)))

    @classmethod
    def from_modes(cls, lam):
        """From modes of shape (N, 4)."""
        lam = np.asarray(lam, dtype=complex)
        rows = [params_from_modes(row) for row in lam]
        return cls(*(np.array(col) for col in zip(*rows)))

    @classmethod
    def from_decay_freq(cls, a, omega):
        """From real decay rates and frequencies, each of shape (N, 4)."""
        rows = [params_from_decay_freq(ar, wr) for ar, wr in zip(np.asarray(a), np.asarray(omega))]
        return cls(*(np.array(col) for col in zip(*rows)))

    def modes(self):
        """Characteristic roots, shape (N, 4), each row lexicographically sorted."""
        return np.array([quartic_modes(*p) for p in zip(self.alpha, self.beta, self.gamma, self.delta)])

    def combine(self, c0, c1, c2, c3):
        """``alpha c''' + beta c'' + gamma c' + delta c``, i.e. the fourth derivative."""
        return self.alpha * c3 + self.beta * c2 + self.gamma * c1 + self.delta * c0

    def perturbed(self, m, d_delta):
        """Copy with ``delta[m]`` shifted by `d_delta`."""
        delta = self.delta.copy()
        delta[m] += d_delta
        return CoeffParams(self.alpha, self.beta, self.gamma, delta)


@dataclass(frozen=True)
class ModeSpec:
    """Closed-form coefficients ``c_m(t) = sum_k amp[m, k] exp(lam[m, k] t)``.

    ``lam`` and ``amp`` have shape (N, 4); row ``m`` belongs to coefficient
    ``c[m]`` (0-based).
    """

    lam: np.ndarray
    amp: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=complex)
        amp = np.asarray(self.amp, dtype=complex)
        if lam.ndim != 2 or lam.shape[1] != 4 or amp.shape != lam.shape:
            raise ValueError("lam and amp must both have shape (N, 4)")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "amp", amp)

    @property
    def N(self):
        return self.lam.shape[0]

    @classmethod
    def fit(cls, lam, coeff_derivs):
        """Fit amplitudes to coefficient data ``coeff_derivs[s][m]``, s = 0..3."""
        lam = np.asarray(lam, dtype=complex)
        d = np.asarray(coeff_derivs, dtype=complex)
        amp = np.array([fit_amplitudes(lam[m], d[:, m]) for m in range(lam.shape[0])])
        return cls(lam, amp)

    @classmethod
    def from_initial_data(cls, params, z, zdot, w, wdot):
        """Solve the initial-value problem for initial zeros and their derivatives.

        `w` and `wdot` are the second and third derivatives of the zeros.
        """
        return cls.fit(params.modes(), initial_coeff_derivs(z, zdot, w, wdot))


def initial_coeff_derivs(z, zdot, w, wdot):
    """``(c, c', c'', c''')`` at one instant from the zeros and their derivatives."""
    c0 = coeffs_from_zeros(z)
    c1, c2, c3 = coeff_derivs_from_zero_derivs(z, zdot, w, wdot)
    return np.array([c0, c1, c2, c3])


def eval_coefficient(spec, m, t, order=0):
    """``d^order c_m / dt^order`` at time `t` (0-based coefficient index `m`)."""
    if order not in (0, 1, 2, 3, 4):
        raise ValueError(f"derivative order {order} not in 0..4")
    lam = spec.lam[m]
    t = np.asarray(t, dtype=float)
    vals = (spec.amp[m] * lam**order) * np.exp(np.multiply.outer(t, lam))
    return vals.sum(axis=-1)


def eval_coefficients(spec, t, order=0):
    """All coefficients at times `t`; shape ``t.shape + (N,)``."""
    if order not in (0, 1, 2, 3, 4):
        raise ValueError(f"derivative order {order} not in 0..4")
    t = np.asarray(t, dtype=float)
    weights = spec.amp * spec.lam**order
    return (weights * np.exp(np.multiply.outer(t, spec.lam))).sum(axis=-1)
