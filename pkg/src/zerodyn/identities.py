"""Differential identities linking the zeros of a monic polynomial to its coefficients.

For a time-dependent monic polynomial with distinct zeros ``z_n(t)``, the
k-th time derivative of each zero satisfies (k = 1..4)::

    z_n^(k) - S_k(z, z', ..., z^(k-1))_n = (R(z) @ c^(k))_n

with ``R`` the relation matrix and ``S_k`` a sum of "primed" interaction
terms: sums over indices that are pairwise distinct and distinct from the
outer index ``n``. ``S_1`` is zero. This module evaluates both sides, solves
the identities for the zero derivatives, and reports residuals.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import SingularityError
from .symmetria import distinct_tuples, sigma_excl_rows

__all__ = [
    "DerivBundle",
    "check_distinct",
    "relation_matrix",
    "relation_matrix_inverse",
    "interaction_sum",
    "zero_derivs_from_coeff_derivs",
    "identity_residuals",
    "n2_order_k_residual",
]

SINGULAR_RTOL = 1e-12


def check_distinct(z, rtol=SINGULAR_RTOL):
    """Raise :class:`SingularityError` unless the entries of `z` are well separated.

    The threshold is ``rtol * (1 + max|z|)`` on the smallest pairwise distance.
    """
    z = np.asarray(z, dtype=complex)
    if z.size < 2:
        return
    gap = np.abs(z[:, None] - z[None, :])
    gap[np.diag_indices(z.size)] = np.inf
    dmin = gap.min()
    if dmin < rtol * (1.0 + np.abs(z).max()):
        i, j = np.unravel_index(np.argmin(gap), gap.shape)
        raise SingularityError(f"zeros {i} and {j} coincide (|z_i - z_j| = {dmin:.3g})")


def _inverse_gaps(z):
    """``D[n, l] = 1/(z_n - z_l)`` off the diagonal, 0 on it."""
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    return inv


def _prefactor(z):
    """``-prod_{l != n} (z_n - z_l)**-1`` for every n."""
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    return -1.0 / diff.prod(axis=1)


def relation_matrix(z):
    """``R[n, m-1] = -prod_{l != n}(z_n - z_l)**-1 * z_n**(N-m)``.

    Raises
    ------
    SingularityError
        If two zeros coincide.
    """
    z = np.asarray(z, dtype=complex)
    check_distinct(z)
    n = z.size
    powers = z[:, None] ** np.arange(n - 1, -1, -1)[None, :]
    return _prefactor(z)[:, None] * powers


def relation_matrix_inverse(z):
    """Inverse of :func:`relation_matrix`, built from excluded symmetric functions.

    ``Rinv[m-1, n] = (-1)**m * sigma_{n, m}(z)``; rows are indexed by the
    coefficient, columns by the zero. No matrix inversion is performed and
    distinct zeros are not required.
    """
    z = np.asarray(z, dtype=complex)
    _, s1 = sigma_excl_rows(z, 1)
    sign = (-1.0) ** np.arange(1, z.size + 1)
    return sign[:, None] * s1.T


def _primed(n, terms, idx):
    out = np.zeros(n, dtype=complex)
    if idx.shape[0]:
        np.add.at(out, idx[:, 0], terms)
    return out


def interaction_sum(order, z, zd1=None, zd2=None, zd3=None):
    """Primed interaction sums ``S_k`` of the order-`order` identity.

    ``S_1 = 0``. For higher orders the lower zero derivatives up to
    ``order - 1`` are needed. Each primed sum is evaluated term by term over
    ordered tuples ``(n, l1, ...)`` of pairwise-distinct indices.
    """
    z = np.asarray(z, dtype=complex)
    n = z.size
    if order == 1:
        return np.zeros(n, dtype=complex)
    if order not in (2, 3, 4):
        raise ValueError(f"identity order {order} not in 1..4")
    needed = (zd1, zd2, zd3)[: order - 1]
    if any(d is None for d in needed):
        raise ValueError(f"order-{order} interaction needs derivatives up to order {order - 1}")
    D = _inverse_gaps(z)
    p2 = distinct_tuples(n, 2)
    a, l = p2[:, 0], p2[:, 1]
    d1 = np.asarray(zd1, dtype=complex)
    if order == 2:
        return _primed(n, 2.0 * d1[a] * d1[l] * D[a, l], p2)

    d2 = np.asarray(zd2, dtype=complex)
    p3 = distinct_tuples(n, 3)
    b, l1, l2 = p3[:, 0], p3[:, 1], p3[:, 2]
    dd = D[b, l1] * D[b, l2]
    if order == 3:
        s = 3.0 * _primed(n, (d2[a] * d1[l] + d2[l] * d1[a]) * D[a, l], p2)
        s -= 3.0 * _primed(n, d1[b] * d1[l1] * d1[l2] * dd, p3)
        return s

    d3 = np.asarray(zd3, dtype=complex)
    s = _primed(n, (4.0 * d3[a] * d1[l] + 4.0 * d3[l] * d1[a] + 6.0 * d2[a] * d2[l]) * D[a, l], p2)
    s -= 6.0 * _primed(n, (d2[b] * d1[l1] * d1[l2] + 2.0 * d2[l1] * d1[l2] * d1[b]) * dd, p3)
    p4 = distinct_tuples(n, 4)
    if p4.shape[0]:
        q, k1, k2, k3 = p4.T
        ddd = D[q, k1] * D[q, k2] * D[q, k3]
        s += 4.0 * _primed(n, d1[q] * d1[k1] * d1[k2] * d1[k3] * ddd, p4)
    return s


def zero_derivs_from_coeff_derivs(z, cd1, cd2=None, cd3=None, cd4=None):
    """Solve the identities order by order for the derivatives of the zeros.

    Returns a tuple ``(zd1, ..., zdK)`` whose length is the number of
    consecutive coefficient-derivative orders supplied.

    Raises
    ------
    SingularityError
        If two zeros coincide.
    """
    z = np.asarray(z, dtype=complex)
    R = relation_matrix(z)
    cds = [cd1, cd2, cd3, cd4]
    zds = []
    for k, cd in enumerate(cds, start=1):
        if cd is None:
            if any(c is not None for c in cds[k:]):
                raise ValueError(f"coefficient derivative of order {k} missing")
            break
        cd = np.asarray(cd, dtype=complex)
        if cd.shape != z.shape:
            raise ValueError(f"order-{k} coefficient derivative has shape {cd.shape}")
        zds.append(R @ cd + interaction_sum(k, z, *zds))
    return tuple(zds)


@dataclass
class DerivBundle:
    """Zeros with some of their time derivatives and those of the coefficients."""

    z: np.ndarray
    zd1: np.ndarray = None
    zd2: np.ndarray = None
    zd3: np.ndarray = None
    zd4: np.ndarray = None
    cd1: np.ndarray = None
    cd2: np.ndarray = None
    cd3: np.ndarray = None
    cd4: np.ndarray = None

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=complex)
        for name in ("zd1", "zd2", "zd3", "zd4", "cd1", "cd2", "cd3", "cd4"):
            val = getattr(self, name)
            if val is not None:
                val = np.asarray(val, dtype=complex)
                if val.shape != self.z.shape:
                    raise ValueError(f"{name} has shape {val.shape}, expected {self.z.shape}")
                setattr(self, name, val)

    def zero_deriv(self, k):
        return getattr(self, f"zd{k}")

    def coeff_deriv(self, k):
        return getattr(self, f"cd{k}")


def identity_residuals(bundle, order):
    """Left side minus right side of the order-`order` identity, per zero.

    Returns
    -------
    ndarray of complex, shape (N,)
    """
    if order not in (1, 2, 3, 4):
        raise ValueError(f"identity order {order} not in 1..4")
    zds = [bundle.zero_deriv(k) for k in range(1, order + 1)]
    cd = bundle.coeff_deriv(order)
    if any(d is None for d in zds) or cd is None:
        raise ValueError(f"bundle lacks the data for the order-{order} identity")
    R = relation_matrix(bundle.z)
    lhs = zds[-1] - interaction_sum(order, bundle.z, *zds[:-1])
    return lhs - R @ cd


def n2_order_k_residual(z_derivs, c_derivs, k):
    """Residual of the arbitrary-order identity for two zeros.

    For ``N = 2`` every order k obeys::

        z_n^(k) (z_n - z_{n+1}) = (z_n z_{n+1})^(k) - z_n^(k) z_{n+1}
                                  - z_n z_{n+1}^(k) - (z_n c_1^(k) + c_2^(k))

    (indices mod 2), with ``(z_1 z_2)^(k)`` expanded by the Leibniz rule.

    Parameters
    ----------
    z_derivs : array_like of complex, shape (k+1, 2)
        ``z_derivs[j]`` holds the j-th derivatives of ``(z_1, z_2)``.
    c_derivs : array_like of complex, shape (2,)
        k-th derivatives of ``(c_1, c_2)``.
    k : int
        Positive derivative order.

    Returns
    -------
    ndarray of complex, shape (2,)
        ``z_n^(k)`` minus the right-hand side solved for it.
    """
    zk = np.asarray(z_derivs, dtype=complex)
    ck = np.asarray(c_derivs, dtype=complex)
    if k < 1:
        raise ValueError("derivative order k must be positive")
    if zk.shape != (k + 1, 2) or ck.shape != (2,):
        raise ValueError("need z derivatives of shape (k+1, 2) and c derivatives of shape (2,)")
    check_distinct(zk[0])
    leibniz = sum(comb(k, j) * zk[j, 0] * zk[k - j, 1] for j in range(k + 1))
    res = np.empty(2, dtype=complex)
    for n in (0, 1):
        o = 1 - n
        z_n, z_o = zk[0, n], zk[0, o]
        rhs = (leibniz - zk[k, n] * z_o - z_n * zk[k, o] - (z_n * ck[0] + ck[1])) / (z_n - z_o)
        res[n] = zk[k, n] - rhs
    return res
