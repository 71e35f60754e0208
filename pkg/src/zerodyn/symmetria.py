"""Elementary symmetric functions and the zeros/coefficients maps of monic polynomials.

A monic polynomial of degree ``N`` is represented either by its zeros
``z[0], ..., z[N-1]`` or by its coefficients ``c[0], ..., c[N-1]``, where
``c[m-1]`` multiplies ``x**(N-m)``::

    prod_n (x - z[n]) = x**N + sum_m c[m-1] * x**(N-m)

Particle indices are 0-based throughout; the *degree* ``m`` of a symmetric
function keeps its natural range ``1..N``.
"""

from functools import lru_cache
from itertools import permutations

import numpy as np

__all__ = [
    "elem_sym",
    "elem_sym_all",
    "elem_sym_excl",
    "sigma_excl_rows",
    "coeffs_from_zeros",
    "poly_eval",
    "coeff_derivs_from_zero_derivs",
    "distinct_tuples",
]


def _as_zeros(z):
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("zeros must be a non-empty 1-d sequence")
    return z


@lru_cache(maxsize=None)
def _distinct_tuples(n, k):
    tup = np.array(list(permutations(range(n), k)), dtype=np.intp)
    tup.setflags(write=False)
    return tup.reshape(-1, k)


def distinct_tuples(n, k):
    """All ordered ``k``-tuples of pairwise-distinct indices in ``range(n)``.

    Returns an integer array of shape ``(n!/(n-k)!, k)``, empty when ``k > n``.
    This is the index set of a primed sum; callers drop tuples touching the
    outer index themselves.
    """
    return _distinct_tuples(int(n), int(k))


def elem_sym_all(z):
    """Return ``[sigma_0, sigma_1, ..., sigma_N]`` of the entries of `z`.

    Uses the one-factor-at-a-time expansion of ``prod_j (x + z_j)``; O(N**2).
    ``sigma_0`` is 1 by convention.
    """
    z = np.asarray(z, dtype=complex)
    e = np.zeros(z.size + 1, dtype=complex)
    e[0] = 1.0
    for j, zj in enumerate(z):
        e[1:j + 2] = e[1:j + 2] + zj * e[0:j + 1]
    return e


def elem_sym(m, z):
    """Elementary symmetric function of degree `m` of the entries of `z`.

    Parameters
    ----------
    m : int
        Degree, ``1 <= m <= N``.
    z : array_like of complex, shape (N,)

    Examples
    --------
    >>> complex(elem_sym(2, [1, 2, 3]))
    (11+0j)
    """
    z = _as_zeros(z)
    if not 1 <= m <= z.size:
        raise ValueError(f"degree m={m} outside 1..{z.size}")
    return elem_sym_all(z)[m]


def elem_sym_excl(excluded, m, z):
    """Symmetric function of degree `m` with the indices in `excluded` left out.

    This is the Kronecker term ``delta_{|S| m}`` plus the elementary symmetric
    function of degree ``m - |S|`` of the entries not in ``S``, so for instance
    ``elem_sym_excl({n}, 1, z) == 1`` and ``elem_sym_excl({n1, n2}, 1, z) == 0``.

    Parameters
    ----------
    excluded : iterable of int
        One to three distinct 0-based indices.
    m : int
        Degree, ``1 <= m <= N``.
    z : array_like of complex, shape (N,)
    """
    z = _as_zeros(z)
    excl = list(excluded)
    n = z.size
    if not 1 <= len(excl) <= 3:
        raise ValueError("between one and three indices must be excluded")
    if len(set(excl)) != len(excl):
        raise ValueError(f"excluded indices {excl} are not distinct")
    if any(not 0 <= i < n for i in excl):
        raise ValueError(f"excluded indices {excl} outside 0..{n - 1}")
    if not 1 <= m <= n:
        raise ValueError(f"degree m={m} outside 1..{n}")
    k = len(excl)
    if m < k:
        return 0j
    if m == k:
        return 1 + 0j
    keep = np.ones(n, dtype=bool)
    keep[excl] = False
    return elem_sym_all(z[keep])[m - k]


def sigma_excl_rows(z, k):
    """Tabulate ``sigma_{S, m}(z)`` for every ordered distinct ``k``-tuple ``S``.

    Returns
    -------
    tuples : ndarray of int, shape (M, k)
        The tuples, as from :func:`distinct_tuples`.
    table : ndarray of complex, shape (M, N)
        ``table[i, m-1]`` is ``sigma_{tuples[i], m}(z)``.
    """
    z = _as_zeros(z)
    n = z.size
    tup = distinct_tuples(n, k)
    table = np.zeros((tup.shape[0], n), dtype=complex)
    if tup.shape[0] == 0:
        return tup, table
    keep = np.ones((tup.shape[0], n), dtype=bool)
    rows = np.arange(tup.shape[0])
    for col in range(k):
        keep[rows, tup[:, col]] = False
    # product expansion over the kept entries of each row
    e = np.zeros((tup.shape[0], n - k + 1), dtype=complex)
    e[:, 0] = 1.0
    for j in range(n):
        mask = keep[:, j]
        e[mask, 1:] = e[mask, 1:] + z[j] * e[mask, :-1]
    # degree m uses e[m-k]; the Kronecker term is e[0] = 1 at m = k
    table[:, k - 1:] = e
    return tup, table


def coeffs_from_zeros(z):
    """Coefficients ``c_m = (-1)**m sigma_m(z)`` of ``prod_n (x - z_n)``.

    >>> coeffs_from_zeros([1, 2, 3]).real
    array([-6., 11., -6.])
    """
    z = _as_zeros(z)
    e = elem_sym_all(z)[1:]
    return e * (-1.0) ** np.arange(1, z.size + 1)


def poly_eval(c, x):
    """Horner evaluation of ``x**N + sum_m c[m-1] x**(N-m)``.

    `x` may be a scalar or an array; the result has its shape.
    """
    c = np.asarray(c, dtype=complex)
    x = np.asarray(x, dtype=complex)
    acc = np.ones_like(x)
    for cm in c:
        acc = acc * x + cm
    return acc[()] if acc.ndim == 0 else acc


def coeff_derivs_from_zero_derivs(z, zd1, zd2=None, zd3=None):
    """Time derivatives of the coefficients from those of the zeros.

    Computes as many orders as the inputs allow: ``(cd1,)`` from ``zd1``,
    ``(cd1, cd2)`` when `zd2` is given, ``(cd1, cd2, cd3)`` when `zd3` is
    given as well. Every multi-index sum runs over pairwise-distinct indices.

    Passing ``(z, zdot, w, wdot)`` for ``(z, zd1, zd2, zd3)`` gives the
    coefficient derivatives of the Newtonian 2N-body formulation, where
    ``w`` stands for the accelerations.

    Parameters
    ----------
    z, zd1 : array_like of complex, shape (N,)
    zd2, zd3 : array_like of complex, shape (N,), optional

    Returns
    -------
    tuple of ndarray
    """
    z = _as_zeros(z)
    n = z.size
    derivs = [np.asarray(zd1, dtype=complex)]
    if zd2 is not None:
        derivs.append(np.asarray(zd2, dtype=complex))
        if zd3 is not None:
            derivs.append(np.asarray(zd3, dtype=complex))
    elif zd3 is not None:
        raise ValueError("zd3 given without zd2")
    for d in derivs:
        if d.shape != (n,):
            raise ValueError(f"derivative vector of shape {d.shape}, expected ({n},)")
    sign = (-1.0) ** np.arange(1, n + 1)
    zd1 = derivs[0]

    _, s1 = sigma_excl_rows(z, 1)  # rows indexed by n
    out = [sign * (s1.T @ zd1)]
    if len(derivs) >= 2:
        zd2 = derivs[1]
        t2, s2 = sigma_excl_rows(z, 2)
        pair = zd1[t2[:, 0]] * zd1[t2[:, 1]]
        out.append(sign * (s1.T @ zd2 + s2.T @ pair))
    if len(derivs) == 3:
        zd3 = derivs[2]
        mixed = zd2[t2[:, 0]] * zd1[t2[:, 1]]
        t3, s3 = sigma_excl_rows(z, 3)
        triple = zd1[t3[:, 0]] * zd1[t3[:, 1]] * zd1[t3[:, 2]]
        out.append(sign * (s1.T @ zd3 + 3.0 * (s2.T @ mixed) + s3.T @ triple))
    return tuple(out)
