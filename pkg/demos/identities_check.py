"""Zero and coefficient derivatives, checked against each other.

Random analytic zero paths are multiplied out as truncated power series,
which gives the coefficient derivatives without any identity. The
residuals of the order 1..4 relations should then be at rounding level.

    python3 demos/identities_check.py
"""

from math import factorial

import numpy as np

from zerodyn.identities import DerivBundle, identity_residuals, zero_derivs_from_coeff_derivs
from zerodyn.symmetria import coeffs_from_zeros

rng = np.random.default_rng(1)


def series_coeffs(zser):
    # product of (x - z_n(t)) with truncated series coefficients
    K = zser.shape[1]
    poly = [np.eye(1, K, dtype=complex)[0]]
    for row in zser:
        new = [np.zeros(K, complex) for _ in range(len(poly) + 1)]
        for j, pj in enumerate(poly):
            new[j] += pj
            new[j + 1] -= np.convolve(row, pj)[:K]
        poly = new
    return np.array(poly[1:])


for n in (2, 3, 5, 8):
    zser = rng.standard_normal((n, 5)) + 1j * rng.standard_normal((n, 5))
    zser[:, 0] *= 3
    cser = series_coeffs(zser)
    assert np.allclose(cser[:, 0], coeffs_from_zeros(zser[:, 0]))
    zd = [factorial(k) * zser[:, k] for k in range(1, 5)]
    cd = [factorial(k) * cser[:, k] for k in range(1, 5)]
    b = DerivBundle(zser[:, 0], *zd, *cd)
    res = [np.abs(identity_residuals(b, k)).max() / np.abs(zd[k - 1]).max() for k in (1, 2, 3, 4)]
    back = zero_derivs_from_coeff_derivs(zser[:, 0], *cd)
    inv = max(np.abs(back[k] - zd[k]).max() / np.abs(zd[k]).max() for k in range(4))
    print(f"N={n}: residuals {' '.join(f'{r:.1e}' for r in res)}   inverse {inv:.1e}")
