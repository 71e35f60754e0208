"""Asymptotic behaviour from the mode exponents, and empirical periods.

Writing every mode as ``lam = -a + i omega``:

* any ``a < 0``: coefficients can grow exponentially (scattering);
* all ``a > 0``: everything converges to the origin;
* otherwise the undamped modes decide. If their frequencies are all integer
  multiples of one ``omega`` the motion is (asymptotically) isochronous with
  period ``2 pi / omega``; if not it is (asymptotically) multiply periodic.

Isochrony of the polynomial does not mean each particle has the same period:
the zeros may be permuted after one period, so a particle can need ``p``
periods to come back. :func:`detect_period` measures ``p`` on a trajectory.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np

__all__ = ["BehaviorClass", "classify_modes", "common_frequency", "detect_period", "period_mismatch"]

ISOCHRONOUS = "isochronous"
ASYMPTOTICALLY_ISOCHRONOUS = "asymptotically_isochronous"
ASYMPTOTICALLY_MULTIPLY_PERIODIC = "asymptotically_multiply_periodic"
CONFINED = "confined"
CONVERGING_TO_ORIGIN = "converging_to_origin"
SCATTERING_CAPABLE = "scattering_capable"

KINDS = (ISOCHRONOUS, ASYMPTOTICALLY_ISOCHRONOUS, ASYMPTOTICALLY_MULTIPLY_PERIODIC,
         CONFINED, CONVERGING_TO_ORIGIN, SCATTERING_CAPABLE)


@dataclass(frozen=True)
class BehaviorClass:
    kind: str
    period: float = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown behaviour class {self.kind!r}")

    def __str__(self):
        if self.period is None:
            return self.kind
        return f"{self.kind}(T={self.period:.12g})"


def common_frequency(omegas, tol=1e-9, max_den=64):
    """Largest ``omega > 0`` of which every entry is an integer multiple, or None.

    Ratios to the smallest nonzero ``|omega|`` are approximated by fractions
    with denominator at most `max_den`; each must be within `tol` (relative).
    Zeros are multiples of anything and are ignored; with no nonzero entry
    the result is None.
    """
    om = np.asarray(omegas, dtype=float).ravel()
    nonzero = om[np.abs(om) > tol]
    if nonzero.size == 0:
        return None
    ref = np.abs(nonzero).min()
    fracs = []
    for w in nonzero:
        r = w / ref
        f = Fraction(r).limit_denominator(max_den)
        if abs(r - f) > tol * max(1.0, abs(r)):
            return None
        fracs.append(f)
    den = reduce(lcm, (f.denominator for f in fracs), 1)
    nums = [abs(int(f * den)) for f in fracs]
    return ref * reduce(gcd, nums) / den


def classify_modes(lams, rational_tol=1e-9):
    """Classify the long-time behaviour implied by all mode exponents.

    Parameters
    ----------
    lams : array_like of complex
        All 4N exponents, in any shape and order.
    rational_tol : float
        Tolerance for ``a == 0`` and for the integer-ratio test.

    Returns
    -------
    BehaviorClass
    """
    lam = np.asarray(lams, dtype=complex).ravel()
    a = -lam.real
    omega = lam.imag
    undamped = np.abs(a) <= rational_tol
    diag = {"max_growth_rate": float(max(0.0, -a.min())), "slowest_decay": None}
    damped = a > rational_tol
    if damped.any():
        diag["slowest_decay"] = float(a[damped].min())

    if (a < -rational_tol).any():
        w0 = common_frequency(omega[undamped], rational_tol) if undamped.any() else None
        if w0 is not None:
            diag["coexisting_period"] = 2 * np.pi / w0
        return BehaviorClass(SCATTERING_CAPABLE, None, diag)
    if damped.all():
        return BehaviorClass(CONVERGING_TO_ORIGIN, None, diag)

    w0 = common_frequency(omega[undamped], rational_tol)
    if w0 is not None:
        kind = ISOCHRONOUS if undamped.all() else ASYMPTOTICALLY_ISOCHRONOUS
        return BehaviorClass(kind, 2 * np.pi / w0, diag)
    if damped.any():
        return BehaviorClass(ASYMPTOTICALLY_MULTIPLY_PERIODIC, None, diag)
    return BehaviorClass(CONFINED, None, diag)


def _shift_pairs(times, shift, t_min):
    """Index pairs ``(i, j)`` with ``times[j] == times[i] + shift`` on the grid."""
    start = np.searchsorted(times, t_min - 1e-12 * (1.0 + abs(t_min)))
    i = np.arange(start, times.size)
    target = times[i] + shift
    j = np.clip(np.searchsorted(times, target), 1, times.size - 1)
    best = np.where(np.abs(times[j - 1] - target) < np.abs(times[j] - target), j - 1, j)
    ok = np.abs(times[best] - target) <= 1e-9 * (1.0 + np.abs(target))
    return i[ok], best[ok]


def period_mismatch(traj, shift, which="zeros", t_min=None):
    """Per particle, ``sup |x_n(t + shift) - x_n(t)|`` over grid times ``t >= t_min``.

    Only times whose shifted time is also on the grid count; the result is
    NaN for every particle if there are none.
    """
    times = np.asarray(traj.times)
    data = getattr(traj, which)
    if data is None:
        raise ValueError(f"trajectory has no {which!r} samples")
    t_min = times[0] if t_min is None else max(float(t_min), times[0])
    i, j = _shift_pairs(times, shift, t_min)
    if i.size == 0:
        return np.full(data.shape[1], np.nan)
    return np.abs(data[j] - data[i]).max(axis=0)


def detect_period(traj, T, max_p, which="zeros", t_min=None, rtol=1e-6):
    """Smallest ``p <= max_p`` such that each particle is ``p*T``-periodic.

    A particle passes for ``p`` if ``|x_n(t + pT) - x_n(t)| <= rtol * (1 + max|x|)``
    at every grid time ``t >= t_min`` whose shifted time is also on the grid.

    Parameters
    ----------
    traj : Trajectory
    T : float
        Candidate base period.
    max_p : int
    which : {"zeros", "w", "zdot", "wdot"}
        Which stored quantity to test.
    t_min : float, optional
        Ignore earlier samples (e.g. a decaying transient).

    Returns
    -------
    list
        Per particle, the integer ``p`` or None.

    Raises
    ------
    ValueError
        If the trajectory spans less than ``max_p * T`` after `t_min`.
    """
    if T <= 0 or max_p < 1:
        raise ValueError("need T > 0 and max_p >= 1")
    times = np.asarray(traj.times)
    data = getattr(traj, which)
    if data is None:
        raise ValueError(f"trajectory has no {which!r} samples")
    t_min = times[0] if t_min is None else max(float(t_min), times[0])
    if times[-1] - t_min < max_p * T * (1 - 1e-12):
        raise ValueError(f"trajectory spans {times[-1] - t_min:.6g} < max_p*T = {max_p * T:.6g}")
    tol = rtol * (1.0 + np.abs(data).max())
    result = [None] * data.shape[1]
    for p in range(1, max_p + 1):
        sup = period_mismatch(traj, p * T, which=which, t_min=t_min)
        for n in range(data.shape[1]):
            if result[n] is None and sup[n] <= tol:
                result[n] = p
    return result
