"""Direct route: the nonlinear equations of motion and their numerical integration.

The zeros ``z_n(t)`` solve a fourth-order system of ODEs; introducing
``w_n = z_n''`` turns it into a Newtonian 2N-body problem
``z'' = w``, ``w'' = F(z, z', w, w')``. The right-hand sides here are
evaluated without reference to the closed-form solution, which makes them
an independent check on it.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from .errors import CollisionError, IntegrationError, SingularityError
from .identities import _inverse_gaps, _prefactor, check_distinct, interaction_sum
from .rootflow import Trajectory, min_pair_distance
from .symmetria import coeff_derivs_from_zero_derivs, coeffs_from_zeros, distinct_tuples

__all__ = [
    "PhaseState",
    "rhs_fourth_order",
    "rhs_newtonian",
    "rhs_n2",
    "rhs_n3",
    "integrate",
]


@dataclass(frozen=True)
class PhaseState:
    """Positions, velocities, accelerations ``w`` and their rates ``wdot``."""

    z: np.ndarray
    zdot: np.ndarray
    w: np.ndarray
    wdot: np.ndarray

    def __post_init__(self):
        for name in ("z", "zdot", "w", "wdot"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=complex)))
        shapes = {getattr(self, f).shape for f in ("z", "zdot", "w", "wdot")}
        if len(shapes) != 1 or self.z.ndim != 1:
            raise ValueError("z, zdot, w, wdot must be 1-d arrays of equal length")

    @property
    def N(self):
        return self.z.size

    def pack(self):
        """Flatten to a real vector of length 8N."""
        y = np.concatenate([self.z, self.zdot, self.w, self.wdot])
        return y.view(float).copy()

    @classmethod
    def unpack(cls, y):
        y = np.ascontiguousarray(y, dtype=float).view(complex)
        z, zdot, w, wdot = np.split(y, 4)
        return cls(z, zdot, w, wdot)


def _coefficient_drive(z, zdot, w, wdot, params, shortcuts=False):
    """``-pref_n * sum_m (alpha c''' + beta c'' + gamma c' + delta c)_m z_n**(N-m)``.

    With ``shortcuts=True``, every parameter that takes the same value for
    all m is folded in through the lower-order identities instead, e.g. a
    uniform beta contributes ``beta * (w_n - sum' 2 z'_n z'_l / (z_n - z_l))``.
    """
    n = z.size
    c0 = coeffs_from_zeros(z)
    c1, c2, c3 = coeff_derivs_from_zero_derivs(z, zdot, w, wdot)
    pref = _prefactor(z)
    powers = z[:, None] ** np.arange(n - 1, -1, -1)[None, :]
    R = pref[:, None] * powers
    if not shortcuts:
        return R @ params.combine(c0, c1, c2, c3)

    out = np.zeros(n, dtype=complex)
    lowers = {
        "alpha": (c3, lambda: wdot - interaction_sum(3, z, zdot, w)),
        "beta": (c2, lambda: w - interaction_sum(2, z, zdot)),
        "gamma": (c1, lambda: zdot),
        # sum_m c_m z_n**(N-m) = -z_n**N at a zero of the polynomial
        "delta": (c0, lambda: -pref * z**n),
    }
    for name, (coef, lower) in lowers.items():
        p = getattr(params, name)
        if np.all(p == p[0]):
            out += p[0] * lower()
        else:
            out += R @ (p * coef)
    return out


def rhs_fourth_order(z, zdot, zddot, zdddot, params, shortcuts=False):
    """Fourth derivatives of the zeros from the three lower ones.

    The primed interaction sums of the order-4 identity plus the coefficient
    term in which the fourth coefficient derivatives are replaced by the
    linear ODE they obey.

    Raises
    ------
    SingularityError
        If two zeros coincide.
    """
    z = np.asarray(z, dtype=complex)
    zdot, zddot, zdddot = (np.asarray(v, dtype=complex) for v in (zdot, zddot, zdddot))
    check_distinct(z)
    drive = _coefficient_drive(z, zdot, zddot, zdddot, params, shortcuts=shortcuts)
    return interaction_sum(4, z, zdot, zddot, zdddot) + drive


def rhs_newtonian(state, params):
    """``(z'', w'')`` of the Newtonian 2N-body system.

    Every sum is written out over ordered tuples of distinct indices
    ``(n, l1, l2, l3)``, the outer index first.

    Returns
    -------
    zddot, wddot : ndarray of complex, shape (N,)
    """
    z, zd, w, wd = state.z, state.zdot, state.w, state.wdot
    n = z.size
    check_distinct(z)
    D = _inverse_gaps(z)
    wdd = np.zeros(n, dtype=complex)

    pairs = distinct_tuples(n, 2)
    if pairs.shape[0]:
        a, l = pairs.T
        terms = (4 * wd[a] * zd[l] + 4 * wd[l] * zd[a] + 6 * w[a] * w[l]) * D[a, l]
        np.add.at(wdd, a, terms)
    triples = distinct_tuples(n, 3)
    if triples.shape[0]:
        b, l1, l2 = triples.T
        terms = (w[b] * zd[l1] * zd[l2] + 2 * w[l1] * zd[b] * zd[l2]) * D[b, l1] * D[b, l2]
        np.add.at(wdd, b, -6 * terms)
    quads = distinct_tuples(n, 4)
    if quads.shape[0]:
        q, k1, k2, k3 = quads.T
        terms = zd[q] * zd[k1] * zd[k2] * zd[k3] * D[q, k1] * D[q, k2] * D[q, k3]
        np.add.at(wdd, q, 4 * terms)

    wdd += _coefficient_drive(z, zd, w, wd, params)
    return w.copy(), wdd


def _n_check(state, n):
    if state.N != n:
        raise ValueError(f"this reduction needs N = {n}, got N = {state.N}")
    check_distinct(state.z)


def rhs_n2(state, params):
    """``w''`` for two particles, written out in full."""
    _n_check(state, 2)
    z1, z2 = state.z
    zd1, zd2 = state.zdot
    w1, w2 = state.w
    wd1, wd2 = state.wdot
    a1, a2 = params.alpha
    b1, b2 = params.beta
    g1, g2 = params.gamma
    d1, d2 = params.delta
    G = (4 * wd1 * zd2 + 4 * wd2 * zd1 + 6 * w1 * w2) / (z1 - z2)
    F1 = a1 * (wd1 + wd2) + b1 * (w1 + w2) + g1 * (zd1 + zd2) + d1 * (z1 + z2)
    F2 = (a2 * (wd1 * z2 + 3 * w1 * zd2 + 3 * zd1 * w2 + z1 * wd2)
          + b2 * (w1 * z2 + 2 * zd1 * zd2 + z1 * w2)
          + g2 * (zd1 * z2 + z1 * zd2)
          + d2 * z1 * z2)
    wdd1 = G + (z1 * F1 - F2) / (z1 - z2)
    wdd2 = -G + (-z2 * F1 + F2) / (z1 - z2)
    return np.array([wdd1, wdd2])


def rhs_n3(state, params):
    """``w''`` for three particles, written out in full."""
    _n_check(state, 3)
    z1, z2, z3 = state.z
    zd1, zd2, zd3 = state.zdot
    w1, w2, w3 = state.w
    wd1, wd2, wd3 = state.wdot
    a1, a2, a3 = params.alpha
    b1, b2, b3 = params.beta
    g1, g2, g3 = params.gamma
    d1, d2, d3 = params.delta

    K1 = -(a1 * (wd1 + wd2 + wd3) + b1 * (w1 + w2 + w3)
           + g1 * (zd1 + zd2 + zd3) + d1 * (z1 + z2 + z3))
    K2 = (a2 * (wd1 * (z2 + z3) + wd2 * (z1 + z3) + wd3 * (z1 + z2)
                + 2 * w1 * (zd2 + zd3) + 2 * w2 * (zd1 + zd3) + 2 * w3 * (zd1 + zd2)
                + zd1 * (w2 + w3) + zd2 * (w1 + w3) + zd3 * (w1 + w2))
          + b2 * (w1 * (z2 + z3) + w2 * (z1 + z3) + w3 * (z1 + z2)
                  + zd1 * (zd2 + zd3) + zd2 * (zd1 + zd3) + zd3 * (zd1 + zd2))
          + g2 * (zd1 * (z2 + z3) + zd2 * (z1 + z3) + zd3 * (z1 + z2))
          + d2 * (z1 * z2 + z1 * z3 + z2 * z3))
    K3 = -(a3 * (wd1 * z2 * z3 + wd2 * z1 * z3 + wd3 * z1 * z2
                 + 2 * w1 * (zd2 * z3 + z2 * zd3)
                 + 2 * w2 * (zd1 * z3 + z1 * zd3)
                 + 2 * w3 * (zd1 * z2 + z1 * zd2)
                 + zd1 * (w2 * z3 + 2 * zd2 * zd3 + z2 * w3)
                 + zd2 * (w1 * z3 + 2 * zd1 * zd3 + z1 * w3)
                 + zd3 * (w1 * z2 + 2 * zd1 * zd2 + z1 * w2))
           + b3 * (w1 * z2 * z3 + w2 * z1 * z3 + w3 * z1 * z2
                   + zd1 * (zd2 * z3 + z2 * zd3)
                   + zd2 * (zd1 * z3 + z1 * zd3)
                   + zd3 * (zd1 * z2 + z1 * zd2))
           + g3 * (zd1 * z2 * z3 + z1 * zd2 * z3 + z1 * z2 * zd3)
           + d3 * z1 * z2 * z3)

    wdd1 = ((4 * wd1 * zd2 + 4 * wd2 * zd1 + 6 * w1 * w2) / (z1 - z2)
            + (4 * wd1 * zd3 + 4 * wd3 * zd1 + 6 * w1 * w3) / (z1 - z3)
            - (12 * (w1 * zd2 * zd3 + zd1 * (w2 * zd3 + w3 * zd2))
               + z1**2 * K1 + z1 * K2 + K3) / ((z1 - z2) * (z1 - z3)))
    wdd2 = ((4 * wd2 * zd1 + 4 * wd1 * zd2 + 6 * w1 * w2) / (z2 - z1)
            + (4 * wd2 * zd3 + 4 * wd3 * zd2 + 6 * w2 * w3) / (z2 - z3)
            - (12 * (w2 * zd1 * zd3 + zd2 * (w1 * zd3 + w3 * zd1))
               + z2**2 * K1 + z2 * K2 + K3) / ((z2 - z1) * (z2 - z3)))
    wdd3 = ((4 * wd3 * zd1 + 4 * wd1 * zd3 + 6 * w1 * w3) / (z3 - z1)
            + (4 * wd3 * zd2 + 4 * wd2 * zd3 + 6 * w2 * w3) / (z3 - z2)
            - (12 * (w3 * zd1 * zd2 + zd3 * (w1 * zd2 + w2 * zd1))
               + z3**2 * K1 + z3 * K2 + K3) / ((z3 - z1) * (z3 - z2)))
    return np.array([wdd1, wdd2, wdd3])


_REDUCED = {2: rhs_n2, 3: rhs_n3}


def _closest_approach(dense, N, sub=16, rtol=1e-10):
    """First time two particles meet inside the integrated interval, or None.

    The right-hand side is only evaluated at discrete points, so a crossing
    between two of them goes unnoticed by the integrator itself. Each step
    is resampled from the dense output; pairs whose piecewise-linear closest
    approach is small are refined with a bounded scalar minimisation.
    """
    if N < 2:
        return None
    ts = dense.ts
    frac = np.arange(sub) / sub
    grid = np.append((ts[:-1, None] + np.diff(ts)[:, None] * frac).ravel(), ts[-1])
    z = np.ascontiguousarray(dense(grid).T).view(complex)[:, :N]
    scale = 1.0 + np.abs(z).max()
    iu, ju = np.triu_indices(N, 1)
    d = z[:, iu] - z[:, ju]
    a, b = d[:-1], d[1:]
    seg = b - a
    # closest point of each segment a -> b to the origin
    s = np.clip(-(a.conj() * seg).real / np.maximum(np.abs(seg) ** 2, 1e-300), 0.0, 1.0)
    near = np.abs(a + s * seg)
    cand = np.argwhere(near < 1e-6 * scale)
    for k, pair in sorted(map(tuple, cand)):
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 2, grid.size - 1)]
        i, j = iu[pair], ju[pair]

        # squared, so a transversal crossing is a smooth minimum
        def gap2(t):
            y = np.ascontiguousarray(dense(t)).view(complex)
            return abs(y[i] - y[j]) ** 2

        res = minimize_scalar(gap2, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-14 * (1.0 + abs(hi))})
        if np.sqrt(res.fun) < rtol * scale:
            return float(res.x)
    return None


def integrate(state0, params, t_span, rel_tol=1e-10, abs_tol=1e-10, sample_times=None,
              use_reduced=True, max_step=np.inf):
    """Integrate the Newtonian system with an adaptive Dormand-Prince 5(4) scheme.

    Parameters
    ----------
    state0 : PhaseState
    params : CoeffParams
    t_span : (float, float)
    rel_tol, abs_tol : float
    sample_times : array_like of float, optional
        Output times (dense output of the method); defaults to the accepted steps.
    use_reduced : bool
        Use the written-out right-hand side for N = 2, 3 (faster); the
        general one otherwise.

    Returns
    -------
    Trajectory
        With ``zeros``, ``zdot``, ``w`` and ``wdot`` filled in.

    Raises
    ------
    CollisionError
        If particles collide or the step size underflows near a collision.
    IntegrationError
        For any other integrator failure.
    """
    t0, t1 = map(float, t_span)
    N = state0.N
    check_distinct(state0.z)
    reduced = _REDUCED.get(N) if use_reduced else None

    def fun(t, y):
        s = PhaseState.unpack(y)
        try:
            if reduced is not None:
                wdd = reduced(s, params)
            else:
                _, wdd = rhs_newtonian(s, params)
        except SingularityError as exc:
            raise CollisionError(str(exc), time=t) from exc
        return np.concatenate([s.zdot, s.w, s.wdot, wdd]).view(float)

    t_eval = None if sample_times is None else np.asarray(sample_times, dtype=float)
    sol = solve_ivp(fun, (t0, t1), state0.pack(), method="RK45", t_eval=t_eval,
                    rtol=rel_tol, atol=abs_tol, max_step=max_step, dense_output=True)
    if sol.status != 0:
        last = PhaseState.unpack(sol.y[:, -1]) if sol.y.shape[1] else state0
        t_fail = float(sol.t[-1]) if sol.t.size else t0
        if min_pair_distance(last.z) < 1e-6 * (1.0 + np.abs(last.z).max()):
            raise CollisionError(f"integration stopped: {sol.message}", time=t_fail)
        raise IntegrationError(f"integration failed at t = {t_fail:.17g}: {sol.message}")
    hit = _closest_approach(sol.sol, N)
    if hit is not None:
        raise CollisionError(f"particles collide at t = {hit:.17g}", time=hit)
    Y = np.ascontiguousarray(sol.y.T).view(complex)
    traj = Trajectory(times=sol.t, zeros=Y[:, :N].copy(), zdot=Y[:, N:2 * N].copy(),
                      w=Y[:, 2 * N:3 * N].copy(), wdot=Y[:, 3 * N:].copy())
    traj.info["nfev"] = int(sol.nfev)
    return traj
