"""Zeros of monic polynomials and their identification along a trajectory.

The zeros of a polynomial form an unordered set; which zero is which
particle can only be decided by following them in time. :func:`zero_trajectory`
samples closed-form coefficients on a grid fine enough that each zero moves
much less than the distance to its neighbours per step, and labels the zeros
at each step by optimal assignment to a linear prediction.
"""

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import CollisionError, ConvergenceError, TrackingError
from .identities import zero_derivs_from_coeff_derivs
from .modes import eval_coefficients
from .symmetria import poly_eval

__all__ = [
    "Trajectory",
    "roots",
    "match_ordering",
    "zero_trajectory",
    "min_pair_distance",
    "roots_near",
    "zero_derivs_cauchy",
]

ROOT_TOL = 1e-13
MAX_ITER = 200
EXHAUSTIVE_MAX_N = 6


def min_pair_distance(z):
    z = np.asarray(z)
    if z.size < 2:
        return np.inf
    gap = np.abs(z[:, None] - z[None, :])
    gap[np.diag_indices(z.size)] = np.inf
    return gap.min()


def roots(c, initial=None, tol=ROOT_TOL, max_iter=MAX_ITER):
    """All zeros of ``x**N + sum_m c[m-1] x**(N-m)`` by Aberth-Ehrlich iteration.

    Parameters
    ----------
    c : array_like of complex, shape (N,)
        Coefficients below the leading one.
    initial : array_like of complex, shape (N,), optional
        Starting guesses (e.g. the zeros at a neighbouring time). By default
        the guesses sit on a circle of radius ``1 + max|c|``, rotated off the
        real axis to break symmetry.
    tol : float
        A guess is converged once its update is below ``tol * (1 + |x|)``.
    max_iter : int

    Returns
    -------
    ndarray of complex, shape (N,)
        The zeros, in no particular order.

    Raises
    ------
    ConvergenceError
        If some guess has not converged after `max_iter` iterations.
    """
    c = np.asarray(c, dtype=complex)
    n = c.size
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return -c.copy()
    if not np.any(c):
        return np.zeros(n, dtype=complex)
    p = np.concatenate(([1.0 + 0j], c))
    dp = p[:-1] * np.arange(n, 0, -1)
    if initial is None:
        radius = 1.0 + np.abs(c).max()
        angles = 2.0 * np.pi * np.arange(n) / n + 0.4
        x = radius * np.exp(1j * angles) * (1.0 + 0.01 * np.arange(n) / n)
    else:
        x = np.array(initial, dtype=complex)
        if x.shape != (n,):
            raise ValueError(f"initial guesses of shape {x.shape}, expected ({n},)")
        # repeated guesses would stall the iteration
        if min_pair_distance(x) == 0:
            x = x + 1e-8 * (1.0 + np.abs(x).max()) * np.exp(1j * (np.arange(n) + 0.5))
    active = np.ones(n, dtype=bool)
    absp = np.abs(p)
    for _ in range(max_iter):
        px = np.polyval(p, x)
        dpx = np.polyval(dp, x)
        # Horner rounding-error bound: at this level x is a zero to working precision
        bound = 4.0 * np.finfo(float).eps * np.polyval(absp, np.abs(x))
        on_root = np.abs(px) <= bound
        ratio = np.zeros(n, dtype=complex)
        nz = ~on_root & (dpx != 0)
        ratio[nz] = px[nz] / dpx[nz]
        ratio[~on_root & (dpx == 0)] = 1e-3 * (1.0 + np.abs(x[~on_root & (dpx == 0)]))
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        repulsion = (1.0 / diff).sum(axis=1) - 1.0
        denom = 1.0 - ratio * repulsion
        step = np.where(denom != 0, ratio / np.where(denom != 0, denom, 1.0), ratio)
        step[~active] = 0.0
        x = x - step
        active &= ~(on_root | (np.abs(step) < tol * (1.0 + np.abs(x))))
        if not active.any():
            return x
    res = np.abs(np.polyval(p, x))
    raise ConvergenceError(f"Aberth iteration did not converge in {max_iter} iterations", residuals=res)


def match_ordering(predicted, found):
    """Order `found` to minimise the total squared distance to `predicted`.

    Exhaustive search over permutations for ``N <= 6``, Hungarian algorithm
    above. Ties are broken deterministically: `found` is sorted
    lexicographically (real, then imaginary part) and the first optimal
    permutation in lexicographic order wins.

    Returns
    -------
    ordered : ndarray of complex, shape (N,)
    perm : ndarray of int, shape (N,)
        ``ordered[i] == found[perm[i]]``.
    """
    predicted = np.asarray(predicted, dtype=complex)
    found = np.asarray(found, dtype=complex)
    n = predicted.size
    if found.shape != (n,):
        raise ValueError("predicted and found must have the same length")
    lex = np.lexsort((found.imag, found.real))
    cand = found[lex]
    cost = np.abs(predicted[:, None] - cand[None, :]) ** 2
    if n <= EXHAUSTIVE_MAX_N:
        perms = _perm_table(n)
        totals = cost[np.arange(n)[None, :], perms].sum(axis=1)
        best = perms[int(np.argmin(totals))]
    else:
        _, best = linear_sum_assignment(cost)
    perm = lex[best]
    return found[perm], perm


_PERM_CACHE = {}


def _perm_table(n):
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(permutations(range(n))), dtype=np.intp)
    return _PERM_CACHE[n]


@dataclass
class Trajectory:
    """Time samples of labelled zeros.

    Attributes
    ----------
    times : ndarray of float, shape (T,)
        Strictly increasing.
    zeros : ndarray of complex, shape (T, N)
        ``zeros[i, n]`` is particle ``n`` at ``times[i]``.
    w : ndarray of complex, shape (T, N) or None
        Second derivatives of the zeros (accelerations).
    permutation_log : ndarray of int, shape (T, N)
        ``zeros[i] == sorted_i[permutation_log[i]]`` where ``sorted_i`` is
        the lexicographically sorted zero set at ``times[i]``; the
        relabelling chosen by tracking at each sample.
    """

    times: np.ndarray
    zeros: np.ndarray
    w: np.ndarray = None
    permutation_log: np.ndarray = None
    zdot: np.ndarray = None
    wdot: np.ndarray = None
    info: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.zeros.shape[1]

    def index_of(self, t, rtol=1e-9):
        """Index of the sample at time `t`; raises KeyError if there is none."""
        i = int(np.searchsorted(self.times, t))
        for j in (i - 1, i):
            if 0 <= j < self.times.size and abs(self.times[j] - t) <= rtol * (1.0 + abs(t)):
                return j
        raise KeyError(f"no sample at t = {t}")

    def at(self, times, which="zeros"):
        """Stored samples of `which` at grid times `times` (must be on the grid)."""
        data = getattr(self, which)
        idx = [self.index_of(t) for t in np.atleast_1d(times)]
        return data[idx]

    def net_exchange(self, i, j):
        """Permutation ``pi`` with ``zeros[j] == zeros[i][pi]`` when the sets agree.

        Composed from the logged relabellings at samples `i` and `j`; only
        meaningful when the zero sets at both samples coincide (for instance
        one period apart in an isochronous system).
        """
        log = self.permutation_log
        inv_i = np.empty_like(log[i])
        inv_i[log[i]] = np.arange(log.shape[1])
        return inv_i[log[j]]


def _coefficient_magnitudes(spec, t):
    """``sum_k |amp[m, k] exp(lam[m, k] t)|``: the scale of the rounding error in ``c_m(t)``."""
    return (np.abs(spec.amp) * np.exp(t * spec.lam.real)).sum(axis=-1)


def _unresolved_pair(cabs, z, dmin, factor=16.0):
    """True if the closest two zeros are a double root to working precision.

    In floating point a double root is only determined to about
    ``sqrt(eps * B / |q|)``, where ``B`` bounds the rounding error of the
    polynomial near the pair (from coefficient magnitudes `cabs`) and ``q``
    is the product of distances from the pair to the other zeros. Closer than a few times that, two zeros cannot
    be told apart (nor told to have crossed).
    """
    if z.size < 2:
        return False
    gap = np.abs(z[:, None] - z[None, :])
    gap[np.diag_indices(z.size)] = np.inf
    i, j = np.unravel_index(np.argmin(gap), gap.shape)
    m = 0.5 * (z[i] + z[j])
    absp = np.concatenate(([1.0], cabs))
    bound = np.finfo(float).eps * np.polyval(absp, abs(m))
    others = np.delete(z, [i, j])
    q = np.abs(m - others).prod() if others.size else 1.0
    return dmin < factor * np.sqrt(bound / max(q, np.finfo(float).tiny))


def _lex_perm(ordered):
    """``perm`` with ``ordered == sorted(ordered)[perm]``."""
    lex = np.lexsort((ordered.imag, ordered.real))
    perm = np.empty_like(lex)
    perm[lex] = np.arange(lex.size)
    return perm


def zero_trajectory(spec, t0, t1, dt_max, initial=None, sample_times=None,
                    with_derivs=True, max_halvings=20, move_frac=0.25):
    """Track the zeros of the closed-form polynomial from `t0` to `t1`.

    The base grid has step at most `dt_max` and contains every time in
    `sample_times`. A step is halved recursively while some zero moves more
    than ``move_frac`` times the smallest pairwise distance at the step start.

    Parameters
    ----------
    spec : ModeSpec
    t0, t1 : float
    dt_max : float
    initial : array_like of complex, shape (N,), optional
        Labelled zeros at `t0`, defining the particle identities; by default
        the zeros at `t0` in lexicographic order.
    sample_times : array_like of float, optional
        Extra times forced onto the grid.
    with_derivs : bool
        Also fill ``zdot``, ``w`` and ``wdot`` from the identities.

    Raises
    ------
    CollisionError
        If zeros approach each other closer than ``1e-10`` times the scale,
        or closer than the distance at which a double root can still be
        resolved in floating point.
    """
    if not t1 > t0:
        raise ValueError("t1 must exceed t0")
    if not dt_max > 0:
        raise ValueError("dt_max must be positive")
    nbase = int(np.ceil((t1 - t0) / dt_max - 1e-9))
    base = t0 + (t1 - t0) * np.arange(nbase + 1) / nbase
    if sample_times is not None:
        st = np.asarray(sample_times, dtype=float)
        st = st[(st >= t0) & (st <= t1)]
        base = np.union1d(base, st)
        keep = np.concatenate(([True], np.diff(base) > 1e-12 * (1.0 + np.abs(base[1:]))))
        base = base[keep]

    c_start = eval_coefficients(spec, t0)
    found = roots(c_start)
    if initial is not None:
        z_cur, _ = match_ordering(np.asarray(initial, dtype=complex), found)
    else:
        z_cur = found[np.lexsort((found.imag, found.real))]
    times, zs = [t0], [z_cur]
    t_prev, z_prev = None, None
    t_cur = t0

    def solve_at(t, predicted):
        c = eval_coefficients(spec, t)
        found = roots(c, initial=predicted)
        ordered, _ = match_ordering(predicted, found)
        return ordered

    for t_target in base[1:]:
        stack = [t_target]
        while stack:
            t_next = stack[-1]
            if t_prev is None:
                predicted = z_cur
            else:
                predicted = z_cur + (z_cur - z_prev) * (t_next - t_cur) / (t_cur - t_prev)
            z_next = solve_at(t_next, predicted)
            dmin = min_pair_distance(z_cur)
            scale = 1.0 + np.abs(z_cur).max()
            if dmin < 1e-10 * scale or _unresolved_pair(_coefficient_magnitudes(spec, t_cur), z_cur, dmin):
                raise CollisionError("zeros collide", time=t_cur)
            moved = np.abs(z_next - z_cur).max()
            if moved <= move_frac * dmin:
                stack.pop()
                t_prev, z_prev, t_cur, z_cur = t_cur, z_cur, t_next, z_next
                times.append(t_cur)
                zs.append(z_cur)
                continue
            if len(stack) > max_halvings:
                if min_pair_distance(z_next) < 1e-10 * scale or dmin < 1e-8 * scale:
                    raise CollisionError("zeros collide", time=t_next)
                raise TrackingError("step refinement exhausted", time=t_cur)
            stack.append(0.5 * (t_cur + t_next))

    times = np.array(times)
    zeros = np.array(zs)
    traj = Trajectory(times=times, zeros=zeros,
                      permutation_log=np.array([_lex_perm(z) for z in zeros]))
    if with_derivs:
        cd = [eval_coefficients(spec, times, order=k) for k in (1, 2, 3)]
        zd = np.array([zero_derivs_from_coeff_derivs(zeros[i], cd[0][i], cd[1][i], cd[2][i])
                       for i in range(times.size)])
        traj.zdot, traj.w, traj.wdot = zd[:, 0], zd[:, 1], zd[:, 2]
    traj.info["residual"] = _self_eval_max(spec, times, zeros)
    return traj


def _self_eval_max(spec, times, zeros):
    c = eval_coefficients(spec, times)
    worst = 0.0
    n = zeros.shape[1]
    for ci, zi in zip(c, zeros):
        worst = max(worst, np.abs(poly_eval(ci, zi)).max() / (1.0 + np.abs(zi).max()) ** n)
    return worst


def zero_derivs_cauchy(spec, t, z_t, order=4, nodes=128, radius=None, max_shrink=8, alias_tol=1e-9):
    """Time derivatives of the labelled zeros at `t` from a contour integral.

    The coefficients are entire functions of complex time, so each zero is
    analytic near `t` (away from collisions). Tracking the zeros once around
    a small circle ``t + r exp(i theta)`` and taking the discrete Fourier
    transform gives their Taylor coefficients; no derivative identity is
    involved, which makes this an independent check on the identities.

    Parameters
    ----------
    spec : ModeSpec
    t : float
    z_t : array_like of complex, shape (N,)
        The labelled zeros at `t`.
    order : int
        Highest derivative returned.
    nodes : int
        Points on the contour.
    radius : float, optional
        Contour radius; by default the time the fastest zero needs to cross
        the smallest pairwise distance, capped at 0.5. It is halved
        while tracking around the circle fails or while the estimate from
        every other node differs from the full one by more than `alias_tol`
        (relative), a sign that the circle comes close to a singularity.

    Returns
    -------
    ndarray of complex, shape (order, N)
        Row ``k-1`` holds the k-th derivatives.
    """
    z_t = np.asarray(z_t, dtype=complex)
    dmin = min_pair_distance(z_t)
    if radius is None:
        h = 1e-6
        speed = np.abs(roots_near(spec, t + h, z_t) - roots_near(spec, t - h, z_t)).max() / (2 * h)
        radius = min(0.5, dmin / max(speed, 1e-12))
    theta = 2 * np.pi * np.arange(nodes) / nodes
    for _ in range(max_shrink):
        ring = t + radius * np.exp(1j * theta)
        c_ring = _eval_coefficients_complex(spec, ring)
        vals = np.empty((nodes, z_t.size), dtype=complex)
        cur, ok = z_t, True
        # walk out along the radius, then around the circle
        for s in np.linspace(0.0, 1.0, 17)[1:]:
            cur = _track_step(_eval_coefficients_complex(spec, np.array([t + s * radius]))[0], cur, dmin)
            if cur is None:
                ok = False
                break
        if ok:
            for j in range(nodes):
                nxt = _track_step(c_ring[j], cur, dmin)
                if nxt is None:
                    ok = False
                    break
                vals[j] = cur = nxt
        if ok:
            nxt = _track_step(_eval_coefficients_complex(spec, np.array([ring[0]]))[0], cur, dmin)
            ok = nxt is not None and np.allclose(nxt, vals[0], rtol=0, atol=1e-9 * (1 + np.abs(vals).max()))
        if ok:
            derivs = _taylor_derivs(vals, radius, order)
            # aliasing test: half the nodes must give the same answer
            coarse = _taylor_derivs(vals[::2], radius, order)
            scale = np.maximum(1.0, np.abs(derivs).max(axis=1))
            if (np.abs(coarse - derivs).max(axis=1) <= alias_tol * scale).all():
                return derivs
        radius *= 0.5
    raise TrackingError("could not resolve zero derivatives on the contour", time=t)


def _taylor_derivs(vals, radius, order):
    coef = np.fft.fft(vals, axis=0) / vals.shape[0]
    k = np.arange(1, order + 1)
    fact = np.cumprod(k).astype(float)
    return coef[1:order + 1] * (fact / radius**k)[:, None]


def roots_near(spec, t, z_ref):
    """Zeros at real time `t`, labelled to match `z_ref`."""
    found = roots(eval_coefficients(spec, t), initial=z_ref)
    return match_ordering(z_ref, found)[0]


def _eval_coefficients_complex(spec, times):
    return (spec.amp * np.exp(np.multiply.outer(times, spec.lam))).sum(axis=-1)


def _track_step(c, prev, dmin):
    found = roots(c, initial=prev)
    ordered, _ = match_ordering(prev, found)
    if np.abs(ordered - prev).max() > 0.25 * dmin:
        return None
    return ordered
