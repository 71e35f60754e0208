"""Command-line front end: run scenarios by either route, cross-check, classify.

::

    zerodyn list
    zerodyn run example1_n2 --route both --out results --svg
    zerodyn verify example1_n3

Exit status: 0 success, 2 invalid scenario or arguments, 3 numerical failure
(including collisions), 4 a verification check above its threshold.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import ASYMPTOTICALLY_ISOCHRONOUS, ISOCHRONOUS, classify_modes, detect_period
from .dynamics import integrate
from .errors import CollisionError, DegenerateModesError, ScenarioError, ZerodynError
from .identities import (
    DerivBundle,
    identity_residuals,
    relation_matrix,
    relation_matrix_inverse,
)
from .modes import ModeSpec, eval_coefficients
from .output import atomic_write_text, write_csv, write_svg
from .rootflow import Trajectory, zero_derivs_cauchy, zero_trajectory
from .scenarios import builtin_names, load_scenario

__all__ = [
    "closed_form_route",
    "direct_route",
    "route_gap",
    "run_scenario",
    "verify_scenario",
    "THRESHOLDS",
    "main",
]

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_VERIFY = 0, 2, 3, 4

THRESHOLDS = {
    "route_gap": 1e-6,
    "identity_residual": 1e-8,
    "self_evaluation": 1e-8,
    "relation_inverse": 1e-10,
}
N_CHECK_TIMES = 10
ROUTES = {"closed": "closed_form", "closed_form": "closed_form", "direct": "direct", "both": "both"}


def _on_grid(traj, grid):
    idx = [traj.index_of(t) for t in grid]
    sub = Trajectory(times=traj.times[idx].copy(), zeros=traj.zeros[idx],
                     permutation_log=None if traj.permutation_log is None else traj.permutation_log[idx],
                     info=dict(traj.info))
    for name in ("w", "zdot", "wdot"):
        data = getattr(traj, name)
        if data is not None:
            setattr(sub, name, data[idx])
    return sub


def closed_form_route(scenario):
    """Zeros of the closed-form polynomial, sampled on the scenario grid.

    Returns
    -------
    traj : Trajectory
    spec : ModeSpec
    """
    s = scenario.initial
    spec = ModeSpec.from_initial_data(scenario.params, s.z, s.zdot, s.w, s.wdot)
    grid = scenario.sample_grid()
    traj = zero_trajectory(spec, 0.0, scenario.t1, scenario.dt, initial=s.z, sample_times=grid)
    return _on_grid(traj, grid), spec


def direct_route(scenario, params=None, rel_tol=1e-10, abs_tol=1e-10):
    """Numerical integration of the equations of motion on the scenario grid.

    `params` replaces the scenario's parameters (used to check that the
    cross-validation notices a discrepancy).
    """
    params = scenario.params if params is None else params
    grid = scenario.sample_grid()
    return integrate(scenario.initial, params, (0.0, scenario.t1), rel_tol=rel_tol,
                     abs_tol=abs_tol, sample_times=grid)


def route_gap(a, b):
    """Sup-norm distance between two trajectories on the same grid.

    Returns the absolute gap and the gap relative to ``max(1, sup|z|)``.
    """
    if a.zeros.shape != b.zeros.shape or not np.allclose(a.times, b.times, rtol=1e-12, atol=0):
        raise ValueError("trajectories are not sampled on the same grid")
    gap = float(np.abs(a.zeros - b.zeros).max())
    return gap, gap / max(1.0, float(np.abs(a.zeros).max()))


def _periods(traj, kind, T, t1):
    if kind not in (ISOCHRONOUS, ASYMPTOTICALLY_ISOCHRONOUS) or T is None:
        return None
    t_min = 0.0 if kind == ISOCHRONOUS else 0.5 * t1
    max_p = min(6, int(np.floor((t1 - t_min) / T + 1e-9)))
    if max_p < 1:
        return None
    out = {"t_min": t_min, "max_p": max_p}
    for which in ("zeros", "w"):
        if getattr(traj, which) is not None:
            out["z" if which == "zeros" else "w"] = detect_period(traj, T, max_p, which=which, t_min=t_min)
    return out


def run_scenario(scenario, route="both", out=None, svg=False):
    """Run one or both routes; optionally write CSV/SVG files and a summary.

    Returns
    -------
    dict
        The summary (also written to ``out/summary.json`` when `out` is given).
    """
    route = ROUTES[route]
    scenario.validate()
    try:
        cls = classify_modes(scenario.params.modes())
    except DegenerateModesError:
        # the direct route does not need distinct modes
        if route != "direct":
            raise
        cls = None
    summary = {
        "scenario": scenario.name,
        "N": scenario.N,
        "t1": scenario.t1,
        "dt": scenario.dt,
        "route": route,
        "class": None if cls is None else str(cls),
        "kind": None if cls is None else cls.kind,
        "period": None if cls is None else cls.period,
        "diagnostics": {} if cls is None else cls.diagnostics,
        "version": __version__,
    }
    trajs = {}
    if route in ("closed_form", "both"):
        trajs["closed_form"], _ = closed_form_route(scenario)
        summary["self_evaluation"] = trajs["closed_form"].info["residual"]
    if route in ("direct", "both"):
        trajs["direct"] = direct_route(scenario)
        summary["direct_nfev"] = trajs["direct"].info["nfev"]
    summary["periods"] = {name: None if cls is None else _periods(tr, cls.kind, cls.period, scenario.t1)
                          for name, tr in trajs.items()}
    summary["growth"] = {name: (np.abs(tr.zeros[-1]) / np.abs(tr.zeros[0])).tolist() for name, tr in trajs.items()}
    if route == "both":
        gap, rel = route_gap(trajs["closed_form"], trajs["direct"])
        summary["route_gap"], summary["route_gap_relative"] = gap, rel

    if out is not None:
        out = Path(out)
        files = []
        for name, tr in trajs.items():
            stem = f"{scenario.name}_{name}"
            files.append(str(write_csv(out / f"{stem}.csv", tr)))
            if svg:
                for which, tag in (("zeros", "z"), ("w", "w")):
                    title = f"{scenario.name}, {name} route, {tag}_n(t)"
                    files.append(str(write_svg(out / f"{stem}_{tag}.svg", tr, which=which, title=title)))
        summary["files"] = files
        atomic_write_text(out / "summary.json", json.dumps(_jsonable(summary), indent=2) + "\n")
    return summary


def verify_scenario(scenario, direct_params=None):
    """Cross-validate the two routes and check the identities along the way.

    Checks (threshold in :data:`THRESHOLDS`):

    * ``route_gap``: sup-norm gap between the routes relative to ``max(1, sup|z|)``;
    * ``identity_residual``: orders 1-4 at sampled times, using zero
      derivatives from a contour integral of the tracked zeros (independent
      of the identities) and coefficient derivatives in closed form;
    * ``self_evaluation``: the tracked zeros are zeros of the polynomial;
    * ``relation_inverse``: ``|R R^-1 - I|`` at sampled times.

    Parameters
    ----------
    direct_params : CoeffParams, optional
        Parameters for the direct route only (sensitivity check).

    Returns
    -------
    dict
        ``checks`` maps each name to ``{"value", "threshold", "pass"}``;
        ``passed`` is the conjunction.
    """
    scenario.validate()
    closed, spec = closed_form_route(scenario)
    direct = direct_route(scenario, params=direct_params)
    _, gap = route_gap(closed, direct)

    idx = np.unique(np.linspace(0, closed.times.size - 1, N_CHECK_TIMES).round().astype(int))
    worst_identity, worst_inverse = 0.0, 0.0
    for i in idx:
        t, z = closed.times[i], closed.zeros[i]
        zd = zero_derivs_cauchy(spec, t, z, order=4)
        cd = [eval_coefficients(spec, t, order=k) for k in (1, 2, 3, 4)]
        bundle = DerivBundle(z, *zd, *cd)
        for order in (1, 2, 3, 4):
            res = identity_residuals(bundle, order)
            scale = max(1.0, np.abs(zd[order - 1]).max())
            worst_identity = max(worst_identity, float(np.abs(res).max() / scale))
        dev = relation_matrix(z) @ relation_matrix_inverse(z) - np.eye(z.size)
        worst_inverse = max(worst_inverse, float(np.abs(dev).max()))

    values = {
        "route_gap": gap,
        "identity_residual": worst_identity,
        "self_evaluation": float(closed.info["residual"]),
        "relation_inverse": worst_inverse,
    }
    checks = {k: {"value": v, "threshold": THRESHOLDS[k], "pass": bool(v <= THRESHOLDS[k])}
              for k, v in values.items()}
    cls = classify_modes(scenario.params.modes())
    report = {
        "scenario": scenario.name,
        "class": str(cls),
        "checks": checks,
        "periods": _periods(closed, cls.kind, cls.period, scenario.t1),
        "passed": all(c["pass"] for c in checks.values()),
    }
    return report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def _parse_perturbation(text):
    try:
        m, val = text.split(":")
        return int(m) - 1, complex(val)
    except ValueError:
        raise argparse.ArgumentTypeError("expected M:VALUE, e.g. 1:1.0") from None


def build_parser():
    p = argparse.ArgumentParser(prog="zerodyn", description="Zeros of polynomials with linearly evolving coefficients as many-body dynamics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario by one or both routes")
    run.add_argument("scenario", help="built-in name or path to a scenario JSON file")
    run.add_argument("--route", choices=sorted(ROUTES), default="both")
    run.add_argument("--out", type=Path, default=None, help="directory for CSV/SVG/summary files")
    run.add_argument("--svg", action="store_true", help="also write SVG trajectory plots")
    run.add_argument("--t1", type=float, default=None, help="override the horizon")
    run.add_argument("--dt", type=float, default=None, help="override the sample step")

    ver = sub.add_parser("verify", help="cross-validate routes and check identities")
    ver.add_argument("scenario")
    ver.add_argument("--t1", type=float, default=None)
    ver.add_argument("--dt", type=float, default=None)
    # test harness: shift delta_M by VALUE on the direct route only
    ver.add_argument("--perturb-direct-delta", type=_parse_perturbation, default=None, help=argparse.SUPPRESS)

    sub.add_parser("list", help="list built-in scenarios")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in builtin_names():
            print(name)
        return EXIT_OK
    try:
        scenario = load_scenario(args.scenario)
        if args.t1 is not None or args.dt is not None:
            scenario = scenario.with_horizon(args.t1, args.dt)
        if args.command == "run":
            summary = run_scenario(scenario, route=args.route, out=args.out, svg=args.svg)
            print(json.dumps(_jsonable(summary), indent=2))
            return EXIT_OK
        direct_params = None
        if args.perturb_direct_delta is not None:
            m, val = args.perturb_direct_delta
            if not 0 <= m < scenario.N:
                raise ScenarioError(f"no coefficient {m + 1} for N = {scenario.N}")
            direct_params = scenario.params.perturbed(m, val)
        report = verify_scenario(scenario, direct_params=direct_params)
        for name, c in report["checks"].items():
            print(f"{'PASS' if c['pass'] else 'FAIL'} {name}: {c['value']:.3e} (threshold {c['threshold']:.0e})")
        print(f"class: {report['class']}")
        if report["periods"] is not None:
            print(f"periods z: {report['periods'].get('z')}  w: {report['periods'].get('w')}")
        return EXIT_OK if report["passed"] else EXIT_VERIFY
    except (ScenarioError, DegenerateModesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CollisionError as exc:
        print(f"collision: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ZerodynError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
