"""Scenario descriptions: parameters, initial data and sampling of one run.

Scenario files are JSON documents; complex numbers are written as
``[re, im]`` pairs. Exactly one of three parameter blocks is given::

    {"alpha_beta_gamma_delta": [[alpha, beta, gamma, delta], ...]}   # per m
    {"lambda": [[lam1, lam2, lam3, lam4], ...]}                      # per m
    {"decay_freq": {"a": [[a1, a2, a3, a4], ...], "omega": [[...], ...]}}

See ``docs/scenario.schema.json`` for the full schema.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import PhaseState
from .errors import ScenarioError
from .identities import SINGULAR_RTOL
from .modes import CoeffParams

__all__ = ["Scenario", "BUILTINS", "builtin_names", "get_builtin", "load_scenario"]

PARAM_KINDS = ("alpha_beta_gamma_delta", "lambda", "decay_freq")


def _complex(x, what):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if (isinstance(x, (list, tuple)) and len(x) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)):
        return complex(x[0], x[1])
    raise ScenarioError(f"{what}: expected a number or an [re, im] pair, got {x!r}")


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _complex_rows(rows, n, width, what):
    if not isinstance(rows, list) or len(rows) != n:
        raise ScenarioError(f"{what}: expected {n} rows")
    out = np.empty((n, width), dtype=complex)
    for m, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise ScenarioError(f"{what}[{m}]: expected {width} entries")
        for k, x in enumerate(row):
            out[m, k] = _complex(x, f"{what}[{m}][{k}]")
    return out


def _real_rows(rows, n, what):
    if not isinstance(rows, list) or len(rows) != n:
        raise ScenarioError(f"{what}: expected {n} rows")
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{what}: expected real numbers") from exc
    if arr.shape != (n, 4):
        raise ScenarioError(f"{what}: expected shape ({n}, 4)")
    return arr


@dataclass
class Scenario:
    """One initial-value problem with its sampling.

    Attributes
    ----------
    name : str
    params : CoeffParams
    initial : PhaseState
    t1 : float
        Horizon; runs start at t = 0.
    dt : float
        Output sample step (also the base tracking step).
    parameter_block : dict
        The parameter block as given ({kind: data}), kept for round trips.
    """

    name: str
    params: CoeffParams
    initial: PhaseState
    t1: float
    dt: float
    parameter_block: dict = None

    @property
    def N(self):
        return self.initial.N

    def sample_grid(self):
        n = int(np.ceil(self.t1 / self.dt - 1e-9))
        return self.t1 * np.arange(n + 1) / n

    def with_horizon(self, t1=None, dt=None):
        s = Scenario(self.name, self.params, self.initial,
                     self.t1 if t1 is None else float(t1),
                     self.dt if dt is None else float(dt), self.parameter_block)
        s.validate()
        return s

    def validate(self):
        if self.params.N != self.initial.N:
            raise ScenarioError(f"{self.name}: {self.params.N} parameter rows for N = {self.initial.N}")
        z = self.initial.z
        gap = np.abs(z[:, None] - z[None, :])
        gap[np.diag_indices(z.size)] = np.inf
        if z.size > 1 and gap.min() < SINGULAR_RTOL * (1.0 + np.abs(z).max()):
            raise ScenarioError(f"{self.name}: initial positions are not pairwise distinct")
        if not (np.isfinite(self.t1) and self.t1 > 0):
            raise ScenarioError(f"{self.name}: horizon t1 must be positive")
        if not (np.isfinite(self.dt) and 0 < self.dt <= self.t1):
            raise ScenarioError(f"{self.name}: sample step dt must lie in (0, t1]")
        return self

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise ScenarioError("scenario must be a JSON object")
        missing = {"name", "N", "parameters", "initial", "t1", "dt"} - doc.keys()
        if missing:
            raise ScenarioError(f"scenario lacks {sorted(missing)}")
        name = doc["name"]
        n = doc["N"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ScenarioError(f"{name}: N must be a positive integer")
        block = doc["parameters"]
        if not isinstance(block, dict):
            raise ScenarioError(f"{name}: parameters must be an object")
        kinds = [k for k in PARAM_KINDS if k in block]
        extra = set(block) - set(PARAM_KINDS)
        if len(kinds) != 1 or extra:
            raise ScenarioError(f"{name}: give exactly one of {PARAM_KINDS} as parameters")
        kind = kinds[0]
        try:
            if kind == "alpha_beta_gamma_delta":
                rows = _complex_rows(block[kind], n, 4, "alpha_beta_gamma_delta")
                params = CoeffParams(*rows.T)
            elif kind == "lambda":
                params = CoeffParams.from_modes(_complex_rows(block[kind], n, 4, "lambda"))
            else:
                df = block[kind]
                if not isinstance(df, dict) or set(df) != {"a", "omega"}:
                    raise ScenarioError(f"{name}: decay_freq needs exactly 'a' and 'omega'")
                params = CoeffParams.from_decay_freq(_real_rows(df["a"], n, "a"),
                                                     _real_rows(df["omega"], n, "omega"))
        except ScenarioError:
            raise
        ini = doc["initial"]
        if not isinstance(ini, dict) or set(ini) != {"z", "zdot", "w", "wdot"}:
            raise ScenarioError(f"{name}: initial needs exactly z, zdot, w, wdot")
        vecs = {}
        for key in ("z", "zdot", "w", "wdot"):
            vals = ini[key]
            if not isinstance(vals, list) or len(vals) != n:
                raise ScenarioError(f"{name}: initial.{key} must have {n} entries")
            vecs[key] = np.array([_complex(v, f"initial.{key}") for v in vals])
        try:
            t1, dt = float(doc["t1"]), float(doc["dt"])
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"{name}: t1 and dt must be numbers") from exc
        sc = cls(str(name), params, PhaseState(**vecs), t1, dt, {kind: block[kind]})
        return sc.validate()

    def to_dict(self):
        block = self.parameter_block
        if block is None:
            p = self.params
            block = {"alpha_beta_gamma_delta": [[_pair(x) for x in row]
                                                for row in zip(p.alpha, p.beta, p.gamma, p.delta)]}
        s = self.initial
        return {
            "name": self.name,
            "N": self.N,
            "parameters": block,
            "initial": {k: [_pair(v) for v in getattr(s, k)] for k in ("z", "zdot", "w", "wdot")},
            "t1": self.t1,
            "dt": self.dt,
        }


def load_scenario(source):
    """A built-in scenario by name, or a scenario JSON file by path."""
    if source in BUILTINS:
        return get_builtin(source)
    path = Path(source)
    if not path.is_file():
        raise ScenarioError(f"{source!r} is neither a built-in scenario nor a file")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
    return Scenario.from_dict(doc)


_TWO_PI = 2 * np.pi
_PI = np.pi


def _abgd(rows):
    return {"alpha_beta_gamma_delta": [[_pair(x) for x in row] for row in rows]}


def _ini(z, zdot, w, wdot):
    return {k: [_pair(x) for x in v] for k, v in (("z", z), ("zdot", zdot), ("w", w), ("wdot", wdot))}


_EX3 = (-3 + (_PI - 1) * 1j, -(_PI + 2) + 3 * (_PI - 1) * 1j, -3 * _PI + 2 * (_PI - 1) * 1j, -2 * _PI)

_BUILTIN_DOCS = {
    "example1_n2": {
        "name": "example1_n2", "N": 2,
        "parameters": _abgd([(5j, 5, 5j, 6)] * 2),
        "initial": _ini([1 + 1j, 5 + 1j], [1, 1], [1, -1j], [1j, 1]),
        "t1": 2 * _TWO_PI, "dt": _TWO_PI / 256,
    },
    "example2_n2": {
        "name": "example2_n2", "N": 2,
        "parameters": _abgd([(-3, -3, -3, -2)] * 2),
        "initial": _ini([-2 - 1j, 2 + 1j], [1, 1], [1, -1j], [1j, 1]),
        "t1": 7 * _TWO_PI, "dt": _TWO_PI / 256,
    },
    "example3_n2": {
        "name": "example3_n2", "N": 2,
        "parameters": _abgd([_EX3] * 2),
        "initial": _ini([-2 - 1j, 2 + 1j], [1, -1], [1j, -1j], [1, -1]),
        "t1": 7 * _TWO_PI, "dt": _TWO_PI / 256,
    },
    "example4_n2_scattering": {
        "name": "example4_n2_scattering", "N": 2,
        "parameters": _abgd([
            (0.222 + 1.4j, 0.41208 - 0.2208j, -0.038436 - 0.018968j, 0.000866464 + 0.0010224j),
            (0.172 + 1.1j, 0.06952 - 0.1512j, -0.006696 + 0.026376j, 0.000104896 - 0.00047584j),
        ]),
        "initial": _ini([-2 + 3j, 3 + 2j], [7, -5], [2 + 4.2j, 3.1j], [4.5, 2.4]),
        "t1": 200.0, "dt": 0.05,
    },
    "example1_n3": {
        "name": "example1_n3", "N": 3,
        "parameters": _abgd([(5j, 5, 5j, 6), (4j, -1, 16j, 12), (0, -5, 0, -4)]),
        "initial": _ini([-1.45 + 1.1j, 5.1 + 0.8j, 2.5 - 0.2j], [0.9, 1.2, -1.04],
                        [1.23, -2.26j, 1.32j], [0.84j, 2.16, -1.12]),
        "t1": 2 * _TWO_PI, "dt": _TWO_PI / 256,
    },
}

# characteristic roots as printed alongside each example, per coefficient
PAPER_MODES = {
    "example1_n2": [[-1j, 1j, 2j, 3j]] * 2,
    "example2_n2": [[-1j, 1j, -1, -2]] * 2,
    "example3_n2": [[-1j, _PI * 1j, -1, -2]] * 2,
    "example4_n2_scattering": [[0.04, 0.062 + 1j, 0.08 + 0.3j, 0.04 + 0.1j],
                               [0.02, 0.032 + 1j, 0.06 - 0.1j, 0.06 + 0.2j]],
    "example1_n3": [[-1j, 1j, 2j, 3j], [-2j, 1j, 2j, 3j], [-2j, -1j, 1j, 2j]],
}

BUILTINS = tuple(_BUILTIN_DOCS)


def builtin_names():
    return list(BUILTINS)


def get_builtin(name):
    try:
        doc = _BUILTIN_DOCS[name]
    except KeyError:
        raise ScenarioError(f"no built-in scenario {name!r}") from None
    return Scenario.from_dict(json.loads(json.dumps(doc)))
