"""Three particles with an isochronous polynomial: whose period is what?

The zero set returns after T = 2 pi, but a zero may come back to the
place of another one, so individual periods can be multiples of T. We
measure, per particle, the mismatch |z_n(t + pT) - z_n(t)| for p = 1, 2 on
both routes, and then on a manufactured trajectory where a pair does swap.

    python3 demos/exchange_three_body.py
"""

import numpy as np

from zerodyn.classify import detect_period, period_mismatch
from zerodyn.cli import closed_form_route, direct_route
from zerodyn.rootflow import Trajectory, min_pair_distance
from zerodyn.scenarios import get_builtin

T = 2 * np.pi
sc = get_builtin("example1_n3")
closed, spec = closed_form_route(sc)
direct = direct_route(sc)

for name, tr in (("closed form", closed), ("direct", direct)):
    for p in (1, 2):
        mis = period_mismatch(tr, p * T)
        print(f"{name:12s} p={p}  sup|z(t+pT)-z(t)| = {np.array2string(mis, precision=2)}")
print("periods z:", detect_period(closed, T, 2), " w:", detect_period(closed, T, 2, which="w"))
print(f"closest approach along the orbit: {min(min_pair_distance(z) for z in closed.zeros):.3f}")

# a pair of zeros +-exp(it/2) swaps places every 2 pi
t = np.linspace(0, 3 * T, 3 * 256 + 1)
h = np.exp(0.5j * t)
swap = Trajectory(times=t, zeros=np.stack([np.full_like(h, 3.0), h, -h], axis=1))
print("manufactured swap, periods:", detect_period(swap, T, 3))
