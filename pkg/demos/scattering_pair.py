"""Growing and decaying modes together: one particle escapes, one settles.

With a characteristic root of real part 0.08 in c_1 and at most 0.06 in
c_2, one zero grows like e^{0.08 t} while the product c_2 = z_1 z_2 grows
more slowly, forcing the other zero towards the origin.

    python3 demos/scattering_pair.py [outdir]
"""

import sys

import numpy as np

from zerodyn.cli import closed_form_route
from zerodyn.classify import classify_modes
from zerodyn.output import write_csv, write_svg
from zerodyn.rootflow import Trajectory
from zerodyn.scenarios import get_builtin

out = sys.argv[1] if len(sys.argv) > 1 else "demo_output/scattering_pair"
sc = get_builtin("example4_n2_scattering")
print(classify_modes(sc.params.modes()))
traj, _ = closed_form_route(sc)
for t in (0, 50, 100, 150, 200):
    i = np.argmin(np.abs(traj.times - t))
    z1, z2 = np.abs(traj.zeros[i])
    print(f"t={t:5.0f}  |z1|={z1:11.4g}  |z2|={z2:8.4f}  |w2|={abs(traj.w[i, 1]):8.4f}")

# plot only the bounded particle; z1 would flatten everything else
write_csv(f"{out}/scattering.csv", traj)
bounded = Trajectory(times=traj.times, zeros=traj.zeros[:, 1:], w=traj.w[:, 1:])
write_svg(f"{out}/z2.svg", bounded, title="bounded particle z2(t)")
print(f"files in {out}")
