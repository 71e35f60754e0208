"""Two particles whose every motion repeats after 2 pi.

Each coefficient of the polynomial solves the same linear fourth-order ODE
with characteristic roots -i, i, 2i, 3i, so the polynomial is 2 pi periodic
and so are its zeros. The script runs both routes, reports how far apart
they end up, and writes CSV + SVG files.

    python3 demos/isochronous_pair.py [outdir]
"""

import sys

import numpy as np

from zerodyn.cli import run_scenario
from zerodyn.scenarios import get_builtin

out = sys.argv[1] if len(sys.argv) > 1 else "demo_output/isochronous_pair"
sc = get_builtin("example1_n2")
summary = run_scenario(sc, "both", out=out, svg=True)

print(f"class            {summary['class']}")
print(f"periods (z)      {summary['periods']['closed_form']['z']} x 2 pi")
print(f"route gap        {summary['route_gap']:.2e}")
print(f"self-evaluation  {summary['self_evaluation']:.2e}")
ratio = np.array(summary["growth"]["closed_form"])
print(f"|z(4pi)|/|z(0)|  {ratio.round(12)}")
print(f"files in         {out}")
