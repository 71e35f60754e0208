"""Deterministic CSV and SVG writers for trajectories.

Files are written to a temporary sibling and renamed into place, so a
reader never sees a half-written file.
"""

import os
import tempfile
from pathlib import Path

import numpy as np

__all__ = ["atomic_write_text", "trajectory_csv", "write_csv", "trajectory_svg", "write_svg"]

# fixed palette, one colour per particle (cycled)
_COLOURS = ("#1f4e9c", "#b2182b", "#1b7837", "#7b3294", "#e08214", "#01665e", "#8c510a", "#4d4d4d")


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _g17(x):
    return format(float(x), ".17g")


def trajectory_csv(traj):
    """CSV text: ``t``, then Re/Im of every ``z_n``, then Re/Im of every ``w_n``."""
    n = traj.N
    head = ["t"]
    head += [f"{part}_z{k + 1}" for k in range(n) for part in ("re", "im")]
    head += [f"{part}_w{k + 1}" for k in range(n) for part in ("re", "im")]
    w = traj.w if traj.w is not None else np.full_like(traj.zeros, np.nan)
    lines = [",".join(head)]
    for t, z, ww in zip(traj.times, traj.zeros, w):
        row = [_g17(t)]
        for v in z:
            row += [_g17(v.real), _g17(v.imag)]
        for v in ww:
            row += [_g17(v.real), _g17(v.imag)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_csv(path, traj):
    return atomic_write_text(path, trajectory_csv(traj))


def trajectory_svg(traj, which="zeros", title=None, size=480):
    """SVG 1.1 document with one polyline per particle in the complex plane.

    The imaginary axis points up; a small square marks each initial point.
    """
    data = getattr(traj, which)
    pts = data[np.isfinite(data)]
    lo_x, hi_x = pts.real.min(), pts.real.max()
    lo_y, hi_y = pts.imag.min(), pts.imag.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
    margin = 0.06 * span
    x0, y0 = lo_x - margin, lo_y - margin
    scale = size / (span + 2 * margin)

    def xy(v):
        return (v.real - x0) * scale, size - (v.imag - y0) * scale

    label = {"zeros": "z", "w": "w", "zdot": "zdot", "wdot": "wdot"}.get(which, which)
    out = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>')
    # axes through the origin when it is in view
    ox, oy = xy(0j)
    if 0 <= ox <= size:
        out.append(f'<line x1="{ox:.3f}" y1="0" x2="{ox:.3f}" y2="{size}" stroke="#bbbbbb" stroke-width="0.5"/>')
    if 0 <= oy <= size:
        out.append(f'<line x1="0" y1="{oy:.3f}" x2="{size}" y2="{oy:.3f}" stroke="#bbbbbb" stroke-width="0.5"/>')
    for k in range(data.shape[1]):
        colour = _COLOURS[k % len(_COLOURS)]
        col = data[:, k]
        col = col[np.isfinite(col)]
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(xy, col))
        out.append(f'<polyline id="{label}{k + 1}" fill="none" stroke="{colour}" '
                   f'stroke-width="1.2" points="{coords}"/>')
        sx, sy = xy(col[0])
        out.append(f'<rect x="{sx - 4:.3f}" y="{sy - 4:.3f}" width="8" height="8" '
                   f'fill="none" stroke="{colour}" stroke-width="1.2"/>')
        out.append(f'<text x="{sx + 6:.3f}" y="{sy - 6:.3f}" font-family="sans-serif" '
                   f'font-size="11" fill="{colour}">{label}{k + 1}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, traj, which="zeros", title=None):
    return atomic_write_text(path, trajectory_svg(traj, which=which, title=title))


def _escape(s):
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
