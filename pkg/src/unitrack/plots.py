"""Graphics output: a deterministic SVG of the curve family plus rendered
matplotlib figures for the run report.

The SVG is assembled by hand so that identical runs produce identical bytes:
one path element per depth with a stable id and stroke colour, axes with
integer ticks, fixed decimal formatting throughout.  The PNG figures are the
human-friendly report companions and carry no byte-stability contract.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np

from .verify import UnitrackRun

PALETTE = (
    "#1b6ca8",
    "#d1495b",
    "#2e933c",
    "#8c5383",
    "#e28413",
    "#00798c",
    "#7d5ba6",
    "#a44a3f",
    "#3b7a57",
    "#5c5346",
)

_VIEW_W = 900.0


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def render_svg(run: UnitrackRun, path: Union[str, Path]) -> None:
    """Write the whole curve family as one deterministic SVG drawing."""
    xs = np.concatenate([c.x for c in run.sampled])
    ys = np.concatenate([c.y for c in run.sampled])
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    pad = 0.05 * max(xmax - xmin, ymax - ymin, 1.0)
    xmin, xmax = xmin - pad, xmax + pad
    ymin, ymax = ymin - pad, ymax + pad
    scale = _VIEW_W / (xmax - xmin)
    view_h = (ymax - ymin) * scale

    def xnum(x: float) -> float:
        return (x - xmin) * scale

    def ynum(y: float) -> float:
        return (ymax - y) * scale  # flip: SVG y grows downward

    def X(x: float) -> str:
        return _fmt(xnum(x))

    def Y(y: float) -> str:
        return _fmt(ynum(y))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(_VIEW_W)} '
        f'{_fmt(view_h)}" width="{_fmt(_VIEW_W)}" height="{_fmt(view_h)}">',
        f'<rect width="{_fmt(_VIEW_W)}" height="{_fmt(view_h)}" fill="#ffffff"/>',
        '<g id="frame" stroke="#888888" stroke-width="1" font-family="monospace" '
        'font-size="12" fill="#444444">',
    ]
    # coordinate frame: the two axes plus integer ticks
    if ymin < 0.0 < ymax:
        parts.append(
            f'<line x1="{X(xmin)}" y1="{Y(0.0)}" x2="{X(xmax)}" y2="{Y(0.0)}"/>'
        )
    if xmin < 0.0 < xmax:
        parts.append(
            f'<line x1="{X(0.0)}" y1="{Y(ymin)}" x2="{X(0.0)}" y2="{Y(ymax)}"/>'
        )
    y_axis = min(max(ynum(0.0), 0.0), view_h)  # clamp ticks onto the canvas
    x_axis = min(max(xnum(0.0), 0.0), _VIEW_W)
    for tick in range(int(np.ceil(xmin)), int(np.floor(xmax)) + 1):
        parts.append(
            f'<line x1="{X(tick)}" y1="{_fmt(y_axis)}" x2="{X(tick)}" '
            f'y2="{_fmt(y_axis + 5.0)}"/>'
        )
        parts.append(
            f'<text x="{X(tick)}" y="{_fmt(y_axis + 18.0)}" '
            f'stroke="none" text-anchor="middle">{tick}</text>'
        )
    for tick in range(int(np.ceil(ymin)), int(np.floor(ymax)) + 1):
        if tick == 0:
            continue
        parts.append(
            f'<line x1="{_fmt(x_axis)}" y1="{Y(tick)}" '
            f'x2="{_fmt(x_axis - 5.0)}" y2="{Y(tick)}"/>'
        )
        parts.append(
            f'<text x="{_fmt(x_axis - 8.0)}" y="{Y(tick)}" '
            f'stroke="none" text-anchor="end">{tick}</text>'
        )
    parts.append(
        f'<text x="{_fmt(10.0)}" y="{_fmt(16.0)}" stroke="none">'
        f"x: [{_fmt(xmin)}, {_fmt(xmax)}]  y: [{_fmt(ymin)}, {_fmt(ymax)}]</text>"
    )
    parts.append("</g>")

    for c in run.sampled:
        color = PALETTE[c.depth % len(PALETTE)]
        coords = " L ".join(
            f"{X(float(px))} {Y(float(py))}" for px, py in zip(c.x, c.y)
        )
        parts.append(
            f'<path id="depth-{c.depth}" stroke="{color}" fill="none" '
            f'stroke-width="1.2" d="M {coords}"/>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def render_figures(run: UnitrackRun, out_dir: Union[str, Path]) -> list[Path]:
    """Render curves.png (the family) and metrics.png (per-depth trends)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    written = []

    fig, ax = plt.subplots(figsize=(10, 6), dpi=150)
    for c in run.sampled:
        ax.plot(
            c.x,
            c.y,
            color=PALETTE[c.depth % len(PALETTE)],
            lw=0.9,
            label=f"depth {c.depth}",
        )
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"curve family, seed={run.seed.kind}, amplitude={run.seed.amplitude:g}")
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    p = out / "curves.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)

    depths = run.depths
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), dpi=150)
    axes[0, 0].semilogy(depths, [m.length for m in run.metrics], "o-")
    axes[0, 0].set_title("arc length")
    axes[0, 1].plot(depths, [m.H for m in run.metrics], "o-", label="H")
    axes[0, 1].plot(depths, [m.V for m in run.metrics], "s-", label="V")
    axes[0, 1].set_title("amplitudes")
    axes[0, 1].legend()
    axes[1, 0].plot(depths, [m.zero_count for m in run.metrics], "o-")
    axes[1, 0].set_title("interior zeros of y")
    areas = [m.area for m in run.metrics]
    axes[1, 1].plot(depths, [a - areas[0] for a in areas], "o-")
    axes[1, 1].set_title("oriented area drift from depth 0")
    axes[1, 1].ticklabel_format(axis="y", style="sci", scilimits=(0, 0))
    for ax in axes.flat:
        ax.grid(True, alpha=0.3)
        ax.set_xlabel("depth")
    fig.tight_layout()
    p = out / "metrics.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)
    return written
