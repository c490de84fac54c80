"""Minimal deterministic SVG emission for grids and step curves.

Hand-rolled on purpose: outputs must be byte-identical across runs with the
same inputs, so no plotting library with embedded ids, dates or hashes is
used. Colors and layout are fixed.
"""

from __future__ import annotations

import numpy as np

from .density import IntensityGrid

# anchor stops for the sequential ramp (low -> high), loosely viridis
_SEQ_STOPS = [
    (0.0, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.5, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.0, (253, 231, 37)),
]
# diverging ramp for residual / log-ratio surfaces
_DIV_STOPS = [
    (0.0, (33, 102, 172)),
    (0.5, (247, 247, 247)),
    (1.0, (178, 24, 43)),
]

ENVELOPE_COLOR = "#000000"
OBSERVED_COLOR = "#e6701b"
BAND_COLOR = "#bbbbbb"
REFLINE_COLOR = "#cc0000"


def _ramp(value: float, stops) -> str:
    value = min(max(value, 0.0), 1.0)
    for (p0, c0), (p1, c1) in zip(stops, stops[1:]):
        if value <= p1:
            t = 0.0 if p1 == p0 else (value - p0) / (p1 - p0)
            rgb = [round(a + t * (b - a)) for a, b in zip(c0, c1)]
            return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"
    r, g, b = stops[-1][1]
    return f"#{r:02x}{g:02x}{b:02x}"


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def heatmap_svg(grid: IntensityGrid, title: str = "", diverging: bool = False) -> str:
    """Grid surface as colored cells, y axis pointing down (image convention)."""
    values = np.asarray(grid.values, dtype=float)
    if diverging:
        scale = float(np.max(np.abs(values))) or 1.0
        norm = 0.5 + values / (2.0 * scale)
        stops = _DIV_STOPS
    else:
        lo, hi = float(values.min()), float(values.max())
        norm = (values - lo) / ((hi - lo) or 1.0)
        stops = _SEQ_STOPS

    width, height = 480.0, 480.0 * grid.window.height / grid.window.width
    cw, ch = width / grid.nx, height / grid.ny
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height + 24)}" viewBox="0 0 {_fmt(width)} {_fmt(height + 24)}">',
        f'<text x="4" y="14" font-family="sans-serif" font-size="12">{title}</text>',
        '<g transform="translate(0,24)">',
    ]
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            parts.append(
                f'<rect x="{_fmt(ix * cw)}" y="{_fmt(iy * ch)}" '
                f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" '
                f'fill="{_ramp(float(norm[iy, ix]), stops)}"/>'
            )
    parts.append("</g></svg>")
    return "\n".join(parts)


def _panel(
    x,
    series,
    band=None,
    refline=None,
    title: str = "",
    width: float = 320.0,
    height: float = 240.0,
) -> str:
    """One cartesian panel as a <g> fragment. series: list of (values, color, width)."""
    x = np.asarray(x, dtype=float)
    finite_vals = [np.asarray(v, dtype=float) for v, _, _ in series]
    if band is not None:
        finite_vals += [np.asarray(band[0], dtype=float), np.asarray(band[1], dtype=float)]
    chunks = [v[np.isfinite(v)] for v in finite_vals if np.isfinite(v).any()]
    pool = np.concatenate(chunks) if chunks else np.empty(0)
    if refline is not None:
        pool = np.append(pool, refline)
    y_lo, y_hi = (float(pool.min()), float(pool.max())) if pool.size else (0.0, 1.0)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    x_lo, x_hi = float(x.min()), float(x.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    m_left, m_bottom, m_top = 46.0, 26.0, 20.0
    pw, ph = width - m_left - 8.0, height - m_bottom - m_top

    def sx(v):
        return m_left + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return m_top + (y_hi - v) / (y_hi - y_lo) * ph

    def poly(xs, ys):
        pts = [
            f"{_fmt(sx(a))},{_fmt(sy(b))}"
            for a, b in zip(xs, ys)
            if np.isfinite(b)
        ]
        return " ".join(pts)

    parts = [
        f'<text x="{_fmt(m_left)}" y="14" font-family="sans-serif" font-size="11">{title}</text>',
        f'<rect x="{_fmt(m_left)}" y="{_fmt(m_top)}" width="{_fmt(pw)}" height="{_fmt(ph)}" '
        'fill="none" stroke="#888888" stroke-width="0.5"/>',
    ]
    if band is not None:
        lower, upper = band
        ring = poly(np.concatenate([x, x[::-1]]), np.concatenate([lower, upper[::-1]]))
        if ring:
            parts.append(f'<polygon points="{ring}" fill="{BAND_COLOR}" fill-opacity="0.6"/>')
    if refline is not None and y_lo <= refline <= y_hi:
        parts.append(
            f'<line x1="{_fmt(m_left)}" y1="{_fmt(sy(refline))}" x2="{_fmt(m_left + pw)}" '
            f'y2="{_fmt(sy(refline))}" stroke="{REFLINE_COLOR}" stroke-width="1"/>'
        )
    for values, color, stroke in series:
        pts = poly(x, np.asarray(values, dtype=float))
        if pts:
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                f'stroke-width="{_fmt(stroke)}"/>'
            )
    for frac in (0.0, 0.5, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        parts.append(
            f'<text x="{_fmt(sx(xv))}" y="{_fmt(height - 8.0)}" font-family="sans-serif" '
            f'font-size="9" text-anchor="middle">{xv:.6g}</text>'
        )
        parts.append(
            f'<text x="{_fmt(m_left - 4.0)}" y="{_fmt(sy(yv) + 3.0)}" font-family="sans-serif" '
            f'font-size="9" text-anchor="end">{yv:.6g}</text>'
        )
    return "\n".join(parts)


def panel_grid_svg(panels: list[dict], ncols: int = 2, panel_w: float = 320.0, panel_h: float = 240.0) -> str:
    """Arrange panels (kwargs for :func:`_panel`) in a fixed grid."""
    nrows = (len(panels) + ncols - 1) // ncols
    total_w, total_h = ncols * panel_w, nrows * panel_h
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(total_w)}" '
        f'height="{_fmt(total_h)}" viewBox="0 0 {_fmt(total_w)} {_fmt(total_h)}">'
    ]
    for i, opts in enumerate(panels):
        r, c = divmod(i, ncols)
        parts.append(f'<g transform="translate({_fmt(c * panel_w)},{_fmt(r * panel_h)})">')
        parts.append(_panel(width=panel_w, height=panel_h, **opts))
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)


def line_plot_svg(x, series, band=None, refline=None, title: str = "") -> str:
    return panel_grid_svg(
        [dict(x=x, series=series, band=band, refline=refline, title=title)],
        ncols=1,
        panel_w=480.0,
        panel_h=360.0,
    )


def shift_plot_svg(curve, title: str = "") -> str:
    """Shift estimate with band and the equal-distributions reference line."""
    return line_plot_svg(
        curve.abscissae,
        [(curve.delta, "#000000", 1.5)],
        band=(curve.lower, curve.upper),
        refline=0.0,
        title=title,
    )


def envelope_plot_svg(env, observed: list[np.ndarray], title: str = "") -> str:
    """Envelope bounds in black with observed curves overlaid in orange."""
    series = [(obs, OBSERVED_COLOR, 1.0) for obs in observed]
    series.append((env.lower, ENVELOPE_COLOR, 1.5))
    series.append((env.upper, ENVELOPE_COLOR, 1.5))
    return line_plot_svg(env.grid, series, title=title)
