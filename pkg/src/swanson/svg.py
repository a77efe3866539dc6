"""Plain SVG emission: log10 pseudospectrum contours (marching squares),
numerical-range boundary curves, and eigenvalue dots.

Paths carry data coordinates directly (only the y axis is negated for
SVG's downward orientation), so full decimal precision survives into the
file.  No styling beyond stroke/fill attributes.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ContractViolation
from .serialize import format_float, write_text_atomic

__all__ = ["emit_plot", "contour_segments"]

# Marching-squares: crossing edges per corner-sign case.  Corners are
# bit 0 = (r, c), bit 1 = (r, c+1), bit 2 = (r+1, c+1), bit 3 = (r+1, c);
# edges are 0 bottom, 1 right, 2 top, 3 left.
_CASES = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)],
    6: [(0, 2)], 7: [(3, 2)], 8: [(2, 3)],
    9: [(2, 0)], 11: [(2, 1)], 12: [(1, 3)],
    13: [(1, 0)], 14: [(0, 3)],
}


def contour_segments(x_nodes, y_nodes, field, level):
    """Line segments of the iso-line field == level on the grid
    (field[r, c] at (x_nodes[c], y_nodes[r]))."""
    x = np.asarray(x_nodes, dtype=float)
    y = np.asarray(y_nodes, dtype=float)
    f = np.asarray(field, dtype=float)
    segments = []

    def interp(xa, ya, fa, xb, yb, fb):
        t = (level - fa) / (fb - fa)
        return (xa + t * (xb - xa), ya + t * (yb - ya))

    for r in range(f.shape[0] - 1):
        for c in range(f.shape[1] - 1):
            corners = ((x[c], y[r], f[r, c]), (x[c + 1], y[r], f[r, c + 1]),
                       (x[c + 1], y[r + 1], f[r + 1, c + 1]),
                       (x[c], y[r + 1], f[r + 1, c]))
            case = 0
            for bit, (_, _, val) in enumerate(corners):
                if val >= level:
                    case |= 1 << bit
            if case in (0, 15):
                continue
            edges = {}
            edge_pairs = ((0, 1), (1, 2), (3, 2), (0, 3))  # bottom,right,top,left
            for e, (i, j) in enumerate(edge_pairs):
                xa, ya, fa = corners[i]
                xb, yb, fb = corners[j]
                if (fa >= level) != (fb >= level):
                    edges[e] = interp(xa, ya, fa, xb, yb, fb)
            if case in (5, 10):
                # saddle: resolve by the cell-center value
                center = 0.25 * sum(v for _, _, v in corners)
                if case == 5:
                    pairs = [(3, 0), (1, 2)] if center >= level else [(3, 2), (1, 0)]
                else:
                    pairs = [(0, 1), (2, 3)] if center >= level else [(0, 3), (2, 1)]
            else:
                pairs = _CASES[case]
            for ea, eb in pairs:
                if ea in edges and eb in edges:
                    segments.append((edges[ea], edges[eb]))
    return segments


def _fmt_point(x, y):
    return f"{format_float(x)} {format_float(-y)}"


def _svg_document(x_min, x_max, y_min, y_max, body: list[str]) -> str:
    margin = 0.05 * max(x_max - x_min, y_max - y_min, 1e-6)
    vx = x_min - margin
    vy = -(y_max + margin)
    vw = (x_max - x_min) + 2 * margin
    vh = (y_max - y_min) + 2 * margin
    header = (f'<svg xmlns="http://www.w3.org/2000/svg" '
              f'viewBox="{format_float(vx)} {format_float(vy)} '
              f'{format_float(vw)} {format_float(vh)}">')
    return "\n".join([header, *body, "</svg>"]) + "\n"


def _path(segments, width) -> str:
    parts = []
    for (xa, ya), (xb, yb) in segments:
        parts.append(f"M {_fmt_point(xa, ya)} L {_fmt_point(xb, yb)}")
    d = " ".join(parts)
    return (f'<path fill="none" stroke="black" '
            f'stroke-width="{format_float(width)}" d="{d}"/>')


def _polyline(points, width) -> str:
    coords = [f"{'M' if i == 0 else 'L'} {_fmt_point(p.real, p.imag)}"
              for i, p in enumerate(points)]
    return (f'<path fill="none" stroke="black" '
            f'stroke-width="{format_float(width)}" d="{" ".join(coords)}"/>')


def _dots(points, radius) -> list[str]:
    return [f'<circle cx="{format_float(p.real)}" cy="{format_float(-p.imag)}" '
            f'r="{format_float(radius)}" fill="black"/>' for p in points]


def emit_plot(data, kind: str, path: str) -> None:
    """Write one SVG file.

    kind="contour": ``data`` is a PseudospectrumGrid (or any object with
    re_nodes / im_nodes / sigma_min); iso-lines of log10(sigma_min) at
    the integer levels -1, -2, ... down to the grid minimum.

    kind="curve": ``data`` is a dict with key "boundary" (complex points)
    and optionally "eigenvalues" (complex points drawn as dots).

    kind="dots": ``data`` is a sequence of complex points.
    """
    if kind == "contour":
        grid = data
        if grid is None or getattr(grid, "sigma_min", np.empty(0)).size == 0:
            raise ContractViolation("empty pseudospectrum data")
        logs = np.log10(np.maximum(grid.sigma_min, 1e-300))
        lowest = int(math.floor(logs.min()))
        levels = [lv for lv in range(-1, lowest - 1, -1) if lv >= logs.min()]
        if not levels:
            levels = [int(math.floor(logs.max()))]
        x, y = grid.re_nodes, grid.im_nodes
        width = (x[-1] - x[0]) / 400.0
        body = []
        for level in levels:
            segs = contour_segments(x, y, logs, float(level))
            if segs:
                body.append(_path(segs, width))
        text = _svg_document(float(x[0]), float(x[-1]), float(y[0]), float(y[-1]), body)
    elif kind == "curve":
        boundary = np.asarray(data.get("boundary", []), dtype=complex)
        if boundary.size == 0:
            raise ContractViolation("empty boundary data")
        eigenvalues = np.asarray(data.get("eigenvalues", []), dtype=complex)
        xs = np.concatenate([boundary.real, eigenvalues.real]) if eigenvalues.size else boundary.real
        ys = np.concatenate([boundary.imag, eigenvalues.imag]) if eigenvalues.size else boundary.imag
        extent = max(xs.max() - xs.min(), ys.max() - ys.min(), 1e-6)
        body = [_polyline(boundary, extent / 400.0)]
        body.extend(_dots(eigenvalues, extent / 150.0))
        text = _svg_document(float(xs.min()), float(xs.max()),
                             float(ys.min()), float(ys.max()), body)
    elif kind == "dots":
        points = np.asarray(data, dtype=complex)
        if points.size == 0:
            raise ContractViolation("empty dot data")
        extent = max(points.real.max() - points.real.min(),
                     points.imag.max() - points.imag.min(), 1e-6)
        body = _dots(points, extent / 150.0)
        text = _svg_document(float(points.real.min()), float(points.real.max()),
                             float(points.imag.min()), float(points.imag.max()), body)
    else:
        raise ContractViolation(f"unknown plot kind {kind!r}")
    write_text_atomic(path, text)
