"""Deterministic SVG drawings of planar fans and of 3-dimensional fan cross-sections."""
from __future__ import annotations

import math
from typing import Optional
from xml.sax.saxutils import escape

from .fans import Fan, standard_basis

SIZE = 480
PAD = 48
SUB = "₀₁₂₃₄₅₆₇₈₉"


def _label(v, n: int) -> str:
    std = standard_basis(n)
    if tuple(v) in std:
        return "e" + SUB[std.index(tuple(v)) + 1]
    return "(" + ",".join(str(x) for x in v) + ")"


def _f(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]


def _chart3(v) -> tuple[float, float]:
    s = sum(v)
    if s <= 0:
        raise ValueError(f"ray {tuple(v)} does not meet the plane x+y+z = 1")
    # e1 bottom left, e2 bottom right, e3 top
    corners = ((PAD, SIZE - PAD), (SIZE - PAD, SIZE - PAD), (SIZE / 2, SIZE - PAD - (SIZE - 2 * PAD) * math.sqrt(3) / 2))
    x = sum(c[0] * t for c, t in zip(corners, v)) / s
    y = sum(c[1] * t for c, t in zip(corners, v)) / s
    return x, y


def _fit(points: dict) -> dict:
    """Rescale chart points into the canvas when some rays leave the simplex."""
    xs = [p[0] for p in points.values()]
    ys = [p[1] for p in points.values()]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    if lo_x >= PAD - 1e-9 and hi_x <= SIZE - PAD + 1e-9 and lo_y >= PAD - 1e-9 and hi_y <= SIZE - PAD + 1e-9:
        return points
    scale = (SIZE - 2 * PAD) / max(hi_x - lo_x, hi_y - lo_y)
    return {k: (PAD + (x - lo_x) * scale, PAD + (y - lo_y) * scale) for k, (x, y) in points.items()}


def _render3(F: Fan, title: str) -> list[str]:
    pts = _fit({r: _chart3(r) for r in F.rays})
    out = []
    for c in F.sorted_cones:
        poly = " ".join(f"{_f(pts[g][0])},{_f(pts[g][1])}" for g in c.generators)
        if c.dim == 3:
            out.append(f'<polygon points="{poly}" fill="#dde8f4" stroke="black" stroke-width="1"/>')
        elif c.dim == 2:
            out.append(f'<polyline points="{poly}" fill="none" stroke="black" stroke-width="1"/>')
    for r in F.rays:
        x, y = pts[r]
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3" fill="black"/>')
        # push labels away from the centre of the drawing
        dx, dy = x - SIZE / 2, y - SIZE * 0.6
        norm = math.hypot(dx, dy) or 1.0
        lx, ly = x + 14 * dx / norm, y + 14 * dy / norm + 4
        out.append(f'<text x="{_f(lx)}" y="{_f(ly)}" font-family="sans-serif" font-size="11" '
                   f'text-anchor="middle">{escape(_label(r, 3))}</text>')
    return out


def _render2(F: Fan, title: str) -> list[str]:
    cx = cy = SIZE / 2
    R = SIZE / 2 - PAD

    def end(v, rad=R):
        norm = math.hypot(v[0], v[1])
        return cx + rad * v[0] / norm, cy - rad * v[1] / norm

    out = []
    for c in F.sorted_cones:
        if c.dim == 2:
            a, b = c.generators
            # sweep counterclockwise from the ray with the smaller angle
            if a[0] * b[1] - a[1] * b[0] < 0:
                a, b = b, a
            (x1, y1), (x2, y2) = end(a), end(b)
            out.append(f'<path d="M {_f(cx)} {_f(cy)} L {_f(x1)} {_f(y1)} A {_f(R)} {_f(R)} 0 0 0 '
                       f'{_f(x2)} {_f(y2)} Z" fill="#dde8f4" stroke="black" stroke-width="1"/>')
    for r in F.rays:
        x, y = end(r)
        out.append(f'<line x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(x)}" y2="{_f(y)}" stroke="black" stroke-width="1.5"/>')
        lx, ly = end(r, R + 16)
        out.append(f'<text x="{_f(lx)}" y="{_f(ly)}" font-family="sans-serif" font-size="11" '
                   f'text-anchor="middle">{escape(_label(r, 2))}</text>')
    return out


def render_svg(F: Fan, title: Optional[str] = None) -> str:
    n = F.ambient_dim
    title = title or f"fan with {len(F.rays)} rays and {len(F.maximal_cones)} maximal cones"
    if n == 2:
        body = _render2(F, title)
    elif n == 3:
        body = _render3(F, title)
    else:
        raise ValueError(f"rendering supports n = 2 or n = 3 only, got n = {n}")
    return "\n".join(_header(title) + body + ["</svg>"]) + "\n"
