"""
Serialize scenarios, paths and execution traces to SVG 1.1.

One SVG unit is one metre and the view box equals the map bounds.  Drawing
happens inside a group that flips the y axis so map coordinates can be written
as-is.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Union

from dtig import EventKind, TraceEvent
from geometry import Ellipse
from world import Scenario

SVG_NS = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class RenderOptions:
    show_virtual: bool = False
    stroke_width: float = 1.0
    marker_radius: float = 3.0


@dataclass(frozen=True)
class RenderResult:
    svg: str
    counts: Dict[str, int]


def _num(value: float) -> str:
    return f"{value:.6f}"


def _ellipse(e: Ellipse, rx: float, ry: float, css: str, style: str) -> str:
    angle = math.degrees(e.theta)
    return (
        f'<ellipse class="{css}" cx="{_num(e.cx)}" cy="{_num(e.cy)}" '
        f'rx="{_num(rx)}" ry="{_num(ry)}" '
        f'transform="rotate({_num(angle)} {_num(e.cx)} {_num(e.cy)})" {style}/>'
    )


def _polyline(points: Iterable[Sequence[float]], css: str, style: str) -> str:
    coords = " ".join(f"{_num(p[0])},{_num(p[1])}" for p in points)
    return f'<polyline class="{css}" points="{coords}" fill="none" {style}/>'


def render_svg(
    scenario: Scenario,
    *,
    path: Optional[Sequence[Sequence[float]]] = None,
    smoothed: Optional[Sequence[Sequence[float]]] = None,
    events: Optional[Sequence[TraceEvent]] = None,
    options: Optional[RenderOptions] = None,
) -> RenderResult:
    options = options or RenderOptions()
    width, height = scenario.width, scenario.height
    stroke = options.stroke_width
    counts = {"obstacle": 0, "inflated": 0, "virtual": 0, "polyline": 0, "range": 0}

    buffer = io.StringIO()
    buffer.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    buffer.write(
        f'<svg xmlns="{SVG_NS}" version="1.1" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}">\n'
    )
    buffer.write(f'<g transform="translate(0 {_num(height)}) scale(1 -1)">\n')
    buffer.write(
        f'<rect x="0" y="0" width="{_num(width)}" height="{_num(height)}" fill="white" stroke="black" '
        f'stroke-width="{_num(stroke)}"/>\n'
    )

    d_vir = scenario.params.d_vir
    for index, e in enumerate(scenario.true_obstacles()):
        hidden = index >= len(scenario.obstacles)
        fill = "#bbbbbb" if hidden else "#555555"
        buffer.write(_ellipse(e, e.a, e.b, "obstacle", f'fill="{fill}"') + "\n")
        counts["obstacle"] += 1
        big_a, big_b = e.semi_axes
        buffer.write(
            _ellipse(
                e, big_a, big_b, "inflated",
                f'fill="none" stroke="#cc3333" stroke-width="{_num(stroke)}" stroke-dasharray="4 3"',
            )
            + "\n"
        )
        counts["inflated"] += 1
        if options.show_virtual:
            buffer.write(
                _ellipse(
                    e, big_a + d_vir, big_b + d_vir, "virtual",
                    f'fill="none" stroke="#3366cc" stroke-width="{_num(stroke)}" stroke-dasharray="1 2"',
                )
                + "\n"
            )
            counts["virtual"] += 1

    if path:
        buffer.write(
            _polyline(path, "path", f'stroke="#1f77b4" stroke-width="{_num(stroke * 2)}"') + "\n"
        )
        counts["polyline"] += 1
    if smoothed:
        buffer.write(
            _polyline(smoothed, "smoothed", f'stroke="#2ca02c" stroke-width="{_num(stroke * 2)}"') + "\n"
        )
        counts["polyline"] += 1

    radius = scenario.params.sensor_range
    for event in events or ():
        if event.kind is EventKind.REPLAN:
            buffer.write(
                f'<circle class="range" cx="{_num(event.position.x)}" cy="{_num(event.position.y)}" '
                f'r="{_num(radius)}" fill="none" stroke="#ff7f0e" stroke-width="{_num(stroke)}"/>\n'
            )
            counts["range"] += 1

    for css, point in (("start", scenario.start), ("target", scenario.target)):
        buffer.write(
            f'<rect class="{css}" x="{_num(point.x - options.marker_radius)}" '
            f'y="{_num(point.y - options.marker_radius)}" width="{_num(2 * options.marker_radius)}" '
            f'height="{_num(2 * options.marker_radius)}" fill="{"green" if css == "start" else "red"}"/>\n'
        )

    buffer.write("</g>\n</svg>\n")
    return RenderResult(svg=buffer.getvalue(), counts=counts)


def write_svg(result: RenderResult, path: Union[str, Path]) -> None:
    Path(path).write_text(result.svg, encoding="utf-8")


__all__ = ["RenderOptions", "RenderResult", "render_svg", "write_svg"]
