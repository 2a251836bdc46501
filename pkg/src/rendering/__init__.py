"""SVG output for scenarios, planned paths and execution traces."""

from .svg import RenderOptions, RenderResult, render_svg, write_svg

__all__ = ["RenderOptions", "RenderResult", "render_svg", "write_svg"]
