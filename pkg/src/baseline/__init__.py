"""Grid A* comparison planner."""

from .grid import GridSpec, astar_cells, grid_astar, octile, rasterize, rasterize_obstacles

__all__ = ["GridSpec", "astar_cells", "grid_astar", "octile", "rasterize", "rasterize_obstacles"]
