"""Occupancy-grid A* reference planner."""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from geometry import Ellipse, Point2, ellipse_values
from stig import FailureReason, PlannedPath, PlanStatus
from world import Scenario

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]

SQRT2 = math.sqrt(2.0)
_STEPS = (
    (1, 0), (-1, 0), (0, 1), (0, -1),
    (1, 1), (1, -1), (-1, 1), (-1, -1),
)


@dataclass(frozen=True)
class GridSpec:
    """Lattice of cell centres at ``(i * resolution, j * resolution)``, 8-connected."""

    resolution: float = 1.0
    connectivity: int = 8

    def __post_init__(self) -> None:
        if not (math.isfinite(self.resolution) and self.resolution > 0.0):
            raise ValueError(f"grid resolution must be > 0, got {self.resolution}")
        if self.connectivity != 8:
            raise ValueError("only 8-connected grids are supported")

    def shape(self, width: float, height: float) -> Tuple[int, int]:
        return int(round(width / self.resolution)) + 1, int(round(height / self.resolution)) + 1

    def cell_of(self, p: Sequence[float]) -> Cell:
        return int(round(p[0] / self.resolution)), int(round(p[1] / self.resolution))

    def center(self, cell: Cell) -> Point2:
        return Point2(cell[0] * self.resolution, cell[1] * self.resolution)


def rasterize_obstacles(
    obstacles: Sequence[Ellipse], width: float, height: float, g: GridSpec
) -> np.ndarray:
    """Boolean ``(nx, ny)`` grid; a cell is blocked iff its centre is strictly inside an obstacle."""
    nx, ny = g.shape(width, height)
    blocked = np.zeros((nx, ny), dtype=bool)
    for e in obstacles:
        reach = max(e.semi_axes)
        i0 = max(0, int(math.floor((e.cx - reach) / g.resolution)))
        i1 = min(nx - 1, int(math.ceil((e.cx + reach) / g.resolution)))
        j0 = max(0, int(math.floor((e.cy - reach) / g.resolution)))
        j1 = min(ny - 1, int(math.ceil((e.cy + reach) / g.resolution)))
        if i0 > i1 or j0 > j1:
            continue
        xs = np.arange(i0, i1 + 1) * g.resolution
        ys = np.arange(j0, j1 + 1) * g.resolution
        grid = np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1)
        blocked[i0 : i1 + 1, j0 : j1 + 1] |= ellipse_values(grid, e) < 1.0
    return blocked


def rasterize(s: Scenario, g: GridSpec, *, include_hidden: bool = False) -> np.ndarray:
    obstacles = s.true_obstacles() if include_hidden else s.obstacles
    return rasterize_obstacles(obstacles, s.width, s.height, g)


def octile(a: Cell, b: Cell) -> float:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)


def _compress(cells: List[Cell]) -> List[Cell]:
    """Drop cells in the middle of straight runs."""
    if len(cells) <= 2:
        return cells
    kept = [cells[0]]
    for prev, cur, nxt in zip(cells, cells[1:], cells[2:]):
        if (cur[0] - prev[0], cur[1] - prev[1]) != (nxt[0] - cur[0], nxt[1] - cur[1]):
            kept.append(cur)
    kept.append(cells[-1])
    return kept


def astar_cells(blocked: np.ndarray, start: Cell, goal: Cell) -> Tuple[Optional[List[Cell]], int]:
    """
    A* over the occupancy grid in unit-cell costs.

    Returns the cell sequence (None when unreachable) and the number of expanded cells.
    """
    nx, ny = blocked.shape
    g_cost: Dict[Cell, float] = {start: 0.0}
    parent: Dict[Cell, Cell] = {}
    closed = np.zeros_like(blocked)
    order = 0
    frontier = [(octile(start, goal), order, start)]
    expanded = 0
    while frontier:
        _, _, cell = heapq.heappop(frontier)
        if closed[cell]:
            continue
        closed[cell] = True
        expanded += 1
        if cell == goal:
            path = [cell]
            while path[-1] in parent:
                path.append(parent[path[-1]])
            path.reverse()
            return path, expanded
        ci, cj = cell
        for di, dj in _STEPS:
            ni, nj = ci + di, cj + dj
            if not (0 <= ni < nx and 0 <= nj < ny) or blocked[ni, nj] or closed[ni, nj]:
                continue
            if di and dj and (blocked[ci + di, cj] or blocked[ci, cj + dj]):
                continue
            cost = g_cost[cell] + (SQRT2 if di and dj else 1.0)
            neighbour = (ni, nj)
            if cost < g_cost.get(neighbour, math.inf):
                g_cost[neighbour] = cost
                parent[neighbour] = cell
                order += 1
                heapq.heappush(frontier, (cost + octile(neighbour, goal), order, neighbour))
    return None, expanded


def grid_astar(s: Scenario, g: Optional[GridSpec] = None, *, include_hidden: bool = False) -> PlannedPath:
    """Shortest 8-connected lattice path from S to T, without corner cutting."""
    g = g or GridSpec()
    blocked = rasterize(s, g, include_hidden=include_hidden)
    nx, ny = blocked.shape
    start, goal = g.cell_of(s.start), g.cell_of(s.target)
    for label, cell in (("start", start), ("target", goal)):
        if not (0 <= cell[0] < nx and 0 <= cell[1] < ny) or blocked[cell]:
            logger.info("grid A*: %s cell %s is blocked", label, cell)
            return PlannedPath.failure(
                FailureReason.START_OR_TARGET_BLOCKED, 0, f"{label} cell {cell} is blocked"
            )
    cells, expanded = astar_cells(blocked, start, goal)
    if cells is None:
        logger.info("grid A*: no path after %d expansions", expanded)
        return PlannedPath.failure(FailureReason.NO_PATH, expanded, "open list exhausted")
    waypoints = tuple(g.center(c) for c in _compress(cells))
    logger.info("grid A*: %d cells, %d expansions", len(cells), expanded)
    return PlannedPath(waypoints, expanded, PlanStatus.SUCCESS)


__all__ = [
    "GridSpec",
    "astar_cells",
    "grid_astar",
    "octile",
    "rasterize",
    "rasterize_obstacles",
]
