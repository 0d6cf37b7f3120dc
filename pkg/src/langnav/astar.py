"""Optimal 8-connected grid search over the local costmap."""

from __future__ import annotations

import heapq
import math

import numpy as np

from .costmap import LETHAL, Costmap
from .errors import NoPathError
from .geometry import Path

#: Non-lethal cell cost is folded into edge weights as (1 + cost / COST_SCALE).
COST_SCALE = 128.0

_NEIGHBORS = (
    (1, 0), (-1, 0), (0, 1), (0, -1),
    (1, 1), (1, -1), (-1, 1), (-1, -1),
)


def nearest_free_cell(costmap: Costmap, ix: int, iy: int) -> tuple[int, int]:
    """Closest non-lethal cell by center distance; row-major order breaks ties."""
    ix = min(max(ix, 0), costmap.width - 1)
    iy = min(max(iy, 0), costmap.height - 1)
    if costmap.costs[iy, ix] != LETHAL:
        return ix, iy
    free_iy, free_ix = np.nonzero(costmap.costs != LETHAL)
    if free_ix.size == 0:
        raise NoPathError("costmap has no traversable cells")
    d2 = (free_ix - ix) ** 2 + (free_iy - iy) ** 2
    order = np.lexsort((free_ix, free_iy, d2))
    best = order[0]
    return int(free_ix[best]), int(free_iy[best])


def edge_weight(costmap: Costmap, nx: int, ny: int, dx: int, dy: int) -> float:
    step = costmap.resolution * (math.sqrt(2.0) if dx and dy else 1.0)
    return step * (1.0 + costmap.costs[ny, nx] / COST_SCALE)


def plan_local_astar(
    costmap: Costmap,
    start: tuple[float, float],
    goal: tuple[float, float],
) -> Path:
    """A* with Euclidean-distance heuristic; returns the minimum-cost path.

    The goal is clamped to the nearest non-lethal cell when it falls on a
    lethal one (or outside the window). A lethal start raises NoPathError.
    """
    six, siy = costmap.world_to_cell(*start)
    if not costmap.in_bounds(six, siy) or costmap.costs[siy, six] == LETHAL:
        raise NoPathError("start cell is lethal")
    gix, giy = costmap.world_to_cell(*goal)
    gix, giy = nearest_free_cell(costmap, gix, giy)

    res = costmap.resolution

    def heuristic(ix: int, iy: int) -> float:
        return res * math.hypot(ix - gix, iy - giy)

    g = np.full((costmap.height, costmap.width), np.inf)
    g[siy, six] = 0.0
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    h0 = heuristic(six, siy)
    heap: list[tuple[float, float, int, int]] = [(h0, h0, siy, six)]
    found = False
    while heap:
        f, h, iy, ix = heapq.heappop(heap)
        if f - h > g[iy, ix] + 1e-12:
            continue
        if (ix, iy) == (gix, giy):
            found = True
            break
        for dx, dy in _NEIGHBORS:
            nx, ny = ix + dx, iy + dy
            if not costmap.in_bounds(nx, ny) or costmap.costs[ny, nx] == LETHAL:
                continue
            cand = g[iy, ix] + edge_weight(costmap, nx, ny, dx, dy)
            if cand < g[ny, nx] - 1e-15:
                g[ny, nx] = cand
                parent[(nx, ny)] = (ix, iy)
                nh = heuristic(nx, ny)
                heapq.heappush(heap, (cand + nh, nh, ny, nx))
    if not found:
        raise NoPathError("no path to the intermediate goal")

    cells = [(gix, giy)]
    while cells[-1] != (six, siy):
        cells.append(parent[cells[-1]])
    cells.reverse()
    waypoints = [costmap.cell_center(ix, iy) for ix, iy in cells]
    return Path(waypoints=waypoints, cost=float(g[giy, gix]))
