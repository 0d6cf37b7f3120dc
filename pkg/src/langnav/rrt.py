"""Sampling-based global planner over the semantic map's free space."""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import distance_transform_edt

from .costmap import ConstraintDisk
from .errors import InvalidEndpointError, PlanningFailureError
from .geometry import Path, path_length
from .world import FREE, GridMap, SemanticMap


def clearance_field(grid: GridMap) -> np.ndarray:
    """Meters from each cell center to the nearest non-Free cell; cached."""
    cached = getattr(grid, "_clearance_field", None)
    if cached is None:
        cached = distance_transform_edt(grid.cells == FREE, sampling=grid.resolution)
        grid._clearance_field = cached
    return cached


def _point_free(
    smap: SemanticMap,
    p,
    disks: list[ConstraintDisk],
    wall_clearance: float = 0.0,
    relax_near: tuple = (),
) -> bool:
    grid = smap.grid
    if grid.state_at(p[0], p[1]) != FREE:
        return False
    for d in disks:
        if (p[0] - d.center[0]) ** 2 + (p[1] - d.center[1]) ** 2 <= d.radius**2:
            return False
    if wall_clearance > 0.0:
        # Endpoints may legitimately sit close to walls; relax around them.
        need = wall_clearance
        for anchor in relax_near:
            need = min(need, math.dist(p, anchor))
        ix, iy = grid.world_to_cell(p[0], p[1])
        if clearance_field(grid)[iy, ix] < need:
            return False
    return True


def segment_free(
    smap: SemanticMap,
    a,
    b,
    disks: list[ConstraintDisk] = (),
    wall_clearance: float = 0.0,
    relax_near: tuple = (),
) -> bool:
    """Densified check at half-resolution spacing; Obstacle and Unknown block."""
    dist = math.dist(a, b)
    n = max(1, int(math.ceil(dist / (smap.grid.resolution / 2.0))))
    for k in range(n + 1):
        f = k / n
        p = (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))
        if not _point_free(smap, p, disks, wall_clearance, relax_near):
            return False
    return True


def shortcut_path(
    smap: SemanticMap,
    waypoints: list[tuple[float, float]],
    rng: np.random.Generator,
    attempts: int,
    disks: list[ConstraintDisk] = (),
    wall_clearance: float = 0.0,
    relax_near: tuple = (),
) -> list[tuple[float, float]]:
    """Greedy farthest-visible pass followed by random splice attempts."""

    def free(a, b):
        return segment_free(smap, a, b, disks, wall_clearance, relax_near)

    pts = list(waypoints)
    out = [pts[0]]
    i = 0
    while i < len(pts) - 1:
        j = len(pts) - 1
        while j > i + 1 and not free(pts[i], pts[j]):
            j -= 1
        out.append(pts[j])
        i = j
    pts = out
    for _ in range(attempts):
        if len(pts) <= 2:
            break
        i = int(rng.integers(0, len(pts) - 2))
        j = int(rng.integers(i + 2, len(pts)))
        if free(pts[i], pts[j]):
            pts = pts[: i + 1] + pts[j:]
    return pts


def plan_global_rrt(
    start: tuple[float, float],
    goal: tuple[float, float],
    smap: SemanticMap,
    cfg,
    seed: int,
    disks: list[ConstraintDisk] = (),
    wall_clearance: float = 0.0,
) -> Path:
    """RRT from start to within goal tolerance, shortcut-smoothed.

    Unknown cells are as non-traversable as obstacles. Optional constraint
    disks are additional forbidden regions, which lets global replanning
    route around grounded constraints; a positive wall clearance keeps the
    route out of corridors narrower than the robot can actually traverse
    (relaxed near the endpoints, which may legitimately sit close to walls).
    """
    start = (float(start[0]), float(start[1]))
    goal = (float(goal[0]), float(goal[1]))
    ends = (start, goal)
    if not _point_free(smap, start, disks):
        raise InvalidEndpointError(f"start {start} is not in free space")
    if not _point_free(smap, goal, disks):
        raise InvalidEndpointError(f"goal {goal} is not in free space")
    if math.dist(start, goal) <= 1e-12:
        return Path(waypoints=[start], length=0.0)

    rng = np.random.default_rng(seed)
    xmin, ymin, xmax, ymax = smap.grid.extent
    nodes = np.array([start])
    parents = [-1]
    goal_index = -1

    for _ in range(cfg.rrt_max_iters):
        if rng.random() < cfg.rrt_goal_bias:
            sample = goal
        else:
            sample = (rng.uniform(xmin, xmax), rng.uniform(ymin, ymax))
        d2 = np.sum((nodes - sample) ** 2, axis=1)
        ni = int(np.argmin(d2))
        nearest = tuple(nodes[ni])
        dist = math.dist(nearest, sample)
        if dist < 1e-9:
            continue
        f = min(1.0, cfg.rrt_step / dist)
        new = (nearest[0] + f * (sample[0] - nearest[0]), nearest[1] + f * (sample[1] - nearest[1]))
        if not segment_free(smap, nearest, new, disks, wall_clearance, ends):
            continue
        nodes = np.vstack([nodes, new])
        parents.append(ni)
        if math.dist(new, goal) <= cfg.rrt_goal_tolerance and segment_free(
            smap, new, goal, disks, wall_clearance, ends
        ):
            nodes = np.vstack([nodes, goal])
            parents.append(len(nodes) - 2)
            goal_index = len(nodes) - 1
            break
    if goal_index < 0:
        raise PlanningFailureError(
            f"no path from {start} to {goal} within {cfg.rrt_max_iters} iterations"
        )

    waypoints = []
    i = goal_index
    while i >= 0:
        waypoints.append(tuple(nodes[i]))
        i = parents[i]
    waypoints.reverse()
    waypoints = shortcut_path(
        smap, waypoints, rng, cfg.rrt_shortcut_attempts, disks, wall_clearance, ends
    )
    return Path(waypoints=waypoints, length=path_length(waypoints))
