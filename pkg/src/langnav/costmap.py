"""Robot-local costmap: static obstacles, constraint disks, smooth inflation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import distance_transform_edt

from .grounding import ConstraintGrounding
from .world import OBSTACLE, RobotState, SemanticMap, to_world_frame

LETHAL = 255
INSCRIBED = 254


@dataclass
class PlannerConfig:
    disk_radius: float = 0.5
    moving_margin: float = 0.2
    staleness_timeout: float = 3.0
    inflation_radius: float = 0.6
    inflation_decay: float = 3.0
    window_size: float = 6.0
    costmap_resolution: float = 0.05
    robot_radius: float = 0.18
    rrt_step: float = 0.4
    rrt_goal_bias: float = 0.1
    rrt_max_iters: int = 20000
    rrt_goal_tolerance: float = 0.3
    rrt_shortcut_attempts: int = 200
    rrt_disk_clearance: float = 0.35
    rrt_wall_clearance: float = 0.3
    lookahead: float = 1.5
    goal_tolerance: float = 0.25
    max_local_failures: int = 20
    safety_margin: float = 0.05
    reactive_lookahead: float = 1.2
    reactive_horizon: float = 1.0
    reactive_substeps: int = 5
    reactive_v_samples: int = 6
    reactive_omega_samples: int = 11
    reactive_cost_threshold: int = 200

    def __post_init__(self):
        for name in ("disk_radius", "inflation_radius", "window_size",
                     "costmap_resolution", "rrt_step", "lookahead", "goal_tolerance"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class ConstraintDisk:
    object_id: str
    center: tuple[float, float]  # world frame
    radius: float
    source_noun: str
    moving: bool
    last_seen: float


@dataclass
class Costmap:
    """Axis-aligned window of traversal costs, 255 = lethal."""

    costs: np.ndarray  # (H, W) uint8
    resolution: float
    origin: tuple[float, float]  # world position of the window's lower-left corner

    @property
    def width(self) -> int:
        return self.costs.shape[1]

    @property
    def height(self) -> int:
        return self.costs.shape[0]

    def world_to_cell(self, x: float, y: float) -> tuple[int, int]:
        return (
            int(math.floor((x - self.origin[0]) / self.resolution)),
            int(math.floor((y - self.origin[1]) / self.resolution)),
        )

    def cell_center(self, ix: int, iy: int) -> tuple[float, float]:
        return (
            self.origin[0] + (ix + 0.5) * self.resolution,
            self.origin[1] + (iy + 0.5) * self.resolution,
        )

    def in_bounds(self, ix: int, iy: int) -> bool:
        return 0 <= ix < self.width and 0 <= iy < self.height

    def is_lethal(self, ix: int, iy: int) -> bool:
        return not self.in_bounds(ix, iy) or self.costs[iy, ix] == LETHAL

    def cost_at_world(self, x: float, y: float) -> int:
        ix, iy = self.world_to_cell(x, y)
        if not self.in_bounds(ix, iy):
            return LETHAL
        return int(self.costs[iy, ix])


def build_costmap(
    robot: RobotState,
    smap: SemanticMap,
    disks: list[ConstraintDisk],
    cfg: PlannerConfig,
) -> Costmap:
    """Window the static grid around the robot, stamp disks, inflate.

    A cell is lethal iff its center lies on a static Obstacle cell (cells
    outside the mapped grid count as obstacles) or inside a constraint disk
    per (x-x0)^2 + (y-y0)^2 <= a^2. Inflation assigns
    254*exp(-decay*(d - robot_radius)) out to the inflation radius.
    """
    res = cfg.costmap_resolution
    n = int(round(cfg.window_size / res))
    grid = smap.grid
    # Snap the window to the costmap lattice anchored at the grid origin.
    ox = grid.origin[0] + math.floor((robot.x - cfg.window_size / 2 - grid.origin[0]) / res) * res
    oy = grid.origin[1] + math.floor((robot.y - cfg.window_size / 2 - grid.origin[1]) / res) * res

    xs = ox + (np.arange(n) + 0.5) * res
    ys = oy + (np.arange(n) + 0.5) * res
    X, Y = np.meshgrid(xs, ys)  # [iy, ix]

    gx = np.floor((X - grid.origin[0]) / grid.resolution).astype(int)
    gy = np.floor((Y - grid.origin[1]) / grid.resolution).astype(int)
    inside = (gx >= 0) & (gx < grid.width) & (gy >= 0) & (gy < grid.height)
    lethal = ~inside
    lethal[inside] = grid.cells[gy[inside], gx[inside]] == OBSTACLE

    for disk in disks:
        dx = X - disk.center[0]
        dy = Y - disk.center[1]
        lethal |= dx * dx + dy * dy <= disk.radius * disk.radius

    costs = np.zeros((n, n), dtype=np.uint8)
    costs[lethal] = LETHAL
    if lethal.any() and not lethal.all():
        dist = distance_transform_edt(~lethal, sampling=res)
        inflate = (~lethal) & (dist <= cfg.inflation_radius)
        vals = np.floor(
            INSCRIBED * np.exp(-cfg.inflation_decay * (dist[inflate] - cfg.robot_radius))
        )
        costs[inflate] = np.clip(vals, 0, INSCRIBED).astype(np.uint8)
    return Costmap(costs=costs, resolution=res, origin=(ox, oy))


class ConstraintStore:
    """Grounded constraint disks keyed by simulator object id."""

    def __init__(self):
        self._disks: dict[str, ConstraintDisk] = {}

    def disks(self) -> list[ConstraintDisk]:
        return list(self._disks.values())

    def __len__(self) -> int:
        return len(self._disks)

    def update(
        self,
        groundings: list[ConstraintGrounding],
        robot: RobotState,
        smap: SemanticMap,
        t: float,
        cfg: PlannerConfig,
    ) -> list[ConstraintDisk]:
        """Upsert disks for fresh groundings; age out stale moving disks.

        Grounding positions arrive robot-local and are stored in world
        coordinates. A re-seen object id moves its existing disk; moving
        objects grow by the moving margin and expire after the staleness
        timeout, while static-object disks persist indefinitely.
        """
        for g in groundings:
            world = to_world_frame(robot, g.position)
            obj = smap.object_by_id(g.object_id)
            moving = bool(obj.moving) if obj is not None else False
            radius = cfg.disk_radius + (cfg.moving_margin if moving else 0.0)
            self._disks[g.object_id] = ConstraintDisk(
                object_id=g.object_id,
                center=world,
                radius=radius,
                source_noun=g.noun,
                moving=moving,
                last_seen=t,
            )
        stale = [
            oid
            for oid, d in self._disks.items()
            if d.moving and t - d.last_seen > cfg.staleness_timeout
        ]
        for oid in stale:
            del self._disks[oid]
        return self.disks()


def update_constraints(
    store: ConstraintStore,
    groundings: list[ConstraintGrounding],
    robot: RobotState,
    smap: SemanticMap,
    t: float,
    cfg: PlannerConfig,
) -> list[ConstraintDisk]:
    return store.update(groundings, robot, smap, t, cfg)
