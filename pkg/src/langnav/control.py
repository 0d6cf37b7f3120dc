"""Intermediate-goal selection and the sampling-based reactive velocity layer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costmap import LETHAL, Costmap
from .geometry import Path, point_at_arc, project_to_polyline
from .world import ControlCommand, RobotLimits, RobotState, wrap_angle


@dataclass(frozen=True)
class ObstacleDisk:
    center: tuple[float, float]
    radius: float


def select_intermediate_goal(
    global_path: Path, robot_pos: tuple[float, float], lookahead: float
) -> tuple[float, float]:
    """First path point at arc length >= lookahead past the robot's projection."""
    points = global_path.waypoints
    if len(points) == 1:
        return tuple(points[0])
    arc, _ = project_to_polyline(points, robot_pos)
    return point_at_arc(points, arc + lookahead)


def rollout(
    robot: RobotState, v: float, omega: float, horizon: float, substeps: int
) -> list[tuple[float, float, float]]:
    """Forward-simulated (x, y, heading) samples for a candidate command."""
    dt = horizon / substeps
    x, y, heading = robot.x, robot.y, robot.heading
    out = []
    for _ in range(substeps):
        heading = wrap_angle(heading + omega * dt)
        x += v * dt * math.cos(heading)
        y += v * dt * math.sin(heading)
        out.append((x, y, heading))
    return out


def rollout_safe(
    points: list[tuple[float, float, float]],
    obstacles: list[ObstacleDisk],
    costmap: Costmap | None,
    robot_radius: float,
    margin: float,
    cost_threshold: int = LETHAL,
) -> bool:
    for x, y, _ in points:
        if costmap is not None and costmap.cost_at_world(x, y) >= cost_threshold:
            return False
        for ob in obstacles:
            if math.dist((x, y), ob.center) < ob.radius + robot_radius + margin:
                return False
    return True


def reactive_avoid(
    local_path: Path,
    robot: RobotState,
    obstacles: list[ObstacleDisk],
    cfg,
    limits: RobotLimits | None = None,
    costmap: Costmap | None = None,
) -> ControlCommand:
    """Pick the (v, omega) sample whose safe rollout best approaches the path.

    Commands whose rollout enters an obstacle disk (inflated by the robot
    radius plus the safety margin) or a lethal cell are rejected; if no
    sample is safe the robot stops.
    """
    lim = limits or RobotLimits()
    points = local_path.waypoints
    arc, _ = project_to_polyline(points, (robot.x, robot.y))
    target = point_at_arc(points, arc + cfg.reactive_lookahead)

    best_cmd = None
    best_score = math.inf
    for v in np.linspace(0.0, lim.v_max, cfg.reactive_v_samples):
        for omega in np.linspace(-lim.omega_max, lim.omega_max, cfg.reactive_omega_samples):
            path_pts = rollout(robot, float(v), float(omega), cfg.reactive_horizon, cfg.reactive_substeps)
            threshold = getattr(cfg, "reactive_cost_threshold", LETHAL)
            if not rollout_safe(path_pts, obstacles, costmap, robot.radius,
                                cfg.safety_margin, threshold):
                continue
            ex, ey, eheading = path_pts[-1]
            dist_err = math.dist((ex, ey), target)
            heading_err = abs(wrap_angle(math.atan2(target[1] - ey, target[0] - ex) - eheading))
            if dist_err < 1e-6:
                heading_err = 0.0
            score = dist_err + 0.5 * heading_err
            if score < best_score - 1e-12:
                best_score = score
                best_cmd = ControlCommand(v=float(v), omega=float(omega))
    return best_cmd if best_cmd is not None else ControlCommand(v=0.0, omega=0.0)
