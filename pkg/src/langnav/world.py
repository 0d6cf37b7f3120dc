"""2D simulated world: semantic grid map, moving objects, robot, detector."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import MapFormatError, MapValidationError

FREE, OBSTACLE, UNKNOWN = 0, 1, 2
_LEGEND = {".": FREE, "#": OBSTACLE, "?": UNKNOWN}


@dataclass
class GridMap:
    """Occupancy grid; cells indexed [iy, ix] with iy = 0 at the bottom."""

    resolution: float
    origin: tuple[float, float]
    cells: np.ndarray  # (height, width) uint8

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

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

    def cell_at(self, ix: int, iy: int) -> int:
        if not self.in_bounds(ix, iy):
            return OBSTACLE
        return int(self.cells[iy, ix])

    def state_at(self, x: float, y: float) -> int:
        return self.cell_at(*self.world_to_cell(x, y))

    def is_free_world(self, x: float, y: float) -> bool:
        return self.state_at(x, y) == FREE

    @property
    def extent(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax) in world meters."""
        return (
            self.origin[0],
            self.origin[1],
            self.origin[0] + self.width * self.resolution,
            self.origin[1] + self.height * self.resolution,
        )


@dataclass(frozen=True)
class NamedLocation:
    name: str
    position: tuple[float, float]


@dataclass
class WaypointLoop:
    waypoints: list[tuple[float, float]]
    speed: float
    arc: float = 0.0  # current arc-length position along the closed loop

    def perimeter(self) -> float:
        pts = self.waypoints + [self.waypoints[0]]
        return sum(math.dist(pts[i], pts[i + 1]) for i in range(len(pts) - 1))

    def point_at(self, s: float) -> tuple[float, float]:
        pts = self.waypoints + [self.waypoints[0]]
        s = s % self.perimeter()
        for i in range(len(pts) - 1):
            seg = math.dist(pts[i], pts[i + 1])
            if s <= seg or i == len(pts) - 2:
                if seg == 0.0:
                    return pts[i]
                f = s / seg
                return (
                    pts[i][0] + f * (pts[i + 1][0] - pts[i][0]),
                    pts[i][1] + f * (pts[i + 1][1] - pts[i][1]),
                )
            s -= seg
        return pts[0]


@dataclass
class WorldObject:
    object_id: str
    label: str
    position: tuple[float, float]
    radius: float
    motion: WaypointLoop | None = None

    @property
    def moving(self) -> bool:
        return self.motion is not None and self.motion.speed > 0

    def step(self, dt: float) -> None:
        if self.motion is None:
            return
        self.motion.arc += self.motion.speed * dt
        self.position = self.motion.point_at(self.motion.arc)


@dataclass
class StartPose:
    position: tuple[float, float]
    heading: float = 0.0


@dataclass
class SemanticMap:
    name: str
    grid: GridMap
    locations: list[NamedLocation]
    objects: list[WorldObject]
    start: StartPose

    def location(self, name: str) -> NamedLocation | None:
        for loc in self.locations:
            if loc.name == name:
                return loc
        return None

    def object_by_id(self, object_id: str) -> WorldObject | None:
        for obj in self.objects:
            if obj.object_id == object_id:
                return obj
        return None

    def fork(self) -> "SemanticMap":
        """Independent copy whose objects can move without touching the original."""
        return copy.deepcopy(self)


@dataclass
class RobotState:
    x: float
    y: float
    heading: float
    v: float = 0.0
    omega: float = 0.0
    radius: float = 0.18

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Detection:
    object_id: str
    label: str
    position: tuple[float, float]  # robot-local meters


@dataclass(frozen=True)
class DetectionFrame:
    timestamp: float
    detections: tuple[Detection, ...] = ()


@dataclass
class SensorConfig:
    max_range: float = 5.0
    fov: float = math.radians(120.0)
    noise_std: float = 0.0


@dataclass
class RobotLimits:
    v_max: float = 0.7
    omega_max: float = 1.5
    radius: float = 0.18


@dataclass
class ControlCommand:
    v: float
    omega: float


def wrap_angle(a: float) -> float:
    return math.atan2(math.sin(a), math.cos(a))


def ray_blocked(grid: GridMap, p0: tuple[float, float], p1: tuple[float, float]) -> bool:
    """True when the segment p0 -> p1 crosses an Obstacle cell."""
    dist = math.dist(p0, p1)
    n = max(1, int(math.ceil(dist / (grid.resolution / 3.0))))
    for k in range(n + 1):
        f = k / n
        x = p0[0] + f * (p1[0] - p0[0])
        y = p0[1] + f * (p1[1] - p0[1])
        if grid.state_at(x, y) == OBSTACLE:
            return True
    return False


def visible(robot: RobotState, obj: WorldObject, smap: SemanticMap, sensor: SensorConfig) -> bool:
    """Range, field-of-view, and line-of-sight test against the object center."""
    dx = obj.position[0] - robot.x
    dy = obj.position[1] - robot.y
    dist = math.hypot(dx, dy)
    if dist > sensor.max_range:
        return False
    if dist > 1e-12:
        bearing = wrap_angle(math.atan2(dy, dx) - robot.heading)
        if abs(bearing) > sensor.fov / 2.0:
            return False
    return not ray_blocked(smap.grid, (robot.x, robot.y), tuple(obj.position))


def to_robot_frame(robot: RobotState, point: tuple[float, float]) -> tuple[float, float]:
    dx = point[0] - robot.x
    dy = point[1] - robot.y
    c, s = math.cos(-robot.heading), math.sin(-robot.heading)
    return (c * dx - s * dy, s * dx + c * dy)


def to_world_frame(robot: RobotState, point: tuple[float, float]) -> tuple[float, float]:
    c, s = math.cos(robot.heading), math.sin(robot.heading)
    return (robot.x + c * point[0] - s * point[1], robot.y + s * point[0] + c * point[1])


def sense_objects(
    robot: RobotState,
    smap: SemanticMap,
    t: float,
    sensor: SensorConfig,
    rng: np.random.Generator | None = None,
) -> DetectionFrame:
    """All visible objects in declaration order, positions in the robot frame."""
    detections = []
    for obj in smap.objects:
        if visible(robot, obj, smap, sensor):
            local = to_robot_frame(robot, tuple(obj.position))
            if sensor.noise_std > 0 and rng is not None:
                local = tuple(np.asarray(local) + rng.normal(0.0, sensor.noise_std, 2))
            detections.append(Detection(obj.object_id, obj.label, local))
    return DetectionFrame(timestamp=t, detections=tuple(detections))


def step_world(smap: SemanticMap, dt: float) -> None:
    """Advance waypoint-loop objects; static objects are untouched."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    for obj in smap.objects:
        obj.step(dt)


def robot_collides(
    state: RobotState, smap: SemanticMap, radius: float
) -> bool:
    """Disk-vs-grid and disk-vs-object overlap test."""
    grid = smap.grid
    r_cells = int(math.ceil(radius / grid.resolution))
    cx, cy = grid.world_to_cell(state.x, state.y)
    for iy in range(cy - r_cells, cy + r_cells + 1):
        for ix in range(cx - r_cells, cx + r_cells + 1):
            if grid.cell_at(ix, iy) == OBSTACLE:
                px, py = grid.cell_center(ix, iy)
                half = grid.resolution / 2.0
                nx = min(max(state.x, px - half), px + half)
                ny = min(max(state.y, py - half), py + half)
                if math.hypot(state.x - nx, state.y - ny) <= radius:
                    return True
    for obj in smap.objects:
        if math.dist(state.position, tuple(obj.position)) <= radius + obj.radius:
            return True
    return False


def apply_control(
    state: RobotState,
    cmd: ControlCommand,
    dt: float,
    smap: SemanticMap | None = None,
    limits: RobotLimits | None = None,
) -> tuple[RobotState, bool]:
    """Unicycle step: rotate, then translate along the new heading.

    Velocities are clamped to the limits. Collision is reported, not raised.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    lim = limits or RobotLimits()
    v = min(max(cmd.v, 0.0), lim.v_max)
    omega = min(max(cmd.omega, -lim.omega_max), lim.omega_max)
    heading = wrap_angle(state.heading + omega * dt)
    new = replace(
        state,
        x=state.x + v * dt * math.cos(heading),
        y=state.y + v * dt * math.sin(heading),
        heading=heading,
        v=v,
        omega=omega,
    )
    collided = False
    if smap is not None:
        # Sweep the translation so a large step cannot tunnel through a wall.
        steps = max(1, int(math.ceil(v * dt / max(state.radius / 2.0, 1e-6))))
        for k in range(1, steps + 1):
            f = k / steps
            probe = replace(new, x=state.x + f * (new.x - state.x), y=state.y + f * (new.y - state.y))
            if robot_collides(probe, smap, state.radius):
                collided = True
                break
    return new, collided


def _parse_grid(doc: dict, problems: list[str]) -> np.ndarray | None:
    raw = doc.get("grid")
    rows: list[list[int]] = []
    if isinstance(raw, list) and raw and isinstance(raw[0], str):
        for r, line in enumerate(raw):
            row = []
            for ch in line:
                if ch not in _LEGEND:
                    problems.append(f"grid row {r}: unknown cell symbol {ch!r}")
                    return None
                row.append(_LEGEND[ch])
            rows.append(row)
    elif isinstance(raw, list) and raw and isinstance(raw[0], list):
        for r, rle in enumerate(raw):
            row = []
            for count, sym in rle:
                if sym not in _LEGEND:
                    problems.append(f"grid row {r}: unknown cell symbol {sym!r}")
                    return None
                row.extend([_LEGEND[sym]] * int(count))
            rows.append(row)
    else:
        problems.append("grid must be a list of strings or run-length rows")
        return None
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        problems.append(f"grid rows have unequal widths {sorted(widths)}")
        return None
    # File rows read top-down; flip so iy = 0 is the bottom row.
    return np.array(rows[::-1], dtype=np.uint8)


def map_from_dict(doc: dict) -> SemanticMap:
    problems: list[str] = []
    resolution = float(doc.get("resolution", 0.0))
    if resolution <= 0:
        problems.append("resolution must be positive")
    origin = tuple(doc.get("origin", (0.0, 0.0)))
    cells = _parse_grid(doc, problems)
    if cells is None:
        raise MapValidationError(problems)
    grid = GridMap(resolution=resolution, origin=origin, cells=cells)

    locations = []
    names = set()
    for loc in doc.get("locations", []):
        name = loc["name"]
        pos = tuple(float(v) for v in loc["position"])
        if name in names:
            problems.append(f"duplicate location name {name!r}")
        names.add(name)
        if grid.state_at(*pos) != FREE:
            problems.append(f"location {name!r} at {pos} is not on a Free cell")
        locations.append(NamedLocation(name=name, position=pos))

    objects = []
    ids = set()
    for rec in doc.get("objects", []):
        oid = str(rec["id"])
        if oid in ids:
            problems.append(f"duplicate object id {oid!r}")
        ids.add(oid)
        radius = float(rec.get("radius", 0.2))
        if radius <= 0:
            problems.append(f"object {oid!r}: radius must be positive")
        motion_rec = rec.get("motion", {"type": "static"})
        motion = None
        position = tuple(float(v) for v in rec["position"])
        if motion_rec.get("type") == "waypoint_loop":
            speed = float(motion_rec.get("speed", 0.0))
            if speed < 0:
                problems.append(f"object {oid!r}: speed must be >= 0")
            waypoints = [tuple(float(v) for v in w) for w in motion_rec["waypoints"]]
            for w in waypoints:
                if grid.state_at(*w) != FREE:
                    problems.append(f"object {oid!r}: waypoint {w} is not on a Free cell")
            motion = WaypointLoop(waypoints=waypoints, speed=speed)
            position = waypoints[0]
        elif motion_rec.get("type") not in (None, "static"):
            problems.append(f"object {oid!r}: unknown motion type {motion_rec.get('type')!r}")
        objects.append(
            WorldObject(object_id=oid, label=rec["label"], position=position, radius=radius, motion=motion)
        )

    start_rec = doc.get("start", {})
    start = StartPose(
        position=tuple(float(v) for v in start_rec.get("position", (0.0, 0.0))),
        heading=float(start_rec.get("heading", 0.0)),
    )
    if grid.state_at(*start.position) != FREE:
        problems.append(f"start pose {start.position} is not on a Free cell")

    if problems:
        raise MapValidationError(problems)
    return SemanticMap(
        name=doc.get("name", "map"), grid=grid, locations=locations, objects=objects, start=start
    )


def load_map(path) -> SemanticMap:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise MapFormatError(f"not a map file: {e}") from e
    return map_from_dict(doc)
