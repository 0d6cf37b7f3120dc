"""Per-tick navigation orchestration: sense, ground, plan, act, log."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .astar import plan_local_astar
from .control import ObstacleDisk, reactive_avoid, select_intermediate_goal
from .costmap import ConstraintStore, Costmap, PlannerConfig, build_costmap
from .errors import GroundingError, NoNounError, PlanningError
from .geometry import Path
from .grounding import (
    CONSTRAINT_THRESHOLD,
    GOAL_THRESHOLD,
    GoalGrounding,
    extract_nouns,
    ground_constraints,
    ground_goal,
)
from .lexicon import Lexicon
from .model import ClassifierModel
from .network import classify
from .rrt import plan_global_rrt
from .text import Vocabulary, normalize, split_phrases, tokenize
from .world import (
    ControlCommand,
    RobotLimits,
    RobotState,
    SemanticMap,
    SensorConfig,
    apply_control,
    sense_objects,
    step_world,
)

STATUS_IDLE = "idle"
STATUS_NAVIGATING = "navigating"
STATUS_ARRIVED = "arrived"
STATUS_UNREACHABLE = "unreachable"


@dataclass
class PhraseParse:
    surface: str
    label: str
    probs: list[float]
    attention: list[float] | None
    nouns: list[str]
    error: str | None = None


@dataclass
class InstructionParse:
    text: str
    timestamp: float
    phrases: list[PhraseParse]
    goal_noun: str | None = None
    constraint_nouns: list[str] = field(default_factory=list)
    goal: GoalGrounding | None = None
    error: str | None = None
    applied: bool = False


@dataclass
class TickRecord:
    tick: int
    t: float
    x: float
    y: float
    heading: float
    cmd_v: float
    cmd_omega: float
    status: str
    collided: bool
    objects: list[tuple[str, str, float, float]]  # (id, label, x, y) world truth
    disks: list[tuple[str, float, float, float]]  # (id, x0, y0, radius)
    global_length: float | None = None
    local_length: float | None = None


@dataclass
class NavMetrics:
    length: float
    duration: float
    min_clearance: dict[str, float]


def path_metrics(trajectory: list[TickRecord]) -> NavMetrics:
    """Polyline length, elapsed sim time, per-label minimum object distance."""
    if not trajectory:
        raise ValueError("empty trajectory log")
    length = 0.0
    for a, b in zip(trajectory, trajectory[1:]):
        length += math.dist((a.x, a.y), (b.x, b.y))
    clearance: dict[str, float] = {}
    for rec in trajectory:
        for _, label, ox, oy in rec.objects:
            d = math.dist((rec.x, rec.y), (ox, oy))
            if label not in clearance or d < clearance[label]:
                clearance[label] = d
    return NavMetrics(
        length=length,
        duration=trajectory[-1].t - trajectory[0].t,
        min_clearance=clearance,
    )


class Navigator:
    """Owns one simulated session's world, grounding state, and planners."""

    def __init__(
        self,
        smap: SemanticMap,
        model: ClassifierModel,
        vocab: Vocabulary,
        lexicon: Lexicon,
        cfg: PlannerConfig | None = None,
        sensor: SensorConfig | None = None,
        limits: RobotLimits | None = None,
        seed: int = 0,
        goal_threshold: float = GOAL_THRESHOLD,
        constraint_threshold: float = CONSTRAINT_THRESHOLD,
    ):
        self.map = smap.fork()
        self.model = model
        self.vocab = vocab
        self.lexicon = lexicon
        self.cfg = cfg or PlannerConfig()
        self.sensor = sensor or SensorConfig()
        self.limits = limits or RobotLimits()
        self.seed = seed
        self.goal_threshold = goal_threshold
        self.constraint_threshold = constraint_threshold
        #: When set, a newly grounded goal drops previously registered
        #: constraint nouns and disks instead of preserving them.
        self.clear_constraints_on_goal = False

        self.robot = RobotState(
            x=self.map.start.position[0],
            y=self.map.start.position[1],
            heading=self.map.start.heading,
            radius=self.limits.radius,
        )
        self.t = 0.0
        self.tick = 0
        self.status = STATUS_IDLE
        self.goal: GoalGrounding | None = None
        self.constraint_nouns: list[str] = []
        self.store = ConstraintStore()
        self.global_path: Path | None = None
        self.local_path: Path | None = None
        self.costmap: Costmap | None = None
        self.last_parse: InstructionParse | None = None
        self.local_failures = 0
        self._plan_count = 0
        self._stall_ticks = 0
        self.trajectory: list[TickRecord] = []
        self._log(ControlCommand(0.0, 0.0), collided=False)

    # ------------------------------------------------------------ instructions

    def analyze(self, text: str) -> InstructionParse:
        """Classify and ground an instruction without touching session state."""
        parse = InstructionParse(text=text, timestamp=self.t, phrases=[])
        surfaces = split_phrases(normalize(text))
        for surface in surfaces:
            phrase = tokenize(surface, self.vocab)
            result = classify(phrase, self.model)
            pp = PhraseParse(
                surface=surface,
                label=result.label,
                probs=[float(p) for p in result.probs],
                attention=None if result.attention is None else [float(a) for a in result.attention],
                nouns=[],
            )
            if result.label in ("goal", "constraint"):
                try:
                    pp.nouns = extract_nouns(phrase, self.lexicon)
                except NoNounError as e:
                    pp.error = str(e)
            parse.phrases.append(pp)
            if pp.nouns:
                if result.label == "goal":
                    parse.goal_noun = pp.nouns[0]  # latest goal phrase wins
                elif pp.nouns[0] not in parse.constraint_nouns:
                    parse.constraint_nouns.append(pp.nouns[0])

        if parse.goal_noun is not None:
            try:
                parse.goal = ground_goal(
                    parse.goal_noun, self.map, self.lexicon, self.goal_threshold
                )
            except GroundingError as e:
                parse.error = str(e)
        elif not parse.constraint_nouns:
            parse.error = "instruction contains no goal phrase"
        return parse

    def submit(self, text: str) -> InstructionParse:
        """Apply an instruction; on goal-grounding failure nothing changes."""
        parse = self.analyze(text)
        self.last_parse = parse
        if parse.goal_noun is not None and parse.goal is None:
            return parse  # grounding failed; session untouched
        if parse.goal_noun is None and not parse.constraint_nouns:
            return parse
        if parse.goal is not None and self.clear_constraints_on_goal:
            self.constraint_nouns = []
            self.store = ConstraintStore()
        for noun in parse.constraint_nouns:
            if noun not in self.constraint_nouns:
                self.constraint_nouns.append(noun)
        if parse.goal is not None:
            self.goal = parse.goal
            self.global_path = None  # force a global replan
            self.local_failures = 0
            self.status = STATUS_NAVIGATING
        parse.applied = True
        return parse

    # ------------------------------------------------------------------- ticks

    def _log(self, cmd: ControlCommand, collided: bool) -> None:
        self.trajectory.append(
            TickRecord(
                tick=self.tick,
                t=self.t,
                x=self.robot.x,
                y=self.robot.y,
                heading=self.robot.heading,
                cmd_v=cmd.v,
                cmd_omega=cmd.omega,
                status=self.status,
                collided=collided,
                objects=[
                    (o.object_id, o.label, float(o.position[0]), float(o.position[1]))
                    for o in self.map.objects
                ],
                disks=[
                    (d.object_id, d.center[0], d.center[1], d.radius)
                    for d in self.store.disks()
                ],
                global_length=None if self.global_path is None else self.global_path.length,
                local_length=None if self.local_path is None else self.local_path.length,
            )
        )

    def _global_path_blocked(self) -> bool:
        assert self.global_path is not None and self.costmap is not None
        points = self.global_path.waypoints
        step = self.costmap.resolution
        for a, b in zip(points, points[1:]):
            n = max(1, int(math.ceil(math.dist(a, b) / step)))
            for k in range(n + 1):
                f = k / n
                x = a[0] + f * (b[0] - a[0])
                y = a[1] + f * (b[1] - a[1])
                ix, iy = self.costmap.world_to_cell(x, y)
                if self.costmap.in_bounds(ix, iy) and self.costmap.is_lethal(ix, iy):
                    return True
        return False

    def _planning_disks(self):
        """Disks inflated for global planning so routes respect the reactive band.

        The inflation shrinks near the robot or the goal so an endpoint that
        sits close to a disk never invalidates planning outright.
        """
        import dataclasses
        out = []
        for d in self.store.disks():
            grow = self.cfg.rrt_disk_clearance
            for anchor in ((self.robot.x, self.robot.y), self.goal.position if self.goal else None):
                if anchor is not None:
                    room = math.dist(anchor, d.center) - d.radius - 1e-6
                    grow = max(0.0, min(grow, room))
            out.append(dataclasses.replace(d, radius=d.radius + grow))
        return out

    def _plan_global(self) -> bool:
        try:
            self.global_path = plan_global_rrt(
                (self.robot.x, self.robot.y),
                self.goal.position,
                self.map,
                self.cfg,
                seed=self.seed + self._plan_count,
                disks=self._planning_disks(),
                wall_clearance=self.cfg.rrt_wall_clearance,
            )
            self._plan_count += 1
            return True
        except PlanningError:
            self._plan_count += 1
            self.global_path = None
            self.status = STATUS_UNREACHABLE
            return False

    def step(self, dt: float = 0.1) -> ControlCommand:
        """One simulation tick; returns the command that was executed."""
        self.tick += 1
        self.t += dt
        step_world(self.map, dt)
        frame = sense_objects(self.robot, self.map, self.t, self.sensor)
        groundings = ground_constraints(
            self.constraint_nouns, frame, self.lexicon, self.constraint_threshold
        )
        disks = self.store.update(groundings, self.robot, self.map, self.t, self.cfg)
        self.costmap = build_costmap(self.robot, self.map, disks, self.cfg)

        cmd = ControlCommand(0.0, 0.0)
        collided = False
        if self.goal is not None and self.status in (STATUS_NAVIGATING,):
            if math.dist((self.robot.x, self.robot.y), self.goal.position) <= self.cfg.goal_tolerance:
                self.status = STATUS_ARRIVED
            else:
                if self.global_path is None:
                    self._plan_global()
                elif self._global_path_blocked():
                    self._plan_global()
                if self.global_path is not None:
                    intermediate = select_intermediate_goal(
                        self.global_path, (self.robot.x, self.robot.y), self.cfg.lookahead
                    )
                    try:
                        self.local_path = plan_local_astar(
                            self.costmap, (self.robot.x, self.robot.y), intermediate
                        )
                        self.local_failures = 0
                    except PlanningError:
                        self.local_path = None
                        self.local_failures += 1
                        if self.local_failures % 2 == 0:
                            self.global_path = None  # replan globally next tick
                        if self.local_failures >= self.cfg.max_local_failures:
                            self.status = STATUS_UNREACHABLE
                    if self.local_path is not None:
                        obstacles = []
                        for det in frame.detections:
                            obj = self.map.object_by_id(det.object_id)
                            if obj is not None:
                                obstacles.append(
                                    ObstacleDisk(center=tuple(obj.position), radius=obj.radius)
                                )
                        cmd = reactive_avoid(
                            self.local_path, self.robot, obstacles,
                            self.cfg, self.limits, self.costmap,
                        )
                if cmd.v == 0.0 and cmd.omega == 0.0:
                    self._stall_ticks += 1
                    if self._stall_ticks >= 10:
                        # Frozen by the safety layer: force a fresh global route.
                        self._stall_ticks = 0
                        self.global_path = None
                        self.local_failures += 1
                        if self.local_failures >= self.cfg.max_local_failures:
                            self.status = STATUS_UNREACHABLE
                else:
                    self._stall_ticks = 0
                self.robot, collided = apply_control(self.robot, cmd, dt, self.map, self.limits)
                if math.dist((self.robot.x, self.robot.y), self.goal.position) <= self.cfg.goal_tolerance:
                    self.status = STATUS_ARRIVED
        self._log(cmd, collided)
        return cmd

    def run(self, max_ticks: int, dt: float = 0.1) -> str:
        """Tick until arrival, abort, or the tick budget runs out."""
        for _ in range(max_ticks):
            self.step(dt)
            if self.status in (STATUS_ARRIVED, STATUS_UNREACHABLE):
                break
        return self.status

    def metrics(self) -> NavMetrics:
        return path_metrics(self.trajectory)


def save_trace(trajectory: list[TickRecord], path) -> None:
    """Line-delimited tick records for `langnav metrics`."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in trajectory:
            fh.write(json.dumps({
                "tick": rec.tick, "t": rec.t,
                "pose": [rec.x, rec.y, rec.heading],
                "cmd": [rec.cmd_v, rec.cmd_omega],
                "status": rec.status,
                "collided": rec.collided,
                "objects": [list(o) for o in rec.objects],
                "disks": [list(d) for d in rec.disks],
                "global_length": rec.global_length,
                "local_length": rec.local_length,
            }, sort_keys=True) + "\n")


def load_trace(path) -> list[TickRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            out.append(TickRecord(
                tick=rec["tick"], t=rec["t"],
                x=rec["pose"][0], y=rec["pose"][1], heading=rec["pose"][2],
                cmd_v=rec["cmd"][0], cmd_omega=rec["cmd"][1],
                status=rec["status"], collided=rec["collided"],
                objects=[tuple(o) for o in rec["objects"]],
                disks=[tuple(d) for d in rec["disks"]],
                global_length=rec.get("global_length"),
                local_length=rec.get("local_length"),
            ))
    return out
