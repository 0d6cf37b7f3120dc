"""Scripted scenario builders used by the demos and the acceptance suite."""

from __future__ import annotations

from importlib import resources
from pathlib import Path as FsPath

from .costmap import PlannerConfig
from .world import SemanticMap, SensorConfig, WorldObject, load_map

#: Trend-test table layout, all centers on the nominal start -> cafe line.
#: The first table closes the doorway the nominal route uses, forcing the
#: crossing 5.6 m higher; the rest sit on the now-abandoned segment east of
#: the divider, well clear of the detour, so their marginal cost shrinks
#: to zero and the first constraint stays the most expensive.
TREND_TABLE_SPOTS = [
    (9.7, 2.8),
    (11.4, 2.97),
    (11.9, 3.02),
    (12.4, 3.08),
    (12.9, 3.13),
    (13.4, 3.18),
]

TREND_INSTRUCTION = "go to the cafe and watch out the tables"
CONTRAST_GOAL_INSTRUCTION = "go to the restaurant"
CONTRAST_CONSTRAINED_INSTRUCTION = "go to the restaurant and you know, keep away from people."


def map_path(name: str) -> FsPath:
    return FsPath(str(resources.files("langnav.data").joinpath(f"maps/{name}.json")))


def load_demo_map(name: str) -> SemanticMap:
    return load_map(map_path(name))


def trend_scenario(n_constraints: int) -> SemanticMap:
    """sim_scene stripped of ambient objects, with n tables blocking doorways."""
    if not 0 <= n_constraints <= len(TREND_TABLE_SPOTS):
        raise ValueError(f"n_constraints must be in [0, {len(TREND_TABLE_SPOTS)}]")
    smap = load_demo_map("sim_scene")
    smap.objects = [
        WorldObject(object_id=f"trend_tbl{i}", label="table", position=spot, radius=0.3)
        for i, spot in enumerate(TREND_TABLE_SPOTS[:n_constraints])
    ]
    return smap


def trend_planner_config() -> PlannerConfig:
    """Larger disks so a door-front table closes its whole doorway."""
    return PlannerConfig(disk_radius=0.8)


def trend_sensor_config() -> SensorConfig:
    return SensorConfig()


def contrast_scenario() -> SemanticMap:
    """scene1 as shipped: static persons flanking the route to the restaurant."""
    return load_demo_map("scene1")


def occlusion_scenario() -> tuple[SemanticMap, str]:
    """scene1 plus the id of the person hidden behind the upper wall."""
    return load_demo_map("scene1"), "p3"
