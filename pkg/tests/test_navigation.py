import math

import numpy as np
import pytest

from langnav.navigation import Navigator, TickRecord, load_trace, path_metrics, save_trace
from langnav.world import GridMap, SemanticMap, NamedLocation, StartPose


def record(tick, t, x, y, objects=()):
    return TickRecord(
        tick=tick, t=t, x=x, y=y, heading=0.0, cmd_v=0.0, cmd_omega=0.0,
        status="navigating", collided=False, objects=list(objects), disks=[],
    )


class TestPathMetrics:
    def test_stationary_log(self):
        log = [record(i, 0.1 * i, 2.0, 3.0) for i in range(5)]
        m = path_metrics(log)
        assert m.length == 0.0
        assert m.duration == pytest.approx(0.4)

    def test_unit_square_perimeter(self):
        corners = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]
        log = [record(i, float(i), float(x), float(y)) for i, (x, y) in enumerate(corners)]
        assert path_metrics(log).length == pytest.approx(4.0)

    def test_length_matches_fsum_oracle(self):
        rng = np.random.default_rng(3)
        pts = rng.uniform(0, 10, size=(40, 2))
        log = [record(i, 0.1 * i, float(x), float(y)) for i, (x, y) in enumerate(pts)]
        oracle = math.fsum(
            math.hypot(pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])
            for i in range(len(pts) - 1)
        )
        assert path_metrics(log).length == pytest.approx(oracle, abs=1e-9)

    def test_min_clearance_per_label(self):
        log = [
            record(0, 0.0, 0.0, 0.0, objects=[("p1", "person", 3.0, 4.0), ("t1", "table", 1.0, 0.0)]),
            record(1, 0.1, 1.0, 0.0, objects=[("p1", "person", 3.0, 4.0), ("t1", "table", 1.0, 0.0)]),
        ]
        m = path_metrics(log)
        assert m.min_clearance["person"] == pytest.approx(math.hypot(2.0, 4.0))
        assert m.min_clearance["table"] == pytest.approx(0.0)

    def test_empty_log_rejected(self):
        with pytest.raises(ValueError):
            path_metrics([])


def open_square_map():
    n = 50  # 10 m at 0.2 m
    cells = np.zeros((n, n), dtype=np.uint8)
    cells[0, :] = cells[-1, :] = 1
    cells[:, 0] = cells[:, -1] = 1
    grid = GridMap(resolution=0.2, origin=(0.0, 0.0), cells=cells)
    return SemanticMap(
        name="square",
        grid=grid,
        locations=[NamedLocation("hall", (8.0, 8.0))],
        objects=[],
        start=StartPose(position=(2.0, 2.0), heading=0.0),
    )


class TestNavigator:
    def test_converges_on_free_map(self, quick_model, quick_corpus, lexicon):
        nav = Navigator(open_square_map(), quick_model, quick_corpus.vocab, lexicon, seed=1)
        parse = nav.submit("go to the hall")
        assert parse.applied and parse.goal.location == "hall"
        status = nav.run(max_ticks=600)
        assert status == "arrived"
        assert math.dist((nav.robot.x, nav.robot.y), (8.0, 8.0)) <= nav.cfg.goal_tolerance + 0.05

    def test_goal_grounding_failure_leaves_session_unchanged(self, quick_model, quick_corpus, lexicon):
        nav = Navigator(open_square_map(), quick_model, quick_corpus.vocab, lexicon, seed=1)
        parse = nav.submit("go to the playground")  # not a location on this map
        assert not parse.applied
        assert parse.error is not None
        assert nav.goal is None and nav.status == "idle"

    def test_uninformative_only_instruction(self, quick_model, quick_corpus, lexicon):
        nav = Navigator(open_square_map(), quick_model, quick_corpus.vocab, lexicon, seed=1)
        parse = nav.submit("you know")
        assert not parse.applied
        assert "no goal" in parse.error
        assert nav.goal is None

    def test_no_goal_session_ticks_world_but_robot_stays(self, quick_model, quick_corpus, lexicon, sim_scene):
        nav = Navigator(sim_scene, quick_model, quick_corpus.vocab, lexicon, seed=1)
        walker = nav.map.object_by_id("walker1")
        before = tuple(walker.position)
        start = (nav.robot.x, nav.robot.y)
        for _ in range(20):
            nav.step()
        assert (nav.robot.x, nav.robot.y) == start
        assert tuple(walker.position) != before

    def test_new_goal_replaces_old_and_keeps_constraints(self, quick_model, quick_corpus, lexicon, scene1):
        nav = Navigator(scene1, quick_model, quick_corpus.vocab, lexicon, seed=1)
        nav.submit("go to the restaurant and keep away from people")
        assert nav.goal.location == "restaurant"
        nav.submit("go to the lift")
        assert nav.goal.location == "lift"
        assert "people" in nav.constraint_nouns  # preserved by default

    def test_clear_constraints_flag(self, quick_model, quick_corpus, lexicon, scene1):
        nav = Navigator(scene1, quick_model, quick_corpus.vocab, lexicon, seed=1)
        nav.clear_constraints_on_goal = True
        nav.submit("go to the restaurant and keep away from people")
        nav.submit("go to the lift")
        assert nav.constraint_nouns == []

    def test_trajectory_log_grows_per_tick(self, quick_model, quick_corpus, lexicon):
        nav = Navigator(open_square_map(), quick_model, quick_corpus.vocab, lexicon, seed=1)
        nav.submit("go to the hall")
        for _ in range(5):
            nav.step()
        assert len(nav.trajectory) == 6  # initial record plus five ticks
        assert [r.tick for r in nav.trajectory] == list(range(6))


class TestUnreachableGoal:
    def test_sealed_room_aborts_with_unreachable_status(self, quick_model, quick_corpus, lexicon):
        smap = open_square_map()
        # Seal the goal inside a closed room.
        smap.grid.cells[30:46, 30] = 1
        smap.grid.cells[30:46, 45] = 1
        smap.grid.cells[30, 30:46] = 1
        smap.grid.cells[45, 30:46] = 1
        nav = Navigator(smap, quick_model, quick_corpus.vocab, lexicon, seed=1)
        nav.cfg.rrt_max_iters = 1500  # keep the failing search quick
        parse = nav.submit("go to the hall")
        assert parse.applied
        status = nav.run(max_ticks=50)
        assert status == "unreachable"


class TestTraceFile:
    def test_round_trip(self, tmp_path, quick_model, quick_corpus, lexicon):
        nav = Navigator(open_square_map(), quick_model, quick_corpus.vocab, lexicon, seed=2)
        nav.submit("go to the hall")
        for _ in range(20):
            nav.step()
        path = tmp_path / "run.trace"
        save_trace(nav.trajectory, path)
        loaded = load_trace(path)
        assert len(loaded) == len(nav.trajectory)
        for a, b in zip(loaded, nav.trajectory):
            assert (a.tick, a.t, a.x, a.y, a.heading) == (b.tick, b.t, b.x, b.y, b.heading)
        m1 = path_metrics(loaded)
        m2 = path_metrics(nav.trajectory)
        assert m1.length == pytest.approx(m2.length)
