"""Acceptance suite: one test per release criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion. The classifier criteria train all three architectures on the
pinned 500-instruction corpus (seed 7) with the pinned training
configuration (seed 12, 25 epochs, batch 64), which keeps the whole
module within a few minutes of CPU time.
"""

import heapq
import json
import math
import shutil
import time

import numpy as np
import pytest

from langnav.astar import COST_SCALE, plan_local_astar
from langnav.corpus import generate_corpus
from langnav.costmap import LETHAL, ConstraintDisk, PlannerConfig, build_costmap
from langnav.gradients import gradients
from langnav.grounding import fold_plural
from langnav.lexicon import load_lexicon
from langnav.model import ARCHITECTURES, init_model, save_model
from langnav.navigation import Navigator
from langnav.network import forward_batch, loss
from langnav.scenarios import (
    CONTRAST_CONSTRAINED_INSTRUCTION,
    CONTRAST_GOAL_INSTRUCTION,
    TREND_INSTRUCTION,
    contrast_scenario,
    load_demo_map,
    map_path,
    occlusion_scenario,
    trend_scenario,
    trend_planner_config,
    trend_sensor_config,
)
from langnav.service import AssetStore, SessionManager, replay_events
from langnav.text import LABELS, LabeledPhrase, Phrase
from langnav.training import TrainConfig, evaluate_accuracy, train
from langnav.world import GridMap, RobotState, SemanticMap, StartPose, visible

CORPUS_SEED = 7
N_INSTRUCTIONS = 500
TRAIN_CONFIG = dict(epochs=25, seed=12, batch_size=64)


def report(name: str, ok: bool, detail: str = ""):
    print(f"\n{'PASS' if ok else 'FAIL'}: {name}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(seed=CORPUS_SEED, n_instructions=N_INSTRUCTIONS)


@pytest.fixture(scope="module")
def trained(corpus):
    """All three architectures trained on the shared corpus and seed."""
    t0 = time.time()
    out = {}
    for arch in ARCHITECTURES:
        model, curve = train(corpus, TrainConfig(**TRAIN_CONFIG), arch)
        out[arch] = {
            "model": model,
            "final_loss": curve[-1],
            "accuracy": evaluate_accuracy(model, corpus.test),
        }
    out["runtime"] = time.time() - t0
    return out


@pytest.fixture(scope="module")
def pipeline_model(trained, corpus):
    return trained["attbilstm"]["model"], corpus.vocab


@pytest.fixture(scope="module")
def lexicon():
    return load_lexicon()


class TestClassifierCriteria:
    def test_accuracy_ordering(self, trained, corpus):
        acc = {a: trained[a]["accuracy"] for a in ARCHITECTURES}
        ok = (
            acc["attbilstm"] >= acc["bilstm"] >= acc["lstm"]
            and acc["attbilstm"] >= 0.90
            and len(corpus.test) >= 300
            and trained["runtime"] <= 15 * 60
        )
        report(
            "classifier accuracy ordering (att-bi-lstm >= bi-lstm >= lstm, att >= 0.90)",
            ok,
            f"att={acc['attbilstm']:.3f} bi={acc['bilstm']:.3f} lstm={acc['lstm']:.3f} "
            f"test_phrases={len(corpus.test)} runtime={trained['runtime']:.0f}s",
        )

    def test_loss_ordering(self, trained):
        losses = {a: trained[a]["final_loss"] for a in ARCHITECTURES}
        ok = losses["attbilstm"] < losses["bilstm"] < losses["lstm"]
        report(
            "final training loss ordering (att-bi-lstm < bi-lstm < lstm)",
            ok,
            f"att={losses['attbilstm']:.5f} bi={losses['bilstm']:.5f} lstm={losses['lstm']:.5f}",
        )


class TestGradientCriterion:
    def test_finite_difference_match(self):
        rng = np.random.default_rng(97)
        step, tol = 1e-5, 1e-4
        worst = 0.0
        for arch in ARCHITECTURES:
            model = init_model(arch, vocab_size=12, embedding_dim=4, hidden_size=5, seed=8)
            batch = []
            for k in range(4):
                T = int(rng.integers(1, 7))
                tokens = tuple(int(x) for x in rng.integers(0, 12, size=T))
                batch.append(LabeledPhrase(Phrase(tokens, f"s{k}"), LABELS[k % 3]))
            grads, _ = gradients(batch, model)

            def mean_loss():
                total = 0.0
                for row in batch:
                    cache = forward_batch(model, np.asarray(row.phrase.tokens)[:, None])
                    total += loss(cache.probs[0], row.label)
                return total / len(batch)

            for name, tensor in model.params().items():
                flat = tensor.ravel()
                gflat = grads[name].ravel()
                for i in range(flat.size):
                    orig = flat[i]
                    flat[i] = orig + step
                    plus = mean_loss()
                    flat[i] = orig - step
                    minus = mean_loss()
                    flat[i] = orig
                    fd = (plus - minus) / (2 * step)
                    scale = max(tol, abs(gflat[i]), abs(fd))
                    rel = abs(gflat[i] - fd) / scale
                    worst = max(worst, rel)
                    if rel > tol:
                        report("gradient finite-difference check", False,
                               f"{arch} {name}[{i}] analytic={gflat[i]:.3e} fd={fd:.3e}")
        report("gradient finite-difference check (all architectures)", worst <= tol,
               f"worst relative error {worst:.2e}")


def _dijkstra(costmap, start, goal):
    W, H = costmap.width, costmap.height
    dist = np.full((H, W), np.inf)
    dist[start[1], start[0]] = 0.0
    heap = [(0.0, start[0], start[1])]
    while heap:
        d, ix, iy = heapq.heappop(heap)
        if d > dist[iy, ix]:
            continue
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nx, ny = ix + dx, iy + dy
                if not (0 <= nx < W and 0 <= ny < H) or costmap.costs[ny, nx] == LETHAL:
                    continue
                step = costmap.resolution * (math.sqrt(2.0) if dx and dy else 1.0)
                nd = d + step * (1.0 + costmap.costs[ny, nx] / COST_SCALE)
                if nd < dist[ny, nx]:
                    dist[ny, nx] = nd
                    heapq.heappush(heap, (nd, nx, ny))
    return dist[goal[1], goal[0]]


class TestAStarCriterion:
    def test_optimality_on_random_costmaps(self):
        from langnav.costmap import Costmap

        t0 = time.time()
        rng = np.random.default_rng(321)
        checked = 0
        worst = 0.0
        while checked < 200:
            costs = rng.integers(0, 220, size=(30, 30)).astype(np.uint8)
            costs[rng.random((30, 30)) < 0.2] = LETHAL
            costs[0, 0] = costs[29, 29] = 0
            cm = Costmap(costs=costs, resolution=0.05, origin=(0.0, 0.0))
            oracle = _dijkstra(cm, (0, 0), (29, 29))
            if not np.isfinite(oracle):
                continue
            path = plan_local_astar(cm, cm.cell_center(0, 0), cm.cell_center(29, 29))
            worst = max(worst, abs(path.cost - oracle))
            checked += 1
        elapsed = time.time() - t0
        report(
            "A* path cost equals brute-force shortest-path oracle on 200 random 30x30 maps",
            worst <= 1e-9 and elapsed < 60,
            f"max |difference| {worst:.2e}, {elapsed:.1f}s",
        )


class TestCostmapCriterion:
    def test_region_predicate(self):
        rng = np.random.default_rng(55)
        n = int(12.0 / 0.05)
        grid = GridMap(resolution=0.05, origin=(0.0, 0.0),
                       cells=np.zeros((n, n), dtype=np.uint8))
        smap = SemanticMap(name="f", grid=grid, locations=[], objects=[],
                           start=StartPose((6.0, 6.0)))
        robot = RobotState(x=6.0, y=6.0, heading=0.0)
        cfg = PlannerConfig()
        mismatches = 0
        for trial in range(20):
            disks = [
                ConstraintDisk(f"d{i}", tuple(rng.uniform(3.5, 8.5, 2)),
                               float(rng.uniform(0.15, 1.2)), "x", False, 0.0)
                for i in range(int(rng.integers(1, 5)))
            ]
            cm = build_costmap(robot, smap, disks, cfg)
            xs = cm.origin[0] + (np.arange(cm.width) + 0.5) * cm.resolution
            ys = cm.origin[1] + (np.arange(cm.height) + 0.5) * cm.resolution
            X, Y = np.meshgrid(xs, ys)
            expected = np.zeros_like(X, dtype=bool)
            for d in disks:
                expected |= (X - d.center[0]) ** 2 + (Y - d.center[1]) ** 2 <= d.radius**2
            mismatches += int(np.sum((cm.costs == LETHAL) != expected))
        report(
            "costmap lethality matches the disk region predicate at every cell center",
            mismatches == 0,
            f"{mismatches} mismatching cells over 20 randomized layouts",
        )


class TestTrendCriterion:
    def test_more_constraints_never_shorten_the_run(self, pipeline_model, lexicon):
        model, vocab = pipeline_model
        t0 = time.time()
        lengths, durations = [], []
        for k in range(7):
            nav = Navigator(
                trend_scenario(k), model, vocab, lexicon,
                cfg=trend_planner_config(), sensor=trend_sensor_config(), seed=31,
            )
            parse = nav.submit(TREND_INSTRUCTION)
            assert parse.applied, parse.error
            status = nav.run(max_ticks=2500)
            assert status == "arrived", f"k={k}: {status}"
            assert not any(r.collided for r in nav.trajectory), f"k={k}: contact"
            m = nav.metrics()
            lengths.append(m.length)
            durations.append(m.duration)
        elapsed = time.time() - t0
        dl = [b - a for a, b in zip(lengths, lengths[1:])]
        dt = [b - a for a, b in zip(durations, durations[1:])]
        ok = (
            all(x >= 0 for x in dl)
            and all(x >= 0 for x in dt)
            and max(dl[:2]) >= max(dl)
            and max(dt[:2]) >= max(dt)
            and elapsed < 120
        )
        report(
            "0..6 constraints: length and time non-decreasing, largest step in first two",
            ok,
            f"lengths={[round(x, 2) for x in lengths]} times={[round(x, 1) for x in durations]} "
            f"({elapsed:.0f}s)",
        )


class TestContrastCriterion:
    def test_constrained_run_detours_around_people(self, pipeline_model, lexicon):
        model, vocab = pipeline_model
        results = {}
        for tag, text in (
            ("plain", CONTRAST_GOAL_INSTRUCTION),
            ("constrained", CONTRAST_CONSTRAINED_INSTRUCTION),
        ):
            nav = Navigator(contrast_scenario(), model, vocab, lexicon, seed=42)
            parse = nav.submit(text)
            assert parse.applied, parse.error
            status = nav.run(max_ticks=1200)
            assert status == "arrived", f"{tag}: {status}"
            assert not any(r.collided for r in nav.trajectory), f"{tag}: contact"
            m = nav.metrics()
            results[tag] = (m.length, m.min_clearance["person"])
        cell_diag = PlannerConfig().costmap_resolution * math.sqrt(2.0)
        required = PlannerConfig().disk_radius - cell_diag
        ok = (
            results["constrained"][1] > results["plain"][1]
            and results["constrained"][1] >= required
            and results["constrained"][0] > results["plain"][0]
        )
        report(
            "people constraint forces a longer path with larger person clearance",
            ok,
            f"plain len={results['plain'][0]:.2f} clear={results['plain'][1]:.2f}; "
            f"constrained len={results['constrained'][0]:.2f} clear={results['constrained'][1]:.2f} "
            f"(required >= {required:.2f})",
        )


class TestDynamicGroundingCriterion:
    def test_occluded_person_grounds_exactly_at_first_sight(self, pipeline_model, lexicon):
        model, vocab = pipeline_model
        smap, hidden_id = occlusion_scenario()
        nav = Navigator(smap, model, vocab, lexicon, seed=42)
        parse = nav.submit(CONTRAST_CONSTRAINED_INSTRUCTION)
        assert parse.applied, parse.error
        person = nav.map.object_by_id(hidden_id)
        first_visible = None
        first_disk = None
        early_disk_ticks = 0
        for _ in range(1200):
            was_visible = visible(nav.robot, person, nav.map, nav.sensor)
            nav.step()
            has_disk = any(d.object_id == hidden_id for d in nav.store.disks())
            if was_visible and first_visible is None:
                first_visible = nav.tick
            if has_disk and first_disk is None:
                first_disk = nav.tick
            if has_disk and first_visible is None:
                early_disk_ticks += 1
            if nav.status != "navigating":
                break
        ok = (
            nav.status == "arrived"
            and first_visible is not None
            and first_disk == first_visible
            and early_disk_ticks == 0
        )
        report(
            "occluded person is grounded in the first tick after line-of-sight opens",
            ok,
            f"first visible tick={first_visible} first disk tick={first_disk} "
            f"violations={early_disk_ticks} status={nav.status}",
        )


TABLE2_ROWS = [
    ("go to the restaurant and you know, keep away from people.",
     "restaurant", {"people"}, "scene1"),
    ("move to the laboratory and watch out the table and chairs.",
     "laboratory", {"table", "chair"}, "scene1"),
    ("robot, go to the lift", "lift", set(), "scene1"),
    ("don't collide with people and walk to the information desk",
     "information desk", {"people"}, "scene1"),
    ("robot, go to the school and stay away from children",
     "school", {"children"}, "sim_scene"),
    ("go to the thrift shop to buy some water and watch out the table in the shop "
     "and you know, keep away from the people",
     "thrift shop", {"table", "people"}, "sim_scene"),
]


class TestInstructionParseCriterion:
    def test_all_six_reference_instructions(self, pipeline_model, lexicon):
        model, vocab = pipeline_model

        def fold(word):
            if word in lexicon:
                for suffix in ("es", "s"):
                    if word.endswith(suffix):
                        base = word[: -len(suffix)]
                        if lexicon.is_noun(base) and lexicon.cluster_of(base) == lexicon.cluster_of(word):
                            return base
                return word
            return fold_plural(word, lexicon) or word

        failures = []
        for text, want_goal, want_constraints, map_name in TABLE2_ROWS:
            nav = Navigator(load_demo_map(map_name), model, vocab, lexicon, seed=1)
            parse = nav.analyze(text)
            goal = parse.goal.location if parse.goal else None
            constraints = {fold(n) for n in parse.constraint_nouns}
            expected = {fold(n) for n in want_constraints}
            if goal != want_goal or constraints != expected:
                failures.append(f"{text!r} -> goal={goal} constraints={sorted(constraints)}")
        report(
            "all six reference instructions parse to the listed goal and constraints",
            not failures,
            "; ".join(failures) if failures else "6/6 exact",
        )


class TestDeterminismCriterion:
    def test_event_log_replay_is_bit_exact(self, pipeline_model, lexicon, tmp_path_factory):
        model, vocab = pipeline_model
        assets = tmp_path_factory.mktemp("acceptance_assets")
        (assets / "maps").mkdir()
        for name in ("scene1", "sim_scene"):
            shutil.copy(map_path(name), assets / "maps" / f"{name}.json")
        save_model(model, vocab, assets / "model.json")

        manager = SessionManager(AssetStore(str(assets)))
        session = manager.create("scene1", "model", seed=77, config=None)
        session.submit_instruction(CONTRAST_CONSTRAINED_INSTRUCTION)
        session.tick(80)
        session.submit_instruction("go to the lift")
        session.tick(40)
        final = session.snapshot()
        final.pop("session")

        replayed = replay_events(list(session.events), AssetStore(str(assets)))
        replayed.pop("session")
        ok = json.dumps(final, sort_keys=True) == json.dumps(replayed, sort_keys=True)
        report("event-log replay reproduces the final snapshot bit-exactly", ok,
               f"{len(session.events)} events, tick {final['tick']}")
