import heapq
import math

import numpy as np
import pytest

from langnav.astar import COST_SCALE, nearest_free_cell, plan_local_astar
from langnav.costmap import LETHAL, Costmap
from langnav.errors import NoPathError


def costmap_from(costs):
    return Costmap(costs=np.asarray(costs, dtype=np.uint8), resolution=0.1, origin=(0.0, 0.0))


def dijkstra_cost(costmap, start_cell, goal_cell):
    """Heuristic-free shortest path with the same edge weights as the planner."""
    W, H = costmap.width, costmap.height
    dist = np.full((H, W), np.inf)
    six, siy = start_cell
    dist[siy, six] = 0.0
    heap = [(0.0, six, siy)]
    while heap:
        d, ix, iy = heapq.heappop(heap)
        if d > dist[iy, ix]:
            continue
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nx, ny = ix + dx, iy + dy
                if not (0 <= nx < W and 0 <= ny < H):
                    continue
                if costmap.costs[ny, nx] == LETHAL:
                    continue
                step = costmap.resolution * (math.sqrt(2.0) if dx and dy else 1.0)
                nd = d + step * (1.0 + costmap.costs[ny, nx] / COST_SCALE)
                if nd < dist[ny, nx]:
                    dist[ny, nx] = nd
                    heapq.heappush(heap, (nd, nx, ny))
    return dist[goal_cell[1], goal_cell[0]]


def random_costmap(rng, n=30, lethal_frac=0.2):
    costs = rng.integers(0, 200, size=(n, n)).astype(np.uint8)
    lethal = rng.random((n, n)) < lethal_frac
    costs[lethal] = LETHAL
    costs[0, 0] = 0
    costs[n - 1, n - 1] = 0
    return costmap_from(costs)


class TestAStar:
    def test_straight_line_on_zero_costs(self):
        cm = costmap_from(np.zeros((20, 20)))
        path = plan_local_astar(cm, (0.05, 0.05), (0.05, 1.55))
        xs = {p[0] for p in path.waypoints}
        assert xs == {0.05}
        assert path.cost == pytest.approx(15 * 0.1)

    def test_diagonal_cost(self):
        cm = costmap_from(np.zeros((10, 10)))
        path = plan_local_astar(cm, (0.05, 0.05), (0.95, 0.95))
        assert path.cost == pytest.approx(9 * 0.1 * math.sqrt(2.0))

    def test_matches_dijkstra_on_random_maps(self):
        rng = np.random.default_rng(12)
        checked = 0
        while checked < 25:
            cm = random_costmap(rng)
            start, goal = (0, 0), (29, 29)
            oracle = dijkstra_cost(cm, start, goal)
            if not np.isfinite(oracle):
                continue
            path = plan_local_astar(cm, cm.cell_center(*start), cm.cell_center(*goal))
            assert path.cost == pytest.approx(oracle, abs=1e-9)
            checked += 1

    def test_goal_enclosed_by_lethal_ring_unreachable(self):
        costs = np.zeros((15, 15))
        costs[6:11, 6:11] = LETHAL
        costs[7:10, 7:10] = 0  # free pocket inside the ring
        cm = costmap_from(costs)
        with pytest.raises(NoPathError):
            plan_local_astar(cm, (0.05, 0.05), cm.cell_center(8, 8))

    def test_lethal_goal_clamps_to_nearest_free(self):
        costs = np.zeros((12, 12))
        costs[5:8, 5:8] = LETHAL
        cm = costmap_from(costs)
        path = plan_local_astar(cm, (0.05, 0.05), cm.cell_center(6, 6))
        end = path.waypoints[-1]
        eix, eiy = cm.world_to_cell(*end)
        assert cm.costs[eiy, eix] != LETHAL
        # Clamped goal is one of the cells adjacent to the lethal block.
        assert 3 <= eix <= 8 and 3 <= eiy <= 8

    def test_lethal_start_is_error(self):
        costs = np.zeros((8, 8))
        costs[0, 0] = LETHAL
        with pytest.raises(NoPathError):
            plan_local_astar(costmap_from(costs), (0.05, 0.05), (0.75, 0.75))

    def test_adding_disk_never_decreases_cost(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            base = rng.integers(0, 120, size=(20, 20)).astype(np.uint8)
            cm1 = costmap_from(base.copy())
            raised = base.copy()
            cx, cy = rng.integers(5, 15, 2)
            for iy in range(20):
                for ix in range(20):
                    if (ix - cx) ** 2 + (iy - cy) ** 2 <= 9:
                        raised[iy, ix] = max(raised[iy, ix], 200)
            cm2 = costmap_from(raised)
            p1 = plan_local_astar(cm1, cm1.cell_center(0, 0), cm1.cell_center(19, 19))
            p2 = plan_local_astar(cm2, cm2.cell_center(0, 0), cm2.cell_center(19, 19))
            assert p2.cost >= p1.cost - 1e-9


class TestNearestFreeCell:
    def test_already_free(self):
        cm = costmap_from(np.zeros((5, 5)))
        assert nearest_free_cell(cm, 2, 2) == (2, 2)

    def test_row_major_tie_break(self):
        costs = np.zeros((5, 5))
        costs[2, 2] = LETHAL
        cm = costmap_from(costs)
        # All four cardinal neighbours tie on distance; lowest (iy, ix) wins.
        assert nearest_free_cell(cm, 2, 2) == (2, 1)

    def test_all_lethal_raises(self):
        cm = costmap_from(np.full((4, 4), LETHAL))
        with pytest.raises(NoPathError):
            nearest_free_cell(cm, 1, 1)
