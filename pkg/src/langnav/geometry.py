"""Polyline helpers shared by the planners and metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class Path:
    waypoints: list[tuple[float, float]]
    length: float = field(default=None)  # type: ignore[assignment]
    cost: float = 0.0

    def __post_init__(self):
        if self.length is None:
            self.length = path_length(self.waypoints)


def path_length(points) -> float:
    return float(sum(math.dist(points[i], points[i + 1]) for i in range(len(points) - 1)))


def project_to_polyline(points, p) -> tuple[float, float]:
    """(arc length of closest point, distance to it) over all segments."""
    best_arc, best_dist = 0.0, math.dist(p, points[0])
    arc = 0.0
    for i in range(len(points) - 1):
        a, b = points[i], points[i + 1]
        seg = math.dist(a, b)
        if seg > 1e-12:
            t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (seg * seg)
            t = min(1.0, max(0.0, t))
            q = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            d = math.dist(p, q)
            if d < best_dist:
                best_dist = d
                best_arc = arc + t * seg
        arc += seg
    return best_arc, best_dist


def point_at_arc(points, s: float) -> tuple[float, float]:
    """Point at arc length s along the polyline; clamped to the endpoints."""
    if s <= 0:
        return tuple(points[0])
    arc = 0.0
    for i in range(len(points) - 1):
        seg = math.dist(points[i], points[i + 1])
        if arc + seg >= s and seg > 1e-12:
            f = (s - arc) / seg
            a, b = points[i], points[i + 1]
            return (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))
        arc += seg
    return tuple(points[-1])
