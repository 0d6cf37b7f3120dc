#!/usr/bin/env python3
"""Regenerate the demo maps under src/langnav/data/maps/."""

import json
import pathlib


def make_grid(width_m, height_m, res):
    w = int(round(width_m / res))
    h = int(round(height_m / res))
    rows = [["." for _ in range(w)] for _ in range(h)]  # rows[0] = bottom
    return rows


def fill_rect(rows, res, x0, y0, x1, y1, sym="#"):
    """Mark cells whose centers fall inside [x0,x1] x [y0,y1]."""
    for iy in range(len(rows)):
        cy = (iy + 0.5) * res
        if not (y0 <= cy <= y1):
            continue
        for ix in range(len(rows[0])):
            cx = (ix + 0.5) * res
            if x0 <= cx <= x1:
                rows[iy][ix] = sym


def border(rows, res, thickness=0.2):
    w_m = len(rows[0]) * res
    h_m = len(rows) * res
    fill_rect(rows, res, 0, 0, w_m, thickness)
    fill_rect(rows, res, 0, h_m - thickness, w_m, h_m)
    fill_rect(rows, res, 0, 0, thickness, h_m)
    fill_rect(rows, res, w_m - thickness, 0, w_m, h_m)


def to_ascii(rows):
    return ["".join(r) for r in reversed(rows)]  # file rows top-first


def scene1():
    res = 0.2
    rows = make_grid(16.0, 12.0, res)
    border(rows, res)
    # Dividing wall with a doorway between the hall and the upper rooms.
    fill_rect(rows, res, 4.0, 6.9, 11.0, 7.3)
    fill_rect(rows, res, 12.6, 6.9, 16.0, 7.3)
    # Partition between the information-desk area and the hall.
    fill_rect(rows, res, 4.9, 8.6, 5.3, 12.0)
    # A low shelf in the lower-right lab area.
    fill_rect(rows, res, 12.0, 3.8, 14.0, 4.2)
    return {
        "name": "scene1",
        "resolution": res,
        "origin": [0.0, 0.0],
        "grid": to_ascii(rows),
        "legend": {".": "free", "#": "obstacle", "?": "unknown"},
        "locations": [
            {"name": "restaurant", "position": [13.5, 9.5]},
            {"name": "information desk", "position": [2.5, 9.5]},
            {"name": "laboratory", "position": [13.5, 2.5]},
            {"name": "lift", "position": [2.0, 6.0]},
            {"name": "hall", "position": [8.0, 3.0]},
        ],
        "objects": [
            {"id": "p1", "label": "person", "position": [9.0, 5.0], "radius": 0.15},
            {"id": "p2", "label": "person", "position": [10.2, 5.8], "radius": 0.15},
            {"id": "p3", "label": "person", "position": [14.0, 8.3], "radius": 0.15},
            {"id": "tbl1", "label": "table", "position": [14.5, 10.8], "radius": 0.4},
        ],
        "start": {"position": [2.0, 2.0], "heading": 0.0},
    }


DOOR_YS = (2.8, 8.4, 9.5, 10.6, 11.7, 12.8, 13.9)


def sim_scene():
    res = 0.2
    rows = make_grid(20.0, 16.0, res)
    border(rows, res)
    # Building blocks around an open plaza.
    fill_rect(rows, res, 2.5, 10.0, 5.5, 13.0)    # office building
    fill_rect(rows, res, 12.5, 10.0, 15.0, 12.5)  # post office
    fill_rect(rows, res, 16.0, 10.0, 18.5, 13.0)  # school
    fill_rect(rows, res, 3.0, 5.0, 6.0, 7.0)      # thrift shop
    fill_rect(rows, res, 15.0, 4.5, 18.0, 6.5)    # cafe
    # Plaza divider: a thin facade pierced by seven doorways, so eastbound
    # routes commit to one doorway; the lowest door sits on the nominal
    # route and the rest cluster high, so blocking the first door costs by
    # far the most extra path.
    fill_rect(rows, res, 10.0, 0.2, 10.2, 15.0)
    for door_y in DOOR_YS:
        fill_rect(rows, res, 10.0, door_y - 0.45, 10.2, door_y + 0.45, sym=".")
    return {
        "name": "sim_scene",
        "resolution": res,
        "origin": [0.0, 0.0],
        "grid": to_ascii(rows),
        "legend": {".": "free", "#": "obstacle", "?": "unknown"},
        "locations": [
            {"name": "office building", "position": [4.0, 9.4]},
            {"name": "post office", "position": [13.5, 9.4]},
            {"name": "school", "position": [17.0, 9.4]},
            {"name": "thrift shop", "position": [4.5, 4.4]},
            {"name": "cafe", "position": [16.5, 3.5]},
            {"name": "playground", "position": [8.5, 4.2]},
        ],
        "objects": [
            {
                "id": "walker1",
                "label": "person",
                "position": [14.0, 2.0],
                "radius": 0.15,
                "motion": {
                    "type": "waypoint_loop",
                    "speed": 0.4,
                    "waypoints": [[14.0, 2.0], [18.5, 2.0], [18.5, 3.2], [14.0, 3.2]],
                },
            },
            {"id": "tbl1", "label": "table", "position": [13.0, 5.5], "radius": 0.4},
        ],
        "start": {"position": [2.0, 2.0], "heading": 0.0},
    }


def main():
    out_dir = pathlib.Path(__file__).resolve().parents[1] / "src" / "langnav" / "data" / "maps"
    out_dir.mkdir(parents=True, exist_ok=True)
    for doc in (scene1(), sim_scene()):
        path = out_dir / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
