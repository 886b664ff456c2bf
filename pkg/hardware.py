# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

# Simulated robot platform: a disc-shaped differential drive robot with a
# front-facing planar lidar. Geometry works on plain arrays so that any
# world description can hand over its walls, segments and circles.

import math

import numpy as np

ROBOT_RADIUS = 0.1
STEP_LEN = 0.15
TURN_ANGLE = math.radians(30)

LIDAR_RAYS = 7
LIDAR_SPACING = math.radians(30)
MAX_RANGE = 3.5

EPSILON = 1e-12

def lidar_angles(rays:int = LIDAR_RAYS, spacing:float = LIDAR_SPACING) -> np.ndarray:
    # Index (rays - 1) / 2 is straight ahead, lower indices sweep clockwise (right)
    return (np.arange(rays) - (rays - 1) / 2) * spacing

def wrap_angle(angle:float) -> float:
    # (-pi, pi]
    angle = math.fmod(angle + math.pi, 2 * math.pi)
    if angle <= 0.0:
        angle += 2 * math.pi
    return angle - math.pi

## Lidar

def raycast(x:float, y:float, heading:float, segments:np.ndarray, circles:np.ndarray, max_range:float = MAX_RANGE, angles:np.ndarray = None) -> np.ndarray:
    """Distance along each ray to the nearest segment or circle, clamped to ``max_range``.

    ``segments`` is (n, 4) of x1, y1, x2, y2 and ``circles`` is (m, 3) of x, y, radius."""
    if angles is None:
        angles = lidar_angles()
    theta = heading + np.asarray(angles, dtype=np.float64)
    d = np.stack((np.cos(theta), np.sin(theta)), axis=1)
    best = np.full(len(theta), max_range, dtype=np.float64)

    if len(segments):
        a = segments[:, 0:2]
        s = segments[:, 2:4] - a
        ap = a - np.array((x, y))
        den = d[:, None, 0] * s[None, :, 1] - d[:, None, 1] * s[None, :, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (ap[None, :, 0] * s[None, :, 1] - ap[None, :, 1] * s[None, :, 0]) / den
            u = (ap[None, :, 0] * d[:, None, 1] - ap[None, :, 1] * d[:, None, 0]) / den
        hit = (np.abs(den) > EPSILON) & (t >= 0.0) & (u >= 0.0) & (u <= 1.0)
        best = np.minimum(best, np.where(hit, t, np.inf).min(axis=1))

    if len(circles):
        pc = np.array((x, y)) - circles[:, 0:2]
        b = d @ pc.T
        c = np.sum(pc * pc, axis=1) - circles[:, 2] ** 2
        disc = b * b - c[None, :]
        root = np.sqrt(np.maximum(disc, 0.0))
        t = np.where(-b - root >= 0.0, -b - root, -b + root)
        hit = (disc >= 0.0) & (t >= 0.0)
        best = np.minimum(best, np.where(hit, t, np.inf).min(axis=1))

    return best

## Distances

def point_rect_distance(px:float, py:float, rect:tuple) -> float:
    x0, y0, x1, y1 = rect
    dx = max(x0 - px, 0.0, px - x1)
    dy = max(y0 - py, 0.0, py - y1)
    return math.hypot(dx, dy)

def point_segment_distance(px:float, py:float, ax:float, ay:float, bx:float, by:float) -> float:
    sx, sy = bx - ax, by - ay
    length = sx * sx + sy * sy
    if length <= EPSILON:
        return math.hypot(px - ax, py - ay)
    u = min(max(((px - ax) * sx + (py - ay) * sy) / length, 0.0), 1.0)
    return math.hypot(px - (ax + u * sx), py - (ay + u * sy))

def segment_hits_rect(ax:float, ay:float, bx:float, by:float, rect:tuple) -> bool:
    # Liang-Barsky clipping of the segment against the box
    x0, y0, x1, y1 = rect
    dx, dy = bx - ax, by - ay
    lo, hi = 0.0, 1.0
    for p, q in ((-dx, ax - x0), (dx, x1 - ax), (-dy, ay - y0), (dy, y1 - ay)):
        if abs(p) <= EPSILON:
            if q < 0.0:
                return False
            continue
        r = q / p
        if p < 0.0:
            lo = max(lo, r)
        else:
            hi = min(hi, r)
        if lo > hi:
            return False
    return True

def segment_rect_distance(ax:float, ay:float, bx:float, by:float, rect:tuple) -> float:
    if segment_hits_rect(ax, ay, bx, by, rect):
        return 0.0
    x0, y0, x1, y1 = rect
    return min(
        point_rect_distance(ax, ay, rect),
        point_rect_distance(bx, by, rect),
        *(point_segment_distance(cx, cy, ax, ay, bx, by) for cx, cy in ((x0, y0), (x1, y0), (x1, y1), (x0, y1))),
    )

def clearance(px:float, py:float, bounds:tuple, rects:tuple = (), circles:tuple = ()) -> float:
    """Distance from a point to the nearest wall or obstacle surface, <= 0 inside an obstacle."""
    x0, y0, x1, y1 = bounds
    best = min(px - x0, x1 - px, py - y0, y1 - py)
    for rect in rects:
        best = min(best, point_rect_distance(px, py, rect))
    for cx, cy, r in circles:
        best = min(best, math.hypot(px - cx, py - cy) - r)
    return best

## Collision

def swept_collision(ax:float, ay:float, bx:float, by:float, bounds:tuple, rects:tuple = (), circles:tuple = (), radius:float = ROBOT_RADIUS) -> bool:
    """Whether a disc of ``radius`` moving along a->b overlaps a wall or obstacle anywhere on the way."""
    x0, y0, x1, y1 = bounds
    # Bounds are convex, the endpoints decide
    for px, py in ((ax, ay), (bx, by)):
        if px - radius < x0 or px + radius > x1 or py - radius < y0 or py + radius > y1:
            return True
    for rect in rects:
        if segment_rect_distance(ax, ay, bx, by, rect) < radius:
            return True
    for cx, cy, r in circles:
        if point_segment_distance(cx, cy, ax, ay, bx, by) < r + radius:
            return True
    return False
