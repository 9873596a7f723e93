#!/usr/bin/env python3
"""Graded O-grid for the quarter plate with a circular hole.

Domain [0, L]^2 minus the disk of radius r centred at the origin. Rays at
angle theta join the hole to the outer square; radial spacing grows
geometrically from `first` (a fraction of r) with ratio `ratio`. Each quad is
split into two triangles. Output is the JSON mesh format read by load_mesh.

    python3 tools/generate_plate_mesh.py --radius 0.216e-3 --out data/meshes/plate_r0216.json
"""

import argparse
import json
import math


def radial_parameters(first, ratio, length, near=math.inf, far_ratio=None, cap=None):
    """Cumulative positions s in [0, 1] of a geometric progression covering `length`.

    Steps grow by `ratio` up to distance `near`, then by `far_ratio`. Inside
    the near zone a step never exceeds cap(distance) when `cap` is given."""
    far_ratio = far_ratio or ratio
    steps, acc, h = [], 0.0, first
    while acc < length:
        steps.append(h)
        acc += h
        if acc < near:
            h *= ratio
            if cap:
                h = min(h, cap(acc))
        else:
            h *= far_ratio
    total = sum(steps)
    s, acc = [0.0], 0.0
    for h in steps:
        acc += h
        s.append(acc / total)
    s[-1] = 1.0
    return s


def outer_point(theta, side):
    if theta <= math.pi / 4:
        return side, side * math.tan(theta)
    return side / math.tan(theta), side


def build(radius, side, n_theta, first_fraction, ratio, near=math.inf, far_ratio=None):
    if n_theta % 2:
        raise SystemExit("n_theta must be even so that the corner (L, L) is a vertex")
    dtheta = 0.5 * math.pi / n_theta
    if first_fraction is None:
        # square cells at the hole: radial step = arc length of one ray interval
        first_fraction = dtheta
    if ratio is None:
        ratio = 1.0 + dtheta
    # near the hole, cells are never longer radially than along the hoop
    cap = lambda dist: (radius + dist) * dtheta
    s = radial_parameters(first_fraction * radius, ratio, side - radius, near * radius, far_ratio, cap)
    nr = len(s) - 1
    verts = []
    for j in range(n_theta + 1):
        th = 0.5 * math.pi * j / n_theta
        if j == n_theta:
            cx, cy = 0.0, radius
            ox, oy = 0.0, side
        elif j == 0:
            cx, cy = radius, 0.0
            ox, oy = side, 0.0
        else:
            cx, cy = radius * math.cos(th), radius * math.sin(th)
            ox, oy = outer_point(th, side)
        for i in range(nr + 1):
            verts.append([cx + s[i] * (ox - cx), cy + s[i] * (oy - cy)])

    def vid(i, j):
        return j * (nr + 1) + i

    cells = []
    for j in range(n_theta):
        for i in range(nr):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            cells.append([a, b, c])
            cells.append([a, c, d])

    tags = {"hole": [], "bottom": [], "left": [], "right": [], "top": []}
    for j in range(n_theta):
        tags["hole"].append([vid(0, j), vid(0, j + 1)])
        outer = "right" if j < n_theta // 2 else "top"
        tags[outer].append([vid(nr, j), vid(nr, j + 1)])
    for i in range(nr):
        tags["bottom"].append([vid(i, 0), vid(i + 1, 0)])
        tags["left"].append([vid(i, n_theta), vid(i + 1, n_theta)])
    return {"dim": 2, "vertices": verts, "cells": cells, "boundary_tags": tags}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--radius", type=float, required=True, help="hole radius [m]")
    p.add_argument("--side", type=float, default=16.2e-3, help="quarter plate side [m]")
    p.add_argument("--n-theta", type=int, default=96)
    p.add_argument("--first", type=float, help="first radial cell size / radius (default: square cells)")
    p.add_argument("--ratio", type=float, help="radial growth near the hole (default: square cells)")
    p.add_argument("--near", type=float, default=math.inf, help="extent of the near zone / radius")
    p.add_argument("--far-ratio", type=float, help="radial growth beyond the near zone")
    p.add_argument("--out", required=True)
    a = p.parse_args()
    mesh = build(a.radius, a.side, a.n_theta, a.first, a.ratio, a.near, a.far_ratio)
    with open(a.out, "w") as f:
        json.dump(mesh, f, separators=(",", ":"))
    print(f"{a.out}: {len(mesh['cells'])} cells, {len(mesh['vertices'])} vertices")


if __name__ == "__main__":
    main()
