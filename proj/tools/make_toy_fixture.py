#!/usr/bin/env python3
"""Writes the bundled toy scene under data/toy/.

200 points: a road strip along the trajectory, two vegetation patches, and
fourteen small objects on either side. Rerunning reproduces the files
byte for byte.
"""
import argparse
import json
import pathlib
import random
import struct

TAXONOMY = {
    "labels": [
        {"id": 1, "name": "road", "kind": "stuff"},
        {"id": 3, "name": "vegetation", "kind": "stuff"},
        {"id": 10, "name": "building", "kind": "object"},
        {"id": 11, "name": "car", "kind": "object"},
        {"id": 12, "name": "pole", "kind": "object"},
        {"id": 13, "name": "traffic-sign", "kind": "object"},
    ]
}

# (semantic, x, y, rgb)
OBJECTS = [
    (10, -12.0, 10.0, (128, 128, 128)),
    (10, 2.0, -11.0, (214, 196, 160)),
    (10, 16.0, 11.0, (192, 192, 192)),
    (10, 33.0, -10.0, (128, 128, 128)),
    (10, 42.0, 12.0, (214, 196, 160)),
    (11, -6.0, -4.0, (16, 16, 16)),
    (11, 12.0, 4.0, (192, 192, 192)),
    (11, 24.0, -4.0, (16, 16, 16)),
    (12, -3.0, 6.0, (112, 128, 104)),
    (12, 9.0, -6.0, (128, 128, 128)),
    (12, 21.0, 7.0, (16, 16, 16)),
    (12, 38.0, -3.0, (112, 128, 104)),
    (13, 6.0, 3.5, (56, 144, 56)),
    (13, 29.0, 4.0, (192, 192, 192)),
]
POINTS_PER_OBJECT = 8
ROAD_POINTS = 48
VEGETATION = [(5.0, 13.0), (27.0, -13.0)]
POINTS_PER_PATCH = 20


def jitter(rng, c, spread):
    return max(0, min(255, c + rng.randint(-spread, spread)))


def build(seed):
    rng = random.Random(seed)
    pts = []
    for k, (sem, cx, cy, rgb) in enumerate(OBJECTS):
        for _ in range(POINTS_PER_OBJECT):
            x = cx + rng.uniform(-1.0, 1.0)
            y = cy + rng.uniform(-1.0, 1.0)
            z = rng.uniform(0.0, 3.0)
            pts.append((x, y, z, *(jitter(rng, c, 6) for c in rgb), sem, 100 + k))
    for i in range(ROAD_POINTS):
        x = -20.0 + i * 70.0 / (ROAD_POINTS - 1)
        y = rng.uniform(-1.0, 1.0)
        pts.append((x, y, 0.0, *(jitter(rng, 60, 4) for _ in range(3)), 1, 0))
    for cx, cy in VEGETATION:
        for _ in range(POINTS_PER_PATCH):
            x = cx + rng.uniform(-1.5, 1.5)
            y = cy + rng.uniform(-1.5, 1.5)
            pts.append((x, y, rng.uniform(0.0, 1.0), jitter(rng, 40, 4), jitter(rng, 66, 4), jitter(rng, 36, 4), 3, 0))
    return pts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"))
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    pts = build(args.seed)
    with open(out / "cloud.bin", "wb") as f:
        f.write(b"T2PC" + struct.pack("<Q", len(pts)))
        for p in pts:
            f.write(struct.pack("<fffBBBHI", *p))

    with open(out / "trajectory.txt", "w") as f:
        for i in range(16):
            f.write(f"{2.0 * i:.1f} 0.0\n")

    (out / "taxonomy.json").write_text(json.dumps(TAXONOMY, indent=2, sort_keys=True) + "\n")

    config = {
        "paths": {"cloud": "cloud.bin", "trajectory": "trajectory.txt", "taxonomy": "taxonomy.json"},
        "cluster": {"eps": 2.0, "min_pts": 3},
        "seed": 7,
    }
    (out / "config.json").write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(pts)} points to {out}")


if __name__ == "__main__":
    main()
