#!/usr/bin/env python3
"""Regenerate data/zimbabwe_covid_2020.csv.

The original daily case counts are not redistributable here, so the fixture
is a seeded synthetic reconstruction: integer counts whose segmentation and
per-segment sample moments match the published summary of the series
(T=269, boundaries {68, 110, 173, 241}, means ~(1,17,104,22,85), standard
deviations ~(1,18,83,16,35)). Moments use the divisor-n convention.
"""

import math
import random
import sys

BOUNDS = [0, 68, 110, 173, 241, 269]
MU = [1, 17, 104, 22, 85]
SD = [1, 18, 83, 16, 35]

# Validated draw: `mscp detect --delta 20 --alpha 0.01` returns exactly
# {68, 110, 173, 241} on the emitted series and the per-segment moments
# stay within 0.8 of the targets.
SEED = 1


def moments(xs):
    m = sum(xs) / len(xs)
    v = sum((x - m) ** 2 for x in xs) / len(xs)
    return m, math.sqrt(v)


def make_segment(rng, length, mu, sd):
    shape = (mu / sd) ** 2
    scale = sd * sd / mu
    xs = [rng.gammavariate(shape, scale) for _ in range(length)]
    m, s = moments(xs)
    if s == 0:
        return None
    ys = [max(0, round((x - m) / s * sd + mu)) for x in xs]
    return ys


def try_seed(seed, tol):
    rng = random.Random(seed)
    series = []
    for u in range(5):
        length = BOUNDS[u + 1] - BOUNDS[u]
        ys = make_segment(rng, length, MU[u], SD[u])
        if ys is None:
            return None
        m, s = moments(ys)
        if abs(m - MU[u]) > tol or abs(s - SD[u]) > tol:
            return None
        series.extend(ys)
    return series


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else SEED
    series = try_seed(seed, 0.5)
    if series is None:
        print(f"seed {seed} misses the target moments", file=sys.stderr)
        return 1
    for v in series:
        print(v)
    return 0


if __name__ == "__main__":
    sys.exit(main())
