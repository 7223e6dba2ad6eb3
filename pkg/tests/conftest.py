import math

import numpy as np
import pytest

from fractaldim.curvegen import Polyline
from fractaldim.model import GeneratorRule

SQRT3_OVER_6 = math.sqrt(3.0) / 6.0

# third vertex of the (0.3, 0.4, 0.5) generator: intersection of the circles
# of radius 0.4 about (0.3, 0) and radius 0.5 about (1, 0)
MIXED_X = 0.82 / 1.4
MIXED_Y = math.sqrt(0.16 - (MIXED_X - 0.3) ** 2)


@pytest.fixture(scope="session")
def koch_rule():
    return GeneratorRule(
        vertices=((0, 0), (1 / 3, 0), (0.5, SQRT3_OVER_6), (2 / 3, 0), (1, 0)),
        name="koch",
    )


@pytest.fixture(scope="session")
def mixed_rule():
    return GeneratorRule(
        vertices=((0, 0), (0.3, 0), (MIXED_X, MIXED_Y), (1, 0)), name="mixed345"
    )


@pytest.fixture(scope="session")
def straight_rule():
    return GeneratorRule(
        vertices=((0, 0), (0.25, 0), (0.5, 0), (0.75, 0), (1, 0)), name="straight"
    )


@pytest.fixture(scope="session")
def crossing_rule():
    # chain that crosses itself at depth 1 (third segment cuts the first)
    return GeneratorRule(
        vertices=((0, 0), (0.8, 0.4), (0.2, 0.4), (1, 0)), name="crossing"
    )


def make_random_rule(rng: np.random.Generator, n_segments: int) -> GeneratorRule:
    """Random valid rule: interior vertices with increasing x and small y."""
    while True:
        xs = np.sort(rng.uniform(0.05, 0.95, size=n_segments - 1))
        if np.any(np.diff(xs) < 0.02):
            continue
        ys = rng.uniform(-0.35, 0.35, size=n_segments - 1)
        verts = [(0.0, 0.0)]
        verts += [(float(x), float(y)) for x, y in zip(xs, ys)]
        verts.append((1.0, 0.0))
        ratios = [math.dist(verts[i], verts[i + 1]) for i in range(n_segments)]
        if all(0.05 < a < 0.95 for a in ratios):
            return GeneratorRule(vertices=tuple(verts))


def make_random_polyline(rng: np.random.Generator, n_vertices: int,
                         extent: float = 4.0) -> Polyline:
    while True:
        pts = rng.uniform(-extent, extent, size=(n_vertices, 2))
        if np.all(np.any(np.diff(pts, axis=0) != 0.0, axis=1)):
            return Polyline(pts)
