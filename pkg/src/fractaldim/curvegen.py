"""Finite-step curve construction: contractive iterates, expanded iterates,
and the two calibration spirals.

All curves are plain planar polylines.  Iterates are built breadth-first:
one vectorized substitution pass per depth level, so memory and time are
O(N^k) with no recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError
from .model import GeneratorRule, segment_budget


@dataclass(frozen=True, eq=False)
class Polyline:
    """Ordered planar vertex chain; segments are consecutive vertex pairs.

    The vertex array is frozen (read-only) after construction, so instances
    are safe to share.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("polyline needs an (M, 2) array with M >= 2")
        if not np.all(np.any(np.diff(pts, axis=0) != 0.0, axis=1)):
            raise ValueError("consecutive polyline vertices must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def segment_count(self) -> int:
        return len(self.points) - 1

    def segment_lengths(self) -> np.ndarray:
        return np.hypot(*np.diff(self.points, axis=0).T)

    def diameter(self) -> float:
        """Largest pairwise vertex distance (computed via the convex hull)."""
        from .geom import hull_vertices

        hull = hull_vertices(self.points)
        if len(hull) == 1:
            return 0.0
        best = 0.0
        for i in range(len(hull)):
            d = np.hypot(*(hull - hull[i]).T).max()
            best = max(best, float(d))
        return best

    def translated(self, dx: float, dy: float) -> "Polyline":
        return Polyline(self.points + np.array([dx, dy]))

    def rotated(self, angle: float) -> "Polyline":
        c, s = math.cos(angle), math.sin(angle)
        return Polyline(self.points @ np.array([[c, s], [-s, c]]))


@dataclass(frozen=True)
class LengthStats:
    total: float
    min_seg: float
    max_seg: float
    count: int


def length_stats(p: Polyline) -> LengthStats:
    """Exact total / extrema of the polyline's segment lengths."""
    lengths = p.segment_lengths()
    return LengthStats(
        total=float(lengths.sum()),
        min_seg=float(lengths.min()),
        max_seg=float(lengths.max()),
        count=len(lengths),
    )


def _substitute(vertices: np.ndarray, signs: np.ndarray, gen: np.ndarray,
                gen_signs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One breadth-first replacement pass.

    Each segment (A, B) with orientation sign s is replaced by the image of
    the generator under the similarity (x, y) -> A + x*d + y*s*perp(d),
    d = B - A.  The generator's own first vertex maps to A exactly, so the
    refined chain stays exactly continuous and keeps its endpoints.
    """
    a = vertices[:-1]
    d = vertices[1:] - a
    gx = gen[:-1, 0]  # last generator vertex is the next block's first
    gy = gen[:-1, 1]
    sdx = signs[:, None] * d[:, 0, None]
    sdy = signs[:, None] * d[:, 1, None]
    x = a[:, 0, None] + gx[None, :] * d[:, 0, None] - gy[None, :] * sdy
    y = a[:, 1, None] + gx[None, :] * d[:, 1, None] + gy[None, :] * sdx
    out = np.empty((x.size + 1, 2))
    out[:-1, 0] = x.ravel()
    out[:-1, 1] = y.ravel()
    out[-1] = vertices[-1]
    return out, (signs[:, None] * gen_signs[None, :]).ravel()


def contract_iterate(rule: GeneratorRule, k: int, budget: int | None = None) -> Polyline:
    """The k-th contractive polygonal: N^k segments from (0,0) to (1,0).

    k = 0 is the unit segment.  Raises :class:`BudgetError` when N^k
    exceeds the segment budget.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    limit = segment_budget(budget)
    if rule.n_segments**k > limit:
        raise BudgetError(f"{rule.n_segments}^{k} segments exceed budget {limit}")
    vertices = np.array([[0.0, 0.0], [1.0, 0.0]])
    signs = np.ones(1)
    gen = np.asarray(rule.vertices, dtype=np.float64)
    gen_signs = np.where(np.asarray(rule.flags, dtype=bool), -1.0, 1.0)
    for _ in range(k):
        vertices, signs = _substitute(vertices, signs, gen, gen_signs)
    return Polyline(vertices)


def expand_iterate(rule: GeneratorRule, i: int, k: int,
                   budget: int | None = None) -> Polyline:
    """The k-th expanded polygonal: contract_iterate scaled by (1/a_i)^k.

    ``i`` is the 1-based ratio index choosing the expansion factor.  The
    first vertex stays anchored at the origin.
    """
    if not 1 <= i <= rule.n_segments:
        raise ValueError(f"ratio index {i} out of range 1..{rule.n_segments}")
    base = contract_iterate(rule, k, budget=budget)
    scale = (1.0 / rule.ratios[i - 1]) ** k
    return Polyline(base.points * scale)


def archimedean_spiral(step: float, total_length: float) -> Polyline:
    """Polyline along r = (step / 2 pi) * theta with arc length >= total_length.

    Angular increments adapt to the local curvature so the chordal
    deviation stays below step / 100.
    """
    if step <= 0:
        raise ValueError("step must be > 0")
    if total_length <= 0:
        raise ValueError("total_length must be > 0")
    a = step / (2.0 * math.pi)
    dev = step / 100.0

    def arclen(theta: float) -> float:
        return 0.5 * a * (theta * math.sqrt(1 + theta * theta) + math.asinh(theta))

    pts = [(0.0, 0.0)]
    theta = 0.0
    while arclen(theta) < total_length:
        # sagitta of one chord ~ a*(theta^2+2)*dtheta^2 / (8*sqrt(1+theta^2));
        # the 0.8 absorbs the higher-order terms the estimate drops
        dtheta = 0.8 * math.sqrt(8.0 * dev * math.sqrt(1 + theta * theta)
                                 / (a * (theta * theta + 2.0)))
        theta += dtheta
        r = a * theta
        pts.append((r * math.cos(theta), r * math.sin(theta)))
    return Polyline(np.array(pts))


def logarithmic_spiral(b: float, turns: int) -> Polyline:
    """Polyline along r = exp(b * theta) over ``turns`` full turns.

    Chordal deviation is kept below 1% of the local radius; the angular
    step for that is constant, so the sampling is uniform in theta.
    """
    if b <= 0:
        raise ValueError("growth rate must be > 0")
    if turns < 1:
        raise ValueError("need at least one turn")
    theta_end = 2.0 * math.pi * turns
    if b * theta_end > math.log(np.finfo(np.float64).max):
        raise OverflowError("spiral radius exceeds the representable range")
    # sagitta ~ r * dtheta^2 * sqrt(1+b^2) / 8 <= 0.01 r; the 0.2 cap keeps
    # the chord-vs-arc length deficit well under the 0.5% contract
    dtheta = min(math.sqrt(0.08) / (1 + b * b) ** 0.25, 0.2)
    n = int(math.ceil(theta_end / dtheta))
    theta = np.linspace(0.0, theta_end, n + 1)
    r = np.exp(b * theta)
    return Polyline(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))


def log_spiral_arc_length(b: float, turns: float) -> float:
    """Closed-form arc length of r = exp(b theta) over ``turns`` turns."""
    theta_end = 2.0 * math.pi * turns
    return math.sqrt(1 + b * b) / b * (math.exp(b * theta_end) - 1.0)


def polyline_to_text(p: Polyline) -> str:
    """Vertex-per-line ``x y`` serialization with round-trip floats."""
    return "\n".join(f"{float(x)!r} {float(y)!r}" for x, y in p.points) + "\n"


def polyline_from_text(text: str) -> Polyline:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        x, y = line.split()
        rows.append((float(x), float(y)))
    return Polyline(np.array(rows))


def svg_path_data(p: Polyline, digits: int = 6) -> str:
    """SVG path ``d`` attribute tracing the polyline."""
    it = iter(p.points)
    x0, y0 = next(it)
    parts = [f"M {x0:.{digits}g} {y0:.{digits}g}"]
    parts += [f"L {x:.{digits}g} {y:.{digits}g}" for x, y in it]
    return " ".join(parts)
