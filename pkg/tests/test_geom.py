import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractaldim.curvegen import Polyline, contract_iterate, expand_iterate
from fractaldim.errors import BudgetError
from fractaldim.geom import (
    HullSummary,
    capsule_area,
    convex_hull,
    hull_vertices,
    sausage_area,
    self_intersects,
)

from conftest import make_random_polyline


# ---------------------------------------------------------------------------
# brute-force oracle for segment intersection, exact rational arithmetic


def _orient_exact(a, b, c):
    v = (Fraction(b[0]) - Fraction(a[0])) * (Fraction(c[1]) - Fraction(a[1])) - (
        Fraction(b[1]) - Fraction(a[1])
    ) * (Fraction(c[0]) - Fraction(a[0]))
    return (v > 0) - (v < 0)


def _share_point_exact(p1, p2, p3, p4):
    d1 = _orient_exact(p3, p4, p1)
    d2 = _orient_exact(p3, p4, p2)
    d3 = _orient_exact(p1, p2, p3)
    d4 = _orient_exact(p1, p2, p4)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def between(a, b, c):
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    return (
        (d1 == 0 and between(p3, p4, p1))
        or (d2 == 0 and between(p3, p4, p2))
        or (d3 == 0 and between(p1, p2, p3))
        or (d4 == 0 and between(p1, p2, p4))
    )


def brute_force_self_intersects(p: Polyline) -> bool:
    pts = [tuple(q) for q in p.points]
    n = len(pts) - 1
    for i in range(n):
        for j in range(i + 2, n):
            if _share_point_exact(pts[i], pts[i + 1], pts[j], pts[j + 1]):
                return True
    for i in range(n - 1):
        a, b, c = pts[i], pts[i + 1], pts[i + 2]
        if _orient_exact(a, b, c) == 0:
            dot = (Fraction(c[0]) - Fraction(b[0])) * (
                Fraction(a[0]) - Fraction(b[0])
            ) + (Fraction(c[1]) - Fraction(b[1])) * (Fraction(a[1]) - Fraction(b[1]))
            if dot > 0:
                return True
    return False


# ---------------------------------------------------------------------------
# capsule oracle


def test_capsule_closed_forms():
    assert capsule_area(0.0, 0.4) == pytest.approx(math.pi * 0.04, rel=1e-15)
    assert capsule_area(1.0, 0.2) == pytest.approx(0.2314159265358979, rel=1e-12)
    assert capsule_area(10.0, 1.0) == pytest.approx(10 + math.pi / 4, rel=1e-15)
    with pytest.raises(ValueError):
        capsule_area(-1.0, 0.5)
    with pytest.raises(ValueError):
        capsule_area(1.0, 0.0)


@pytest.mark.parametrize("eps", [0.1, 0.5, 2.0])
def test_single_segment_matches_capsule(eps):
    p = Polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    est = sausage_area(p, eps, tol=0.01)
    assert est.refinement_delta <= 0.01
    assert est.area == pytest.approx(capsule_area(1.0, eps), rel=0.01)


def test_rotated_segment_matches_capsule():
    for angle in (0.3, 0.7, 1.2):
        p = Polyline(np.array([[0.0, 0.0],
                               [math.cos(angle), math.sin(angle)]]))
        est = sausage_area(p, 0.25, tol=0.01)
        assert est.area == pytest.approx(capsule_area(1.0, 0.25), rel=0.01)


def test_abutting_collinear_segments_merge():
    one = sausage_area(Polyline(np.array([[0.0, 0.0], [2.0, 0.0]])), 0.2, tol=0.01)
    two = sausage_area(
        Polyline(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])), 0.2, tol=0.01
    )
    assert two.area == pytest.approx(one.area, rel=1e-12)
    assert one.area == pytest.approx(capsule_area(2.0, 0.2), rel=0.01)


def test_sausage_argument_validation():
    p = Polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        sausage_area(p, 0.0)
    with pytest.raises(ValueError):
        sausage_area(p, 1.0, tol=0.2)
    with pytest.raises(ValueError):
        sausage_area(p, 1.0, tol=0.0)


def test_sausage_budget():
    p = Polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(BudgetError):
        sausage_area(p, 1.0, tol=0.01, budget=10)


def test_sausage_deterministic(koch_rule):
    p = expand_iterate(koch_rule, 1, 3)
    first = sausage_area(p, 1.0, tol=0.01)
    second = sausage_area(p, 1.0, tol=0.01)
    assert first.area == second.area
    assert first.cell == second.cell


def test_koch_expanded_sausage_sanity(koch_rule):
    # raster at tight tolerance is its own oracle: the area must sit inside
    # a broad band around epsilon times the total length
    p = expand_iterate(koch_rule, 1, 5)
    est = sausage_area(p, 1.0, tol=0.005)
    assert 0.3 * 1024 <= est.area <= 3.0 * 1024


def test_sausage_capsule_bounds_random():
    rng = np.random.default_rng(5)
    for _ in range(15):
        p = make_random_polyline(rng, int(rng.integers(2, 8)))
        eps = float(rng.uniform(0.3, 1.5))
        est = sausage_area(p, eps, tol=0.02)
        lengths = np.hypot(*np.diff(p.points, axis=0).T)
        upper = sum(capsule_area(float(l), eps) for l in lengths)
        lower = capsule_area(float(lengths.max()), eps)
        assert est.area <= upper * 1.03
        assert est.area >= lower * 0.95


# ---------------------------------------------------------------------------
# convex hull


def test_hull_unit_square():
    p = Polyline(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0],
                           [0.0, 0.0]]))
    hull = convex_hull(p)
    assert hull == HullSummary(perimeter=4.0, vertex_count=4, area=1.0)


def test_hull_collinear_degenerate():
    p = Polyline(np.array([[0.0, 0.0], [2.0, 0.0], [5.0, 0.0]]))
    hull = convex_hull(p)
    assert hull.perimeter == 10.0
    assert hull.vertex_count == 2
    assert hull.area == 0.0


def test_hull_two_point_degenerate_and_identical():
    p = Polyline(np.array([[1.0, 1.0], [2.0, 2.0]]))
    assert convex_hull(p).perimeter == pytest.approx(2 * math.sqrt(2))
    # a valid polyline cannot be a single repeated point, but the kernel
    # still reports the degenerate case
    assert len(hull_vertices(np.array([[1.0, 1.0], [1.0, 1.0]]))) == 1


def test_hull_reversal_and_interior_points_invariance():
    rng = np.random.default_rng(9)
    pts = rng.uniform(-3, 3, size=(40, 2))
    base = convex_hull(Polyline(pts))
    reversed_hull = convex_hull(Polyline(pts[::-1]))
    assert reversed_hull.perimeter == pytest.approx(base.perimeter, rel=1e-12)
    # appending collinear midpoints of existing edges must not change it
    mids = 0.5 * (pts[:-1] + pts[1:])
    grown = convex_hull(Polyline(np.vstack([pts, mids])))
    assert grown.perimeter == pytest.approx(base.perimeter, rel=1e-12)
    assert grown.area == pytest.approx(base.area, rel=1e-12)


def test_hull_perimeter_at_least_twice_diameter():
    rng = np.random.default_rng(13)
    for _ in range(20):
        p = make_random_polyline(rng, int(rng.integers(3, 30)))
        hull = convex_hull(p)
        assert hull.perimeter >= 2.0 * p.diameter() - 1e-9


def test_koch_expanded_hull_growth(koch_rule):
    for k in range(1, 6):
        p = expand_iterate(koch_rule, 1, k)
        perim = convex_hull(p).perimeter
        assert 2.0 * 3**k <= perim + 1e-9
        assert perim <= (math.pi + 2) * 3**k


# ---------------------------------------------------------------------------
# self intersection


def test_unit_segment_simple():
    assert not self_intersects(Polyline(np.array([[0.0, 0.0], [1.0, 0.0]])))


def test_square_wave_intersects():
    p = Polyline(
        np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0.5], [2, 0.5]], dtype=float)
    )
    assert self_intersects(p)
    assert brute_force_self_intersects(p)


def test_koch_iterate_simple(koch_rule):
    p4 = contract_iterate(koch_rule, 4)
    assert not self_intersects(p4)
    assert not brute_force_self_intersects(contract_iterate(koch_rule, 3))


def test_straight_chain_simple(straight_rule):
    assert not self_intersects(contract_iterate(straight_rule, 3))


def test_backtracking_spike_detected():
    p = Polyline(np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.0]]))
    assert self_intersects(p)
    assert brute_force_self_intersects(p)


def test_touching_endpoint_of_nonadjacent_detected():
    p = Polyline(np.array([[0, 0], [1, 0], [1, 1], [0.5, 0]], dtype=float))
    assert self_intersects(p)


def test_self_intersects_matches_brute_force_random():
    rng = np.random.default_rng(21)
    agree = 0
    for _ in range(60):
        p = make_random_polyline(rng, int(rng.integers(3, 9)))
        assert self_intersects(p) == brute_force_self_intersects(p)
        agree += 1
    assert agree == 60


# ---------------------------------------------------------------------------
# property suites (monotonicity, subadditivity, rigid invariance)


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_sausage_monotone_in_epsilon(seed):
    rng = np.random.default_rng(seed)
    p = make_random_polyline(rng, int(rng.integers(2, 8)))
    e1 = float(rng.uniform(0.3, 1.0))
    e2 = e1 * float(rng.uniform(1.2, 2.5))
    tol = 0.02
    a1 = sausage_area(p, e1, tol=tol).area
    a2 = sausage_area(p, e2, tol=tol).area
    assert a1 <= a2 * (1 + 3 * tol)


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_sausage_subadditive_under_concatenation(seed):
    rng = np.random.default_rng(seed)
    p1 = make_random_polyline(rng, int(rng.integers(2, 6)))
    p2 = make_random_polyline(rng, int(rng.integers(2, 6)))
    # join p2 onto p1's end so the concatenation is the set union
    shift = p1.points[-1] - p2.points[0]
    moved = p2.points + shift
    both = np.vstack([p1.points, moved[1:]])
    if not np.all(np.any(np.diff(both, axis=0) != 0.0, axis=1)):
        return
    eps = float(rng.uniform(0.3, 1.2))
    tol = 0.02
    total = sausage_area(Polyline(both), eps, tol=tol).area
    parts = (
        sausage_area(p1, eps, tol=tol).area
        + sausage_area(Polyline(moved), eps, tol=tol).area
    )
    assert total <= parts * (1 + 3 * tol)


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_sausage_rigid_motion_invariance(seed):
    rng = np.random.default_rng(seed)
    p = make_random_polyline(rng, int(rng.integers(2, 8)))
    eps = float(rng.uniform(0.3, 1.2))
    tol = 0.02
    base = sausage_area(p, eps, tol=tol).area
    moved = sausage_area(
        p.translated(float(rng.uniform(-9, 9)), float(rng.uniform(-9, 9))),
        eps, tol=tol,
    ).area
    turned = sausage_area(p.rotated(float(rng.uniform(0, math.tau))), eps,
                          tol=tol).area
    assert moved == pytest.approx(base, rel=2 * tol)
    assert turned == pytest.approx(base, rel=2 * tol)
