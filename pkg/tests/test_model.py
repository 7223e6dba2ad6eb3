import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractaldim.errors import BudgetError, RuleError
from fractaldim.model import (
    GeneratorRule,
    distinct_ratios,
    parse_rule,
    ratio_value_index,
    serialize_rule,
    validate_rule,
)

from conftest import MIXED_X, MIXED_Y, make_random_rule

KOCH_DOC = """\
# classic four-segment generator
name koch
vertex 0.0 0.0
vertex 0.3333333333333333 0.0
vertex 0.5 0.28867513459481287
vertex 0.6666666666666666 0.0
vertex 1.0 0.0
"""


def test_parse_koch_document():
    rule = parse_rule(KOCH_DOC)
    assert rule.name == "koch"
    assert rule.n_segments == 4
    # ratios are recomputed distances; verify against the vertex geometry
    for i, a in enumerate(rule.ratios):
        expected = math.dist(rule.vertices[i], rule.vertices[i + 1])
        assert a == expected
        assert abs(a - 1 / 3) < 1e-12
    assert rule.flags == (False,) * 4


def test_identity_replacement_rejected():
    with pytest.raises(RuleError):
        parse_rule("vertex 0 0\nvertex 1 0\n")


def test_three_segment_circle_intersection_ratios():
    doc = (
        f"vertex 0 0\nvertex 0.3 0\n"
        f"vertex {MIXED_X!r} {MIXED_Y!r}\nvertex 1 0\n"
    )
    rule = parse_rule(doc)
    assert rule.ratios == pytest.approx((0.3, 0.4, 0.5), abs=1e-12)


@pytest.mark.parametrize(
    "doc,match",
    [
        ("vertex 0 0\n", "fewer than 2"),
        ("vertex 0.1 0\nvertex 1 0\n", "first vertex"),
        ("vertex 0 0\nvertex 0.5 0.2\nvertex 1 0.1\n", "last vertex"),
        ("vertex 0 0\nvertex nope 0\nvertex 1 0\n", "float"),
        ("vertex 0 0\nvertex 1 0 0\n", "two numbers"),
        ("scale 2\nvertex 0 0\nvertex 1 0\n", "unknown directive"),
        ("vertex 0 0\nvertex 0.5 0.3\nvertex 1 0\nflags 1\n", "flags"),
        ("vertex 0 0\nvertex 0.5 0.3\nvertex 1 0\nflags 2 0\n", "0 or 1"),
    ],
)
def test_malformed_documents(doc, match):
    with pytest.raises(RuleError, match=match):
        parse_rule(doc)


def test_serialize_round_trip_bit_exact(koch_rule, mixed_rule):
    for rule in (koch_rule, mixed_rule):
        again = parse_rule(serialize_rule(rule))
        assert again.vertices == rule.vertices
        assert again.flags == rule.flags
        assert again.name == rule.name
        assert serialize_rule(again) == serialize_rule(rule)


def test_flags_round_trip():
    rule = GeneratorRule(
        vertices=((0, 0), (0.5, 0.3), (1, 0)), flags=(True, False)
    )
    again = parse_rule(serialize_rule(rule))
    assert again.flags == (True, False)


def test_ratio_distance_consistency_random():
    rng = np.random.default_rng(7)
    for _ in range(25):
        rule = make_random_rule(rng, int(rng.integers(2, 7)))
        for i, a in enumerate(rule.ratios):
            assert abs(a - math.dist(rule.vertices[i], rule.vertices[i + 1])) < 1e-12


def test_distinct_ratios_koch(koch_rule):
    groups = distinct_ratios(koch_rule)
    assert len(groups) == 1
    value, mult = groups[0]
    assert mult == 4
    assert value == pytest.approx(1 / 3, abs=1e-12)


def test_distinct_ratios_all_different(mixed_rule):
    groups = distinct_ratios(mixed_rule)
    assert [m for _, m in groups] == [1, 1, 1]
    assert [v for v, _ in groups] == pytest.approx([0.3, 0.4, 0.5], abs=1e-9)


def test_distinct_ratios_repeated_value():
    # ratios (0.5, 0.3, 0.5): third vertex from circle-circle intersection
    x = 0.59
    y = math.sqrt(0.09 - (x - 0.5) ** 2)
    rule = GeneratorRule(vertices=((0, 0), (0.5, 0), (x, y), (1, 0)))
    assert rule.ratios == pytest.approx((0.5, 0.3, 0.5), abs=1e-12)
    groups = distinct_ratios(rule)
    assert [(round(v, 6), m) for v, m in groups] == [(0.3, 1), (0.5, 2)]
    assert ratio_value_index(rule, groups[0][0]) == 2
    assert ratio_value_index(rule, groups[1][0]) == 1


def test_validate_koch_depth4(koch_rule):
    report = validate_rule(koch_rule, depth=4)
    assert report.ok
    assert report.checked_depth == 4
    assert not report.errors()


def test_validate_straight_degenerate(straight_rule):
    report = validate_rule(straight_rule, depth=3)
    assert report.ok
    assert any("straight" in m for m in report.messages)


def test_validate_crossing_rule(crossing_rule):
    report = validate_rule(crossing_rule, depth=1)
    assert not report.ok
    assert report.errors()


def test_validate_monotone_in_depth(koch_rule, mixed_rule, straight_rule,
                                    crossing_rule):
    # ok at a deeper level implies ok at every shallower one
    for rule, depths in [
        (koch_rule, range(1, 5)),
        (mixed_rule, range(1, 5)),
        (straight_rule, range(1, 5)),
        (crossing_rule, range(1, 4)),
    ]:
        oks = [validate_rule(rule, depth=d).ok for d in depths]
        for shallow, deep in zip(oks, oks[1:]):
            assert not deep or shallow


def test_validate_budget_is_resource_error(koch_rule):
    with pytest.raises(BudgetError):
        validate_rule(koch_rule, depth=20)


def test_sum_of_ratios_at_least_one():
    rng = np.random.default_rng(3)
    for _ in range(20):
        rule = make_random_rule(rng, int(rng.integers(2, 6)))
        assert sum(rule.ratios) >= 1.0 - 1e-12


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_random_rule_round_trip(seed):
    rng = np.random.default_rng(seed)
    rule = make_random_rule(rng, int(rng.integers(2, 7)))
    assert parse_rule(serialize_rule(rule)).vertices == rule.vertices
