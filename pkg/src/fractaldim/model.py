"""Segment-replacement rules: the generator polygon and its bookkeeping.

A rule is an anchored vertex chain v_0 .. v_N with v_0 = (0, 0) and
v_N = (1, 0).  Segment i carries the contraction ratio a_i = |v_i - v_{i-1}|,
which must lie strictly inside (0, 1).  Substituting the whole chain into
every segment of the previous polygonal drives the curve constructions in
:mod:`fractaldim.curvegen`.

Rule-file format (text, UTF-8, line oriented; parsed by :func:`parse_rule`):

* ``#`` starts a comment, blank lines are ignored;
* ``name <word>`` -- optional label, at most once;
* ``vertex <x> <y>`` -- one line per vertex, in chain order (the
  ``vertices`` field of the rule);
* ``flags <f_1> ... <f_N>`` -- optional, one ``0``/``1`` per segment,
  marking orientation-reversing (reflected) similarities; defaults to all
  ``0``.

Numbers use Python float literal syntax with ``.`` as the decimal point
(locale independent).  :func:`serialize_rule` writes ``repr()`` floats, so a
parse / serialize / parse round trip is bit exact.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property

from .errors import BudgetError, RuleError

#: Hard cap on the number of segments any operation will materialize.
DEFAULT_SEGMENT_BUDGET = 10_000_000

#: Environment variable overriding :data:`DEFAULT_SEGMENT_BUDGET`.
SEGMENT_BUDGET_ENV = "FRACTALDIM_SEGMENT_BUDGET"

#: Relative tolerance used to decide that two ratio values are "the same".
#: Ratios are recomputed from vertex distances, so values that are meant to
#: coincide may differ by a few ulp.
RATIO_MATCH_RTOL = 1e-9


def segment_budget(override: int | None = None) -> int:
    """Resolve the segment budget: explicit argument, else env var, else default."""
    if override is not None:
        return int(override)
    env = os.environ.get(SEGMENT_BUDGET_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_SEGMENT_BUDGET


@dataclass(frozen=True)
class GeneratorRule:
    """An anchored replacement polygon defining N contracting similarities.

    Immutable after construction; safe to share across threads.
    """

    vertices: tuple[tuple[float, float], ...]
    flags: tuple[bool, ...] = ()
    name: str | None = None

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise RuleError("rule needs at least 2 vertices")
        if verts[0] != (0.0, 0.0):
            raise RuleError(f"first vertex must be (0, 0), got {verts[0]}")
        if verts[-1] != (1.0, 0.0):
            raise RuleError(f"last vertex must be (1, 0), got {verts[-1]}")
        n = len(verts) - 1
        flags = tuple(bool(f) for f in self.flags) if self.flags else (False,) * n
        if len(flags) != n:
            raise RuleError(f"expected {n} flags, got {len(flags)}")
        object.__setattr__(self, "flags", flags)
        for i in range(n):
            a = math.dist(verts[i], verts[i + 1])
            if not 0.0 < a < 1.0:
                raise RuleError(
                    f"segment {i + 1} has ratio {a!r}, must lie strictly in (0, 1)"
                )
        # Chain from (0,0) to (1,0): total length >= 1 by the triangle
        # inequality; anything below is a numeric impossibility.
        if sum(self.ratios) < 1.0 - 1e-9:
            raise RuleError("ratios sum below 1; vertices are inconsistent")

    @cached_property
    def ratios(self) -> tuple[float, ...]:
        """Contraction ratios a_i = |v_i - v_{i-1}|, recomputed from vertices."""
        v = self.vertices
        return tuple(math.dist(v[i], v[i + 1]) for i in range(len(v) - 1))

    @property
    def n_segments(self) -> int:
        return len(self.vertices) - 1

    @property
    def is_straight(self) -> bool:
        """True for the degenerate straight-line rule (all dimensions equal 1)."""
        return all(y == 0.0 for _, y in self.vertices) and all(
            self.vertices[i][0] < self.vertices[i + 1][0]
            for i in range(len(self.vertices) - 1)
        )

    def min_ratio(self) -> float:
        return min(self.ratios)

    def max_ratio(self) -> float:
        return max(self.ratios)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_rule`.

    ``ok`` is true iff ``messages`` contains no ``"error:"`` finding.
    """

    ok: bool
    messages: tuple[str, ...]
    checked_depth: int

    def errors(self) -> tuple[str, ...]:
        return tuple(m for m in self.messages if m.startswith("error:"))


def parse_rule(document: str) -> GeneratorRule:
    """Parse a rule file (see module docstring for the format)."""
    name: str | None = None
    vertices: list[tuple[float, float]] = []
    flags: list[bool] | None = None
    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key, args = fields[0], fields[1:]
        try:
            if key == "name":
                if name is not None:
                    raise RuleError("duplicate name line")
                if len(args) != 1:
                    raise RuleError("name takes exactly one word")
                name = args[0]
            elif key == "vertex":
                if len(args) != 2:
                    raise RuleError("vertex takes exactly two numbers")
                vertices.append((float(args[0]), float(args[1])))
            elif key == "flags":
                if flags is not None:
                    raise RuleError("duplicate flags line")
                if not all(a in ("0", "1") for a in args):
                    raise RuleError("flags entries must be 0 or 1")
                flags = [a == "1" for a in args]
            else:
                raise RuleError(f"unknown directive {key!r}")
        except RuleError as exc:
            raise RuleError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise RuleError(f"line {lineno}: {exc}") from None
    if len(vertices) < 2:
        raise RuleError("rule file defines fewer than 2 vertices")
    return GeneratorRule(
        vertices=tuple(vertices),
        flags=tuple(flags) if flags is not None else (),
        name=name,
    )


def serialize_rule(rule: GeneratorRule) -> str:
    """Write a rule back to its file format; round-trips bit exactly."""
    lines = []
    if rule.name is not None:
        lines.append(f"name {rule.name}")
    for x, y in rule.vertices:
        lines.append(f"vertex {x!r} {y!r}")
    if any(rule.flags):
        lines.append("flags " + " ".join("1" if f else "0" for f in rule.flags))
    return "\n".join(lines) + "\n"


def distinct_ratios(rule: GeneratorRule) -> list[tuple[float, int]]:
    """Distinct ratio values in ascending order with their multiplicities.

    Values within :data:`RATIO_MATCH_RTOL` (relative) of each other are
    merged; the group is represented by its smallest member.
    """
    groups: list[tuple[float, int]] = []
    for a in sorted(rule.ratios):
        if groups and a - groups[-1][0] <= RATIO_MATCH_RTOL * a:
            groups[-1] = (groups[-1][0], groups[-1][1] + 1)
        else:
            groups.append((a, 1))
    return groups


def ratio_value_index(rule: GeneratorRule, value: float) -> int:
    """1-based index of the first segment whose ratio matches ``value``."""
    for i, a in enumerate(rule.ratios, start=1):
        if abs(a - value) <= RATIO_MATCH_RTOL * max(a, value):
            return i
    raise ValueError(f"no segment has ratio {value!r}")


def validate_rule(
    rule: GeneratorRule, depth: int = 4, budget: int | None = None
) -> ValidationReport:
    """Check rule invariants plus a finite-depth self-intersection sweep.

    The iterate at ``depth`` is materialized and tested for transverse
    self-intersection with exact orientation predicates; touching at
    endpoints shared by adjacent segments is allowed.  ``depth`` is a
    practical surrogate for a closed-form non-intersection criterion: it
    catches the failures that actually occur, it does not prove their
    absence at every depth.

    Raises :class:`BudgetError` (not a validation failure) when
    ``N**depth`` exceeds the segment budget.
    """
    from .curvegen import contract_iterate
    from .geom import self_intersects

    if depth < 1:
        raise ValueError("depth must be >= 1")
    limit = segment_budget(budget)
    if rule.n_segments**depth > limit:
        raise BudgetError(
            f"{rule.n_segments}^{depth} segments exceed budget {limit}"
        )
    messages: list[str] = []
    if rule.is_straight:
        messages.append("info: degenerate: straight line")
    polyline = contract_iterate(rule, depth, budget=limit)
    if self_intersects(polyline):
        messages.append(f"error: iterate self-intersects at depth {depth}")
    ok = not any(m.startswith("error:") for m in messages)
    return ValidationReport(ok=ok, messages=tuple(messages), checked_depth=depth)
