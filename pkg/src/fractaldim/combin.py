"""Exact combinatorics of segment-length spectra.

At step k every segment's length is a product of k generator ratios, so
segments are classified by the exponent configuration (j_1, ..., j_N) with
sum k.  Everything here runs in exact integer / rational arithmetic: the
two inequalities are theorems and must never fail from rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import BudgetError
from .model import GeneratorRule, distinct_ratios

#: Cap on the number of exponent configurations a census may enumerate.
DEFAULT_CONFIG_BUDGET = 1_000_000

#: Cap on N**k for the brute-force census.
ENUMERATION_BUDGET = 10_000


@dataclass(frozen=True)
class CensusTable:
    """Exact segment counts per exponent configuration at step k."""

    k: int
    n: int
    entries: dict[tuple[int, ...], int]

    def total(self) -> int:
        return sum(self.entries.values())

    def to_text(self) -> str:
        """Sorted dump, one ``j_1,...,j_N count`` line per configuration."""
        lines = [
            ",".join(map(str, cfg)) + f" {count}"
            for cfg, count in sorted(self.entries.items())
        ]
        return "\n".join(lines) + "\n"


def multinomial_census(n: int, k: int, budget: int | None = None) -> CensusTable:
    """All exponent configurations of step k with their multinomial counts.

    Counts are k! / (j_1! ... j_N!); they sum to N**k exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    limit = DEFAULT_CONFIG_BUDGET if budget is None else budget
    n_configs = math.comb(k + n - 1, n - 1)
    if n_configs > limit:
        raise BudgetError(f"{n_configs} configurations exceed budget {limit}")
    entries: dict[tuple[int, ...], int] = {}
    # stars and bars: bar positions in a row of k stars and n-1 bars
    for bars in combinations(range(k + n - 1), n - 1):
        cfg = []
        prev = -1
        for b in bars:
            cfg.append(b - prev - 1)
            prev = b
        cfg.append(k + n - 1 - prev - 1)
        coeff = 1
        rest = k
        for j in cfg:
            coeff *= math.comb(rest, j)
            rest -= j
        entries[tuple(cfg)] = coeff
    return CensusTable(k=k, n=n, entries=entries)


def census_enumerate(rule: GeneratorRule, k: int) -> CensusTable:
    """Brute-force census: classify every generated step-k segment.

    The iterate is materialized and each of its N**k segments is labelled by
    the sequence of generator indices that produced it (the base-N digits of
    its position in the canonical breadth-first order), i.e. by exact
    composition bookkeeping rather than by measured lengths.
    """
    from .curvegen import contract_iterate

    n = rule.n_segments
    if n**k > ENUMERATION_BUDGET:
        raise BudgetError(f"{n}^{k} segments exceed budget {ENUMERATION_BUDGET}")
    polyline = contract_iterate(rule, k)
    entries: dict[tuple[int, ...], int] = {}
    for t in range(polyline.segment_count):
        cfg = [0] * n
        word = t
        for _ in range(k):
            cfg[word % n] += 1
            word //= n
        key = tuple(cfg)
        entries[key] = entries.get(key, 0) + 1
    return CensusTable(k=k, n=n, entries=entries)


def census_by_value(rule: GeneratorRule, k: int) -> dict[tuple[tuple[float, int], ...], int]:
    """Census keyed by (ratio value, exponent) pairs instead of position.

    Rules with repeated ratio values census by position; this view merges
    the entries whose length products coincide by construction.
    """
    table = census_enumerate(rule, k)
    values = distinct_ratios(rule)
    # map each segment position to its distinct-value slot
    slot = []
    for a in rule.ratios:
        for s, (v, _) in enumerate(values):
            if abs(a - v) <= 1e-9 * max(a, v):
                slot.append(s)
                break
    merged: dict[tuple[tuple[float, int], ...], int] = {}
    for cfg, count in table.entries.items():
        by_slot = [0] * len(values)
        for pos, j in enumerate(cfg):
            by_slot[slot[pos]] += j
        key = tuple(
            (values[s][0], e) for s, e in enumerate(by_slot) if e > 0
        )
        merged[key] = merged.get(key, 0) + count
    return merged


def half_sum_inequality(alpha: int, k: int) -> tuple[Fraction, Fraction, bool]:
    """Exact evaluation of the half-range binomial bound.

    lhs = sum_{i=0}^{floor(k/2)} C(k, i) (1/alpha)^i, rhs = (1 + 1/alpha)^k / 2.
    Odd k uses (k-1)/2, i.e. the floor.  Returns (lhs, rhs, lhs >= rhs); the
    inequality is a theorem, so the flag must always come back true.
    """
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    inv = Fraction(1, alpha)
    lhs = sum((math.comb(k, i) * inv**i for i in range(k // 2 + 1)), Fraction(0))
    rhs = Fraction(1, 2) * (1 + inv) ** k
    return lhs, rhs, lhs >= rhs


def majority_short_count(n: int, k: int) -> tuple[int, int, bool]:
    """Exact count of step-k segments whose first exponent is <= k/2.

    count = sum_{j=0}^{floor(k/2)} C(k, j) (N-1)^(k-j); returns
    (count, N^k, 2*count >= N^k).  The majority claim is a theorem, so the
    flag must always come back true.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if k < 2:
        raise ValueError("k must be >= 2")
    count = sum(math.comb(k, j) * (n - 1) ** (k - j) for j in range(k // 2 + 1))
    total = n**k
    return count, total, 2 * count >= total
