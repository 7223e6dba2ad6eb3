#!/usr/bin/env python3
"""Render the bundled rules as SVG curves at a few depths."""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fractaldim.cli import render_svg  # noqa: E402
from fractaldim.curvegen import contract_iterate, expand_iterate  # noqa: E402
from fractaldim.model import parse_rule  # noqa: E402

OUT = ROOT / "out"


def run():
    OUT.mkdir(exist_ok=True)
    for name, depths in (("koch", (1, 3, 5)), ("mixed345", (1, 3, 6))):
        rule = parse_rule((ROOT / "rules" / f"{name}.rule").read_text())
        for k in depths:
            contracted = contract_iterate(rule, k)
            path = OUT / f"{name}_k{k}.svg"
            path.write_text(render_svg(contracted))
            expanded = expand_iterate(rule, 1, k)
            epath = OUT / f"{name}_expanded_k{k}.svg"
            epath.write_text(render_svg(expanded))
            print(f"{path.name}: {contracted.segment_count} segments; "
                  f"{epath.name}: grown {expanded.diameter():.1f} across")


if __name__ == "__main__":
    run()
