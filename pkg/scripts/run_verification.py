#!/usr/bin/env python3
"""Run the full theorem-verification harness on the bundled rules.

Writes one structured report per rule under out/ (created next to this
script's repo root) and prints a one-line summary per rule.
"""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fractaldim.cli import main  # noqa: E402

OUT = ROOT / "out"


def run():
    OUT.mkdir(exist_ok=True)
    for name in ("koch", "mixed345", "straight"):
        rule = ROOT / "rules" / f"{name}.rule"
        report = OUT / f"verify_{name}.txt"
        code = main([
            "verify", "--rule", str(rule), "--k", "2..7",
            "--out", str(report),
        ])
        verdict = report.read_text().splitlines()[-1]
        print(f"{name:10s} exit={code}  {verdict}")


if __name__ == "__main__":
    run()
