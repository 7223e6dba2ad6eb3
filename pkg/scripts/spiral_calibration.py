#!/usr/bin/env python3
"""Calibrate the sausage-slope estimator on the two reference spirals.

The Archimedean spiral must come out near 2 (it fills the plane), the
logarithmic one near 1 (it always looks like one thin arc).  Prints the
per-sample table and the fitted slopes.
"""

import math
import pathlib
import sys
import time

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fractaldim.curvegen import archimedean_spiral, logarithmic_spiral  # noqa: E402
from fractaldim.dims import mf_dimension_estimate_spiral  # noqa: E402


def arch_family(step=1.0, turns=(8, 11, 16, 23, 32, 45, 57)):
    a = step / (2 * math.pi)

    def arclen(theta):
        return 0.5 * a * (theta * math.hypot(1, theta) + math.asinh(theta))

    return [archimedean_spiral(step, arclen(2 * math.pi * m)) for m in turns]


def show(label, est, target):
    print(f"\n{label} (target {target}):")
    for s in est.samples:
        print(f"  L={s.k:12.1f}  logC={s.log_c:8.3f}  logA={s.log_a:8.3f}  "
              f"ratio={s.ratio:.4f}")
    print(f"  slope = {est.slope:.4f}  (fit over last {est.fit_window} samples)")


def run():
    start = time.perf_counter()
    show("archimedean step=1",
         mf_dimension_estimate_spiral(arch_family(), epsilon=1.0), 2.0)
    log_family = [logarithmic_spiral(0.2, t) for t in range(4, 13)]
    show("logarithmic b=0.2",
         mf_dimension_estimate_spiral(log_family, epsilon=1.0), 1.0)
    print(f"\ntotal {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    run()
