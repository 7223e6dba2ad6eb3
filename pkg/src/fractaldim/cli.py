"""Command-line interface: curve generation, dimension reports, theorem
verification, census dumps, SVG rendering.

Exit codes: 0 success (and all checks hold), 1 usage error, 2 validation or
input failure, 3 budget exceeded, 4 a theorem check failed.  Reports are
plain ``key value`` lines in a stable order, so identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import combin, dims
from .curvegen import (
    Polyline,
    archimedean_spiral,
    contract_iterate,
    expand_iterate,
    length_stats,
    logarithmic_spiral,
    polyline_to_text,
    svg_path_data,
)
from .errors import BudgetError, RuleError
from .model import (
    GeneratorRule,
    distinct_ratios,
    parse_rule,
    ratio_value_index,
    validate_rule,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_THEOREM = 4


@dataclass
class RunConfig:
    command: str
    rule_path: str | None = None
    mode: str = "contract"
    index: int = 1
    k: int = 3
    k_min: int = 2
    k_max: int = 7
    epsilon: float = 1.0
    tol: float = 0.08
    raster_tol: float = 0.01
    budget: int | None = None
    work_budget: int | None = None
    out: str | None = None
    svg: str | None = None
    stroke_width: float | None = None
    canvas: int = 1000
    spiral: str | None = None
    step: float = 1.0
    growth: float = 0.2
    turns: int = 12
    max_length: float = 10000.0
    depth: int = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _k_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN..MAX, got {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError("k range is empty")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fractaldim",
                     description="fractal curve generation and dimensions")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="materialize an iterate")
    gen.add_argument("--rule", required=True)
    gen.add_argument("--mode", choices=("contract", "expand"), default="contract")
    gen.add_argument("--i", type=int, default=1, help="1-based ratio index")
    gen.add_argument("--k", type=int, default=3)
    gen.add_argument("--out", help="write vertices (x y per line)")
    gen.add_argument("--svg", help="write an SVG rendering")
    gen.add_argument("--stroke-width", type=float, default=None)
    gen.add_argument("--canvas", type=int, default=1000)
    gen.add_argument("--budget", type=int, default=None)

    dim = sub.add_parser("dimension", help="dimension report for a rule or spiral")
    dim.add_argument("--rule")
    dim.add_argument("--i", type=int, default=None)
    dim.add_argument("--k", type=_k_range, default=(2, 7), metavar="MIN..MAX")
    dim.add_argument("--epsilon", type=float, default=1.0)
    dim.add_argument("--raster-tol", type=float, default=0.01)
    dim.add_argument("--spiral", choices=("archimedean", "logarithmic"))
    dim.add_argument("--step", type=float, default=1.0)
    dim.add_argument("--max-length", type=float, default=10000.0)
    dim.add_argument("--growth", type=float, default=0.2)
    dim.add_argument("--turns", type=int, default=12)
    dim.add_argument("--out")
    dim.add_argument("--budget", type=int, default=None)

    ver = sub.add_parser("verify", help="run the theorem checks")
    ver.add_argument("--rule", required=True)
    ver.add_argument("--k", type=_k_range, default=(2, 7), metavar="MIN..MAX")
    ver.add_argument("--epsilon", type=float, default=1.0)
    ver.add_argument("--tol", type=float, default=0.08)
    ver.add_argument("--raster-tol", type=float, default=0.01)
    ver.add_argument("--out")
    ver.add_argument("--budget", type=int, default=None)

    cen = sub.add_parser("census", help="dump the segment-length census")
    cen.add_argument("--rule", required=True)
    cen.add_argument("--k", type=int, default=4)
    cen.add_argument("--out")
    return parser


def _load_rule(path: str) -> GeneratorRule:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise RuleError(f"cannot read rule file {path!r}: {exc}") from None
    return parse_rule(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def render_svg(p: Polyline, canvas: int = 1000,
               stroke_width: float | None = None) -> str:
    """SVG document with the viewBox fitted to the curve plus a 5% margin."""
    pts = p.points
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    width = max(x1 - x0, 1e-9)
    height = max(y1 - y0, 1e-9)
    margin = 0.05 * max(width, height)
    if stroke_width is None:
        stroke_width = max(width, height) / 1000.0
    vb = (x0 - margin, y0 - margin, width + 2 * margin, height + 2 * margin)
    scale = canvas / max(width, height)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{canvas}" height="{max(1, round(scale * (y1 - y0)))}" '
        f'viewBox="{vb[0]:.6g} {vb[1]:.6g} {vb[2]:.6g} {vb[3]:.6g}">\n'
        f'<g transform="translate(0 {(vb[1] + vb[1] + vb[3]):.6g}) scale(1 -1)">\n'
        f'<path d="{svg_path_data(p)}" fill="none" stroke="black" '
        f'stroke-width="{stroke_width:.6g}"/>\n'
        "</g>\n</svg>\n"
    )


def cmd_generate(cfg: RunConfig) -> int:
    rule = _load_rule(cfg.rule_path)
    report = validate_rule(rule, depth=min(cfg.depth, max(cfg.k, 1)),
                           budget=cfg.budget)
    if not report.ok:
        for msg in report.messages:
            print(msg, file=sys.stderr)
        return EXIT_VALIDATION
    if cfg.mode == "expand":
        curve = expand_iterate(rule, cfg.index, cfg.k, budget=cfg.budget)
    else:
        curve = contract_iterate(rule, cfg.k, budget=cfg.budget)
    if cfg.out:
        Path(cfg.out).write_text(polyline_to_text(curve))
    if cfg.svg:
        Path(cfg.svg).write_text(
            render_svg(curve, cfg.canvas, cfg.stroke_width)
        )
    stats = length_stats(curve)
    print(f"segments {stats.count}")
    print(f"total_length {stats.total!r}")
    print(f"min_segment {stats.min_seg!r}")
    print(f"max_segment {stats.max_seg!r}")
    return EXIT_OK


def _estimate_lines(label: str, est: dims.DimensionEstimate) -> list[str]:
    lines = []
    for s in est.samples:
        lines.append(
            f"{label}.sample k={s.k!r} logC={s.log_c!r} logA={s.log_a!r} "
            f"ratio={s.ratio!r}"
        )
    lines.append(f"{label}.fit_window {est.fit_window}")
    lines.append(f"{label}.slope {est.slope!r}")
    return lines


def cmd_dimension(cfg: RunConfig) -> int:
    lines = ["report dimension"]
    if cfg.spiral:
        if cfg.spiral == "archimedean":
            a = cfg.step / (2.0 * math.pi)

            def arclen(theta):
                return 0.5 * a * (theta * math.sqrt(1 + theta * theta)
                                  + math.asinh(theta))

            turns = []
            m = 4
            while arclen(2 * math.pi * m) < cfg.max_length:
                turns.append(m)
                m = max(m + 1, round(m * math.sqrt(2)))
            turns.append(m)
            family = [archimedean_spiral(cfg.step, arclen(2 * math.pi * t))
                      for t in turns]
            lines.append(f"spiral archimedean step={cfg.step!r}")
        else:
            family = [logarithmic_spiral(cfg.growth, t)
                      for t in range(max(1, cfg.turns - 8), cfg.turns + 1)]
            lines.append(f"spiral logarithmic growth={cfg.growth!r}")
        est = dims.mf_dimension_estimate_spiral(
            family, cfg.epsilon, tol=cfg.raster_tol, budget=cfg.work_budget
        )
        lines += _estimate_lines("mf", est)
    else:
        if not cfg.rule_path:
            print("dimension needs --rule or --spiral", file=sys.stderr)
            return EXIT_USAGE
        rule = _load_rule(cfg.rule_path)
        lines.append(f"rule {rule.name or Path(cfg.rule_path).stem}")
        lines.append(f"epsilon {cfg.epsilon!r}")
        d_h = dims.hausdorff_dimension(rule.ratios)
        lines.append(f"d_hausdorff {d_h!r}")
        lines.append(
            f"closed_form_resolvable {dims.mf_dimension_resolvable(rule.ratios)!r}"
        )
        indices = [cfg.index] if cfg.index else [
            ratio_value_index(rule, v) for v, _ in distinct_ratios(rule)
        ]
        for idx in indices:
            est = dims.mf_dimension_estimate(
                rule, idx, cfg.epsilon, cfg.k_min, cfg.k_max,
                tol=cfg.raster_tol, budget=cfg.work_budget,
            )
            lines += _estimate_lines(f"mf.i={idx}", est)
        mink = dims.minkowski_dimension_estimate(
            rule, cfg.k_min, cfg.k_max, tol=cfg.raster_tol,
            budget=cfg.work_budget,
        )
        lines.append(f"minkowski.estimate {mink.slope!r}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _combinatorics_hold(rule: GeneratorRule) -> bool:
    for alpha in (1, 2, 3, 5, 10, 25, 50):
        for k in range(2, 21, 2):
            if not combin.half_sum_inequality(alpha, k)[2]:
                return False
    for n in range(2, 7):
        for k in range(2, 21, 2):
            if not combin.majority_short_count(n, k)[2]:
                return False
    n = rule.n_segments
    k = 1
    while n ** (k + 1) <= 2000:
        k += 1
    return (combin.multinomial_census(n, k).entries
            == combin.census_enumerate(rule, k).entries)


def cmd_verify(cfg: RunConfig) -> int:
    rule = _load_rule(cfg.rule_path)
    lines = ["report verify"]
    lines.append(f"rule {rule.name or Path(cfg.rule_path).stem}")
    lines.append(f"epsilon {cfg.epsilon!r}")
    lines.append(f"k_min {cfg.k_min}")
    lines.append(f"k_max {cfg.k_max}")
    lines.append(f"tolerance {cfg.tol!r}")
    failed = False

    t1 = dims.verify_theorem1(
        rule, cfg.epsilon, cfg.k_min, cfg.k_max, tol=cfg.tol,
        raster_tol=cfg.raster_tol, budget=cfg.work_budget,
    )
    lines.append(f"theorem1 {'holds' if t1.holds else 'FAILED'}")
    for key, value in t1.details:
        lines.append(f"theorem1.{key} {value!r}")
    failed |= not t1.holds

    try:
        t2 = dims.verify_theorem2(
            rule, cfg.epsilon, cfg.k_min, cfg.k_max, tol=cfg.tol,
            raster_tol=cfg.raster_tol, budget=cfg.work_budget,
        )
        lines.append(f"theorem2 {'holds' if t2.holds else 'FAILED'}")
        for key, value in t2.details:
            lines.append(f"theorem2.{key} {value!r}")
        failed |= not t2.holds
    except ValueError as exc:
        lines.append(f"theorem2 skipped ({exc})")

    comb_ok = _combinatorics_hold(rule)
    lines.append(f"combinatorics {'holds' if comb_ok else 'FAILED'}")
    failed |= not comb_ok

    lines.append(f"overall {'holds' if not failed else 'FAILED'}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_THEOREM if failed else EXIT_OK


def cmd_census(cfg: RunConfig) -> int:
    rule = _load_rule(cfg.rule_path)
    table = combin.census_enumerate(rule, cfg.k)
    reference = combin.multinomial_census(rule.n_segments, cfg.k)
    header = (
        f"census n={rule.n_segments} k={cfg.k} total={table.total()} "
        f"matches_multinomial={table.entries == reference.entries}\n"
    )
    _emit(header + table.to_text(), cfg.out)
    return EXIT_OK


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.rule_path = getattr(args, "rule", None)
    cfg.out = getattr(args, "out", None)
    cfg.budget = getattr(args, "budget", None)
    cfg.work_budget = getattr(args, "budget", None)
    if args.command == "generate":
        cfg.mode = args.mode
        cfg.index = args.i
        cfg.k = args.k
        cfg.svg = args.svg
        cfg.stroke_width = args.stroke_width
        cfg.canvas = args.canvas
    elif args.command == "dimension":
        cfg.index = args.i
        cfg.k_min, cfg.k_max = args.k
        cfg.epsilon = args.epsilon
        cfg.raster_tol = args.raster_tol
        cfg.spiral = args.spiral
        cfg.step = args.step
        cfg.max_length = args.max_length
        cfg.growth = args.growth
        cfg.turns = args.turns
    elif args.command == "verify":
        cfg.k_min, cfg.k_max = args.k
        cfg.epsilon = args.epsilon
        cfg.tol = args.tol
        cfg.raster_tol = args.raster_tol
    elif args.command == "census":
        cfg.k = args.k
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    cfg = _config_from_args(args)
    handlers = {
        "generate": cmd_generate,
        "dimension": cmd_dimension,
        "verify": cmd_verify,
        "census": cmd_census,
    }
    try:
        return handlers[cfg.command](cfg)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RuleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
