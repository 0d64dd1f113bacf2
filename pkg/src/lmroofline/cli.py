"""Command-line interface.

Exit codes: 0 success, 1 validation error (including bad usage),
2 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import sys

from .configs import (
    HW_REGISTRY,
    MODEL_REGISTRY,
    Scenario,
    list_hardware,
    list_models,
    load_scenario,
    validate_workload,
)
from .errors import ValidationError
from .memory import parameter_count, weight_bytes
from .roofline import end_to_end, ridge_point
from .sweep import SweepRow, _resolve_point, emit_csv, evaluate_point, load_grid, run_sweep
from .svgplot import emit_line_svg, emit_roofline_svg


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="lmroofline", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="evaluate one scenario file")
    analyze.add_argument("-c", "--config", required=True, help="scenario JSON file")

    sweep = sub.add_parser("sweep", help="evaluate a grid file to CSV")
    sweep.add_argument("-c", "--config", required=True, help="grid JSON file")
    sweep.add_argument("-o", "--output", required=True, help="output CSV path")

    roofline = sub.add_parser("roofline", help="render a grid's phases on the roofline")
    roofline.add_argument("-c", "--config", required=True, help="grid JSON file")
    roofline.add_argument("-o", "--output", required=True, help="output SVG path")

    plot = sub.add_parser("plot", help="render a metric against the last grid axis")
    plot.add_argument("--kind", required=True, choices=("latency", "throughput", "ai"))
    plot.add_argument("-c", "--config", required=True, help="grid JSON file")
    plot.add_argument("-o", "--output", required=True, help="output SVG path")

    hw = sub.add_parser("hw", help="inspect the hardware registry")
    hw_sub = hw.add_subparsers(dest="action", required=True)
    hw_sub.add_parser("list")
    hw_show = hw_sub.add_parser("show")
    hw_show.add_argument("name")

    model = sub.add_parser("model", help="inspect the model registry")
    model_sub = model.add_subparsers(dest="action", required=True)
    model_sub.add_parser("list")
    model_show = model_sub.add_parser("show")
    model_show.add_argument("name")

    return parser


def _row_json(row: SweepRow) -> str:
    return json.dumps(dataclasses.asdict(row))


def _cmd_analyze(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    row = evaluate_point(scenario)
    width = max(len(f.name) for f in dataclasses.fields(row))
    for f in dataclasses.fields(row):
        value = getattr(row, f.name)
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(f"{f.name:<{width}}  {value}")
    print(_row_json(row))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    rows = run_sweep(load_grid(args.config))
    emit_csv(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def _cmd_roofline(args: argparse.Namespace) -> int:
    grid = load_grid(args.config)
    points = []
    for combo in itertools.product(*(values for _, values in grid.axes)):
        w = _resolve_point(grid, combo)
        point = dict(zip((name for name, _ in grid.axes), combo))
        try:
            validate_workload(w, grid.model)
        except ValidationError as exc:
            raise ValidationError(f"grid point {point}: {exc}") from exc
        result = end_to_end(Scenario(grid.model, grid.hardware, w))
        points.extend(result.points)
    emit_roofline_svg(points, grid.hardware, args.output)
    print(f"wrote {len(points)} points to {args.output}")
    return 0


_PLOT_COLUMNS = {
    "latency": ("latency_s", "latency (s)"),
    "throughput": ("throughput_tok_s", "throughput (tokens/s)"),
    "ai": ("ai", "arithmetic intensity (FLOP/byte)"),
}


def _cmd_plot(args: argparse.Namespace) -> int:
    grid = load_grid(args.config)
    if not grid.axes:
        raise ValidationError("plot requires at least one swept axis")
    rows = run_sweep(grid)
    field, ylabel = _PLOT_COLUMNS[args.kind]
    x_axis = grid.axes[-1][0]
    x_count = len(grid.axes[-1][1])
    series: list[tuple[str, list[tuple[float, float]]]] = []
    series_axes = grid.axes[:-1]
    outer = list(itertools.product(*(values for _, values in series_axes))) or [()]
    for idx, combo in enumerate(outer):
        name = (
            ", ".join(f"{n}={v}" for (n, _), v in zip(series_axes, combo))
            or grid.base.mode
        )
        chunk = rows[idx * x_count : (idx + 1) * x_count]
        pts = [(float(x), float(getattr(r, field))) for x, r in zip(grid.axes[-1][1], chunk)]
        series.append((name, pts))
    emit_line_svg(series, args.output, xlabel=x_axis, ylabel=ylabel,
                  title=f"{args.kind} vs {x_axis}")
    print(f"wrote {args.output}")
    return 0


def _cmd_hw(args: argparse.Namespace) -> int:
    if args.action == "list":
        for name in list_hardware():
            print(name)
        return 0
    if args.name not in HW_REGISTRY:
        raise ValidationError(
            f"unknown hardware '{args.name}' (registry: {', '.join(list_hardware())})"
        )
    hw = HW_REGISTRY[args.name]
    print(hw.name)
    print(f"  peak compute      {hw.peak_flops / 1e12:.4g} TFLOP/s")
    print(f"  memory bandwidth  {hw.mem_bandwidth / 1e9:.4g} GB/s")
    print(f"  memory capacity   {hw.mem_capacity / 1e9:.4g} GB")
    print(f"  ridge point       {ridge_point(hw):.4g} FLOP/byte")
    return 0


def _cmd_model(args: argparse.Namespace) -> int:
    if args.action == "list":
        for name in list_models():
            print(name)
        return 0
    if args.name not in MODEL_REGISTRY:
        raise ValidationError(
            f"unknown model '{args.name}' (registry: {', '.join(list_models())})"
        )
    m = MODEL_REGISTRY[args.name]
    for field in dataclasses.fields(m):
        print(f"  {field.name:<16} {getattr(m, field.name)}")
    print(f"  {'parameters':<16} {parameter_count(m)}")
    print(f"  {'fp16 weights':<16} {weight_bytes(m, 2)} bytes")
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "sweep": _cmd_sweep,
    "roofline": _cmd_roofline,
    "plot": _cmd_plot,
    "hw": _cmd_hw,
    "model": _cmd_model,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
