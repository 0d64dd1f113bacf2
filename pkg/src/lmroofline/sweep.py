"""Parameter sweeps, scaling-law fits, and the CSV report format.

Grid points are enumerated in lexicographic order of the axes as listed:
the first axis varies slowest. Evaluation is pure, so re-running a sweep
reproduces the output byte for byte.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, replace
from math import log

from .configs import (
    DLM_MODES,
    HardwareSpec,
    ModelConfig,
    Scenario,
    WorkloadSpec,
    _check_keys,
    _load_json,
    load_hardware_spec,
    load_model_config,
    validate_workload,
    workload_from_dict,
)
from .errors import ValidationError
from .memory import peak_footprint
from .roofline import classify, end_to_end

AXIS_FIELDS = ("batch", "prompt_len", "gen_len", "steps", "block_size", "dtype_bytes")

CSV_HEADER = (
    "mode,B,Lp,Lg,K,G,flops,bytes,ai,latency_s,throughput_tok_s,bound,peak_mem_bytes,fits"
)


@dataclass(frozen=True)
class SweepGrid:
    """A base workload plus the cartesian axes to sweep over it."""

    model: ModelConfig
    hardware: HardwareSpec
    base: WorkloadSpec
    axes: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        seen = set()
        for name, values in self.axes:
            if name not in AXIS_FIELDS:
                raise ValidationError(
                    f"unknown sweep axis '{name}' (allowed: {', '.join(AXIS_FIELDS)})"
                )
            if name in seen:
                raise ValidationError(f"duplicate sweep axis '{name}'")
            seen.add(name)
            if len(values) == 0:
                raise ValidationError(f"sweep axis '{name}' has no values")


@dataclass(frozen=True)
class SweepRow:
    """One evaluated grid point. Field names match the CSV header."""

    mode: str
    B: int
    Lp: int
    Lg: int
    K: int | None
    G: int | None
    flops: int
    bytes: int
    ai: float
    latency_s: float
    throughput_tok_s: float
    bound: str
    peak_mem_bytes: int
    fits: bool


def grid_from_dict(doc: dict, base_dir: str | None = None) -> SweepGrid:
    """Parse a grid document: the scenario fields plus an `axes` object.

    The base workload is not validated here; omitted `steps` for diffusion
    modes resolves to the per-point gen_len, and a field supplied by an
    axis may be absent from the base.
    """
    if not isinstance(doc, dict):
        raise ValidationError("grid must be a JSON object")
    if "axes" not in doc:
        raise ValidationError("missing field(s) in grid: axes")
    axes_doc = doc["axes"]
    if not isinstance(axes_doc, dict):
        raise ValidationError("axes must be a JSON object of field -> value list")
    axes = []
    for name, values in axes_doc.items():
        if not isinstance(values, list):
            raise ValidationError(f"axis '{name}' must map to a list of values")
        axes.append((name, tuple(values)))

    scenario_doc = {k: v for k, v in doc.items() if k != "axes"}
    _check_keys(
        scenario_doc,
        {"model", "hardware", "mode"},
        {"batch", "prompt_len", "gen_len", "steps", "block_size", "dtype_bytes", "options"},
        "grid",
    )
    model = load_model_config(scenario_doc["model"], base_dir)
    hardware = load_hardware_spec(scenario_doc["hardware"], base_dir)

    axis_names = {name for name, _ in axes}
    workload_doc = {k: v for k, v in scenario_doc.items() if k not in ("model", "hardware")}
    # Placeholders for fields an axis will supply; replaced per point.
    for name in ("batch", "prompt_len", "gen_len"):
        if name not in workload_doc:
            if name not in axis_names and name != "prompt_len":
                raise ValidationError(f"missing field(s) in grid: {name}")
            workload_doc.setdefault(name, 0 if name == "prompt_len" else 1)
    base = workload_from_dict(workload_doc, context="grid")
    if "steps" not in scenario_doc and "steps" not in axis_names:
        # re-resolve per point so steps tracks a swept gen_len
        base = replace(base, steps=None)
    return SweepGrid(model=model, hardware=hardware, base=base, axes=tuple(axes))


def load_grid(path: str) -> SweepGrid:
    return grid_from_dict(_load_json(path), base_dir=os.path.dirname(os.path.abspath(path)))


def _resolve_point(grid: SweepGrid, combo: tuple[int, ...]) -> WorkloadSpec:
    updates = dict(zip((name for name, _ in grid.axes), combo))
    w = replace(grid.base, **updates)
    if w.steps is None and w.mode in DLM_MODES:
        w = replace(w, steps=w.gen_len)
    return w


def evaluate_point(scenario: Scenario) -> SweepRow:
    """Evaluate one scenario into a report row."""
    result = end_to_end(scenario)
    footprint = peak_footprint(scenario)
    w = scenario.workload
    flops = result.flops
    moved = result.bytes
    ai = flops / moved
    return SweepRow(
        mode=w.mode,
        B=w.batch,
        Lp=w.prompt_len,
        Lg=w.gen_len,
        K=w.steps,
        G=w.block_size,
        flops=flops,
        bytes=moved,
        ai=ai,
        latency_s=result.latency_s,
        throughput_tok_s=result.throughput_tok_s,
        bound=classify(ai, scenario.hardware),
        peak_mem_bytes=footprint.total,
        fits=footprint.fits,
    )


def run_sweep(grid: SweepGrid) -> list[SweepRow]:
    """Evaluate every grid point, first listed axis varying slowest."""
    rows = []
    for combo in itertools.product(*(values for _, values in grid.axes)):
        w = _resolve_point(grid, combo)
        point = dict(zip((name for name, _ in grid.axes), combo))
        try:
            validate_workload(w, grid.model)
            rows.append(evaluate_point(Scenario(grid.model, grid.hardware, w)))
        except ValidationError as exc:
            raise ValidationError(f"grid point {point}: {exc}") from exc
    return rows


def fit_scaling_exponent(points: list[tuple[float, float]]) -> float:
    """Least-squares slope of log(y) against log(x).

    Requires at least three points with pairwise-distinct positive x and
    positive y. Exact (to float precision) on pure power laws.
    """
    if len(points) < 3:
        raise ValidationError(f"need at least 3 points to fit (got {len(points)})")
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValidationError("x values must be pairwise distinct")
    for x, y in points:
        if x <= 0 or y <= 0:
            raise ValidationError(f"points must be positive to fit a power law (got {(x, y)})")
    lx = [log(x) for x, _ in points]
    ly = [log(y) for _, y in points]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    sxx = sum((v - mx) ** 2 for v in lx)
    sxy = sum((u - mx) * (v - my) for u, v in zip(lx, ly))
    return sxy / sxx


def _cell(value: int | float | str | bool | None) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def row_to_csv(row: SweepRow) -> str:
    return ",".join(
        (
            row.mode,
            _cell(row.B),
            _cell(row.Lp),
            _cell(row.Lg),
            _cell(row.K),
            _cell(row.G),
            _cell(float(row.flops)),
            _cell(float(row.bytes)),
            _cell(row.ai),
            _cell(row.latency_s),
            _cell(row.throughput_tok_s),
            row.bound,
            _cell(float(row.peak_mem_bytes)),
            _cell(row.fits),
        )
    )


def csv_text(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    lines.extend(row_to_csv(row) for row in rows)
    return "\n".join(lines) + "\n"


def emit_csv(rows: list[SweepRow], path: str) -> None:
    """Write rows to path; floats carry 6 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(csv_text(rows))


def parse_csv(path: str) -> list[SweepRow]:
    """Read back a sweep CSV (values within float-formatting tolerance)."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValidationError(f"not a sweep CSV (bad header) in {path}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(CSV_HEADER.split(",")):
            raise ValidationError(f"malformed CSV row: {line!r}")
        rows.append(
            SweepRow(
                mode=parts[0],
                B=int(parts[1]),
                Lp=int(parts[2]),
                Lg=int(parts[3]),
                K=int(parts[4]) if parts[4] else None,
                G=int(parts[5]) if parts[5] else None,
                flops=int(float(parts[6])),
                bytes=int(float(parts[7])),
                ai=float(parts[8]),
                latency_s=float(parts[9]),
                throughput_tok_s=float(parts[10]),
                bound=parts[11],
                peak_mem_bytes=int(float(parts[12])),
                fits=parts[13] == "true",
            )
        )
    return rows
