"""Analytical roofline performance model for autoregressive and diffusion LM inference."""

from .configs import (
    HW_REGISTRY,
    MODEL_REGISTRY,
    CountingOptions,
    HardwareSpec,
    ModelConfig,
    Scenario,
    WorkloadSpec,
    load_hardware_spec,
    load_model_config,
    load_scenario,
    validate_workload,
)
from .errors import ValidationError
from .kernels import KernelCost, attention_cost, elementwise_bytes, linear_cost
from .memory import (
    MemoryFootprint,
    kv_cache_bytes,
    max_fitting_batch,
    parameter_count,
    peak_footprint,
    weight_bytes,
)
from .phases import (
    PhaseCost,
    arithmetic_intensity,
    arm_decode_cost,
    arm_prefill_cost,
    blockwise_dlm_cost,
    layer_forward_cost,
    naive_dlm_cost,
)
from .roofline import (
    RooflinePoint,
    ScenarioResult,
    classify,
    end_to_end,
    kernel_time,
    phase_latency,
    ridge_point,
)
from .sweep import (
    SweepGrid,
    SweepRow,
    emit_csv,
    fit_scaling_exponent,
    load_grid,
    parse_csv,
    run_sweep,
)
from .svgplot import emit_line_svg, emit_roofline_svg

__all__ = [
    "CountingOptions",
    "HardwareSpec",
    "HW_REGISTRY",
    "KernelCost",
    "MemoryFootprint",
    "ModelConfig",
    "MODEL_REGISTRY",
    "PhaseCost",
    "RooflinePoint",
    "Scenario",
    "ScenarioResult",
    "SweepGrid",
    "SweepRow",
    "ValidationError",
    "WorkloadSpec",
    "arithmetic_intensity",
    "arm_decode_cost",
    "arm_prefill_cost",
    "attention_cost",
    "blockwise_dlm_cost",
    "classify",
    "elementwise_bytes",
    "emit_csv",
    "emit_line_svg",
    "emit_roofline_svg",
    "end_to_end",
    "fit_scaling_exponent",
    "kernel_time",
    "kv_cache_bytes",
    "layer_forward_cost",
    "linear_cost",
    "load_grid",
    "load_hardware_spec",
    "load_model_config",
    "load_scenario",
    "max_fitting_batch",
    "naive_dlm_cost",
    "parameter_count",
    "parse_csv",
    "peak_footprint",
    "phase_latency",
    "ridge_point",
    "run_sweep",
    "validate_workload",
    "weight_bytes",
]
