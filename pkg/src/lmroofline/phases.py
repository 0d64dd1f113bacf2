"""Per-phase cost assembly for the three decoding strategies.

A phase is a bag of kernel invocations. Identical invocations (the same
kernel repeated across layers or steps) are aggregated into one breakdown
entry via `KernelCost.scaled`, which is exact for both totals and roofline
time because per-kernel time is homogeneous in (flops, bytes). Kernels with
different shapes -- e.g. decode attention, whose KV length grows every
step -- are kept as separate entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from .configs import CountingOptions, ModelConfig
from .errors import ValidationError
from .kernels import KernelCost, attention_cost, elementwise_bytes, linear_cost

PHASES = ("arm_prefill", "arm_decode", "dlm_naive", "dlm_block")

# Read+write sweeps over the hidden state charged per layer when
# count_elementwise_bytes is on: two norms and two residual adds.
ELEMENTWISE_PASSES_PER_LAYER = 4

Breakdown = tuple[tuple[str, KernelCost], ...]


@dataclass(frozen=True)
class PhaseCost:
    """Aggregate work of one decoding phase.

    Attributes:
        phase: one of PHASES.
        flops: total FLOPs, always the exact sum over the breakdown.
        bytes: total bytes moved, likewise.
        breakdown: (label, KernelCost) entries; an entry may aggregate many
            identical invocations.
        steps: number of model forward passes the phase represents.
    """

    phase: str
    flops: int
    bytes: int
    breakdown: Breakdown
    steps: int

    def __post_init__(self) -> None:
        if self.phase not in PHASES:
            raise ValidationError(f"phase must be one of {PHASES} (got {self.phase!r})")
        if self.steps < 1:
            raise ValidationError(f"steps must be >= 1 (got {self.steps})")
        flops = sum(k.flops for _, k in self.breakdown)
        moved = sum(k.bytes for _, k in self.breakdown)
        if flops != self.flops or moved != self.bytes:
            raise ValidationError(
                f"phase totals disagree with breakdown "
                f"(flops {self.flops} vs {flops}, bytes {self.bytes} vs {moved})"
            )


def _make_phase(phase: str, entries: list[tuple[str, KernelCost]], steps: int) -> PhaseCost:
    return PhaseCost(
        phase=phase,
        flops=sum(k.flops for _, k in entries),
        bytes=sum(k.bytes for _, k in entries),
        breakdown=tuple(entries),
        steps=steps,
    )


def arithmetic_intensity(cost: PhaseCost | KernelCost) -> float:
    """FLOP/byte ratio of a phase or kernel."""
    if cost.bytes == 0:
        raise ValidationError("arithmetic intensity undefined for zero bytes")
    return cost.flops / cost.bytes


def _per_layer_core(
    model: ModelConfig, batch: int, q_len: int, dtype_bytes: int, opts: CountingOptions
) -> list[tuple[str, KernelCost]]:
    """Single-layer kernels except attention, for one forward of q_len tokens."""
    d = model.d_model
    kv_dim = model.num_kv_heads * model.head_dim
    entries = [
        ("q_proj", linear_cost(batch, q_len, d, d, dtype_bytes)),
        ("k_proj", linear_cost(batch, q_len, d, kv_dim, dtype_bytes)),
        ("v_proj", linear_cost(batch, q_len, d, kv_dim, dtype_bytes)),
        ("out_proj", linear_cost(batch, q_len, d, d, dtype_bytes)),
    ]
    if model.mlp_kind == "swiglu":
        entries.append(("mlp_gate", linear_cost(batch, q_len, d, model.ffn_dim, dtype_bytes)))
        entries.append(("mlp_up", linear_cost(batch, q_len, d, model.ffn_dim, dtype_bytes)))
    else:
        entries.append(("mlp_up", linear_cost(batch, q_len, d, model.ffn_dim, dtype_bytes)))
    entries.append(("mlp_down", linear_cost(batch, q_len, model.ffn_dim, d, dtype_bytes)))
    if opts.count_elementwise_bytes:
        entries.append(
            (
                "elementwise",
                elementwise_bytes(batch, q_len, d, ELEMENTWISE_PASSES_PER_LAYER, dtype_bytes),
            )
        )
    return entries


def _attention_kernel(
    model: ModelConfig,
    batch: int,
    q_len: int,
    kv_len: int,
    dtype_bytes: int,
    causal: bool,
    write_new_kv: bool,
    opts: CountingOptions,
) -> KernelCost:
    # With causal_exact off, causal passes fall back to the full q_len x
    # kv_len rectangle, which is the same pair count as non-causal.
    effective_causal = causal and opts.causal_exact
    return attention_cost(
        batch,
        model.num_heads,
        model.num_kv_heads,
        model.head_dim,
        q_len,
        kv_len,
        dtype_bytes,
        effective_causal,
        write_new_kv,
    )


def layer_forward_cost(
    model: ModelConfig,
    batch: int,
    q_len: int,
    kv_len: int,
    dtype_bytes: int,
    causal: bool,
    write_new_kv: bool,
    opts: CountingOptions,
) -> list[tuple[str, KernelCost]]:
    """Kernels of one full-model forward over q_len query tokens.

    Returns breakdown entries already scaled by num_layers, plus the LM head
    once when opts.include_lm_head is set.
    """
    entries = [
        (label, kernel.scaled(model.num_layers))
        for label, kernel in _per_layer_core(model, batch, q_len, dtype_bytes, opts)
    ]
    attn = _attention_kernel(model, batch, q_len, kv_len, dtype_bytes, causal, write_new_kv, opts)
    entries.insert(4, ("attention", attn.scaled(model.num_layers)))
    if opts.include_lm_head:
        entries.append(
            ("lm_head", linear_cost(batch, q_len, model.d_model, model.vocab_size, dtype_bytes))
        )
    return entries


def _require_causal_capable(model: ModelConfig, phase: str) -> None:
    if model.attention_kind == "bidirectional_only":
        raise ValidationError(
            f"model '{model.name}' has attention_kind bidirectional_only "
            f"and cannot run {phase}"
        )


def arm_prefill_cost(
    model: ModelConfig,
    batch: int,
    prompt_len: int,
    dtype_bytes: int,
    opts: CountingOptions | None = None,
) -> PhaseCost:
    """One causal pass over the prompt, writing the KV cache."""
    opts = opts or CountingOptions()
    _require_causal_capable(model, "arm_prefill")
    if prompt_len < 1:
        raise ValidationError(f"prompt_len must be >= 1 for prefill (got {prompt_len})")
    entries = layer_forward_cost(
        model, batch, prompt_len, prompt_len, dtype_bytes, causal=True, write_new_kv=True, opts=opts
    )
    return _make_phase("arm_prefill", entries, steps=1)


def arm_decode_cost(
    model: ModelConfig,
    batch: int,
    prompt_len: int,
    gen_len: int,
    dtype_bytes: int,
    opts: CountingOptions | None = None,
) -> PhaseCost:
    """gen_len single-token steps against a growing KV cache.

    Step t processes one query token against prompt_len + t cached
    positions (the new token's KV entry is written during the step).
    Weights are re-read every step, so the per-step linear traffic never
    amortizes.
    """
    opts = opts or CountingOptions()
    _require_causal_capable(model, "arm_decode")
    if gen_len < 1:
        raise ValidationError(f"gen_len must be >= 1 (got {gen_len})")
    if prompt_len < 0:
        raise ValidationError(f"prompt_len must be >= 0 (got {prompt_len})")
    entries = [
        (label, kernel.scaled(model.num_layers * gen_len))
        for label, kernel in _per_layer_core(model, batch, 1, dtype_bytes, opts)
    ]
    for t in range(1, gen_len + 1):
        attn = _attention_kernel(
            model, batch, 1, prompt_len + t, dtype_bytes, causal=False, write_new_kv=True, opts=opts
        )
        entries.append((f"attention[kv={prompt_len + t}]", attn.scaled(model.num_layers)))
    if opts.include_lm_head:
        head = linear_cost(batch, 1, model.d_model, model.vocab_size, dtype_bytes)
        entries.append(("lm_head", head.scaled(gen_len)))
    return _make_phase("arm_decode", entries, steps=gen_len)


def naive_dlm_cost(
    model: ModelConfig,
    batch: int,
    prompt_len: int,
    gen_len: int,
    steps: int,
    dtype_bytes: int,
    opts: CountingOptions | None = None,
) -> PhaseCost:
    """steps bidirectional passes over the full prompt+generation sequence.

    No KV cache exists in this mode: every step recomputes attention over
    all prompt_len + gen_len positions and writes nothing back.
    """
    opts = opts or CountingOptions()
    if steps < 1:
        raise ValidationError(f"steps must be >= 1 (got {steps})")
    if gen_len < 1:
        raise ValidationError(f"gen_len must be >= 1 (got {gen_len})")
    if prompt_len < 0:
        raise ValidationError(f"prompt_len must be >= 0 (got {prompt_len})")
    total = prompt_len + gen_len
    one_pass = layer_forward_cost(
        model, batch, total, total, dtype_bytes, causal=False, write_new_kv=False, opts=opts
    )
    entries = [(label, kernel.scaled(steps)) for label, kernel in one_pass]
    return _make_phase("dlm_naive", entries, steps=steps)


def blockwise_dlm_cost(
    model: ModelConfig,
    batch: int,
    prompt_len: int,
    gen_len: int,
    steps: int,
    block_size: int,
    dtype_bytes: int,
    opts: CountingOptions | None = None,
    full_kv: bool = False,
) -> PhaseCost:
    """Semi-autoregressive diffusion decoding over cached earlier blocks.

    The generation is split into ceil(gen_len / block_size) blocks decoded
    left to right; the step budget is spread as evenly as possible, with the
    first (steps mod blocks) blocks taking one extra step. A refinement step
    of block j processes its tokens as queries against the prompt, the
    finished blocks, and the block itself. `full_kv=True` instead charges
    attention against the full prompt+generation length every step (the
    suffix of still-masked blocks is treated as cached too), which is the
    convention the asymptotic counts assume.

    With opts.include_cache_refresh, one full bidirectional pass over
    everything decoded so far is added after each block to rebuild the
    cache; that pass is the only KV write in this mode.
    """
    opts = opts or CountingOptions()
    if gen_len < 1:
        raise ValidationError(f"gen_len must be >= 1 (got {gen_len})")
    if prompt_len < 0:
        raise ValidationError(f"prompt_len must be >= 0 (got {prompt_len})")
    if block_size < 1:
        raise ValidationError(f"block_size must be >= 1 (got {block_size})")
    if block_size > gen_len:
        raise ValidationError(
            f"block size exceeds generation length (block_size {block_size} > gen_len {gen_len})"
        )
    num_blocks = ceil(gen_len / block_size)
    if steps < num_blocks:
        raise ValidationError(
            f"fewer steps than blocks ({steps} < {num_blocks}); "
            "every block needs at least one refinement step"
        )
    steps_per_block, extra = divmod(steps, num_blocks)
    entries: list[tuple[str, KernelCost]] = []
    for j in range(num_blocks):
        width = min(block_size, gen_len - j * block_size)
        block_steps = steps_per_block + (1 if j < extra else 0)
        kv_len = prompt_len + gen_len if full_kv else prompt_len + j * block_size + width
        for label, kernel in _per_layer_core(model, batch, width, dtype_bytes, opts):
            entries.append((f"block{j}:{label}", kernel.scaled(model.num_layers * block_steps)))
        attn = _attention_kernel(
            model, batch, width, kv_len, dtype_bytes, causal=False, write_new_kv=False, opts=opts
        )
        entries.append(
            (f"block{j}:attention[kv={kv_len}]", attn.scaled(model.num_layers * block_steps))
        )
        if opts.include_lm_head:
            head = linear_cost(batch, width, model.d_model, model.vocab_size, dtype_bytes)
            entries.append((f"block{j}:lm_head", head.scaled(block_steps)))
    total_steps = steps
    if opts.include_cache_refresh:
        for j in range(num_blocks):
            covered = prompt_len + min((j + 1) * block_size, gen_len)
            refresh = layer_forward_cost(
                model, batch, covered, covered, dtype_bytes,
                causal=False, write_new_kv=True, opts=opts,
            )
            entries.extend((f"refresh{j}:{label}", kernel) for label, kernel in refresh)
        total_steps += num_blocks
    return _make_phase("dlm_block", entries, steps=total_steps)
