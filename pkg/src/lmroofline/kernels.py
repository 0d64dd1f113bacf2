"""FLOP and byte counting for the primitive kernels of a transformer forward pass.

Counting conventions, applied uniformly everywhere:

* one multiply-accumulate is 2 FLOPs;
* only GEMM work is counted as FLOPs -- softmax, normalisation and
  activation functions are excluded;
* each operand of a kernel invocation moves exactly once (ideal caching):
  weight matrix, input activations and output activations for a linear
  layer; Q, K, V and the attention output for attention;
* the attention score/probability matrix stays on chip (fused kernel), so
  no q_len x kv_len byte term appears.

All counts are exact Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class KernelCost:
    """Work and traffic of one kernel invocation, or of `n` identical ones.

    Attributes:
        flops: floating point operations performed.
        bytes: bytes moved between HBM and the compute units.
        label: human-readable kernel identifier.
    """

    flops: int
    bytes: int
    label: str = ""

    def __post_init__(self) -> None:
        if self.flops < 0 or self.bytes < 0:
            raise ValidationError(
                f"kernel cost must be nonnegative (flops={self.flops}, bytes={self.bytes})"
            )
        if self.flops > 0 and self.bytes == 0:
            raise ValidationError(f"kernel '{self.label}' computes but moves no data")

    @property
    def ai(self) -> float:
        """Arithmetic intensity in FLOP/byte."""
        if self.bytes == 0:
            raise ValidationError(
                f"arithmetic intensity undefined for zero bytes (kernel '{self.label}')"
            )
        return self.flops / self.bytes

    def scaled(self, count: int) -> "KernelCost":
        """Aggregate cost of `count` back-to-back invocations of this exact kernel."""
        if count < 1:
            raise ValidationError(f"count must be >= 1 (got {count})")
        return KernelCost(self.flops * count, self.bytes * count, self.label)


def _require_at_least_one(**values: int) -> None:
    for name, value in values.items():
        if not isinstance(value, int) or value < 1:
            raise ValidationError(f"{name} must be a positive integer (got {value!r})")


def linear_cost(
    batch: int,
    seq_len: int,
    d_in: int,
    d_out: int,
    dtype_bytes: int,
    label: str | None = None,
) -> KernelCost:
    """Cost of the GEMM x[batch*seq_len, d_in] @ W[d_in, d_out].

    The weight matrix is charged once per invocation, which is what makes a
    one-token decode step weight-traffic dominated.
    """
    _require_at_least_one(
        batch=batch, seq_len=seq_len, d_in=d_in, d_out=d_out, dtype_bytes=dtype_bytes
    )
    flops = 2 * batch * seq_len * d_in * d_out
    moved = dtype_bytes * (d_in * d_out + batch * seq_len * d_in + batch * seq_len * d_out)
    return KernelCost(flops, moved, label or f"linear[{d_in}x{d_out}]")


def attention_pair_count(q_len: int, kv_len: int, causal: bool) -> int:
    """Number of query/key pairs scored.

    Causal counting places the q_len queries at the end of the kv_len key
    range: query i (0-based) sees the first kv_len - q_len + i + 1 keys.
    """
    _require_at_least_one(q_len=q_len, kv_len=kv_len)
    if not causal:
        return q_len * kv_len
    if kv_len < q_len:
        raise ValidationError(
            f"kv_len must be >= q_len for causal attention ({kv_len} < {q_len})"
        )
    return q_len * (kv_len - q_len) + q_len * (q_len + 1) // 2


def attention_cost(
    batch: int,
    num_heads: int,
    num_kv_heads: int,
    head_dim: int,
    q_len: int,
    kv_len: int,
    dtype_bytes: int,
    causal: bool,
    write_new_kv: bool,
    label: str | None = None,
) -> KernelCost:
    """Cost of one fused attention invocation.

    FLOPs cover the QK^T and PV GEMMs (2 FLOPs per multiply-add each).
    Bytes cover reading K and V (num_kv_heads wide under grouped-query
    attention), reading Q, writing the output, and optionally appending the
    q_len new positions to the KV cache.
    """
    _require_at_least_one(
        batch=batch,
        num_heads=num_heads,
        num_kv_heads=num_kv_heads,
        head_dim=head_dim,
        dtype_bytes=dtype_bytes,
    )
    if num_kv_heads > num_heads:
        raise ValidationError(
            f"num_kv_heads must be <= num_heads ({num_kv_heads} > {num_heads})"
        )
    pairs = attention_pair_count(q_len, kv_len, causal)
    flops = 2 * batch * num_heads * head_dim * pairs * 2
    kv_read = 2 * batch * num_kv_heads * kv_len * head_dim
    q_read = batch * num_heads * q_len * head_dim
    out_write = batch * num_heads * q_len * head_dim
    kv_write = 2 * batch * num_kv_heads * q_len * head_dim if write_new_kv else 0
    moved = dtype_bytes * (kv_read + q_read + out_write + kv_write)
    return KernelCost(flops, moved, label or f"attention[q={q_len},kv={kv_len}]")


def elementwise_bytes(
    batch: int, seq_len: int, width: int, passes: int, dtype_bytes: int
) -> KernelCost:
    """Traffic of `passes` read+write sweeps over a [batch, seq_len, width] tensor.

    Elementwise work (residual adds, norms) contributes no GEMM FLOPs under
    the conventions above, so flops is zero. Zero-sized arguments are
    allowed and yield a zero cost.
    """
    for name, value in (
        ("batch", batch),
        ("seq_len", seq_len),
        ("width", width),
        ("passes", passes),
        ("dtype_bytes", dtype_bytes),
    ):
        if not isinstance(value, int) or value < 0:
            raise ValidationError(f"{name} must be a nonnegative integer (got {value!r})")
    moved = passes * 2 * batch * seq_len * width * dtype_bytes
    return KernelCost(0, moved, "elementwise")
