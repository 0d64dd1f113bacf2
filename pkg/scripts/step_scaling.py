"""Trade denoising steps for throughput in blockwise diffusion decoding.

Sweeps the step budget K for llada-8b on rtx-a6000 at three prompt lengths
(B=1, Lg=128, G=32). Every halving of K doubles throughput: per-step work is
unchanged when blocks shed steps uniformly, so latency is proportional to K.
The printed K * throughput column is constant per prompt length, which makes
the step budget a pure speed/quality knob in this model.

Writes out/step_scaling.csv and out/step_scaling.svg.
"""

import argparse
from collections import defaultdict
from pathlib import Path

from lmroofline import (
    HW_REGISTRY,
    MODEL_REGISTRY,
    SweepGrid,
    WorkloadSpec,
    emit_csv,
    emit_line_svg,
    run_sweep,
)

PROMPT_LENS = (128, 512, 2048)
STEPS = (128, 64, 32, 16, 4)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", default="out", type=Path)
    args = parser.parse_args()

    base = WorkloadSpec(
        mode="dlm_block", batch=1, prompt_len=128, gen_len=128, steps=128, block_size=32
    )
    grid = SweepGrid(
        model=MODEL_REGISTRY["llada-8b"],
        hardware=HW_REGISTRY["rtx-a6000"],
        base=base,
        axes=(("prompt_len", PROMPT_LENS), ("steps", STEPS)),
    )
    rows = run_sweep(grid)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = args.out_dir / "step_scaling.csv"
    emit_csv(rows, str(csv_path))

    by_prompt = defaultdict(list)
    for row in rows:
        by_prompt[row.Lp].append(row)

    print("blockwise diffusion throughput vs step budget, llada-8b on rtx-a6000")
    print(f"{'Lp':>5} {'K':>4} {'tok/s':>10} {'K * tok/s':>12}")
    series = []
    for lp in PROMPT_LENS:
        for row in by_prompt[lp]:
            print(
                f"{lp:>5} {row.K:>4} {row.throughput_tok_s:>10.2f}"
                f" {row.K * row.throughput_tok_s:>12.1f}"
            )
        series.append(
            (f"prompt_len={lp}", [(r.K, r.throughput_tok_s) for r in by_prompt[lp]])
        )

    svg_path = args.out_dir / "step_scaling.svg"
    emit_line_svg(
        series,
        str(svg_path),
        xlabel="denoising steps K",
        ylabel="throughput (tok/s)",
        title="throughput vs step budget",
    )
    print(f"\nwrote {csv_path} and {svg_path}")


if __name__ == "__main__":
    main()
