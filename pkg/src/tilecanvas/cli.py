"""Command line entry point: ``tilecanvas <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import metrics
from .codecs import CODECS, get_codec
from .diffusion import CFG_SCALE, INFERENCE_STEPS, oracle_denoiser, procedural_denoiser
from .errors import InvalidConfigError, TileCanvasError
from .executor import MEASURED_GPUS, MEASURED_RUNTIME_MIN, schedule_table
from .geometry import PlanConfig, Rect, plan_rounds
from .io import read_volume, write_volume
from .pipeline import PipelineConfig, SamplerConfig, derive_rng, outpaint, sample_training_windows

log = logging.getLogger("tilecanvas")


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("FYC_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InvalidConfigError(f"FYC_SEED must be an integer, got {env!r}") from None


def _centered(canvas_w: int, canvas_h: int, w: int, h: int, x: int | None, y: int | None) -> Rect:
    if x is None:
        x = (canvas_w - w) // 2
    if y is None:
        y = (canvas_h - h) // 2
    return Rect(x, y, w, h)


def cmd_plan(args) -> int:
    source = _centered(args.canvas_w, args.canvas_h, args.source_w, args.source_h, args.source_x, args.source_y)
    cfg = PlanConfig(Rect(0, 0, args.canvas_w, args.canvas_h), source, args.window, args.min_overlap)
    plan = plan_rounds(cfg, args.codec_factor)
    print(plan.to_json(indent=None if args.compact else 2))
    return 0


def synthetic_target(seed: int, shape: tuple[int, ...]) -> np.ndarray:
    """Smooth seeded field for the oracle denoiser when no target file is given."""
    F, C, H, W = shape
    rng = derive_rng(seed, "synthetic-target")
    yy, xx = np.meshgrid(np.linspace(0, 1, H), np.linspace(0, 1, W), indexing="ij")
    out = np.empty(shape, dtype=np.float64)
    for c in range(C):
        fy, fx, ph = rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0), rng.uniform(0, 2 * np.pi)
        base = 0.5 + 0.4 * np.sin(2 * np.pi * (fy * yy + fx * xx) + ph)
        for f in range(F):
            out[f, c] = base * (1.0 - 0.02 * f)
    return out.astype(np.float32)


def cmd_outpaint(args) -> int:
    codec = get_codec(args.codec)
    seed = _seed(args.seed)
    pixels = read_volume(args.input)
    F, C, sh, sw = pixels.shape
    canvas = Rect(0, 0, args.canvas_w, args.canvas_h)
    source = _centered(args.canvas_w, args.canvas_h, sw, sh, args.source_x, args.source_y)
    cfg = PipelineConfig(
        plan=PlanConfig(canvas, source, args.window, args.min_overlap),
        steps=args.steps,
        cfg_scale=args.cfg,
        seed=seed,
        codec_factor=codec.factor,
        repaint_each_step=args.repaint,
    )
    cfg.validate()
    src_lat = codec.encode(pixels)
    if args.denoiser == "oracle":
        if args.target:
            target = codec.encode(read_volume(args.target))
        else:
            target = synthetic_target(seed, (F, C, canvas.h // codec.factor, canvas.w // codec.factor))
            lat = source.scaled_down(codec.factor)
            target[:, :, lat.y : lat.y1, lat.x : lat.x1] = src_lat
        expected = (F, C, canvas.h // codec.factor, canvas.w // codec.factor)
        if target.shape != expected:
            raise InvalidConfigError(f"target latent {target.shape} does not match canvas {expected}")
        denoiser = oracle_denoiser(target, cfg.schedule())
    else:
        denoiser = procedural_denoiser(seed)
    latent = outpaint(src_lat, cfg, denoiser, workers=args.workers)
    out = codec.decode(latent)
    out[:, :, source.y : source.y1, source.x : source.x1] = pixels
    write_volume(args.output, out)
    print(json.dumps({"output": str(args.output), "shape": list(out.shape), "rounds": len(cfg.round_plan())}))
    return 0


def cmd_metrics(args) -> int:
    a, b = read_volume(args.a), read_volume(args.b)
    fn = metrics.psnr if args.metric == "psnr" else metrics.ssim
    print(f"{args.metric} {fn(a, b, peak=args.peak):.6f}")
    return 0


def cmd_simulate(args) -> int:
    print("windows workers makespan speedup efficiency")
    for k, w, m, s, e in schedule_table(args.windows, args.workers, args.per_window_cost):
        print(f"{k:7d} {w:7d} {m:8g} {s:7.3f} {e:10.3f}")
    if args.measured:
        print()
        print("measured (minutes) vs ideal bound, 15 windows per step assumed for 2048x1152")
        for (cw, ch), times in MEASURED_RUNTIME_MIN.items():
            speedups = " ".join(f"{g}gpu={times[0] / t:.2f}x" for g, t in zip(MEASURED_GPUS, times))
            print(f"{cw}x{ch}: {speedups}")
    return 0


def cmd_sample(args) -> int:
    rng = derive_rng(_seed(args.seed), "sampler")
    extent = Rect(0, 0, args.extent_w, args.extent_h)
    cfg = SamplerConfig(args.anchor_min, args.anchor_max, args.target_side, args.min_overlap)
    for _ in range(args.count):
        s = sample_training_windows(extent, cfg, rng)
        print(json.dumps({"anchor": s.anchor.as_list(), "target": s.target.as_list(), "clamped": s.clamped}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tilecanvas", description="Tiled video outpainting engine.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def geometry_args(sp, with_source_size: bool):
        sp.add_argument("--canvas-w", type=int, default=2048)
        sp.add_argument("--canvas-h", type=int, default=1152)
        sp.add_argument("--source-x", type=int, default=None, help="default: centered")
        sp.add_argument("--source-y", type=int, default=None, help="default: centered")
        if with_source_size:
            sp.add_argument("--source-w", type=int, default=512)
            sp.add_argument("--source-h", type=int, default=512)
        sp.add_argument("--window", type=int, default=512)
        sp.add_argument("--min-overlap", type=int, default=128)

    sp = sub.add_parser("plan", help="print the round plan as JSON")
    geometry_args(sp, with_source_size=True)
    sp.add_argument("--codec-factor", type=int, default=1)
    sp.add_argument("--compact", action="store_true")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("outpaint", help="outpaint a FYCT volume")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    geometry_args(sp, with_source_size=False)
    sp.add_argument("--steps", type=int, default=INFERENCE_STEPS)
    sp.add_argument("--cfg", type=float, default=CFG_SCALE)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--seed", type=int, default=None, help="falls back to $FYC_SEED, then 0")
    sp.add_argument("--denoiser", choices=["oracle", "procedural"], default="oracle")
    sp.add_argument("--codec", choices=sorted(CODECS), default="passthrough")
    sp.add_argument("--target", default=None, help="full-canvas volume for the oracle denoiser")
    sp.add_argument("--repaint", action="store_true", help="re-noise known content after every step")
    sp.set_defaults(func=cmd_outpaint)

    sp = sub.add_parser("metrics", help="PSNR or SSIM between two volumes")
    sp.add_argument("metric", choices=["psnr", "ssim"])
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--peak", type=float, default=1.0)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("simulate-schedule", help="makespan table for the ideal worker-pool model")
    sp.add_argument("--windows", type=int, nargs="+", default=[15])
    sp.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4, 8])
    sp.add_argument("--per-window-cost", type=float, default=1.0)
    sp.add_argument("--measured", action="store_true", help="also print measured multi-GPU speedups")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sample-windows", help="draw training anchor/target pairs as JSON lines")
    sp.add_argument("--extent-w", type=int, default=1536)
    sp.add_argument("--extent-h", type=int, default=1536)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--anchor-min", type=int, default=512)
    sp.add_argument("--anchor-max", type=int, default=1536)
    sp.add_argument("--target-side", type=int, default=512)
    sp.add_argument("--min-overlap", type=int, default=128)
    sp.set_defaults(func=cmd_sample)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (TileCanvasError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
