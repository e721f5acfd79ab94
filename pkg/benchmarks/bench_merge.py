"""Compare the compiled and numpy merge backends.

    python benchmarks/bench_merge.py [--repeat 5] [--factor 8]

Times one full-canvas merge of the flagship final round (15 windows) and one
end-to-end oracle outpaint, for each backend, and checks the outputs agree
bitwise.
"""

import argparse
import importlib
import os
import time

import numpy as np

from tilecanvas import kernels
from tilecanvas.blending import gaussian_weights, merge_windows
from tilecanvas.diffusion import oracle_denoiser
from tilecanvas.geometry import PlanConfig, Rect, plan_rounds
from tilecanvas.pipeline import PipelineConfig, outpaint


def use_backend(name):
    if name == "python":
        os.environ["TILECANVAS_PURE_PYTHON"] = "1"
    else:
        os.environ.pop("TILECANVAS_PURE_PYTHON", None)
    importlib.reload(kernels)
    return kernels.BACKEND


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--factor", type=int, default=8, help="codec factor (1 = pixel-sized latents)")
    ap.add_argument("--frames", type=int, default=4)
    args = ap.parse_args()

    f = args.factor
    plan_cfg = PlanConfig(Rect(0, 0, 2048, 1152), Rect(768, 320, 512, 512), 512, 128)
    rects = [w.scaled_down(f) for w in plan_rounds(plan_cfg, f)[-1].windows]
    H, W = 1152 // f, 2048 // f
    rng = np.random.default_rng(0)
    wins = [(r, rng.standard_normal((args.frames, 4, r.h, r.w)).astype(np.float32)) for r in rects]
    weights = gaussian_weights(rects[0].h, rects[0].w, rects[0].w / 4)
    target = rng.standard_normal((args.frames, 4, H, W)).astype(np.float32)
    s = plan_cfg.source.scaled_down(f)
    source = target[:, :, s.y : s.y1, s.x : s.x1].copy()
    pipe = PipelineConfig(plan=plan_cfg, codec_factor=f, seed=0)

    results = {}
    print(f"canvas latent {args.frames}x4x{H}x{W}, {len(rects)} windows, factor {f}")
    for name in ("cython", "python"):
        got = use_backend(name)
        if got != name:
            print(f"{name:>7}: backend unavailable (got {got}), skipped")
            continue
        t_merge, merged = best_of(lambda: merge_windows((args.frames, 4, H, W), wins, weights), args.repeat)
        t_e2e, out = best_of(lambda: outpaint(source, pipe, oracle_denoiser(target, pipe.schedule())), 1)
        results[name] = (merged, out)
        print(f"{name:>7}: merge {t_merge * 1e3:8.2f} ms   outpaint (40 steps) {t_e2e:6.2f} s")
    if len(results) == 2:
        same = all(a.tobytes() == b.tobytes() for a, b in zip(results["cython"], results["python"]))
        print(f"bitwise identical across backends: {same}")
    use_backend("cython")


if __name__ == "__main__":
    main()
