"""Time the convolution kernel backends on model-sized workloads.

Runs the three convolution primitives (forward, weight gradient, input
gradient) on every layer shape the default network executes, once per
available backend, and prints best-of-N wall times.  The results back
the "auto" backend choice in seizcast.net.kernels: at these tensor
sizes the BLAS-backed tensordot contractions of the python backend beat
the compiled per-cell loops, so "auto" resolves to "python".

Usage:
    python3 benchmarks/bench_kernels.py [--repeats N] [--n-filters M]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from seizcast.net.conv import same_padding
from seizcast.net.kernels import (
    available_backends,
    conv3d_valid_forward,
    conv3d_valid_grad_w,
    conv3d_valid_grad_x,
    set_backend,
)
from seizcast.net.model import BRANCH_DILATIONS, LAYER_POOLS, ModelConfig

INPUT_SHAPE = (18, 128, 59)


def layer_cases(n_filters: int) -> list[dict]:
    """One entry per (branch, layer) conv call of the default network.

    Shapes mirror the real call sites: the input is the zero-padded
    stage tensor, so 'valid' convolution preserves the stage shape.
    """
    cfg = ModelConfig(input_shape=INPUT_SHAPE, n_filters=n_filters, seed=0)
    cases = []
    for branch in range(cfg.n_branches):
        spatial = INPUT_SHAPE
        for layer, spec in enumerate(cfg.branch_specs(branch)):
            padded = tuple(
                n + sum(same_padding(e)) for n, e in zip(spatial, spec.extents)
            )
            cases.append(
                {
                    "name": f"b{branch} l{layer} d={spec.dilation}",
                    "x_shape": (spec.in_maps, *padded),
                    "w_shape": spec.weight_shape,
                    "out_shape": (spec.n_filters, *spatial),
                    "kernel": spec.kernel,
                    "dilation": spec.dilation,
                }
            )
            spatial = tuple(n // p for n, p in zip(spatial, LAYER_POOLS[layer]))
    return cases


def best_of(fn, repeats: int) -> float:
    fn()  # warmup
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def time_case(case: dict, repeats: int, rng: np.random.Generator) -> dict:
    x = rng.standard_normal(case["x_shape"])
    w = rng.standard_normal(case["w_shape"])
    g = rng.standard_normal(case["out_shape"])
    return {
        "forward": best_of(
            lambda: conv3d_valid_forward(x, w, case["dilation"]), repeats
        ),
        "grad_w": best_of(
            lambda: conv3d_valid_grad_w(x, g, case["kernel"], case["dilation"]),
            repeats,
        ),
        "grad_x": best_of(
            lambda: conv3d_valid_grad_x(w, g, case["x_shape"], case["dilation"]),
            repeats,
        ),
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--n-filters", type=int, default=8)
    args = parser.parse_args()

    backends = available_backends()
    cases = layer_cases(args.n_filters)
    results: dict[str, list[dict]] = {}
    for backend in backends:
        set_backend(backend)
        rng = np.random.default_rng(0)
        results[backend] = [time_case(c, args.repeats, rng) for c in cases]
    set_backend("auto")

    print(
        f"conv kernel timings, n_filters={args.n_filters}, "
        f"input {INPUT_SHAPE}, best of {args.repeats} (ms)"
    )
    header = f"{'case':<22}{'primitive':<10}" + "".join(
        f"{b:>10}" for b in backends
    )
    print(header)
    print("-" * len(header))
    totals = {b: 0.0 for b in backends}
    for i, case in enumerate(cases):
        for prim in ("forward", "grad_w", "grad_x"):
            row = f"{case['name']:<22}{prim:<10}"
            for backend in backends:
                ms = results[backend][i][prim] * 1e3
                totals[backend] += ms
                row += f"{ms:>10.3f}"
            print(row)
    print("-" * len(header))
    print(
        f"{'total':<32}"
        + "".join(f"{totals[b]:>10.1f}" for b in backends)
    )
    if len(backends) > 1:
        fastest = min(totals, key=totals.get)
        print(f"\nfastest overall: {fastest}")
    else:
        print("\nonly one backend available; build the extension to compare")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
