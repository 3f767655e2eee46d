"""Timing comparison of the compiled and numpy kernel backends.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

The script times ``gram`` and ``gram_grad`` for both families over a
range of problem sizes, re-importing the kernels package once per
backend via the ``TPROC_KERNEL_BACKEND`` environment variable, and
checks that the two implementations agree to floating-point roundoff.
Because the backend is frozen at import time, each backend runs in a
fresh subprocess.
"""

import json
import os
import subprocess
import sys
import textwrap
import time

CASES = [
    # (points, dims, repeats)
    (100, 1, 200),
    (300, 2, 60),
    (600, 4, 20),
    (1000, 8, 8),
]

_WORKER = textwrap.dedent(
    """
    import json, sys, time
    import numpy as np
    from tproc import kernels

    cases = json.loads(sys.argv[1])
    rng = np.random.default_rng(0)
    out = {"backend": kernels.backend_name(), "results": []}
    for n, d, repeats in cases:
        x = rng.uniform(0.0, 5.0, size=(n, d))
        for family in kernels.FAMILIES:
            params = kernels.KernelParams(
                family=family,
                amplitude=1.3,
                lengthscales=rng.uniform(0.5, 2.0, size=d),
                noise=1e-2,
                include_noise=True,
            )
            kernels.gram(params, x)  # warm-up
            t0 = time.perf_counter()
            for _ in range(repeats):
                g = kernels.gram(params, x)
            t_gram = (time.perf_counter() - t0) / repeats
            t0 = time.perf_counter()
            for _ in range(repeats):
                _, grads = kernels.gram_grad(params, x)
            t_grad = (time.perf_counter() - t0) / repeats
            out["results"].append(
                {
                    "n": n,
                    "d": d,
                    "family": family,
                    "gram_ms": 1e3 * t_gram,
                    "grad_ms": 1e3 * t_grad,
                    "gram_sum": float(g.sum()),
                    "grad_sum": float(grads.sum()),
                }
            )
    print(json.dumps(out))
    """
)


def run_backend(backend):
    env = dict(os.environ, TPROC_KERNEL_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", _WORKER, json.dumps(CASES)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    started = time.time()
    compiled = run_backend("compiled")
    numpy_only = run_backend("numpy")
    if compiled["backend"] != "compiled":
        raise SystemExit("compiled backend unavailable; build the extension first")

    header = f"{'case':>14} {'family':>24} {'numpy':>10} {'compiled':>10} {'speedup':>8}"
    print("gram (ms per call)")
    print(header)
    for comp, ref in zip(compiled["results"], numpy_only["results"]):
        assert (comp["n"], comp["d"], comp["family"]) == (ref["n"], ref["d"], ref["family"])
        # identical inputs must give identical sums up to roundoff accumulation
        if abs(comp["gram_sum"] - ref["gram_sum"]) > 1e-9 * max(1.0, abs(ref["gram_sum"])):
            raise SystemExit(f"backend mismatch on {comp}")
        case = f"n={comp['n']} d={comp['d']}"
        print(
            f"{case:>14} {comp['family']:>24} {ref['gram_ms']:>10.3f} "
            f"{comp['gram_ms']:>10.3f} {ref['gram_ms'] / comp['gram_ms']:>7.1f}x"
        )
    print()
    print("gram_grad (ms per call)")
    print(header)
    for comp, ref in zip(compiled["results"], numpy_only["results"]):
        case = f"n={comp['n']} d={comp['d']}"
        print(
            f"{case:>14} {comp['family']:>24} {ref['grad_ms']:>10.3f} "
            f"{comp['grad_ms']:>10.3f} {ref['grad_ms'] / comp['grad_ms']:>7.1f}x"
        )
    print(f"\ntotal benchmark time: {time.time() - started:.1f}s")


if __name__ == "__main__":
    main()
