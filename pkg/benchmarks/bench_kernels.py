"""Compare the compiled kernels against the pure-numpy fallback.

Run as: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from fsaug import _kernels_py

try:
    from fsaug import _kernels
except ImportError:
    _kernels = None


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    cplx = rng.random((256, 256)) + 1j * rng.random((256, 256))
    real = rng.random((512, 512))
    img = rng.integers(0, 256, (512, 512, 3), dtype=np.uint8)

    cases = [
        ("fft2d 256x256", lambda k: k.fft2d(cplx, False)),
        ("box3 512x512", lambda k: k.box3(real)),
        ("gaussian_blur s=3 512x512", lambda k: k.gaussian_blur(real, 3.0)),
        ("resize_u8 512->224", lambda k: k.resize_bilinear_u8(img, 224, 224)),
        ("resize_f64 512->224", lambda k: k.resize_bilinear_f64(real, 224, 224)),
    ]

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("compiled", _kernels))
    else:
        print("compiled extension not built; benchmarking fallback only")

    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for label, call in cases:
        times = [bench(lambda k=mod: call(k), args.repeat) for _, mod in backends]
        row = f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
