"""Pure-numpy fallback for the hot kernels.

Same call signatures and numerical contracts as the compiled fsaug._kernels
extension; selected by fsaug._backend when the extension is unavailable or
FSAUG_BACKEND=python is set.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"


def fft2d(a: np.ndarray, inverse: bool) -> np.ndarray:
    """Unnormalized forward 2D DFT; inverse divides by N = h*w."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if inverse:
        return np.fft.ifft2(a)
    return np.fft.fft2(a)


def box3(a: np.ndarray) -> np.ndarray:
    """3x3 box filter, edge-clamped borders."""
    p = np.pad(a, 1, mode="edge")
    out = np.zeros_like(a, dtype=np.float64)
    for dy in range(3):
        for dx in range(3):
            out += p[dy : dy + a.shape[0], dx : dx + a.shape[1]]
    return out / 9.0


def _gauss_kernel(sigma: float) -> np.ndarray:
    r = int(math.ceil(3.0 * sigma))
    x = np.arange(-r, r + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(a: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel radius ceil(3*sigma), edge-clamped."""
    k = _gauss_kernel(sigma)
    r = (len(k) - 1) // 2

    def conv1d_rows(m: np.ndarray) -> np.ndarray:
        p = np.pad(m, ((0, 0), (r, r)), mode="edge")
        win = np.lib.stride_tricks.sliding_window_view(p, len(k), axis=1)
        return win @ k

    tmp = conv1d_rows(a.astype(np.float64, copy=False))
    return conv1d_rows(tmp.T).T


def _bilinear_coords(dst: int, src: int):
    x = (np.arange(dst, dtype=np.float64) + 0.5) * (src / dst) - 0.5
    x0 = np.floor(x).astype(np.int64)
    f = x - x0
    lo = np.clip(x0, 0, src - 1)
    hi = np.clip(x0 + 1, 0, src - 1)
    return lo, hi, f


def resize_bilinear_f64(a: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resample with half-pixel-centered mapping, edge-clamped."""
    h, w = a.shape
    yl, yh, fy = _bilinear_coords(out_h, h)
    xl, xh, fx = _bilinear_coords(out_w, w)
    fy = fy[:, None]
    fx = fx[None, :]
    p00 = a[np.ix_(yl, xl)]
    p01 = a[np.ix_(yl, xh)]
    p10 = a[np.ix_(yh, xl)]
    p11 = a[np.ix_(yh, xh)]
    return (1.0 - fy) * ((1.0 - fx) * p00 + fx * p01) + fy * ((1.0 - fx) * p10 + fx * p11)


def resize_bilinear_u8(a: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    h, w, c = a.shape
    out = np.empty((out_h, out_w, c), dtype=np.uint8)
    for ch in range(c):
        v = resize_bilinear_f64(a[:, :, ch].astype(np.float64), out_w, out_h)
        out[:, :, ch] = np.floor(v + 0.5).astype(np.uint8)
    return out
