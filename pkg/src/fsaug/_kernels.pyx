# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: radix-2 FFT, box/Gaussian blur, bilinear resize.

Numerical contracts match fsaug._kernels_py; the backend selector prefers
this module when the extension built.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, exp, floor

cnp.import_array()

BACKEND_NAME = "compiled"


cdef extern from "math.h":
    double c_cos "cos"(double)
    double c_sin "sin"(double)


cdef void _fft1d(double complex* buf, Py_ssize_t n, Py_ssize_t stride, bint inverse) noexcept:
    # Iterative radix-2 Cooley-Tukey with bit-reversal permutation.
    cdef Py_ssize_t i, j, bit, length, half, k, base
    cdef double complex tmp, w, wstep, u, v
    cdef double ang
    cdef double PI = 3.141592653589793238462643383279502884

    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = buf[i * stride]
            buf[i * stride] = buf[j * stride]
            buf[j * stride] = tmp

    length = 2
    while length <= n:
        ang = (2.0 * PI / length) * (1.0 if inverse else -1.0)
        half = length >> 1
        for base in range(0, n, length):
            w = 1.0 + 0.0j
            for k in range(half):
                # twiddle recomputed from angle to bound error drift
                wstep.real = c_cos(ang * k)
                wstep.imag = c_sin(ang * k)
                u = buf[(base + k) * stride]
                v = buf[(base + k + half) * stride] * wstep
                buf[(base + k) * stride] = u + v
                buf[(base + k + half) * stride] = u - v
        length <<= 1


def fft2d(a, bint inverse):
    """Unnormalized forward 2D DFT; inverse divides by N = h*w."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.ascontiguousarray(a, dtype=np.complex128).copy()
    cdef Py_ssize_t h = arr.shape[0], w = arr.shape[1]
    cdef Py_ssize_t r, c
    cdef double complex* data = <double complex*> arr.data
    for r in range(h):
        _fft1d(data + r * w, w, 1, inverse)
    for c in range(w):
        _fft1d(data + c, h, w, inverse)
    if inverse:
        arr /= <double>(h * w)
    return arr


def box3(double[:, :] a):
    """3x3 box filter, edge-clamped borders."""
    cdef Py_ssize_t h = a.shape[0], w = a.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((h, w), dtype=np.float64)
    cdef double[:, :] o = out
    cdef Py_ssize_t y, x, dy, dx, yy, xx
    cdef double s
    for y in range(h):
        for x in range(w):
            s = 0.0
            for dy in range(-1, 2):
                yy = y + dy
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                for dx in range(-1, 2):
                    xx = x + dx
                    if xx < 0:
                        xx = 0
                    elif xx >= w:
                        xx = w - 1
                    s += a[yy, xx]
            o[y, x] = s / 9.0
    return out


def gaussian_blur(double[:, :] a, double sigma):
    """Separable Gaussian blur, kernel radius ceil(3*sigma), edge-clamped."""
    cdef Py_ssize_t r = <Py_ssize_t>ceil(3.0 * sigma)
    cdef Py_ssize_t klen = 2 * r + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] kern = np.empty(klen, dtype=np.float64)
    cdef double[:] k = kern
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(klen):
        k[i] = exp(-((i - r) * (i - r)) / (2.0 * sigma * sigma))
        s += k[i]
    for i in range(klen):
        k[i] /= s

    cdef Py_ssize_t h = a.shape[0], w = a.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] tmp = np.zeros((h, w), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((h, w), dtype=np.float64)
    cdef double[:, :] t = tmp
    cdef double[:, :] o = out
    cdef Py_ssize_t y, x, j, xx, yy
    cdef double acc
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for j in range(klen):
                xx = x + j - r
                if xx < 0:
                    xx = 0
                elif xx >= w:
                    xx = w - 1
                acc += a[y, xx] * k[j]
            t[y, x] = acc
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for j in range(klen):
                yy = y + j - r
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                acc += t[yy, x] * k[j]
            o[y, x] = acc
    return out


def resize_bilinear_f64(double[:, :] a, Py_ssize_t out_w, Py_ssize_t out_h):
    """Bilinear resample with half-pixel-centered mapping, edge-clamped."""
    cdef Py_ssize_t h = a.shape[0], w = a.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((out_h, out_w), dtype=np.float64)
    cdef double[:, :] o = out
    cdef Py_ssize_t y, x, yl, yh, xl, xh
    cdef double sy, sx, fy, fx
    for y in range(out_h):
        sy = (y + 0.5) * (<double>h / out_h) - 0.5
        yl = <Py_ssize_t>floor(sy)
        fy = sy - yl
        yh = yl + 1
        if yl < 0:
            yl = 0
        if yl > h - 1:
            yl = h - 1
        if yh < 0:
            yh = 0
        if yh > h - 1:
            yh = h - 1
        for x in range(out_w):
            sx = (x + 0.5) * (<double>w / out_w) - 0.5
            xl = <Py_ssize_t>floor(sx)
            fx = sx - xl
            xh = xl + 1
            if xl < 0:
                xl = 0
            if xl > w - 1:
                xl = w - 1
            if xh < 0:
                xh = 0
            if xh > w - 1:
                xh = w - 1
            o[y, x] = (1.0 - fy) * ((1.0 - fx) * a[yl, xl] + fx * a[yl, xh]) \
                + fy * ((1.0 - fx) * a[yh, xl] + fx * a[yh, xh])
    return out


def resize_bilinear_u8(unsigned char[:, :, :] a, Py_ssize_t out_w, Py_ssize_t out_h):
    cdef Py_ssize_t h = a.shape[0], w = a.shape[1], c = a.shape[2]
    cdef cnp.ndarray[cnp.uint8_t, ndim=3] out = np.empty((out_h, out_w, c), dtype=np.uint8)
    cdef unsigned char[:, :, :] o = out
    cdef Py_ssize_t y, x, ch, yl, yh, xl, xh
    cdef double sy, sx, fy, fx, v
    for y in range(out_h):
        sy = (y + 0.5) * (<double>h / out_h) - 0.5
        yl = <Py_ssize_t>floor(sy)
        fy = sy - yl
        yh = yl + 1
        if yl < 0:
            yl = 0
        if yl > h - 1:
            yl = h - 1
        if yh < 0:
            yh = 0
        if yh > h - 1:
            yh = h - 1
        for x in range(out_w):
            sx = (x + 0.5) * (<double>w / out_w) - 0.5
            xl = <Py_ssize_t>floor(sx)
            fx = sx - xl
            xh = xl + 1
            if xl < 0:
                xl = 0
            if xl > w - 1:
                xl = w - 1
            if xh < 0:
                xh = 0
            if xh > w - 1:
                xh = w - 1
            for ch in range(c):
                v = (1.0 - fy) * ((1.0 - fx) * a[yl, xl, ch] + fx * a[yl, xh, ch]) \
                    + fy * ((1.0 - fx) * a[yh, xl, ch] + fx * a[yh, xh, ch])
                o[y, x, ch] = <unsigned char>floor(v + 0.5)
    return out
