"""Pure numpy versions of the compiled kernels (same signatures, same results up to libm rounding)."""

import numpy as np

_CHUNK = 1 << 20


def signal_batch(t, energies, weights):
    t = np.asarray(t, dtype=float)
    re = np.zeros_like(t)
    im = np.zeros_like(t)
    for e, p in zip(np.asarray(energies, dtype=float), np.asarray(weights, dtype=float)):
        theta = 2.0 * np.pi * e * t
        re += p * np.cos(theta)
        im -= p * np.sin(theta)
    return re, im


def conv_sums(t, z_re, z_im, xs):
    t = np.asarray(t, dtype=float)
    z_re = np.asarray(z_re, dtype=float)
    z_im = np.asarray(z_im, dtype=float)
    xs = np.asarray(xs, dtype=float)
    out_re = np.empty(xs.shape[0])
    out_im = np.empty(xs.shape[0])
    for j, x in enumerate(xs):
        acc_re = 0.0
        acc_im = 0.0
        for start in range(0, t.shape[0], _CHUNK):
            sl = slice(start, start + _CHUNK)
            theta = (2.0 * np.pi * x) * t[sl]
            c = np.cos(theta)
            s = np.sin(theta)
            acc_re += float(np.sum(c * z_re[sl] - s * z_im[sl]))
            acc_im += float(np.sum(c * z_im[sl] + s * z_re[sl]))
        out_re[j] = acc_re
        out_im[j] = acc_im
    return out_re, out_im


def conv_sums_grid(t, z_re, z_im, x0, h, m):
    return conv_sums(t, z_re, z_im, x0 + h * np.arange(m))
