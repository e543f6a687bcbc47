# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: spectral signal on a batch of times and convolution sums."""

import numpy as np
cimport numpy as cnp
from libc.math cimport M_PI
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from "math.h" nogil:
    void sincos(double x, double *s, double *c)

# grid phases are recomputed exactly every REFRESH points, rotated in between
DEF REFRESH = 32


def signal_batch(const double[::1] t, const double[::1] energies, const double[::1] weights):
    """Return (Re, Im) of sum_k p_k exp(-2 pi i E_k t) for every t."""
    cdef Py_ssize_t n = t.shape[0], nk = energies.shape[0], i, k
    cdef double s, c, acc_re, acc_im, ti
    re_arr = np.empty(n, dtype=np.float64)
    im_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] re = re_arr
    cdef double[::1] im = im_arr
    with nogil:
        for i in range(n):
            ti = 2.0 * M_PI * t[i]
            acc_re = 0.0
            acc_im = 0.0
            for k in range(nk):
                sincos(energies[k] * ti, &s, &c)
                acc_re = acc_re + weights[k] * c
                acc_im = acc_im - weights[k] * s
            re[i] = acc_re
            im[i] = acc_im
    return re_arr, im_arr


def conv_sums(const double[::1] t, const double[::1] z_re, const double[::1] z_im,
              const double[::1] xs):
    """Return (Re, Im) of sum_i exp(2 pi i t_i x) z_i for every x (unnormalised).

    Each point is accumulated sequentially in sample order.
    """
    cdef Py_ssize_t n = t.shape[0], m = xs.shape[0], i, j
    cdef double x, c, s, acc_re, acc_im
    out_re_arr = np.empty(m, dtype=np.float64)
    out_im_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out_re = out_re_arr
    cdef double[::1] out_im = out_im_arr
    with nogil:
        for j in range(m):
            x = 2.0 * M_PI * xs[j]
            acc_re = 0.0
            acc_im = 0.0
            for i in range(n):
                sincos(x * t[i], &s, &c)
                acc_re = acc_re + c * z_re[i] - s * z_im[i]
                acc_im = acc_im + c * z_im[i] + s * z_re[i]
            out_re[j] = acc_re
            out_im[j] = acc_im
    return out_re_arr, out_im_arr


def conv_sums_grid(const double[::1] t, const double[::1] z_re, const double[::1] z_im,
                   double x0, double h, Py_ssize_t m):
    """:func:`conv_sums` on the uniform grid x0 + j h, j = 0..m-1.

    Per sample, the phase at the next grid point is obtained by one complex
    rotation; every REFRESH points it is recomputed directly to stop drift.
    """
    cdef Py_ssize_t n = t.shape[0], i, j
    cdef double w_re, w_im, r_re, r_im, tmp, ti, zr, zi
    cdef double *acc = <double *> malloc(2 * m * sizeof(double))
    if acc == NULL:
        raise MemoryError()
    out_re_arr = np.empty(m, dtype=np.float64)
    out_im_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out_re = out_re_arr
    cdef double[::1] out_im = out_im_arr
    with nogil:
        for j in range(2 * m):
            acc[j] = 0.0
        for i in range(n):
            ti = 2.0 * M_PI * t[i]
            zr = z_re[i]
            zi = z_im[i]
            sincos(ti * h, &r_im, &r_re)
            for j in range(m):
                if j % REFRESH == 0:
                    sincos(ti * (x0 + j * h), &w_im, &w_re)
                else:
                    tmp = w_re * r_re - w_im * r_im
                    w_im = w_re * r_im + w_im * r_re
                    w_re = tmp
                acc[2 * j] += w_re * zr - w_im * zi
                acc[2 * j + 1] += w_re * zi + w_im * zr
        for j in range(m):
            out_re[j] = acc[2 * j]
            out_im[j] = acc[2 * j + 1]
    free(acc)
    return out_re_arr, out_im_arr
