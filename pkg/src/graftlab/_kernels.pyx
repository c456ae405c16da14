# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Wirtinger-derivative kernel.

Same contract as graftlab._kernels_py.wirtinger_mu: second-order stencils
(central in the interior, one-sided at the t-boundaries, cyclic in x with
the +1j*winding seam correction).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

KERNEL_NAME = "compiled"


def wirtinger_mu(object w_in, double dt, double dx, int winding):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] w = np.ascontiguousarray(
        w_in, dtype=np.complex128
    )
    cdef Py_ssize_t n_t = w.shape[0]
    cdef Py_ssize_t n_x = w.shape[1]
    if n_t < 3 or n_x < 3:
        raise ValueError(f"lattice {n_t}x{n_x} too small for second-order stencils")

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] mu = np.empty((n_t, n_x), dtype=np.complex128)
    cdef double complex period = 1j * winding
    cdef double complex wt, wx, d, dbar
    # Keep the operation order identical to the numpy kernel so the two
    # produce matching values up to complex-division rounding.
    cdef double twodt = 2.0 * dt
    cdef double twodx = 2.0 * dx
    cdef Py_ssize_t i, j

    for i in range(n_t):
        for j in range(n_x):
            if i == 0:
                wt = (-3.0 * w[0, j] + 4.0 * w[1, j] - w[2, j]) / twodt
            elif i == n_t - 1:
                wt = (3.0 * w[n_t - 1, j] - 4.0 * w[n_t - 2, j] + w[n_t - 3, j]) / twodt
            else:
                wt = (w[i + 1, j] - w[i - 1, j]) / twodt

            if j == 0:
                wx = (w[i, 1] - (w[i, n_x - 1] - period)) / twodx
            elif j == n_x - 1:
                wx = ((w[i, 0] + period) - w[i, n_x - 2]) / twodx
            else:
                wx = (w[i, j + 1] - w[i, j - 1]) / twodx

            d = 0.5 * (wt - 1j * wx)
            dbar = 0.5 * (wt + 1j * wx)
            if d == 0:
                mu[i, j] = float("inf")
            else:
                mu[i, j] = dbar / d
    bad = ~np.isfinite(mu)
    if bad.any():
        mu = np.where(bad, np.inf + 0j, mu)
    return mu
