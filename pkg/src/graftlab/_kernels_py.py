"""Pure-numpy Wirtinger-derivative kernel (fallback for the compiled one).

Works on a map w sampled on the lattice t_i = i * dt (i = 0..n_t-1),
x_j = j * dx (j = 0..n_x-1, cyclic with period 1).  The stored values are
the lift of the map to the x-universal cover, so crossing the seam adds
1j * winding.

Stencils: central differences in the interior, second-order one-sided at
the two t-boundaries, cyclic central differences in x.  All are O(h^2).
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "numpy"


def wirtinger_mu(w: np.ndarray, dt: float, dx: float, winding: int) -> np.ndarray:
    """Pointwise Beltrami coefficient mu = (w_t + i w_x) / (w_t - i w_x)."""
    w = np.ascontiguousarray(w, dtype=np.complex128)
    n_t, n_x = w.shape
    if n_t < 3 or n_x < 3:
        raise ValueError(f"lattice {n_t}x{n_x} too small for second-order stencils")

    w_t = np.empty_like(w)
    w_t[1:-1, :] = (w[2:, :] - w[:-2, :]) / (2.0 * dt)
    w_t[0, :] = (-3.0 * w[0, :] + 4.0 * w[1, :] - w[2, :]) / (2.0 * dt)
    w_t[-1, :] = (3.0 * w[-1, :] - 4.0 * w[-2, :] + w[-3, :]) / (2.0 * dt)

    period = 1j * float(winding)
    w_x = np.empty_like(w)
    w_x[:, 1:-1] = (w[:, 2:] - w[:, :-2]) / (2.0 * dx)
    w_x[:, 0] = (w[:, 1] - (w[:, -1] - period)) / (2.0 * dx)
    w_x[:, -1] = ((w[:, 0] + period) - w[:, -2]) / (2.0 * dx)

    d = 0.5 * (w_t - 1j * w_x)
    dbar = 0.5 * (w_t + 1j * w_x)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = dbar / d
    # A vanishing holomorphic derivative means the map degenerates there;
    # surface it as |mu| = inf rather than NaN so callers see the failure.
    bad = ~np.isfinite(mu)
    if bad.any():
        mu = np.where(bad, np.inf + 0j, mu)
    return mu
