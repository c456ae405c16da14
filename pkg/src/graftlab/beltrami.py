"""Numerical Beltrami-coefficient estimation on sampled annulus maps.

The derivative kernel exists twice: a Cython extension for speed and a
numpy fallback with the identical contract.  Selection happens at import
time; set GRAFTLAB_KERNEL=python (or =compiled) to force one side.
``benchmarks/bench_beltrami.py`` compares the two.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels_py
from .errors import GridError, NotSensePreservingError

__all__ = [
    "ACTIVE_KERNEL",
    "BeltramiEstimate",
    "beltrami_estimate",
    "convergence_order",
    "available_kernels",
]

MIN_LATTICE = 33


def _select_kernel():
    forced = os.environ.get("GRAFTLAB_KERNEL", "").strip().lower()
    if forced == "python":
        return _kernels_py
    try:
        from . import _kernels  # compiled extension, absent on pure installs
    except ImportError:
        if forced == "compiled":
            raise ImportError(
                "GRAFTLAB_KERNEL=compiled but the graftlab._kernels extension is not built"
            )
        return _kernels_py
    return _kernels


_kernel = _select_kernel()
ACTIVE_KERNEL: str = _kernel.KERNEL_NAME


def available_kernels() -> dict[str, object]:
    """Mapping kernel name -> module, for benchmarks and cross-checks."""
    kernels = {_kernels_py.KERNEL_NAME: _kernels_py}
    try:
        from . import _kernels

        kernels[_kernels.KERNEL_NAME] = _kernels
    except ImportError:
        pass
    return kernels


@dataclass(frozen=True)
class BeltramiEstimate:
    """Grid estimate of |mu| and the dilatation of a sampled map."""

    abs_mu: np.ndarray
    sup_abs_mu: float
    sup_k: float
    n_t: int
    n_x: int
    kernel: str

    @property
    def mu_spread(self) -> float:
        """max - min of |mu| over the grid (zero for constant-coefficient maps)."""
        return float(self.abs_mu.max() - self.abs_mu.min())


def beltrami_estimate(grid_map, kernel=None) -> BeltramiEstimate:
    """Estimate the Beltrami field and sup K of a GridMap.

    Wirtinger derivatives are taken by finite differences in logarithmic
    coordinates: central stencils in the interior, second-order one-sided
    at t = 0 and t = a, cyclic in x (seam-corrected by the winding).
    Raises NotSensePreservingError if |mu| >= 1 anywhere on the grid.
    """
    w = grid_map.samples
    n_t, n_x = w.shape
    if n_t < MIN_LATTICE or n_x < MIN_LATTICE:
        raise GridError(
            f"lattice {n_t}x{n_x} below the minimum {MIN_LATTICE} per axis; "
            "central differences would not be meaningful"
        )
    mod = _kernel if kernel is None else kernel
    mu = mod.wirtinger_mu(w, grid_map.dt, grid_map.dx, grid_map.winding)
    abs_mu = np.abs(mu)
    sup = float(abs_mu.max())
    if not sup < 1.0:
        i, j = np.unravel_index(int(abs_mu.argmax()), abs_mu.shape)
        raise NotSensePreservingError(
            f"|mu| = {sup!r} >= 1 at lattice point ({i}, {j}): the sampled map is "
            "not a sense-preserving homeomorphism at this resolution"
        )
    return BeltramiEstimate(
        abs_mu=abs_mu,
        sup_abs_mu=sup,
        sup_k=(1.0 + sup) / (1.0 - sup),
        n_t=n_t,
        n_x=n_x,
        kernel=mod.KERNEL_NAME,
    )


# Relative errors below this are treated as converged to machine precision;
# order estimates from rounding noise would be meaningless.
EXACTNESS_FLOOR = 1e-12


def convergence_order(errors: list[float], reference: float) -> list[float]:
    """Observed orders log2(e_h / e_{h/2}) for a refinement error sequence.

    Entries where both errors sit below EXACTNESS_FLOOR * reference are
    reported as inf: the scheme is exact at that resolution (affine maps
    differentiate exactly) and no finite order can be observed.
    """
    floor = EXACTNESS_FLOOR * abs(reference)
    orders = []
    for coarse, fine in zip(errors, errors[1:]):
        if coarse <= floor and fine <= floor:
            orders.append(math.inf)
        elif fine == 0.0:
            orders.append(math.inf)
        else:
            orders.append(math.log2(coarse / fine))
    return orders
