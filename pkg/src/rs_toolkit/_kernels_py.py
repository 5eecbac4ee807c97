"""Pure numpy implementations of the hot series kernels.

This module mirrors the compiled core ``_ckernels``; which one is active is
decided in ``_backend``. Truncation orders are chosen by the callers, so both
backends execute the same arithmetic and agree to rounding.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def theta_sum(x, nome: float, terms: int, kind: int) -> np.ndarray:
    """Partial sum of a Jacobi theta series on a grid of real arguments.

    kind 1:      2 sum_{l=0..terms} (-1)^l nome^((l+1/2)^2) sin((2l+1)x)
    kind 2:      2 sum_{l=0..terms} nome^((l+1/2)^2) cos((2l+1)x)
    kind 3:  1 + 2 sum_{l=1..terms} nome^(l^2) cos(2lx)
    kind 4:  1 + 2 sum_{l=1..terms} (-1)^l nome^(l^2) cos(2lx)
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if kind in (1, 2):
        ell = np.arange(terms + 1, dtype=np.float64)
        amp = 2.0 * nome ** ((ell + 0.5) ** 2)
        if kind == 1:
            amp = amp * (-1.0) ** ell
            trig = np.sin(x[:, None] * (2.0 * ell + 1.0))
        else:
            trig = np.cos(x[:, None] * (2.0 * ell + 1.0))
        return trig @ amp
    if kind in (3, 4):
        ell = np.arange(1, terms + 1, dtype=np.float64)
        amp = 2.0 * nome ** (ell**2)
        if kind == 4:
            amp = amp * (-1.0) ** ell
        return 1.0 + np.cos(x[:, None] * (2.0 * ell)) @ amp
    raise ValueError(f"unknown theta kind {kind}")


def qpoch_prod(a, q: float, terms: int) -> np.ndarray:
    """prod_{j=0}^{terms-1} (1 - a q^j) elementwise over a complex grid."""
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    out = np.ones_like(a)
    qj = 1.0
    for _ in range(terms):
        out *= 1.0 - a * qj
        qj *= q
    return out


def rs_poly_table(n_top: int, z, q: float) -> np.ndarray:
    """Rogers-Szego polynomial values for all degrees 0..n_top over a z grid.

    Row n holds H_n(z; q) computed by the three-term recurrence
    H_{n+1} = (1 + z) H_n - (1 - q^n) z H_{n-1}.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    table = np.empty((n_top + 1, z.shape[0]), dtype=np.complex128)
    table[0] = 1.0
    if n_top >= 1:
        table[1] = 1.0 + z
    qn = 1.0
    for n in range(1, n_top):
        qn *= q
        table[n + 1] = (1.0 + z) * table[n] - (1.0 - qn) * z * table[n - 1]
    return table
