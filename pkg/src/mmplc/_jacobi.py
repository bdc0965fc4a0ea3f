"""Compiled one-sided Jacobi kernel.

Arrays are stored transposed: row ``j`` of ``work`` is column ``j`` of the
matrix being orthogonalised, so every inner loop walks contiguous memory.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def jacobi_sweeps(work, acc, accumulate, tol, max_sweeps):
    """Orthogonalise the rows of ``work`` in place with plane rotations.

    Rotations are mirrored onto the rows of ``acc`` when ``accumulate`` is set.
    Returns ``(sweeps, residual)``; ``sweeps`` is -1 when the cap was hit.
    """
    k, s = work.shape
    residual = 0.0
    for sweep in range(max_sweeps):
        residual = 0.0
        rotated = False
        for p in range(k - 1):
            for q in range(p + 1, k):
                a = 0.0
                b = 0.0
                g = 0.0
                for i in range(s):
                    x = work[p, i]
                    y = work[q, i]
                    a += x * x
                    b += y * y
                    g += x * y
                if g == 0.0:
                    continue
                scale = np.sqrt(a) * np.sqrt(b)
                if scale == 0.0:
                    continue
                rel = abs(g) / scale
                if rel > residual:
                    residual = rel
                if rel <= tol:
                    continue
                rotated = True
                zeta = (b - a) / (2.0 * g)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                sn = c * t
                for i in range(s):
                    x = work[p, i]
                    y = work[q, i]
                    work[p, i] = c * x - sn * y
                    work[q, i] = sn * x + c * y
                if accumulate:
                    for i in range(acc.shape[1]):
                        x = acc[p, i]
                        y = acc[q, i]
                        acc[p, i] = c * x - sn * y
                        acc[q, i] = sn * x + c * y
        if not rotated:
            return sweep + 1, residual
    return -1, residual
