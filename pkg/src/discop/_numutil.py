"""Small numeric helpers shared by the integral kernels.

The hot loops raise squared moduli to half-integer powers; for the small
integer exponents the weight windows produce, binary exponentiation plus one
square root is far cheaper than transcendental ``pow`` on large arrays.
"""

from __future__ import annotations

import numpy as np


def abs_sq(x):
    """|x|^2 without the square root."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return x.real * x.real + x.imag * x.imag
    return x * x


def powq(base_sq, q):
    """base_sq ** (q/2), i.e. |x|^q given |x|^2.

    Fast path for integer q up to 64 (multiplications and at most one sqrt);
    generic powers fall back to np.power.
    """
    n = int(round(q))
    if abs(q - n) < 1e-12 and 0 < n <= 64:
        result = None
        square = base_sq
        m = n // 2
        while m:
            if m & 1:
                result = square if result is None else result * square
            m >>= 1
            if m:
                square = square * square
        if n % 2:
            root = np.sqrt(base_sq)
            result = root if result is None else result * root
        return result if result is not None else np.ones_like(base_sq)
    return np.power(base_sq, 0.5 * q)
