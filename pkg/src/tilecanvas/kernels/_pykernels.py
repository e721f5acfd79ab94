"""Numpy implementations of the merge kernels.

Arithmetic matches ``_ckernels.pyx`` operation for operation (one float64
multiply, then one add, per element) so both backends agree bitwise.
"""

import numpy as np


def accumulate_window(num, den, values, weights, y0, x0):
    """Add ``weights * values`` into ``num`` and ``weights`` into ``den`` at (y0, x0)."""
    h, w = weights.shape
    rows, cols = slice(y0, y0 + h), slice(x0, x0 + w)
    num[:, :, rows, cols] += weights * values.astype(np.float64)
    den[rows, cols] += weights


def normalize(num, den, out):
    """out = num / den, cast to ``out``'s dtype."""
    np.divide(num, den, out=num)
    out[...] = num
