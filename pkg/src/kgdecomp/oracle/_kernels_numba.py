import numpy as np
from numba import njit


@njit(cache=True)
def sturm_count(diag, off2, x, pivmin):
    """Number of eigenvalues strictly below x (LDL^T inertia)."""
    n = diag.shape[0]
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = (diag[i] - x) - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def bisect_eigenvalue(diag, off2, j, lo, hi, rtol, atol, pivmin, max_iter):
    """j-th smallest eigenvalue (0-based) inside [lo, hi].

    Requires count(lo) <= j < count(hi).
    """
    it = 0
    while it < max_iter:
        width = hi - lo
        if width <= rtol * max(abs(lo), abs(hi)) + atol:
            break
        mid = lo + 0.5 * width
        if mid <= lo or mid >= hi:
            break
        if sturm_count(diag, off2, mid, pivmin) <= j:
            lo = mid
        else:
            hi = mid
        it += 1
    return 0.5 * (lo + hi), it
