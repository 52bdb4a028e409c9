import numpy as np


def sturm_counts(diag, off2, xs, pivmin):
    """Vectorised over shifts ``xs``: number of eigenvalues strictly below each."""
    xs = np.asarray(xs, dtype=float)
    count = np.zeros(xs.shape, dtype=np.int64)
    q = diag[0] - xs
    q[np.abs(q) < pivmin] = -pivmin
    count += q < 0.0
    for i in range(1, diag.shape[0]):
        q = (diag[i] - xs) - off2[i - 1] / q
        q[np.abs(q) < pivmin] = -pivmin
        count += q < 0.0
    return count


def sturm_count(diag, off2, x, pivmin):
    return int(sturm_counts(diag, off2, np.array([x]), pivmin)[0])


def bisect_eigenvalue(diag, off2, j, lo, hi, rtol, atol, pivmin, max_iter, sections=64):
    """Multisection: each sweep evaluates ``sections - 1`` interior shifts at once."""
    it = 0
    while it < max_iter:
        width = hi - lo
        if width <= rtol * max(abs(lo), abs(hi)) + atol:
            break
        xs = lo + width * np.arange(1, sections) / sections
        xs = xs[(xs > lo) & (xs < hi)]
        if xs.size == 0:
            break
        below = sturm_counts(diag, off2, xs, pivmin) <= j
        k = int(np.count_nonzero(below))
        if k:
            lo = float(xs[k - 1])
        if k < xs.size:
            hi = float(xs[k])
        it += 1
    return 0.5 * (lo + hi), it
