"""Linear-time sorting of points spread quasi-uniformly over [0, 1).

The discontinuities of a rotation sum obey the three-gap structure, so
dropping them into ``n`` equal bins leaves O(1) points per bin on average.
Bins are then finished with insertion sort.
"""

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _bucket_sort_py(values):
    n = values.shape[0]
    out = np.empty_like(values)
    if n == 0:
        return out
    bins = np.minimum((values * n).astype(np.int64), n - 1)
    counts = np.bincount(bins, minlength=n)
    order = np.argsort(bins, kind="stable")
    out[:] = values[order]
    start = 0
    for c in counts:
        if c > 1:
            out[start:start + c].sort()
        start += c
    return out


if numba is not None:

    @numba.njit(cache=True)
    def _bucket_sort_jit(values):
        n = values.shape[0]
        out = np.empty_like(values)
        if n == 0:
            return out
        bins = np.empty(n, dtype=np.int64)
        counts = np.zeros(n + 1, dtype=np.int64)
        for i in range(n):
            b = np.int64(values[i] * n)
            if b >= n:
                b = n - 1
            elif b < 0:
                b = 0
            bins[i] = b
            counts[b + 1] += 1
        for b in range(n):
            counts[b + 1] += counts[b]
        fill = counts[:n].copy()
        for i in range(n):
            b = bins[i]
            out[fill[b]] = values[i]
            fill[b] += 1
        for b in range(n):
            lo = counts[b]
            hi = counts[b + 1]
            for i in range(lo + 1, hi):
                v = out[i]
                j = i - 1
                while j >= lo and out[j] > v:
                    out[j + 1] = out[j]
                    j -= 1
                out[j + 1] = v
        return out

else:  # pragma: no cover
    _bucket_sort_jit = None


def bucket_sort(values):
    """Return ``values`` (floats in [0, 1)) sorted ascending.

    Uses ``n`` uniform bins with insertion sort inside each bin; expected
    O(n) for quasi-uniform input.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    if _bucket_sort_jit is not None:
        return _bucket_sort_jit(values)
    return _bucket_sort_py(values)


def sort_points(values, method="bucket"):
    if method == "bucket":
        return bucket_sort(values)
    if method == "comparison":
        return np.sort(values, kind="quicksort")
    raise ValueError(f"unknown sort method {method!r}; use 'bucket' or 'comparison'")
