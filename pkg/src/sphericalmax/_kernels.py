"""Compiled greedy-cover kernels shared by the covering scans."""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _first_reaching(comp_hi, x):
    # first index with comp_hi[idx] >= x
    lo, hi = 0, comp_hi.size
    while lo < hi:
        mid = (lo + hi) >> 1
        if comp_hi[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, nogil=True)
def greedy_count(comp_lo, comp_hi, left, right, delta):
    """Minimum number of closed length-``delta`` intervals covering
    ``K cap [left, right]`` where ``K`` is the union of the components."""
    n = comp_lo.size
    c = _first_reaching(comp_hi, left)
    if c == n or comp_lo[c] > right:
        return 0
    pos = comp_lo[c] if comp_lo[c] > left else left
    count = 1
    e = pos + delta
    while e < right:
        while c < n and comp_hi[c] <= e:
            c += 1
        if c == n or comp_lo[c] > right:
            break
        if comp_lo[c] > e:
            count += 1
            e = comp_lo[c] + delta
        else:
            # component straddles the covered edge: continue along the segment
            end = comp_hi[c] if comp_hi[c] < right else right
            k = math.ceil((end - e) / delta)
            if k < 1:
                k = 1
            count += k
            e += k * delta
    return count


@njit(cache=True, nogil=True)
def count_windows(comp_lo, comp_hi, starts, width, delta):
    out = np.empty(starts.size, dtype=np.int64)
    for i in range(starts.size):
        out[i] = greedy_count(comp_lo, comp_hi, starts[i], starts[i] + width, delta)
    return out


@njit(cache=True, nogil=True)
def level_maxima(comp_lo, comp_hi, range_lo, range_len, j):
    """Per-level maximum counts for the two-phase dyadic window family.

    Returns ``(best, best_start)`` of length ``j + 1``: for level ``i`` the
    largest count over windows of length ``2**-i`` at scale ``2**-j``, and the
    start of the lexicographically smallest maximizing window.
    """
    delta = 2.0 ** (-j)
    best = np.zeros(j + 1, dtype=np.int64)
    best_start = np.full(j + 1, range_lo)
    for i in range(j + 1):
        w = 2.0 ** (-i)
        m = int(math.ceil(range_len / w - 1e-12))
        if m < 1:
            m = 1
        bval = -1
        bstart = range_lo
        for mm in range(m):
            for phase in range(2):
                s = range_lo + (mm + 0.5 * phase) * w
                cnt = greedy_count(comp_lo, comp_hi, s, s + w, delta)
                if cnt > bval or (cnt == bval and s < bstart):
                    bval = cnt
                    bstart = s
        best[i] = bval
        best_start[i] = bstart
    return best, best_start


@njit(cache=True, nogil=True)
def separated_net(comp_lo, comp_hi, left, right, sep):
    """Greedy maximal ``sep``-separated subset of ``K cap [left, right]``."""
    n = comp_lo.size
    out = []
    c = _first_reaching(comp_hi, left)
    if c == n or comp_lo[c] > right:
        return np.array(out, dtype=np.float64)
    x = comp_lo[c] if comp_lo[c] > left else left
    out.append(x)
    while True:
        target = x + sep
        if target > right:
            break
        while c < n and comp_hi[c] < target:
            c += 1
        if c == n or comp_lo[c] > right:
            break
        x = comp_lo[c] if comp_lo[c] > target else target
        out.append(x)
    return np.array(out, dtype=np.float64)
