"""Hot loops with a numba path and a pure-numpy fallback.

Set ``QCLUSTER_DISABLE_NUMBA=1`` before import to force the numpy path.
Both paths return identical integer arrays; all arithmetic is int64 and
callers are responsible for staying inside its range.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("QCLUSTER_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    import numba

    def njit(func):
        return numba.njit(func, cache=True)

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# pairwise products of torus terms


def _term_products_np(ea, qa, ca, eb, qb, cb, lam):
    # (len_a, len_b, m) exponent sums, q-shift from the skew form
    exps = ea[:, None, :] + eb[None, :, :]
    shift = (ea @ lam) @ eb.T
    qs = qa[:, None] + qb[None, :] + shift
    cs = ca[:, None] * cb[None, :]
    m = ea.shape[1]
    return exps.reshape(-1, m), qs.reshape(-1), cs.reshape(-1)


if HAVE_NUMBA:

    @njit
    def _term_products_nb(ea, qa, ca, eb, qb, cb, lam):
        na, m = ea.shape
        nb = eb.shape[0]
        exps = np.empty((na * nb, m), dtype=np.int64)
        qs = np.empty(na * nb, dtype=np.int64)
        cs = np.empty(na * nb, dtype=np.int64)
        la = np.zeros((na, m), dtype=np.int64)
        for i in range(na):
            for r in range(m):
                if ea[i, r] != 0:
                    for c in range(m):
                        la[i, c] += ea[i, r] * lam[r, c]
        for i in range(na):
            for j in range(nb):
                t = i * nb + j
                s = 0
                for c in range(m):
                    exps[t, c] = ea[i, c] + eb[j, c]
                    s += la[i, c] * eb[j, c]
                qs[t] = qa[i] + qb[j] + s
                cs[t] = ca[i] * cb[j]
        return exps, qs, cs


def term_products(ea, qa, ca, eb, qb, cb, lam):
    """All pairwise products ``(q^{qa/2} X^ea)(q^{qb/2} X^eb)``.

    Returns flat arrays ``(exponents, half_q, coeff)`` of length
    ``len(ea) * len(eb)``; duplicates are not merged.
    """
    if HAVE_NUMBA:
        return _term_products_nb(ea, qa, ca, eb, qb, cb, lam)
    return _term_products_np(ea, qa, ca, eb, qb, cb, lam)


# ---------------------------------------------------------------------------
# brute-force closed subsets through the interval decomposition


def _closed_masks_np(s: int, right: int, left: int) -> np.ndarray:
    masks = np.arange(1 << s, dtype=np.int64)
    full = (1 << s) - 1
    step_bits = (1 << max(s - 1, 0)) - 1
    starts = masks & ~(masks << 1) & full
    ends = masks & ~(masks >> 1) & full
    # an interval starting at j >= 1 needs the arrow at step j-1 to point in
    bad_start = (starts >> 1) & ~right & step_bits
    # an interval ending at e <= s-2 needs the arrow at step e to point in
    bad_end = ends & ~left & step_bits
    ok = (bad_start == 0) & (bad_end == 0)
    return masks[ok]


if HAVE_NUMBA:

    @njit
    def _closed_masks_nb(s, right, left):
        total = 1 << s
        out = np.empty(total, dtype=np.int64)
        cnt = 0
        for mask in range(total):
            ok = True
            i = 0
            while i < s and ok:
                if (mask >> i) & 1 == 0:
                    i += 1
                    continue
                j = i
                while j + 1 < s and (mask >> (j + 1)) & 1 == 1:
                    j += 1
                # interval [i, j]
                if i > 0 and (right >> (i - 1)) & 1 == 0:
                    ok = False
                if j < s - 1 and (left >> j) & 1 == 0:
                    ok = False
                i = j + 1
            if ok:
                out[cnt] = mask
                cnt += 1
        return out[:cnt]


def closed_masks(s: int, right: int, left: int) -> np.ndarray:
    """Bitmasks of position subsets whose maximal intervals are substrings.

    ``right`` has bit ``i`` set when step ``i`` is an arrow ``i -> i+1``,
    ``left`` when it is ``i+1 -> i``.  Exhaustive over ``2**s`` masks.
    """
    if s == 0:
        return np.zeros(1, dtype=np.int64)
    if HAVE_NUMBA:
        return _closed_masks_nb(np.int64(s), np.int64(right), np.int64(left))
    return _closed_masks_np(s, right, left)
