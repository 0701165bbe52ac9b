# cython: language_level=3
"""Compiled replay kernel for large Monte Carlo tables.

Semantically identical to ``_core_py.replay`` (the pure-Python twin); kept
branch-for-branch in sync and cross-checked by the test suite.
"""

import numpy as np


def replay(Py_ssize_t m, addrs, bint early):
    """Insert addresses 1..m sequentially; return (displacements, u_costs)."""
    h_arr = np.ascontiguousarray(addrs, dtype=np.int64)
    cdef Py_ssize_t n = h_arr.shape[0]
    if n > m:
        raise ValueError(f"cannot place {n} items in {m} cells")

    disp_arr = np.zeros(n, dtype=np.int64)
    ucost_arr = np.zeros(m, dtype=np.int64)
    link_arr = np.zeros(m + 1, dtype=np.int64)
    occ_arr = np.zeros(m + 1, dtype=np.int8)
    addr_of_arr = np.zeros(m + 1, dtype=np.int64)
    item_of_arr = np.zeros(m + 1, dtype=np.int64)
    mark_arr = np.zeros(m + 1, dtype=np.int64)

    cdef long long[::1] h = h_arr
    cdef long long[::1] disp = disp_arr
    cdef long long[::1] ucost = ucost_arr
    cdef long long[::1] link = link_arr
    cdef signed char[::1] occ = occ_arr
    cdef long long[::1] addr_of = addr_of_arr
    cdef long long[::1] item_of = item_of_arr
    cdef long long[::1] mark = mark_arr

    cdef Py_ssize_t i, rover = m
    cdef long long hi, j, k, c, nxt, d, gen = 0

    for i in range(n):
        hi = h[i]
        if hi < 1 or hi > m:
            raise ValueError(f"hash address {hi} outside 1..{m}")
        if not occ[hi]:
            occ[hi] = 1
            addr_of[hi] = hi
            item_of[hi] = i
            continue
        while occ[rover]:
            rover -= 1
        j = rover
        occ[j] = 1
        addr_of[j] = hi
        item_of[j] = i
        if not early:
            d = 1
            c = hi
            nxt = link[c]
            while nxt:
                c = nxt
                nxt = link[c]
                d += 1
            link[c] = j
            disp[i] = d
        else:
            k = link[hi]
            link[hi] = j
            link[j] = k
            disp[i] = 1
            if k:
                # Stamp the displaced suffix, then bump exactly the suffix
                # items whose own hash address lies outside it.
                gen += 1
                c = k
                while c:
                    mark[c] = gen
                    c = link[c]
                c = k
                while c:
                    if mark[addr_of[c]] != gen:
                        disp[item_of[c]] += 1
                    c = link[c]

    for j in range(1, m + 1):
        if occ[j]:
            d = 1
            c = link[j]
            while c:
                d += 1
                c = link[c]
            ucost[j - 1] = d
    return disp_arr, ucost_arr
