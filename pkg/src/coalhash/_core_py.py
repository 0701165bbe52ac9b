"""Pure-Python replay kernel; fallback twin of the compiled ``_core``.

Same contract as ``_core.replay``: replay a whole address sequence through a
coalesced-chaining table and return the final per-item displacements and the
per-cell unsuccessful-search costs.  Optimised for CPython (flat lists, no
attribute lookups in the hot loop) but kept semantically identical to the
compiled kernel; the test suite asserts element-wise agreement between the
two and against the reference ``HashTable`` class.
"""

from __future__ import annotations

import numpy as np


def replay(m: int, addrs, early: bool) -> tuple[np.ndarray, np.ndarray]:
    """Insert addresses 1..m sequentially; return (displacements, u_costs).

    ``displacements[i]`` is the final displacement of the i-th inserted item;
    ``u_costs[j-1]`` is the unsuccessful-search cost from start address j.
    """
    h_list = addrs.tolist() if isinstance(addrs, np.ndarray) else [int(a) for a in addrs]
    n = len(h_list)
    if n > m:
        raise ValueError(f"cannot place {n} items in {m} cells")
    link = [0] * (m + 1)  # 0 = null link
    occ = bytearray(m + 1)
    addr_of = [0] * (m + 1)  # cell -> hash address of resident item
    item_of = [0] * (m + 1)  # cell -> 0-based item index
    mark = [0] * (m + 1)  # generation stamps for the splice update
    disp = [0] * n
    gen = 0
    rover = m
    for i in range(n):
        h = h_list[i]
        if not 1 <= h <= m:
            raise ValueError(f"hash address {h} outside 1..{m}")
        if not occ[h]:
            occ[h] = 1
            addr_of[h] = h
            item_of[h] = i
            continue
        while occ[rover]:
            rover -= 1
        j = rover
        occ[j] = 1
        addr_of[j] = h
        item_of[j] = i
        if not early:
            d = 1
            c = h
            nxt = link[c]
            while nxt:
                c = nxt
                nxt = link[c]
                d += 1
            link[c] = j
            disp[i] = d
        else:
            k = link[h]
            link[h] = j
            link[j] = k
            disp[i] = 1
            if k:
                # Splice pushed the old suffix one link away from everything
                # at or before h.  Stamp the suffix cells, then bump exactly
                # the suffix items whose own hash address is outside it.
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
    ucost = [0] * m
    for j in range(1, m + 1):
        if occ[j]:
            d = 1
            c = link[j]
            while c:
                d += 1
                c = link[c]
            ucost[j - 1] = d
    return np.asarray(disp, dtype=np.int64), np.asarray(ucost, dtype=np.int64)
