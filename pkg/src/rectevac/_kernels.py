"""Compiled inner loops of the synchronous update step.

The readable contract-level operations live in `dynamics`; these kernels
execute the same draw protocol agent by agent so that a run driven here is
bit-identical to one driven through the pure-Python reference path (the
test suite asserts this equivalence).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .agent import ROTATION_SHIFTS, SWEPT_OFFSETS, TRANSLATION_STEPS, Orientation

_TRANS = np.array(TRANSLATION_STEPS, dtype=np.int64)
_ROT_H = np.array(ROTATION_SHIFTS[Orientation.HORIZONTAL], dtype=np.int64)
_ROT_V = np.array(ROTATION_SHIFTS[Orientation.VERTICAL], dtype=np.int64)
_SWEPT_H = np.array(SWEPT_OFFSETS[Orientation.HORIZONTAL], dtype=np.int64)
_SWEPT_V = np.array(SWEPT_OFFSETS[Orientation.VERTICAL], dtype=np.int64)


@njit(cache=True, nogil=True)
def _decide_all(
    n,
    cols,
    rows,
    horiz,
    occ,
    sff,
    wall,
    r,
    v,
    k,
    rng,
    tgt_col,
    tgt_row,
    tgt_horiz,
    moving,
    cand_c,
    cand_r,
    cand_h,
    cand_side,
    valid,
    sval,
    weight,
):
    """Per-agent intents against the time-t occupancy; draws consumed in slot order."""
    for i in range(n):
        moving[i] = False
        cc = cols[i]
        cr = rows[i]
        ch = horiz[i]
        for attempt in range(2):
            rotate = rng.random() < r
            cand_c[0] = cc
            cand_r[0] = cr
            cand_h[0] = ch
            cand_side[0] = False
            if rotate:
                table = _ROT_H if ch else _ROT_V
                for s in range(4):
                    cand_c[s + 1] = cc + table[s, 0]
                    cand_r[s + 1] = cr + table[s, 1]
                    cand_h[s + 1] = not ch
                    cand_side[s + 1] = False
            else:
                for s in range(4):
                    dx = _TRANS[s, 0]
                    dy = _TRANS[s, 1]
                    cand_c[s + 1] = cc + dx
                    cand_r[s + 1] = cr + dy
                    cand_h[s + 1] = ch
                    cand_side[s + 1] = (dx != 0) if ch else (dy != 0)

            smax = -np.inf
            for s in range(5):
                ac = cand_c[s]
                ar = cand_r[s]
                if cand_h[s]:
                    bc = ac + 1
                    br = ar
                else:
                    bc = ac
                    br = ar + 1
                ok = (not wall[ar + 1, ac + 1]) and (not wall[br + 1, bc + 1])
                if ok and rotate and s > 0:
                    if ch:
                        swc = cc + _SWEPT_H[s - 1, 0]
                        swr = cr + _SWEPT_H[s - 1, 1]
                    else:
                        swc = cc + _SWEPT_V[s - 1, 0]
                        swr = cr + _SWEPT_V[s - 1, 1]
                    ok = not wall[swr + 1, swc + 1]
                valid[s] = ok
                if ok:
                    sv = (sff[ar + 1, ac + 1] + sff[br + 1, bc + 1]) / 2.0
                    sval[s] = sv
                    if sv > smax:
                        smax = sv

            total = 0.0
            for s in range(5):
                if valid[s]:
                    w = np.exp((sval[s] - smax) / k)
                    weight[s] = w
                    total += w

            threshold = rng.random() * total
            chosen = 0
            acc = 0.0
            for s in range(5):
                if not valid[s]:
                    continue
                acc += weight[s]
                chosen = s
                if threshold < acc:
                    break

            if chosen == 0:
                break  # stay selected: final
            if cand_side[chosen] and rng.random() >= v:
                break  # sideways gate failed: the decision ends as a stay

            ac = cand_c[chosen]
            ar = cand_r[chosen]
            if cand_h[chosen]:
                bc = ac + 1
                br = ar
            else:
                bc = ac
                br = ar + 1
            oa = occ[ar + 1, ac + 1]
            ob = occ[br + 1, bc + 1]
            if (oa >= 0 and oa != i) or (ob >= 0 and ob != i):
                continue  # occupied by another: one fresh retry, else stay
            tgt_col[i] = ac
            tgt_row[i] = ar
            tgt_horiz[i] = cand_h[chosen]
            moving[i] = True
            break


@njit(cache=True, nogil=True)
def _resolve_and_commit(
    n,
    cols,
    rows,
    horiz,
    ids,
    occ,
    exit_mask,
    moving,
    tgt_col,
    tgt_row,
    tgt_horiz,
    rng,
    claim,
    stamp,
    mover_slots,
    granted,
):
    """Shuffle movers, grant non-overlapping targets, commit, remove exits.

    Returns the new live count; the number of removals is the difference.
    """
    m = 0
    for i in range(n):
        granted[i] = False
        if moving[i]:
            mover_slots[m] = i
            m += 1

    for i in range(m - 1, 0, -1):
        j = rng.integers(0, i + 1)
        t = mover_slots[i]
        mover_slots[i] = mover_slots[j]
        mover_slots[j] = t

    for idx in range(m):
        i = mover_slots[idx]
        ac = tgt_col[i]
        ar = tgt_row[i]
        if tgt_horiz[i]:
            bc = ac + 1
            br = ar
        else:
            bc = ac
            br = ar + 1
        if claim[ar + 1, ac + 1] == stamp or claim[br + 1, bc + 1] == stamp:
            continue  # lost the conflict: stays this step
        claim[ar + 1, ac + 1] = stamp
        claim[br + 1, bc + 1] = stamp
        granted[i] = True

    # synchronous commit: vacate every granted body, then write the targets
    for i in range(n):
        if granted[i]:
            occ[rows[i] + 1, cols[i] + 1] = -1
            if horiz[i]:
                occ[rows[i] + 1, cols[i] + 2] = -1
            else:
                occ[rows[i] + 2, cols[i] + 1] = -1
    for i in range(n):
        if granted[i]:
            cols[i] = tgt_col[i]
            rows[i] = tgt_row[i]
            horiz[i] = tgt_horiz[i]
            occ[rows[i] + 1, cols[i] + 1] = i
            if horiz[i]:
                occ[rows[i] + 1, cols[i] + 2] = i
            else:
                occ[rows[i] + 2, cols[i] + 1] = i

    # remove bodies touching the exit, compacting from the highest slot down
    nn = n
    for i in range(n - 1, -1, -1):
        ac = cols[i]
        ar = rows[i]
        if horiz[i]:
            bc = ac + 1
            br = ar
        else:
            bc = ac
            br = ar + 1
        if not (exit_mask[ar + 1, ac + 1] or exit_mask[br + 1, bc + 1]):
            continue
        occ[ar + 1, ac + 1] = -1
        occ[br + 1, bc + 1] = -1
        last = nn - 1
        if i != last:
            cols[i] = cols[last]
            rows[i] = rows[last]
            horiz[i] = horiz[last]
            ids[i] = ids[last]
            occ[rows[i] + 1, cols[i] + 1] = i
            if horiz[i]:
                occ[rows[i] + 1, cols[i] + 2] = i
            else:
                occ[rows[i] + 2, cols[i] + 1] = i
        nn = last
    return nn


@njit(cache=True, nogil=True)
def _step_kernel(n, time, cols, rows, horiz, ids, occ, sff, wall, exit_mask, r, v, k, rng, claim):
    tgt_col = np.empty(n, dtype=np.int64)
    tgt_row = np.empty(n, dtype=np.int64)
    tgt_horiz = np.zeros(n, dtype=np.bool_)
    moving = np.zeros(n, dtype=np.bool_)
    mover_slots = np.empty(n, dtype=np.int64)
    granted = np.zeros(n, dtype=np.bool_)
    cand_c = np.empty(5, dtype=np.int64)
    cand_r = np.empty(5, dtype=np.int64)
    cand_h = np.zeros(5, dtype=np.bool_)
    cand_side = np.zeros(5, dtype=np.bool_)
    valid = np.zeros(5, dtype=np.bool_)
    sval = np.empty(5, dtype=np.float64)
    weight = np.empty(5, dtype=np.float64)
    _decide_all(
        n, cols, rows, horiz, occ, sff, wall, r, v, k, rng,
        tgt_col, tgt_row, tgt_horiz, moving,
        cand_c, cand_r, cand_h, cand_side, valid, sval, weight,
    )
    return _resolve_and_commit(
        n, cols, rows, horiz, ids, occ, exit_mask,
        moving, tgt_col, tgt_row, tgt_horiz, rng, claim, time + 1, mover_slots, granted,
    )


@njit(cache=True, nogil=True)
def _run_kernel(n, time, max_steps, cols, rows, horiz, ids, occ, sff, wall, exit_mask, r, v, k, rng, claim):
    cap = n if n > 0 else 1
    tgt_col = np.empty(cap, dtype=np.int64)
    tgt_row = np.empty(cap, dtype=np.int64)
    tgt_horiz = np.zeros(cap, dtype=np.bool_)
    moving = np.zeros(cap, dtype=np.bool_)
    mover_slots = np.empty(cap, dtype=np.int64)
    granted = np.zeros(cap, dtype=np.bool_)
    cand_c = np.empty(5, dtype=np.int64)
    cand_r = np.empty(5, dtype=np.int64)
    cand_h = np.zeros(5, dtype=np.bool_)
    cand_side = np.zeros(5, dtype=np.bool_)
    valid = np.zeros(5, dtype=np.bool_)
    sval = np.empty(5, dtype=np.float64)
    weight = np.empty(5, dtype=np.float64)
    while n > 0 and time < max_steps:
        _decide_all(
            n, cols, rows, horiz, occ, sff, wall, r, v, k, rng,
            tgt_col, tgt_row, tgt_horiz, moving,
            cand_c, cand_r, cand_h, cand_side, valid, sval, weight,
        )
        n = _resolve_and_commit(
            n, cols, rows, horiz, ids, occ, exit_mask,
            moving, tgt_col, tgt_row, tgt_horiz, rng, claim, time + 1, mover_slots, granted,
        )
        time += 1
    return n, time
