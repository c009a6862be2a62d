"""Compiled inner loops for the greedy back-ends.

Matrices are dense ``uint8`` arrays. Each kernel seeds numba's internal
generator from its ``seed`` argument, so a (matrix, seed) pair always yields
the same op sequence.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# status codes returned by depth_kernel
OK = 0
BUDGET = 1
STEP_LIMIT = 2

_TIE_TOL = 1e-9


@njit(cache=True)
def _gain_table(n, kind):
    # g(v) for v in 0..n+1; HSUM=0, HPROD=1, HSQ=2
    tab = np.zeros(n + 2)
    for v in range(n + 2):
        if kind == 0:
            tab[v] = v
        elif kind == 1:
            tab[v] = np.log2(v) if v > 0 else 0.0
        else:
            tab[v] = v * v
    return tab


@njit(cache=True)
def _sums(a, rows, cols):
    n = a.shape[0]
    rows[:] = 0
    cols[:] = 0
    for i in range(n):
        for j in range(n):
            if a[i, j]:
                rows[i] += 1
                cols[j] += 1


@njit(cache=True)
def _total(tab, v):
    s = 0.0
    for x in v:
        s += tab[x]
    return s


@njit(cache=True)
def _row_op_parts(a, ainv, ra, ca, ri, ci, tab, src, dst):
    """Cost deltas of ``a[dst] ^= a[src]`` (with the matching inverse update).

    Returns (delta of rows(a) + cols(ainv), delta of cols(a) + rows(ainv)).
    """
    n = a.shape[0]
    new_row = 0
    d_ca = 0.0
    for c in range(n):
        s = a[src, c]
        d = a[dst, c]
        new_row += s ^ d
        if s:
            v = ca[c]
            if d:
                d_ca += tab[v - 1] - tab[v]
            else:
                d_ca += tab[v + 1] - tab[v]
    new_col = 0
    d_ri = 0.0
    for k in range(n):
        s = ainv[k, src]
        d = ainv[k, dst]
        new_col += s ^ d
        if d:
            v = ri[k]
            if s:
                d_ri += tab[v - 1] - tab[v]
            else:
                d_ri += tab[v + 1] - tab[v]
    d_ra = tab[new_row] - tab[ra[dst]]
    d_ci = tab[new_col] - tab[ci[src]]
    return d_ra + d_ci, d_ca + d_ri


@njit(cache=True)
def _apply_row(a, at, ainv, ainvt, src, dst):
    n = a.shape[0]
    for c in range(n):
        a[dst, c] ^= a[src, c]
        at[c, dst] = a[dst, c]
    for k in range(n):
        ainv[k, src] ^= ainv[k, dst]
        ainvt[src, k] = ainv[k, src]


@njit(cache=True)
def _is_perm_rows(ra):
    for w in ra:
        if w != 1:
            return False
    return True


@njit(cache=True)
def try_finish_kernel(a):
    """Wire-disjoint row adds turning ``a`` into a permutation matrix.

    Returns an (k, 2) array of (src, dst) pairs, or a (1, 2) array holding -1
    when no single layer suffices.
    """
    n = a.shape[0]
    fail = np.full((1, 2), -1, dtype=np.int64)
    unit_row_of_col = np.full(n, -1, dtype=np.int64)
    weight = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            weight[i] += a[i, j]
        if weight[i] == 1:
            for j in range(n):
                if a[i, j]:
                    unit_row_of_col[j] = i
    # each weight-2 row may borrow one of (at most) two unit rows
    opts = np.full((n, 2), -1, dtype=np.int64)
    ndst = 0
    dsts = np.empty(n, dtype=np.int64)
    for i in range(n):
        if weight[i] == 1:
            continue
        if weight[i] != 2:
            return fail
        k = 0
        for j in range(n):
            if a[i, j]:
                opts[i, k] = unit_row_of_col[j]
                k += 1
        if opts[i, 0] < 0 and opts[i, 1] < 0:
            return fail
        dsts[ndst] = i
        ndst += 1
    match_src = np.full(n, -1, dtype=np.int64)  # src row -> dst row
    match_dst = np.full(n, -1, dtype=np.int64)  # dst row -> src row
    queue = np.empty(n, dtype=np.int64)
    came_from = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=np.bool_)
    for t in range(ndst):
        root = dsts[t]
        visited[:] = False
        head = 0
        tail = 0
        queue[tail] = root
        tail += 1
        found = -1
        while head < tail and found < 0:
            u = queue[head]
            head += 1
            for k in range(2):
                s = opts[u, k]
                if s < 0 or visited[s]:
                    continue
                visited[s] = True
                came_from[s] = u
                if match_src[s] < 0:
                    found = s
                    break
                queue[tail] = match_src[s]
                tail += 1
        if found < 0:
            return fail
        s = found
        while True:
            u = came_from[s]
            prev = match_dst[u]
            match_src[s] = u
            match_dst[u] = s
            if u == root:
                break
            s = prev
    out = np.empty((ndst, 2), dtype=np.int64)
    for t in range(ndst):
        out[t, 0] = match_dst[dsts[t]]
        out[t, 1] = dsts[t]
    return out


@njit(cache=True)
def depth_kernel(a0, ainv0, kind, seed, max_depth, sideways, max_steps):
    """Layered greedy reduction of ``a0`` to a permutation matrix.

    Returns (status, row_ops, col_ops, depth) where the op arrays hold
    (src, dst) pairs in application order and ``depth`` counts nonempty
    row layers plus nonempty column layers.
    """
    np.random.seed(seed)
    n = a0.shape[0]
    a = a0.copy()
    at = a0.T.copy()
    ainv = ainv0.copy()
    ainvt = ainv0.T.copy()
    tab = _gain_table(n, kind)
    ra = np.zeros(n, dtype=np.int64)
    ca = np.zeros(n, dtype=np.int64)
    ri = np.zeros(n, dtype=np.int64)
    ci = np.zeros(n, dtype=np.int64)
    cap = max_steps + n + 1
    row_ops = np.empty((cap, 2), dtype=np.int64)
    col_ops = np.empty((cap, 2), dtype=np.int64)
    nrow = 0
    ncol = 0
    row_used = np.zeros(n, dtype=np.bool_)
    col_used = np.zeros(n, dtype=np.bool_)
    layer_rows = 0
    layer_cols = 0
    sideways_left = sideways
    depth = 0
    steps = 0
    fresh = True
    status = OK
    while True:
        _sums(a, ra, ca)
        _sums(ainv, ri, ci)
        if _is_perm_rows(ra):
            break
        if fresh:
            if depth + 1 > max_depth:
                status = BUDGET
                break
            fin = try_finish_kernel(a)
            if fin[0, 0] >= 0:
                for t in range(fin.shape[0]):
                    row_ops[nrow, 0] = fin[t, 0]
                    row_ops[nrow, 1] = fin[t, 1]
                    nrow += 1
                depth += 1
                break
        if steps >= max_steps:
            status = STEP_LIMIT
            break
        p1 = _total(tab, ra) + _total(tab, ci)
        p2 = _total(tab, ca) + _total(tab, ri)
        current = max(p1, p2)
        best = np.inf
        ties = 0
        choice_src = -1
        choice_dst = -1
        choice_is_row = True
        for src in range(n):
            if row_used[src]:
                continue
            for dst in range(n):
                if dst == src or row_used[dst]:
                    continue
                d1, d2 = _row_op_parts(a, ainv, ra, ca, ri, ci, tab, src, dst)
                c = max(p1 + d1, p2 + d2)
                if c < best - _TIE_TOL:
                    best = c
                    ties = 1
                    choice_src = src
                    choice_dst = dst
                    choice_is_row = True
                elif c <= best + _TIE_TOL:
                    ties += 1
                    if np.random.random() * ties < 1.0:
                        choice_src = src
                        choice_dst = dst
                        choice_is_row = True
        for src in range(n):
            if col_used[src]:
                continue
            for dst in range(n):
                if dst == src or col_used[dst]:
                    continue
                # a column add on a is a row add on its transpose
                d2, d1 = _row_op_parts(at, ainvt, ca, ra, ci, ri, tab, src, dst)
                c = max(p1 + d1, p2 + d2)
                if c < best - _TIE_TOL:
                    best = c
                    ties = 1
                    choice_src = src
                    choice_dst = dst
                    choice_is_row = False
                elif c <= best + _TIE_TOL:
                    ties += 1
                    if np.random.random() * ties < 1.0:
                        choice_src = src
                        choice_dst = dst
                        choice_is_row = False
        accept = False
        if choice_src >= 0:
            if best < current - _TIE_TOL:
                accept = True
            elif fresh:
                # a fresh layer with no improving op would stall forever
                accept = True
            elif sideways_left > 0 and best <= current + _TIE_TOL:
                sideways_left -= 1
                accept = True
        if accept:
            steps += 1
            fresh = False
            if choice_is_row:
                _apply_row(a, at, ainv, ainvt, choice_src, choice_dst)
                row_ops[nrow, 0] = choice_src
                row_ops[nrow, 1] = choice_dst
                nrow += 1
                row_used[choice_src] = True
                row_used[choice_dst] = True
                layer_rows += 1
            else:
                _apply_row(at, a, ainvt, ainv, choice_src, choice_dst)
                col_ops[ncol, 0] = choice_src
                col_ops[ncol, 1] = choice_dst
                ncol += 1
                col_used[choice_src] = True
                col_used[choice_dst] = True
                layer_cols += 1
        else:
            depth += (layer_rows > 0) + (layer_cols > 0)
            layer_rows = 0
            layer_cols = 0
            row_used[:] = False
            col_used[:] = False
            sideways_left = sideways
            fresh = True
    depth += (layer_rows > 0) + (layer_cols > 0)
    if status == OK and depth > max_depth:
        status = BUDGET
    return status, row_ops[:nrow].copy(), col_ops[:ncol].copy(), depth


@njit(cache=True)
def size_kernel(a0, seed, escape_steps):
    """Greedy ones-reduction.

    When no row or column add removes a one, up to ``escape_steps`` times the
    least damaging op between rows sharing a one is taken instead (never the
    exact undo of the previous op). Stops at a permutation, or when stuck with
    no escapes left.

    Returns (row_ops, col_ops, reduced matrix).
    """
    np.random.seed(seed)
    n = a0.shape[0]
    a = a0.copy()
    at = a0.T.copy()
    w = np.zeros(n, dtype=np.int64)
    wt = np.zeros(n, dtype=np.int64)
    cap = n * n * n + 1
    row_ops = np.empty((cap, 2), dtype=np.int64)
    col_ops = np.empty((cap, 2), dtype=np.int64)
    nrow = 0
    ncol = 0
    last_src = -1
    last_dst = -1
    last_row = True
    while nrow + ncol < cap:
        for i in range(n):
            s = 0
            st = 0
            for j in range(n):
                s += a[i, j]
                st += at[i, j]
            w[i] = s
            wt[i] = st
        is_perm = True
        for i in range(n):
            if w[i] != 1:
                is_perm = False
        if is_perm:
            break
        best = 0
        ties = 0
        bsrc = -1
        bdst = -1
        brow = True
        for side in range(2):
            m = a if side == 0 else at
            ww = w if side == 0 else wt
            for src in range(n):
                for dst in range(n):
                    if src == dst:
                        continue
                    ov = 0
                    for c in range(n):
                        ov += m[src, c] & m[dst, c]
                    red = 2 * ov - ww[src]
                    if red > best:
                        best = red
                        ties = 1
                        bsrc = src
                        bdst = dst
                        brow = side == 0
                    elif red == best and red > 0:
                        ties += 1
                        if np.random.random() * ties < 1.0:
                            bsrc = src
                            bdst = dst
                            brow = side == 0
        if bsrc < 0:
            if escape_steps <= 0:
                break
            escape_steps -= 1
            best = -(n + 1)
            ties = 0
            for side in range(2):
                m = a if side == 0 else at
                ww = w if side == 0 else wt
                for src in range(n):
                    for dst in range(n):
                        if src == dst:
                            continue
                        if side == 0 and last_row and src == last_src and dst == last_dst:
                            continue
                        if side == 1 and not last_row and src == last_src and dst == last_dst:
                            continue
                        ov = 0
                        for c in range(n):
                            ov += m[src, c] & m[dst, c]
                        if ov == 0:
                            continue
                        red = 2 * ov - ww[src]
                        if red > best:
                            best = red
                            ties = 1
                            bsrc = src
                            bdst = dst
                            brow = side == 0
                        elif red == best:
                            ties += 1
                            if np.random.random() * ties < 1.0:
                                bsrc = src
                                bdst = dst
                                brow = side == 0
            if bsrc < 0:
                break
        last_src = bsrc
        last_dst = bdst
        last_row = brow
        if brow:
            for c in range(n):
                a[bdst, c] ^= a[bsrc, c]
                at[c, bdst] = a[bdst, c]
            row_ops[nrow, 0] = bsrc
            row_ops[nrow, 1] = bdst
            nrow += 1
        else:
            for c in range(n):
                at[bdst, c] ^= at[bsrc, c]
                a[c, bdst] = at[bdst, c]
            col_ops[ncol, 0] = bsrc
            col_ops[ncol, 1] = bdst
            ncol += 1
    return row_ops[:nrow].copy(), col_ops[:ncol].copy(), a



@njit(cache=True)
def markowitz_kernel(a0):
    """Gauss-Jordan elimination down to a permutation matrix, sparse pivoting.

    Each step picks, over the unused columns and unused rows holding a one
    there, the pivot minimising ``(col_count - 1) * (row_weight - 1)`` (ties
    by column count, then row weight, then position), and clears the rest of
    that column. Returns (row_ops, reduced matrix).
    """
    n = a0.shape[0]
    a = a0.copy()
    row_done = np.zeros(n, dtype=np.bool_)
    col_done = np.zeros(n, dtype=np.bool_)
    rw = np.zeros(n, dtype=np.int64)
    cw = np.zeros(n, dtype=np.int64)
    ops = np.empty((n * n + 1, 2), dtype=np.int64)
    nops = 0
    for _ in range(n):
        _sums(a, rw, cw)
        bp = -1
        bc = -1
        bk0 = 1 << 60
        bk1 = 0
        bk2 = 0
        for j in range(n):
            if col_done[j]:
                continue
            for i in range(n):
                if row_done[i] or not a[i, j]:
                    continue
                k0 = (cw[j] - 1) * (rw[i] - 1)
                if k0 < bk0 or (k0 == bk0 and (cw[j] < bk1 or (cw[j] == bk1 and rw[i] < bk2))):
                    bk0 = k0
                    bk1 = cw[j]
                    bk2 = rw[i]
                    bp = i
                    bc = j
        if bp < 0:
            break  # singular input; the caller checks invertibility
        for i in range(n):
            if i != bp and a[i, bc]:
                for c in range(n):
                    a[i, c] ^= a[bp, c]
                ops[nops, 0] = bp
                ops[nops, 1] = i
                nops += 1
        row_done[bp] = True
        col_done[bc] = True
    return ops[:nops].copy(), a
