"""Minimum-weight perfect matching on dense graphs (blossom algorithm).

Primal-dual blossom method, O(n^3)-ish, specialized to complete graphs with
integer weights. Minimization is reduced to maximum-weight matching on the
transformed weights w' = 2*(w_max + 1 - w): all transformed weights are
positive and even, so the maximum-weight matching of a complete even-order
graph is perfect (any two exposed vertices could otherwise be matched for a
gain), maximizing sum(w') minimizes sum(w) over perfect matchings, and the
doubled scale keeps every dual quantity integral.

The kernel is deterministic: edges are scanned in ascending vertex order and
the queue behaves as a stack, so identical inputs give identical matchings.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_NONE = 0
_S = 1
_T = 2


@njit(cache=True)
def _collect_leaves(b, bch, bchn, stack, out):
    """Vertices contained in blossom b (ids < n are vertices)."""
    n_out = 0
    n_stack = 0
    stack[n_stack] = b
    n_stack += 1
    while n_stack > 0:
        n_stack -= 1
        cur = stack[n_stack]
        if cur < out.shape[0]:  # trivial blossom id == vertex id
            out[n_out] = cur
            n_out += 1
        else:
            for i in range(bchn[cur]):
                stack[n_stack] = bch[cur, i]
                n_stack += 1
    return n_out


@njit(cache=True)
def _assign_label_s(x, top, blabel, btx, bty, mate, bbase,
                    bch, bchn, queue, qn, scratch_stack, scratch_leaves):
    bx = top[x]
    blabel[bx] = _S
    y = mate[x]
    if y == -1:
        btx[bx] = -1
        bty[bx] = -1
    else:
        btx[bx] = y
        bty[bx] = x
    k = _collect_leaves(bx, bch, bchn, scratch_stack, scratch_leaves)
    for i in range(k):
        queue[qn] = scratch_leaves[i]
        qn += 1
    return qn


@njit(cache=True)
def _assign_label_t(x, y, top, blabel, btx, bty, mate, bbase,
                    bch, bchn, queue, qn, scratch_stack, scratch_leaves):
    by = top[y]
    blabel[by] = _T
    btx[by] = x
    bty[by] = y
    z = mate[bbase[by]]
    return _assign_label_s(z, top, blabel, btx, bty, mate, bbase,
                           bch, bchn, queue, qn, scratch_stack, scratch_leaves)


@njit(cache=True)
def _trace(x, y, top, btx, bty, marker, px, py, qx, qy):
    """Trace alternating trees back from x and y.

    Fills px/py with the fused path edges (ordered), returns its length.
    The path is a cycle (new blossom) iff its two end vertices lie in the
    same top blossom; the caller checks that.
    """
    n_marked = 0
    marker_list = qy  # reuse as scratch for marked blossom ids
    xe_x = px
    xe_y = py
    xn = 0
    ye_x = qx
    ye_y = np.empty_like(qx)
    yn = 0
    xe_x[xn] = x
    xe_y[xn] = y
    xn += 1
    ye_x[yn] = y
    ye_y[yn] = x
    yn += 1
    first_common = -1
    cur_x = x
    cur_y = y
    on_x = True
    while cur_x != -1 or cur_y != -1:
        # loop invariant: cur_x != -1 at this point
        bx = top[cur_x]
        if marker[bx]:
            first_common = bx
            break
        marker[bx] = True
        marker_list[n_marked] = bx
        n_marked += 1
        if btx[bx] == -1:
            cur_x = -1
        else:
            if on_x:
                xe_x[xn] = btx[bx]
                xe_y[xn] = bty[bx]
                xn += 1
            else:
                ye_x[yn] = btx[bx]
                ye_y[yn] = bty[bx]
                yn += 1
            cur_x = btx[bx]
        if cur_y != -1:
            tmp = cur_x
            cur_x = cur_y
            cur_y = tmp
            on_x = not on_x
    if not on_x:
        # ensure xe holds the x-side path again
        tmp = cur_x
        cur_x = cur_y
        cur_y = tmp
        tx = xe_x
        xe_x = ye_x
        ye_x = tx
        ty = xe_y
        xe_y = ye_y
        ye_y = ty
        t = xn
        xn = yn
        yn = t
    for i in range(n_marked):
        marker[marker_list[i]] = False
    if first_common != -1:
        # xe ends at first_common; trim ye until it does too
        while yn > 0 and top[ye_x[yn - 1]] != first_common:
            yn -= 1
    # fuse: reversed xe followed by flipped ye[1:]
    total = xn + yn - 1
    out_x = np.empty(total, np.int32)
    out_y = np.empty(total, np.int32)
    k = 0
    for i in range(xn - 1, -1, -1):
        out_x[k] = xe_x[i]
        out_y[k] = xe_y[i]
        k += 1
    for i in range(1, yn):
        out_x[k] = ye_y[i]
        out_y[k] = ye_x[i]
        k += 1
    for i in range(total):
        px[i] = out_x[i]
        py[i] = out_y[i]
    return total


@njit(cache=True)
def _find_path_through(b, sub, bch, bchn, bex, bey,
                       nodes_out, ex_out, ey_out):
    """Path through blossom b from sub-blossom sub to the base child."""
    nsub = bchn[b]
    p = 0
    for i in range(nsub):
        if bch[b, i] == sub:
            p = i
            break
    n_nodes = 0
    n_edges = 0
    nodes_out[n_nodes] = sub
    n_nodes += 1
    while p != 0:
        if p % 2 == 0:
            ex_out[n_edges] = bey[b, p - 1]
            ey_out[n_edges] = bex[b, p - 1]
            n_edges += 1
            nodes_out[n_nodes] = bch[b, p - 1]
            n_nodes += 1
            ex_out[n_edges] = bey[b, p - 2]
            ey_out[n_edges] = bex[b, p - 2]
            n_edges += 1
            nodes_out[n_nodes] = bch[b, p - 2]
            n_nodes += 1
            p -= 2
        else:
            ex_out[n_edges] = bex[b, p]
            ey_out[n_edges] = bey[b, p]
            n_edges += 1
            nodes_out[n_nodes] = bch[b, p + 1]
            n_nodes += 1
            ex_out[n_edges] = bex[b, p + 1]
            ey_out[n_edges] = bey[b, p + 1]
            n_edges += 1
            nodes_out[n_nodes] = bch[b, (p + 2) % nsub]
            n_nodes += 1
            p = (p + 2) % nsub
    return n_edges


@njit(cache=True)
def _mwpm_kernel(w2, mate):
    """Maximum-weight matching of the dense even-weight matrix w2.

    Fills mate with vertex mates. Returns 0 on success, nonzero on an
    internal capacity/contract failure.
    """
    n = w2.shape[0]
    nb = 2 * n
    top = np.empty(n, np.int32)
    for v in range(n):
        top[v] = v
    bparent = np.full(nb, -1, np.int32)
    bbase = np.empty(nb, np.int32)
    for v in range(n):
        bbase[v] = v
    blabel = np.zeros(nb, np.int8)
    btx = np.full(nb, -1, np.int32)
    bty = np.full(nb, -1, np.int32)
    bdual = np.zeros(nb, np.int64)
    maxw = np.int64(0)
    for i in range(n):
        for j in range(n):
            if i != j and w2[i, j] > maxw:
                maxw = w2[i, j]
    dual2 = np.full(n, maxw, np.int64)

    cap_ch = n + 2
    bch = np.zeros((nb, cap_ch), np.int32)
    bchn = np.zeros(nb, np.int32)
    bex = np.zeros((nb, cap_ch), np.int32)
    bey = np.zeros((nb, cap_ch), np.int32)
    bfree = np.empty(n, np.int32)
    for i in range(n):
        bfree[i] = nb - 1 - i  # pop order n, n+1, ...
    nfree = n

    qcap = n * n + 8 * n + 16
    queue = np.empty(qcap, np.int32)
    qn = 0

    marker = np.zeros(nb, np.bool_)
    px = np.empty(2 * n + 2, np.int32)
    py = np.empty(2 * n + 2, np.int32)
    qx = np.empty(2 * n + 2, np.int32)
    qy = np.empty(2 * n + 2, np.int32)
    scratch_stack = np.empty(nb, np.int32)
    scratch_leaves = np.empty(n, np.int32)
    path_nodes = np.empty(cap_ch + 2, np.int32)
    path_ex = np.empty(cap_ch + 2, np.int32)
    path_ey = np.empty(cap_ch + 2, np.int32)
    aug_outer = np.empty(4 * n + 8, np.int32)
    aug_sub = np.empty(4 * n + 8, np.int32)
    exp_stack = np.empty(n + 8, np.int32)

    for v in range(n):
        mate[v] = -1

    for _stage in range(n + 1):
        # ---- stage setup ----
        qn = 0
        any_unmatched = False
        for v in range(n):
            if mate[v] == -1 and blabel[top[v]] == _NONE:
                any_unmatched = True
                qn = _assign_label_s(v, top, blabel, btx, bty, mate, bbase,
                                     bch, bchn, queue, qn, scratch_stack,
                                     scratch_leaves)
        if not any_unmatched:
            return 0  # perfect matching reached

        augmented = False
        aug_len = 0
        while True:
            # ---- scan queued S-vertices ----
            found_path = False
            while qn > 0 and not found_path:
                qn -= 1
                x = queue[qn]
                if blabel[top[x]] != _S:
                    continue
                for y in range(n):
                    if y == x:
                        continue
                    bx = top[x]
                    by = top[y]
                    if bx == by:
                        continue
                    slack = dual2[x] + dual2[y] - 2 * w2[x, y]
                    if slack <= 0:
                        lab = blabel[by]
                        if lab == _NONE:
                            qn = _assign_label_t(
                                x, y, top, blabel, btx, bty, mate, bbase,
                                bch, bchn, queue, qn, scratch_stack,
                                scratch_leaves)
                            if qn > qcap - n - 2:
                                return 1
                        elif lab == _S:
                            plen = _trace(x, y, top, btx, bty, marker,
                                          px, py, qx, qy)
                            p0 = px[0]
                            q1 = py[plen - 1]
                            if top[p0] == top[q1]:
                                # new blossom
                                if nfree == 0:
                                    return 2
                                nfree -= 1
                                b = bfree[nfree]
                                base_sub = top[p0]
                                bchn[b] = plen
                                for i in range(plen):
                                    sub = top[px[i]]
                                    bch[b, i] = sub
                                    bex[b, i] = px[i]
                                    bey[b, i] = py[i]
                                    bparent[sub] = b
                                bbase[b] = bbase[base_sub]
                                blabel[b] = _S
                                btx[b] = btx[base_sub]
                                bty[b] = bty[base_sub]
                                bdual[b] = 0
                                bparent[b] = -1
                                for i in range(plen):
                                    sub = bch[b, i]
                                    if blabel[sub] == _T:
                                        k = _collect_leaves(
                                            sub, bch, bchn, scratch_stack,
                                            scratch_leaves)
                                        for jj in range(k):
                                            queue[qn] = scratch_leaves[jj]
                                            qn += 1
                                        if qn > qcap - n - 2:
                                            return 1
                                k = _collect_leaves(b, bch, bchn,
                                                    scratch_stack,
                                                    scratch_leaves)
                                for jj in range(k):
                                    top[scratch_leaves[jj]] = b
                            else:
                                found_path = True
                                aug_len = plen
                                break
            if found_path:
                augmented = True
                break

            # ---- delta step ----
            delta_type = 1
            delta = np.int64(0)
            first = True
            for v in range(n):
                if blabel[top[v]] == _S:
                    if first or dual2[v] < delta:
                        delta = dual2[v]
                        first = False
            d2_x = -1
            d2_y = -1
            d3_x = -1
            d3_y = -1
            for x in range(n):
                bx = top[x]
                if blabel[bx] != _S:
                    continue
                for y in range(n):
                    by = top[y]
                    if by == bx or y == x:
                        continue
                    if blabel[by] == _NONE:
                        slack = dual2[x] + dual2[y] - 2 * w2[x, y]
                        if slack <= delta:
                            delta = slack
                            delta_type = 2
                            d2_x = x
                            d2_y = y
                    elif blabel[by] == _S and y > x:
                        half = (dual2[x] + dual2[y] - 2 * w2[x, y]) // 2
                        if half <= delta:
                            delta = half
                            delta_type = 3
                            d3_x = x
                            d3_y = y
            d4_b = -1
            for b in range(n, nb):
                if (bparent[b] == -1 and bchn[b] > 0
                        and blabel[b] == _T and bdual[b] <= delta):
                    delta = bdual[b]
                    delta_type = 4
                    d4_b = b

            # apply delta
            for v in range(n):
                lab = blabel[top[v]]
                if lab == _S:
                    dual2[v] -= delta
                elif lab == _T:
                    dual2[v] += delta
            for b in range(n, nb):
                if bparent[b] == -1 and bchn[b] > 0:
                    if blabel[b] == _S:
                        bdual[b] += delta
                    elif blabel[b] == _T:
                        bdual[b] -= delta

            if delta_type == 2:
                if blabel[top[d2_x]] != _S:
                    tmp = d2_x
                    d2_x = d2_y
                    d2_y = tmp
                qn = _assign_label_t(
                    d2_x, d2_y, top, blabel, btx, bty, mate, bbase,
                    bch, bchn, queue, qn, scratch_stack, scratch_leaves)
                if qn > qcap - n - 2:
                    return 1
            elif delta_type == 3:
                plen = _trace(d3_x, d3_y, top, btx, bty, marker,
                              px, py, qx, qy)
                p0 = px[0]
                q1 = py[plen - 1]
                if top[p0] == top[q1]:
                    if nfree == 0:
                        return 2
                    nfree -= 1
                    b = bfree[nfree]
                    base_sub = top[p0]
                    bchn[b] = plen
                    for i in range(plen):
                        sub = top[px[i]]
                        bch[b, i] = sub
                        bex[b, i] = px[i]
                        bey[b, i] = py[i]
                        bparent[sub] = b
                    bbase[b] = bbase[base_sub]
                    blabel[b] = _S
                    btx[b] = btx[base_sub]
                    bty[b] = bty[base_sub]
                    bdual[b] = 0
                    bparent[b] = -1
                    for i in range(plen):
                        sub = bch[b, i]
                        if blabel[sub] == _T:
                            k = _collect_leaves(sub, bch, bchn, scratch_stack,
                                                scratch_leaves)
                            for jj in range(k):
                                queue[qn] = scratch_leaves[jj]
                                qn += 1
                            if qn > qcap - n - 2:
                                return 1
                    k = _collect_leaves(b, bch, bchn, scratch_stack,
                                        scratch_leaves)
                    for jj in range(k):
                        top[scratch_leaves[jj]] = b
                else:
                    augmented = True
                    aug_len = plen
                    break
            elif delta_type == 4:
                # expand the T-blossom d4_b
                b = d4_b
                for i in range(bchn[b]):
                    sub = bch[b, i]
                    bparent[sub] = -1
                    k = _collect_leaves(sub, bch, bchn, scratch_stack,
                                        scratch_leaves)
                    for jj in range(k):
                        top[scratch_leaves[jj]] = sub
                ex = btx[b]
                ey = bty[b]
                sub = top[ey]
                blabel[sub] = _T
                btx[sub] = ex
                bty[sub] = ey
                n_edges = _find_path_through(b, sub, bch, bchn, bex, bey,
                                             path_nodes, path_ex, path_ey)
                for p in range(0, n_edges, 2):
                    sx = path_ex[p]  # edge stored (y, x): x gets label S
                    qn = _assign_label_s(
                        path_ey[p], top, blabel, btx, bty, mate, bbase,
                        bch, bchn, queue, qn, scratch_stack, scratch_leaves)
                    if qn > qcap - n - 2:
                        return 1
                    sub2 = path_nodes[p + 2]
                    blabel[sub2] = _T
                    btx[sub2] = path_ex[p + 1]
                    bty[sub2] = path_ey[p + 1]
                blabel[b] = _NONE
                btx[b] = -1
                bty[b] = -1
                bchn[b] = 0
                bfree[nfree] = b
                nfree += 1
            else:
                break  # delta_type == 1: no improvement possible

        # ---- augment along the found path ----
        if augmented:
            for i in range(0, aug_len, 2):
                ax = px[i]
                ay = py[i]
                for side in range(2):
                    v2 = ax if side == 0 else ay
                    bstart = top[v2]
                    if bstart >= n:
                        # augment blossom bstart from trivial blossom v2
                        n_aug = 0
                        aug_outer[n_aug] = bstart
                        aug_sub[n_aug] = v2
                        n_aug += 1
                        while n_aug > 0:
                            n_aug -= 1
                            outer = aug_outer[n_aug]
                            sub = aug_sub[n_aug]
                            blo = bparent[sub]
                            if blo != outer:
                                aug_outer[n_aug] = outer
                                aug_sub[n_aug] = blo
                                n_aug += 1
                            n_edges = _find_path_through(
                                blo, sub, bch, bchn, bex, bey,
                                path_nodes, path_ex, path_ey)
                            for p in range(0, n_edges, 2):
                                mx = path_ex[p + 1]
                                my = path_ey[p + 1]
                                mate[mx] = my
                                mate[my] = mx
                                bn1 = path_nodes[p + 1]
                                if bn1 >= n:
                                    aug_outer[n_aug] = bn1
                                    aug_sub[n_aug] = mx
                                    n_aug += 1
                                bn2 = path_nodes[p + 2]
                                if bn2 >= n:
                                    aug_outer[n_aug] = bn2
                                    aug_sub[n_aug] = my
                                    n_aug += 1
                            # rotate children of blo so sub is first
                            nsub = bchn[blo]
                            ppos = 0
                            for i2 in range(nsub):
                                if bch[blo, i2] == sub:
                                    ppos = i2
                                    break
                            if ppos != 0:
                                for i2 in range(nsub):
                                    scratch_stack[i2] = bch[blo, (ppos + i2) % nsub]
                                for i2 in range(nsub):
                                    bch[blo, i2] = scratch_stack[i2]
                                for i2 in range(nsub):
                                    scratch_stack[i2] = bex[blo, (ppos + i2) % nsub]
                                for i2 in range(nsub):
                                    bex[blo, i2] = scratch_stack[i2]
                                for i2 in range(nsub):
                                    scratch_stack[i2] = bey[blo, (ppos + i2) % nsub]
                                for i2 in range(nsub):
                                    bey[blo, i2] = scratch_stack[i2]
                            bbase[blo] = bbase[sub]
                mate[ax] = ay
                mate[ay] = ax

        # ---- expand zero-dual blossoms ----
        n_exp = 0
        for b in range(n, nb):
            if bparent[b] == -1 and bchn[b] > 0 and bdual[b] == 0:
                exp_stack[n_exp] = b
                n_exp += 1
        while n_exp > 0:
            n_exp -= 1
            b = exp_stack[n_exp]
            for i in range(bchn[b]):
                sub = bch[b, i]
                bparent[sub] = -1
                if sub >= n and bdual[sub] == 0:
                    exp_stack[n_exp] = sub
                    n_exp += 1
                else:
                    k = _collect_leaves(sub, bch, bchn, scratch_stack,
                                        scratch_leaves)
                    for jj in range(k):
                        top[scratch_leaves[jj]] = sub
            bchn[b] = 0
            blabel[b] = _NONE
            bfree[nfree] = b
            nfree += 1

        # ---- reset stage ----
        for b in range(nb):
            blabel[b] = _NONE
            btx[b] = -1
            bty[b] = -1
        qn = 0

        if not augmented:
            break

    for v in range(n):
        if mate[v] == -1:
            return 3
    return 0


def min_weight_perfect_matching(weights: np.ndarray):
    """Pairs (i, j) with i < j minimizing total weight, plus that total.

    weights must be a symmetric integer matrix with an even number of rows.
    Deterministic: identical matrices give identical pairings.
    """
    w = np.asarray(weights)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weights must be a square matrix")
    n = w.shape[0]
    if n % 2 != 0:
        raise ValueError("perfect matching requires an even vertex count")
    if n == 0:
        return [], 0
    if not np.issubdtype(w.dtype, np.integer):
        if not np.all(w == np.round(w)):
            raise ValueError("weights must be integers")
        w = w.astype(np.int64)
    w = w.astype(np.int64)
    if n == 2:
        return [(0, 1)], int(w[0, 1])
    maxw = int(w.max())
    w2 = 2 * (maxw + 1 - w)
    mate = np.full(n, -1, np.int32)
    status = _mwpm_kernel(w2, mate)
    if status != 0:
        raise RuntimeError(f"matching kernel failed with status {status}")
    pairs = []
    total = 0
    for i in range(n):
        j = int(mate[i])
        if j > i:
            pairs.append((i, j))
            total += int(w[i, j])
    return pairs, total
