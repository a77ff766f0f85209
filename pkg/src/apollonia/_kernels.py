"""Numba kernels for the hot loops.

Everything here is mechanical: the structure decisions (canonical face
ids, the swap-remove leaf policy, the SplitMix64 draw discipline) are
documented in :mod:`apollonia.ran` and :mod:`apollonia.rng`, and the
profile algebra lives in :mod:`apollonia._profiles`.  Kernels consume
plain integer arrays and are held bit-for-bit to the pure-Python
reference implementations by the test suite.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _derive(seed, stream_id):
    return _mix64(_mix64(np.uint64(seed)) + np.uint64(stream_id) * _GAMMA)


@njit(cache=True)
def splitmix_block(seed, count):
    """The first `count` raw outputs of a SplitMix64 stream (for tests)."""
    out = np.empty(count, np.uint64)
    state = np.uint64(seed)
    for i in range(count):
        state = state + _GAMMA
        out[i] = _mix64(state)
    return out


@njit(cache=True)
def gen_choices(n, seed):
    """Choice sequence of a fresh instance: one bounded draw per insertion.

    Leaf policy: a dense array of live leaf face ids; the drawn slot is
    swap-removed (receives the last live entry) and the three children
    3i-2, 3i-1, 3i are appended in id order.
    """
    choices = np.empty(n, np.int64)
    leaves = np.empty(2 * n + 1 if n > 0 else 1, np.int64)
    leaves[0] = 0
    count = 1
    state = np.uint64(seed)
    mask = np.uint64(0)
    for i in range(1, n + 1):
        while mask < np.uint64(count - 1):
            mask = (mask << np.uint64(1)) | np.uint64(1)
        while True:
            state = state + _GAMMA
            j = np.int64(_mix64(state) & mask)
            if j < count:
                break
        f = leaves[j]
        choices[i - 1] = f
        leaves[j] = leaves[count - 1]
        leaves[count - 1] = 3 * i - 2
        leaves[count] = 3 * i - 1
        leaves[count + 1] = 3 * i
        count += 2
    return choices


@njit(cache=True)
def replay_leaves(choices):
    """Replay a choice sequence, validating leaf-at-time.

    Returns (leaves, count, err) where leaves[:count] is the live leaf
    array in exact slot order after the last insertion, and err is the
    first offending 0-based index into choices (-1 when valid; the
    returned leaf state is meaningless otherwise).
    """
    n = choices.shape[0]
    leaves = np.empty(2 * n + 1 if n > 0 else 1, np.int64)
    slot_of = np.full(3 * n + 1, -1, np.int64)
    leaves[0] = 0
    slot_of[0] = 0
    count = 1
    for i in range(1, n + 1):
        f = choices[i - 1]
        if f < 0 or f > 3 * n:
            return leaves, count, i - 1
        j = slot_of[f]
        if j < 0:
            return leaves, count, i - 1
        moved = leaves[count - 1]
        leaves[j] = moved
        slot_of[moved] = j
        slot_of[f] = -1
        leaves[count - 1] = 3 * i - 2
        leaves[count] = 3 * i - 1
        leaves[count + 1] = 3 * i
        slot_of[3 * i - 2] = count - 1
        slot_of[3 * i - 1] = count
        slot_of[3 * i] = count + 1
        count += 2
    return leaves, count, -1


@njit(cache=True)
def extend_choices(leaves, count, n0, extra, seed):
    """Continue the leaf process `extra` steps past insertion n0.

    `leaves[:count]` must be the live array in the slot order produced by
    replay_leaves; draws come from a fresh SplitMix64 stream, same
    discipline as gen_choices.
    """
    out = np.empty(extra, np.int64)
    arr = np.empty(count + 2 * extra, np.int64)
    arr[:count] = leaves[:count]
    state = np.uint64(seed)
    mask = np.uint64(0)
    for k in range(extra):
        i = n0 + 1 + k
        while mask < np.uint64(count - 1):
            mask = (mask << np.uint64(1)) | np.uint64(1)
        while True:
            state = state + _GAMMA
            j = np.int64(_mix64(state) & mask)
            if j < count:
                break
        f = arr[j]
        out[k] = f
        arr[j] = arr[count - 1]
        arr[count - 1] = 3 * i - 2
        arr[count] = 3 * i - 1
        arr[count + 1] = 3 * i
        count += 2
    return out


@njit(cache=True)
def build_corners(choices):
    """Sorted corner triples for every face id, creation order."""
    n = choices.shape[0]
    corners = np.empty((3 * n + 1, 3), np.int32)
    corners[0, 0] = 0
    corners[0, 1] = 1
    corners[0, 2] = 2
    for i in range(1, n + 1):
        f = choices[i - 1]
        a = corners[f, 0]
        b = corners[f, 1]
        c = corners[f, 2]
        v = i + 2
        base = 3 * i - 2
        corners[base, 0] = b
        corners[base, 1] = c
        corners[base, 2] = v
        corners[base + 1, 0] = a
        corners[base + 1, 1] = c
        corners[base + 1, 2] = v
        corners[base + 2, 0] = a
        corners[base + 2, 1] = b
        corners[base + 2, 2] = v
    return corners


@njit(cache=True)
def build_sub_at(choices):
    """sub_at[f] = insertion that subdivided face f, or 0 for a live leaf."""
    n = choices.shape[0]
    sub_at = np.zeros(3 * n + 1, np.int32)
    for i in range(1, n + 1):
        sub_at[choices[i - 1]] = i
    return sub_at


@njit(cache=True)
def build_csr(choices, corners):
    """Adjacency of the full graph in CSR form, neighbor lists sorted."""
    n = choices.shape[0]
    nv = n + 3
    ne = 3 * n + 6
    deg = np.zeros(nv, np.int64)
    eu = np.empty(2 * ne, np.int32)
    ew = np.empty(2 * ne, np.int32)
    k = 0
    for a in range(3):
        for b in range(a + 1, 3):
            eu[k] = a
            ew[k] = b
            eu[k + 1] = b
            ew[k + 1] = a
            k += 2
    for i in range(1, n + 1):
        f = choices[i - 1]
        v = i + 2
        for t in range(3):
            u = corners[f, t]
            eu[k] = v
            ew[k] = u
            eu[k + 1] = u
            ew[k + 1] = v
            k += 2
    for idx in range(k):
        deg[eu[idx]] += 1
    indptr = np.zeros(nv + 1, np.int64)
    for v in range(nv):
        indptr[v + 1] = indptr[v] + deg[v]
    fill = indptr[:nv].copy()
    indices = np.empty(k, np.int32)
    for idx in range(k):
        u = eu[idx]
        indices[fill[u]] = ew[idx]
        fill[u] += 1
    for v in range(nv):
        indices[indptr[v] : indptr[v + 1]].sort()
    return indptr, indices


@njit(cache=True)
def subtree_sizes(choices):
    """Interior vertex count of every face's region (0 for leaves)."""
    n = choices.shape[0]
    sz = np.zeros(3 * n + 1, np.int64)
    for i in range(n, 0, -1):
        base = 3 * i - 2
        sz[choices[i - 1]] = 1 + sz[base] + sz[base + 1] + sz[base + 2]
    return sz


@njit(cache=True)
def ancestor_leaf_faces(choices, sigma, faces):
    """Map face ids of the full tree to the containing leaf face of the
    sigma-prefix (walking up the creation chain)."""
    out = np.empty(faces.shape[0], np.int64)
    for idx in range(faces.shape[0]):
        f = faces[idx]
        while (f + 2) // 3 > sigma:
            f = choices[(f + 2) // 3 - 1]
        out[idx] = f
    return out


@njit(cache=True)
def dp_values(n, choices, sub_at, fold, edge, fin_state, fin_cover, const, unary, empty4):
    """Profile value tables for every subdivided node, leaves first.

    V[i, q] is the maximum number of interior vertices of the region
    subdivided at insertion i that a path trace with boundary profile q
    can cover (-1 when q is unreachable).  Root answers come from V[1]
    plus the boundary-closure gain table.
    """
    V = np.full((n + 1, 36), -1, np.int32)
    acc_a = np.empty(130, np.int32)
    acc_b = np.empty(130, np.int32)
    for i in range(n, 0, -1):
        base = 3 * i - 2
        c0 = sub_at[base]
        c1 = sub_at[base + 1]
        c2 = sub_at[base + 2]
        m = (1 if c0 > 0 else 0) + (1 if c1 > 0 else 0) + (1 if c2 > 0 else 0)
        if m == 0:
            for q in range(36):
                V[i, q] = const[q]
        elif m == 1:
            if c0 > 0:
                t, ci = 0, c0
            elif c1 > 0:
                t, ci = 1, c1
            else:
                t, ci = 2, c2
            for p in range(36):
                vp = V[ci, p]
                if vp < 0:
                    continue
                for q in range(36):
                    g = unary[t, p, q]
                    if g >= 0 and vp + g > V[i, q]:
                        V[i, q] = vp + g
        else:
            acc_a[:] = -1
            acc_a[empty4] = 0
            for t in range(3):
                if t == 0:
                    ci = c0
                elif t == 1:
                    ci = c1
                else:
                    ci = c2
                if ci <= 0:
                    continue
                acc_b[:] = -1
                for s in range(130):
                    a = acc_a[s]
                    if a < 0:
                        continue
                    for p in range(36):
                        vp = V[ci, p]
                        if vp < 0:
                            continue
                        s2 = fold[t, s, p]
                        if s2 < 0:
                            continue
                        v = a + vp
                        if v > acc_b[s2]:
                            acc_b[s2] = v
                for s in range(130):
                    acc_a[s] = acc_b[s]
            for s in range(130):
                a = acc_a[s]
                if a < 0:
                    continue
                for mask in range(8):
                    s2 = edge[s, mask]
                    if s2 < 0:
                        continue
                    q = fin_state[s2]
                    if q < 0:
                        continue
                    v = a + fin_cover[s2]
                    if v > V[i, q]:
                        V[i, q] = v
    return V


@njit(cache=True)
def dp_witness(
    n,
    choices,
    corners,
    sub_at,
    V,
    fold,
    edge,
    fin_state,
    fin_cover,
    empty3,
    empty4,
    root_q,
    root_mask,
):
    """Edge list of one optimal trace, replayed from the value tables.

    No back-pointers are stored during the value pass; instead each node
    on the optimal trace re-runs its fold and picks the first
    combination (in canonical state order) that reproduces its table
    value, which makes the witness deterministic.  Returns (edges, ok);
    ok < 0 signals an internal inconsistency and never happens when the
    tables and values agree.
    """
    out = np.empty((3 * n + 3, 2), np.int64)
    n_edges = 0
    stack_i = np.empty(n + 1, np.int64)
    stack_q = np.empty(n + 1, np.int64)
    top = 0
    stack_i[0] = 1
    stack_q[0] = root_q
    for j in range(3):
        if root_mask >> j & 1:
            out[n_edges, 0] = 0 if j < 2 else 1
            out[n_edges, 1] = 2 if j > 0 else 1
            n_edges += 1
    acc = np.empty((4, 130), np.int32)
    child_nodes = np.empty(3, np.int64)
    child_slots = np.empty(3, np.int64)
    while top >= 0:
        i = stack_i[top]
        q = stack_q[top]
        top -= 1
        v = V[i, q]
        face = choices[i - 1]
        apex = i + 2
        base = 3 * i - 2
        # forward pass: fold the internal children, keeping every stage
        acc[0, :] = -1
        acc[0, empty4] = 0
        nstages = 0
        for t in range(3):
            ci = sub_at[base + t]
            if ci <= 0:
                continue
            acc[nstages + 1, :] = -1
            for s in range(130):
                a = acc[nstages, s]
                if a < 0:
                    continue
                for p in range(36):
                    vp = V[ci, p]
                    if vp < 0:
                        continue
                    s2 = fold[t, s, p]
                    if s2 >= 0 and a + vp > acc[nstages + 1, s2]:
                        acc[nstages + 1, s2] = a + vp
            child_nodes[nstages] = ci
            child_slots[nstages] = t
            nstages += 1
        # pick the pre-apex-edge state and edge mask
        sel_s = -1
        sel_mask = -1
        for s in range(130):
            a = acc[nstages, s]
            if a < 0:
                continue
            for mask in range(8):
                s2 = edge[s, mask]
                if s2 >= 0 and fin_state[s2] == q and a + fin_cover[s2] == v:
                    sel_s = s
                    sel_mask = mask
                    break
            if sel_s >= 0:
                break
        if sel_s < 0:
            return out[:0], -1
        for j in range(3):
            if sel_mask >> j & 1:
                out[n_edges, 0] = corners[face, j]
                out[n_edges, 1] = apex
                n_edges += 1
        # backward pass: split the achieved value over the children
        cur_s = sel_s
        cur_v = acc[nstages, sel_s]
        for st in range(nstages - 1, -1, -1):
            t = child_slots[st]
            ci = child_nodes[st]
            found = False
            for s_prev in range(130):
                a = acc[st, s_prev]
                if a < 0:
                    continue
                for p in range(36):
                    vp = V[ci, p]
                    if vp < 0:
                        continue
                    if fold[t, s_prev, p] == cur_s and a + vp == cur_v:
                        if p != empty3 or vp != 0:
                            top += 1
                            stack_i[top] = ci
                            stack_q[top] = p
                        cur_s = s_prev
                        cur_v = a
                        found = True
                        break
                if found:
                    break
            if not found:
                return out[:0], -2
    return out[:n_edges].copy(), n_edges


@njit(cache=True)
def brute_longest(indptr, indices, nv):
    """Exhaustive DFS over all simple paths; returns (length, witness).

    Guarded by the caller to nv <= 14 so the visited set fits a word and
    the search space stays tame.
    """
    best_len = 0
    best = np.zeros(nv, np.int32)
    stack_v = np.empty(nv, np.int32)
    stack_it = np.empty(nv, np.int64)
    for start in range(nv):
        depth = 0
        stack_v[0] = start
        stack_it[0] = indptr[start]
        visited = np.int64(1) << np.int64(start)
        while depth >= 0:
            v = stack_v[depth]
            it = stack_it[depth]
            if it < indptr[v + 1]:
                stack_it[depth] = it + 1
                w = indices[it]
                if not (visited >> np.int64(w)) & np.int64(1):
                    depth += 1
                    stack_v[depth] = w
                    stack_it[depth] = indptr[w]
                    visited |= np.int64(1) << np.int64(w)
                    if depth > best_len:
                        best_len = depth
                        for d in range(depth + 1):
                            best[d] = stack_v[d]
            else:
                visited &= ~(np.int64(1) << np.int64(v))
                depth -= 1
    return best_len, best[: best_len + 1].copy()


@njit(cache=True)
def urn_marked_totals(labels0, count0, n_marked, steps, trials, seed):
    """Continue the leaf process and total the hits on marked groups.

    labels0[:count0] are group labels per live leaf slot (slot order from
    replay_leaves); groups with label < n_marked are the marked ones.
    Trial t uses the derived stream (seed, t).  Returns one total per
    trial.
    """
    out = np.empty(trials, np.int64)
    labels = np.empty(count0 + 2 * steps, np.int64)
    for tr in range(trials):
        state = _derive(seed, tr)
        labels[:count0] = labels0[:count0]
        count = count0
        mask = np.uint64(0)
        hits = np.int64(0)
        for _ in range(steps):
            while mask < np.uint64(count - 1):
                mask = (mask << np.uint64(1)) | np.uint64(1)
            while True:
                state = state + _GAMMA
                j = np.int64(_mix64(state) & mask)
                if j < count:
                    break
            g = labels[j]
            if g < n_marked:
                hits += 1
            labels[j] = labels[count - 1]
            labels[count - 1] = g
            labels[count] = g
            labels[count + 1] = g
            count += 2
        out[tr] = hits
    return out


@njit(cache=True)
def urn_tail_violations(n_groups, tau, steps, trials, threshold, seed):
    """Count trials whose top-tau group occupancy exceeds the threshold.

    Starts from n_groups singleton leaf groups, one per live slot.  Every
    group begins with weight one, so the top-tau statistic is invariant
    under group relabeling and no slot-order input is needed.  The tau
    groups are chosen per trial as the tau largest occupancies, the
    adversarial choice.  Also returns the largest top-tau total seen,
    for reporting.
    """
    viol = 0
    worst = np.int64(0)
    labels = np.empty(n_groups + 2 * steps, np.int64)
    counts = np.empty(n_groups, np.int64)
    for tr in range(trials):
        state = _derive(seed, tr)
        for g in range(n_groups):
            labels[g] = g
        count = n_groups
        counts[:] = 0
        mask = np.uint64(0)
        for _ in range(steps):
            while mask < np.uint64(count - 1):
                mask = (mask << np.uint64(1)) | np.uint64(1)
            while True:
                state = state + _GAMMA
                j = np.int64(_mix64(state) & mask)
                if j < count:
                    break
            g = labels[j]
            counts[g] += 1
            labels[j] = labels[count - 1]
            labels[count - 1] = g
            labels[count] = g
            labels[count + 1] = g
            count += 2
        srt = np.sort(counts)
        top = np.int64(0)
        for idx in range(n_groups - tau, n_groups):
            top += srt[idx]
        if top > threshold:
            viol += 1
        if top > worst:
            worst = top
    return viol, worst
