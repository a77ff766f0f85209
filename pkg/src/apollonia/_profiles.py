"""Boundary-profile algebra for the exact longest-path solver.

The longest-path dynamic program walks the triangle recursion tree of an
Apollonian network bottom-up.  For a region (a face of the tree together
with everything inserted inside it), the intersection of a simple path
with the region's private edges is a disjoint union of path segments.
Looking only at the region's three boundary corners, that trace is fully
described by a small finite state, the *profile*:

* ``degs``: for each corner, how many private edges of the region the
  path uses at that corner (0, 1 or 2).  A corner of degree 2 is passed
  through and can never receive another edge.
* components: every maximal segment has exactly two ends, and an end is
  either at a degree-1 corner or strictly interior to the region.  An
  interior end can never be extended (all edges at interior vertices are
  private), so it is a final endpoint of the whole path, a *loose end*.
  Components are therefore classified as corner-corner pairs,
  corner-loose singles, or a loose-loose *sealed* segment.

Validity is forced by path-ness: at most two loose ends in total, and a
sealed segment is a complete path all by itself, so nothing else may
coexist with it.  Degree-2 corners lie on some segment, hence require at
least one component.  Enumerating these states gives exactly 36 profiles
on 3 slots and 130 on the 4 slots (three corners plus apex) that appear
while merging a subdivided node.

This module enumerates the state alphabets, implements the fusion rules
(gluing child regions at shared vertices, adding apex edges, finalizing
the apex into the interior, closing the outer boundary), and freezes the
whole algebra into dense integer transition tables.  The numeric solver
consumes only the tables; everything here is plain Python run once and
heavily self-checked at build time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

# A component is (corner_ends, loose) with len(corner_ends) + loose == 2:
#   ((x, y), 0)  segment between degree-1 corners x and y
#   ((x,), 1)    segment from corner x to an interior loose end
#   ((), 2)      sealed segment, both ends interior
# A state is (degs, comps) with comps canonically sorted.

EMBED = ((1, 2, 3), (0, 2, 3), (0, 1, 3))  # child slot -> parent slot, per child position
ROOT_EDGE_PAIRS = ((0, 1), (0, 2), (1, 2))  # boundary-edge bit -> corner pair
APEX_SLOT = 3


def _ends_at(comps, s):
    return sum(c[0].count(s) for c in comps)


def _resolve(degs, comps):
    """Run forced concatenations, then validate.  Returns a state or None.

    A slot whose degree has reached 2 while two segment ends sit on it is
    a pass-through vertex: the two segments concatenate there.  If both
    ends belong to the same component the concatenation would close a
    cycle, which a simple path cannot contain.
    """
    comps = [(list(ends), loose) for ends, loose in comps]
    changed = True
    while changed:
        changed = False
        for s in range(len(degs)):
            if degs[s] != 2:
                continue
            holders = [i for i, (ends, _) in enumerate(comps) if s in ends]
            total = sum(ends.count(s) for ends, _ in comps)
            if total == 0:
                continue
            if total == 1:
                raise AssertionError("degree-2 slot with a single end")
            if len(holders) == 1:
                return None  # both ends of one component meet: cycle
            i, j = holders[0], holders[1]
            ei, li = comps[i]
            ej, lj = comps[j]
            ei.remove(s)
            ej.remove(s)
            comps[i] = (ei + ej, li + lj)
            del comps[j]
            changed = True
    loose = sum(l for _, l in comps)
    if loose > 2:
        return None
    if any(l == 2 for _, l in comps) and len(comps) > 1:
        return None  # a sealed segment is the entire path
    for s in range(len(degs)):
        n = sum(ends.count(s) for ends, _ in comps)
        if degs[s] == 1 and n != 1:
            raise AssertionError("degree-1 slot must hold exactly one end")
        if degs[s] != 1 and n != 0:
            raise AssertionError("ends may only sit on degree-1 slots")
    if any(d == 2 for d in degs) and not comps:
        return None  # a passed-through corner needs a segment to sit on
    canon = tuple(sorted((tuple(sorted(e)), l) for e, l in comps))
    return (tuple(degs), canon)


def _union(st_a, st_b):
    """Glue two traces living on the same slot set."""
    degs = [a + b for a, b in zip(st_a[0], st_b[0])]
    if any(d > 2 for d in degs):
        return None
    return _resolve(degs, list(st_a[1]) + list(st_b[1]))


def _embed(st3, slot_map):
    degs = [0, 0, 0, 0]
    for i, d in enumerate(st3[0]):
        degs[slot_map[i]] = d
    comps = tuple(
        (tuple(sorted(slot_map[x] for x in ends)), l) for ends, l in st3[1]
    )
    return (tuple(degs), comps)


def _add_edge(st, u, w):
    degs = list(st[0])
    degs[u] += 1
    degs[w] += 1
    if degs[u] > 2 or degs[w] > 2:
        return None
    return _resolve(degs, list(st[1]) + [(tuple(sorted((u, w))), 0)])


def _finalize_apex(st4):
    """Close the apex slot into the region interior.

    Returns (3-slot state or None, covered) where covered is 1 when the
    apex lies on the path.  A degree-1 apex turns its segment end into a
    loose end; that can overflow the loose-end budget, in which case the
    configuration is dead.
    """
    degs, comps = st4
    d = degs[APEX_SLOT]
    assert _ends_at(comps, APEX_SLOT) == (1 if d == 1 else 0)
    if d != 1:
        return (degs[:3], comps), (1 if d == 2 else 0)
    new = []
    for ends, l in comps:
        if APEX_SLOT in ends:
            rest = tuple(x for x in ends if x != APEX_SLOT)
            new.append((rest, l + 1))
        else:
            new.append((ends, l))
    out = _resolve(list(degs[:3]), new)
    return out, 1


def _enumerate_matchings(slots):
    """All ways to split ``slots`` into unordered pairs and singletons."""
    slots = list(slots)
    if not slots:
        return [()]
    first, rest = slots[0], slots[1:]
    out = [(((first,), 1),) + m for m in _enumerate_matchings(rest)]
    for i, other in enumerate(rest):
        remaining = rest[:i] + rest[i + 1 :]
        pair = ((first, other), 0)
        out.extend((pair,) + m for m in _enumerate_matchings(remaining))
    return out


def enumerate_profiles(k: int) -> list:
    """Canonically ordered list of all valid k-slot profile states."""
    states = []
    for degs_flat in range(3**k):
        degs = tuple((degs_flat // 3**i) % 3 for i in range(k))
        ones = [s for s in range(k) if degs[s] == 1]
        for m in _enumerate_matchings(ones):
            comps = tuple(sorted(m))
            loose = sum(l for _, l in comps)
            if loose > 2:
                continue
            states.append((degs, comps))
        if not ones:
            # sealed option: one loose-loose segment, nothing else
            states.append((degs, (((), 2),)))
    # drop states violating the degree-2-needs-a-component rule and dedup
    out = []
    for degs, comps in states:
        if any(d == 2 for d in degs) and not comps:
            continue
        out.append((degs, comps))
    out = sorted(set(out))
    return out


@dataclass(frozen=True)
class ProfileTables:
    """Frozen transition tables driving the longest-path solver.

    All tables index states by their position in the canonical alphabets
    ``states3`` (3 slots) and ``states4`` (3 corners + apex).  The value
    -1 marks an invalid or unreachable transition throughout.

    fold[t][s4, p3]   glue child profile p3 (child position t) onto s4
    edge[s4, mask]    add the apex-corner edges selected by mask (bit j
                      is the edge apex-corner_j)
    fin_state[s4]     3-slot state after the apex becomes interior
    fin_cover[s4]     1 if the apex is covered by the path, else 0
    const[p3]         best apex coverage for a node whose three children
                      are all leaves, by resulting parent profile
    unary[t][p3c, p3] best apex coverage for a node with one internal
                      child (position t, profile p3c), by parent profile
    root_gain[p3, mask]  covered outer corners when profile p3 plus the
                      boundary edges in mask close into one single
                      segment; -1 when they do not
    """

    states3: tuple
    states4: tuple
    idx3: dict
    idx4: dict
    empty3: int
    empty4: int
    fold: np.ndarray
    edge: np.ndarray
    fin_state: np.ndarray
    fin_cover: np.ndarray
    const: np.ndarray
    unary: np.ndarray
    root_gain: np.ndarray


def _apply_mask(st4, mask, order=(0, 1, 2)):
    for j in order:
        if mask >> j & 1:
            st4 = _add_edge(st4, APEX_SLOT, j)
            if st4 is None:
                return None
    return st4


def _root_close(st3, mask):
    st = st3
    for j in range(3):
        if mask >> j & 1:
            st = _add_edge(st, *ROOT_EDGE_PAIRS[j])
            if st is None:
                return -1
    degs, comps = st
    if len(comps) != 1:
        return -1
    return sum(1 for d in degs if d > 0)


@lru_cache(maxsize=1)
def get_tables() -> ProfileTables:
    states3 = enumerate_profiles(3)
    states4 = enumerate_profiles(4)
    assert len(states3) == 36, len(states3)
    assert len(states4) == 130, len(states4)
    idx3 = {st: i for i, st in enumerate(states3)}
    idx4 = {st: i for i, st in enumerate(states4)}
    empty3 = idx3[((0, 0, 0), ())]
    empty4 = idx4[((0, 0, 0, 0), ())]

    # alphabet closure under corner relabeling (slot permutations)
    for perm in permutations(range(3)):
        for degs, comps in states3:
            nd = tuple(degs[perm.index(i)] for i in range(3))
            nc = tuple(
                sorted((tuple(sorted(perm[x] for x in e)), l) for e, l in comps)
            )
            assert (nd, nc) in idx3

    fold = np.full((3, 130, 36), -1, dtype=np.int16)
    for t in range(3):
        for si, st4 in enumerate(states4):
            for pi, st3 in enumerate(states3):
                merged = _union(st4, _embed(st3, EMBED[t]))
                if merged is not None:
                    fold[t, si, pi] = idx4[merged]
        for si in range(130):
            assert fold[t, si, empty3] == si  # folding a leaf child is a no-op

    edge = np.full((130, 8), -1, dtype=np.int16)
    for si, st4 in enumerate(states4):
        for mask in range(8):
            res = _apply_mask(st4, mask)
            if res is not None:
                edge[si, mask] = idx4[res]
            # adding edges must not depend on the order they are applied
            for order in permutations(range(3)):
                alt = _apply_mask(st4, mask, order)
                assert (alt is None) == (res is None)
                assert alt == res
        assert edge[si, 0] == si

    fin_state = np.full(130, -1, dtype=np.int16)
    fin_cover = np.zeros(130, dtype=np.int8)
    for si, st4 in enumerate(states4):
        st3, covered = _finalize_apex(st4)
        if st3 is not None:
            fin_state[si] = idx3[st3]
            fin_cover[si] = covered
    assert fin_state[empty4] == empty3 and fin_cover[empty4] == 0

    const = np.full(36, -1, dtype=np.int8)
    for mask in range(8):
        s2 = edge[empty4, mask]
        if s2 < 0:
            continue
        q = fin_state[s2]
        if q < 0:
            continue
        const[q] = max(const[q], fin_cover[s2])
    assert const[empty3] == 0

    unary = np.full((3, 36, 36), -1, dtype=np.int8)
    for t in range(3):
        for p in range(36):
            s = fold[t, empty4, p]
            assert s >= 0
            for mask in range(8):
                s2 = edge[s, mask]
                if s2 < 0:
                    continue
                q = fin_state[s2]
                if q < 0:
                    continue
                unary[t, p, q] = max(unary[t, p, q], fin_cover[s2])

    root_gain = np.full((36, 8), -1, dtype=np.int8)
    for qi, st3 in enumerate(states3):
        for mask in range(8):
            root_gain[qi, mask] = _root_close(st3, mask)

    # end-to-end anchors computable from the tables alone:
    # a bare triangle closes to a 3-vertex segment (2 edges),
    assert root_gain[empty3, 0b011] == 3
    assert max(root_gain[empty3, m] for m in range(8)) == 3
    # and one subdivision yields a 4-vertex segment (3 edges).
    best_k4 = max(
        int(const[q]) + int(root_gain[q, m])
        for q in range(36)
        for m in range(8)
        if const[q] >= 0 and root_gain[q, m] >= 0
    )
    assert best_k4 == 4

    return ProfileTables(
        states3=tuple(states3),
        states4=tuple(states4),
        idx3=idx3,
        idx4=idx4,
        empty3=empty3,
        empty4=empty4,
        fold=fold,
        edge=edge,
        fin_state=fin_state,
        fin_cover=fin_cover,
        const=const,
        unary=unary,
        root_gain=root_gain,
    )
