"""Longest simple paths in Apollonian network instances.

Three solvers, one contract:

* :func:`longest_path_exact` runs a profile dynamic program over the
  triangle recursion tree.  Each face's region meets a simple path in a
  bounded boundary profile (see :mod:`apollonia._profiles`), so a value
  table of 36 entries per subdivided face suffices and the whole solve
  is linear in the instance size.
* :func:`longest_path_bruteforce` enumerates every simple path of a
  small adjacency by exhaustive DFS.  It is the oracle the exact solver
  is tested against, and refuses instances over 14 vertices.
* :func:`heuristic_long_path` builds a long (not necessarily optimal)
  path in linear time by descending the recursion tree through each
  apex, dropping the child with the fewest interior vertices.

Lengths are counted in edges: the bare triangle has length 2 and K4 has
length 3.  All witnesses are deterministic; equal-value alternatives
are broken toward the lexicographically smallest canonical profile.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from ._profiles import get_tables
from .errors import CapacityError, DomainError
from .ran import Ran

__all__ = [
    "longest_path_exact",
    "longest_path_bruteforce",
    "heuristic_long_path",
    "validate_path",
]


def validate_path(adjacency: Mapping[int, Sequence[int]], path: Sequence[int]) -> bool:
    """True iff ``path`` is a simple path of ``adjacency``.

    A single vertex is a valid path of length 0; an empty sequence is
    not a path.
    """
    p = list(path)
    if not p or len(set(p)) != len(p):
        return False
    if any(v not in adjacency for v in p):
        return False
    return all(b in adjacency[a] for a, b in zip(p, p[1:]))


def _csr_from_adjacency(adjacency: Mapping[int, Sequence[int]]):
    ids = sorted(adjacency)
    pos = {v: k for k, v in enumerate(ids)}
    nv = len(ids)
    indptr = np.zeros(nv + 1, dtype=np.int64)
    rows = []
    for k, v in enumerate(ids):
        nbrs = sorted(pos[w] for w in set(adjacency[v]))
        if any(w == k for w in nbrs):
            raise DomainError(f"vertex {v} has a self-loop")
        rows.append(nbrs)
        indptr[k + 1] = indptr[k] + len(nbrs)
    indices = np.array([w for r in rows for w in r] or [0], dtype=np.int64)[
        : indptr[nv]
    ]
    for k, r in enumerate(rows):
        for w in r:
            if pos[ids[k]] not in set(pos[x] for x in adjacency[ids[w]]):
                raise DomainError("adjacency is not symmetric")
    return ids, indptr, indices


def longest_path_bruteforce(adjacency: Mapping[int, Sequence[int]]):
    """Exact longest path of a small graph by exhaustive DFS.

    Returns ``(length in edges, path)``.  Raises :class:`CapacityError`
    above 14 vertices; the search visits every simple path, so the
    limit is what keeps it honest rather than geological.
    """
    if not adjacency:
        raise DomainError("adjacency is empty")
    if len(adjacency) > 14:
        raise CapacityError(
            f"instance too large for brute force: {len(adjacency)} vertices (limit 14)"
        )
    ids, indptr, indices = _csr_from_adjacency(adjacency)
    length, witness = _kernels.brute_longest(indptr, indices, len(ids))
    return int(length), [ids[w] for w in witness]


def _chain_from_edges(edges: np.ndarray) -> list:
    """Order an edge set that forms one open chain into a vertex path."""
    nbr: dict = {}
    for u, w in edges:
        nbr.setdefault(int(u), []).append(int(w))
        nbr.setdefault(int(w), []).append(int(u))
    assert all(len(v) <= 2 for v in nbr.values()), "witness is not a path"
    ends = sorted(v for v, ns in nbr.items() if len(ns) == 1)
    assert len(ends) == 2, "witness is not one open chain"
    path = [ends[0]]
    prev = -1
    while True:
        here = path[-1]
        step = [w for w in nbr[here] if w != prev]
        if not step:
            break
        prev = here
        path.append(step[0] if len(step) == 1 else min(step))
    assert len(path) == len(nbr) == len(edges) + 1, "witness chain is broken"
    return path


def longest_path_exact(ran: Ran):
    """Length (in edges) and one witness of a longest simple path.

    The value pass fills a 36-state table per subdivided face, bottom
    up; the root closes the outer triangle's boundary edges and demands
    a single maximal segment.  The witness is then replayed top-down
    from the tables (no back-pointers), deterministically.
    """
    if ran.n == 0:
        return 2, [0, 1, 2]
    tb = get_tables()
    V = _kernels.dp_values(
        ran.n,
        ran.choices,
        ran._sub_at,
        tb.fold,
        tb.edge,
        tb.fin_state,
        tb.fin_cover,
        tb.const,
        tb.unary,
        tb.empty4,
    )
    best = -1
    root_q = -1
    root_mask = -1
    for q in range(36):
        vq = int(V[1, q])
        if vq < 0:
            continue
        for mask in range(8):
            g = int(tb.root_gain[q, mask])
            if g >= 0 and vq + g > best:
                best = vq + g
                root_q = q
                root_mask = mask
    assert best >= 3, "no valid closure at the root"
    edges, ok = _kernels.dp_witness(
        ran.n,
        ran.choices,
        ran._corners,
        ran._sub_at,
        V,
        tb.fold,
        tb.edge,
        tb.fin_state,
        tb.fin_cover,
        tb.empty3,
        tb.empty4,
        root_q,
        root_mask,
    )
    assert ok >= 0, f"witness replay failed with code {ok}"
    length = best - 1
    path = _chain_from_edges(edges)
    assert len(edges) == length
    return length, path


def heuristic_long_path(ran: Ran) -> list:
    """A long path by greedy descent through the recursion tree.

    Every subdivided region is crossed corner to corner through its
    apex, recursing into the two child regions that keep the crossing
    feasible while skipping the child with the fewest interior
    vertices (ties to the lowest child position).  At the root all
    three corner pairs are tried, with the spare corner prepended over
    a boundary edge; the longest result wins, ties to the first pair
    in lexicographic order.
    """
    if ran.n == 0:
        return [0, 1, 2]
    sz = _kernels.subtree_sizes(ran.choices)
    sub_at = ran._sub_at
    corners = ran._corners
    best: list = []
    for x, y, z in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        path = [z, x]
        stack = [(0, x, y)]
        while stack:
            f, a, b = stack.pop()
            i = int(sub_at[f])
            if i == 0:
                path.append(b)
                continue
            apex = i + 2
            cs = corners[f]
            sa = 0 if cs[0] == a else (1 if cs[1] == a else 2)
            sb = 0 if cs[0] == b else (1 if cs[1] == b else 2)
            base = 3 * i - 2
            skip = 0
            for t in (1, 2):
                if sz[base + t] < sz[base + skip]:
                    skip = t
            rem = [t for t in range(3) if t != skip]
            ta, tc = rem
            if ta == sa or tc == sb:
                ta, tc = tc, ta
            stack.append((base + tc, apex, b))
            stack.append((base + ta, a, apex))
        if len(path) > len(best):
            best = path
    return best
