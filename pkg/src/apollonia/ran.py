"""Random Apollonian networks: generation, slicing, projection, storage.

The process starts from a triangle on vertices 0, 1, 2 enclosing one
face.  Insertion i (i = 1..n) picks a live (leaf) face uniformly at
random, places the new vertex i+2 in its interior and joins it to the
three corners, retiring the face and creating three new ones.  After n
insertions the graph has n+3 vertices, 3n+3 edges and 2n+1 live faces
(each insertion contributes exactly three edges, and a maximal planar
graph on V vertices has 3V-6 of them).

Canonical ids make every instance a pure function of its choice
sequence:

* vertex ids: corners 0, 1, 2; insertion i contributes vertex i+2.
* face ids: the root triangle is face 0; insertion i retires face
  ``choices[i-1]`` and creates faces 3i-2, 3i-1, 3i.  Child t of a face
  with sorted corners (a, b, c) drops corner position t and gains the
  apex, so the children carry corner pairs (b,c), (a,c), (a,b) in that
  order.  The apex is always the largest id in its triple, so stored
  corner triples stay sorted without re-sorting.
* the face that created face f (f >= 1) was retired at insertion
  ``(f+2)//3``, which gives O(depth) ancestor walks with no pointers.

Uniform leaf selection uses a dense array of live leaf face ids with
swap-remove on subdivision: the drawn slot receives the last live entry
and the three children are appended in id order.  One bounded SplitMix64
draw is consumed per insertion, including the forced first one, so the
map from seed to instance is pinned exactly (see :mod:`apollonia.rng`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class TriangleNode:
    """One face of the recursion tree.

    ``corners`` is sorted ascending; ``apex`` and ``children`` are None
    for a live leaf.  Child t keeps the two corners other than position t.
    """

    corners: tuple
    apex: int | None
    children: tuple | None


class _NodeView(Sequence):
    """Lazy, indexable view of all 3n+1 TriangleNodes of an instance."""

    def __init__(self, ran: "Ran"):
        self._ran = ran

    def __len__(self) -> int:
        return 3 * self._ran.n + 1

    def __getitem__(self, f: int) -> TriangleNode:
        if not 0 <= f < len(self):
            raise IndexError(f)
        ran = self._ran
        i = int(ran._sub_at[f])
        corners = tuple(int(x) for x in ran._corners[f])
        if i == 0:
            return TriangleNode(corners, None, None)
        return TriangleNode(corners, i + 2, (3 * i - 2, 3 * i - 1, 3 * i))


class Ran:
    """An immutable random Apollonian network instance.

    Construct through :func:`generate`, :func:`from_choices`,
    :func:`deserialize`, :func:`prefix` or :func:`extend`; the raw
    constructor trusts its input and is not part of the public API.
    """

    def __init__(self, choices: np.ndarray, _trusted: bool = False):
        if not _trusted:
            raise TypeError("use generate() or from_choices()")
        choices = np.ascontiguousarray(choices, dtype=np.int64)
        choices.flags.writeable = False
        self.choices = choices
        self.n = int(choices.shape[0])

    # -- derived structure, built lazily and cached --------------------

    @cached_property
    def _corners(self) -> np.ndarray:
        return _kernels.build_corners(self.choices)

    @cached_property
    def _sub_at(self) -> np.ndarray:
        return _kernels.build_sub_at(self.choices)

    @cached_property
    def _csr(self):
        return _kernels.build_csr(self.choices, self._corners)

    @property
    def nodes(self) -> _NodeView:
        return _NodeView(self)

    @property
    def vertex_count(self) -> int:
        return self.n + 3

    @property
    def edge_count(self) -> int:
        return 3 * self.n + 3

    @property
    def leaf_face_count(self) -> int:
        return 2 * self.n + 1

    def leaf_faces(self) -> np.ndarray:
        """Ids of the live faces, ascending."""
        return np.flatnonzero(self._sub_at == 0).astype(np.int64)

    # -- equality / display --------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ran)
            and self.n == other.n
            and bool(np.array_equal(self.choices, other.choices))
        )

    def __hash__(self):
        return hash((self.n, self.choices.tobytes()))

    def __repr__(self) -> str:
        return f"Ran(n={self.n})"

    # -- O(1) adjacency test via the creation rule ---------------------

    def has_edge(self, u: int, w: int) -> bool:
        if u == w:
            return False
        if u > w:
            u, w = w, u
        if not (0 <= u and w <= self.n + 2):
            return False
        if w < 3:
            return True
        f = int(self.choices[w - 3])
        c = self._corners[f]
        return u == int(c[0]) or u == int(c[1]) or u == int(c[2])

    def is_path(self, path: Sequence[int]) -> bool:
        """True iff ``path`` is a simple path of this graph (>= 1 vertex)."""
        if len(path) == 0:
            return False
        if len(set(path)) != len(path):
            return False
        if not all(0 <= int(v) <= self.n + 2 for v in path):
            return False
        return all(self.has_edge(int(a), int(b)) for a, b in zip(path, path[1:]))


def generate(n: int, seed: int) -> Ran:
    """A fresh instance: pure function of (n, seed).

    The seed is reduced mod 2**64 and feeds a SplitMix64 stream; each
    insertion consumes exactly one exactly-uniform bounded draw.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    choices = _kernels.gen_choices(n, np.uint64(seed & _MASK64))
    return Ran(choices, _trusted=True)


def from_choices(choices: Iterable[int]) -> Ran:
    """Rebuild an instance from its choice sequence, validating it.

    Every entry must name a face that is live at that step under the
    canonical id rule; the first offending index is reported.
    """
    arr = np.asarray(list(choices), dtype=np.int64)
    _, _, err = _kernels.replay_leaves(arr)
    if err >= 0:
        raise DomainError(
            f"choices[{err}]={int(arr[err])} is not a live leaf face at insertion {err + 1}"
        )
    return Ran(arr, _trusted=True)


def prefix(ran: Ran, sigma: int) -> Ran:
    """The instance after the first sigma insertions."""
    if not 0 <= sigma <= ran.n:
        raise DomainError(f"sigma must be in [0, {ran.n}], got {sigma}")
    if sigma == ran.n:
        return ran
    return Ran(ran.choices[:sigma].copy(), _trusted=True)


def extend(ran: Ran, extra: int, seed: int) -> Ran:
    """Continue the process ``extra`` insertions with a fresh stream.

    The live leaf array is replayed to its exact slot order first, so the
    continuation is a pure function of (ran, extra, seed); prefix(result,
    ran.n) == ran always.
    """
    if extra < 0:
        raise DomainError(f"extra must be >= 0, got {extra}")
    if extra == 0:
        return ran
    leaves, count, err = _kernels.replay_leaves(ran.choices)
    assert err == -1
    tail = _kernels.extend_choices(
        leaves, count, ran.n, extra, np.uint64(seed & _MASK64)
    )
    return Ran(np.concatenate([ran.choices, tail]), _trusted=True)


def adjacency(ran: Ran) -> dict:
    """Vertex id -> sorted neighbor list, for the whole graph."""
    indptr, indices = ran._csr
    return {
        v: [int(w) for w in indices[indptr[v] : indptr[v + 1]]]
        for v in range(ran.vertex_count)
    }


# -- storage ------------------------------------------------------------

FORMAT_NAME = "ran-v1"


def serialize(ran: Ran) -> bytes:
    """Compact UTF-8 JSON, bit-exact for a given instance."""
    payload = {
        "format": FORMAT_NAME,
        "n": ran.n,
        "choices": [int(c) for c in ran.choices],
    }
    return json.dumps(payload, separators=(",", ":")).encode("utf-8")


def deserialize(data: bytes) -> Ran:
    """Inverse of :func:`serialize`, with position diagnostics."""
    try:
        obj = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise DomainError(f"not UTF-8 at byte {e.start}") from e
    except json.JSONDecodeError as e:
        raise DomainError(f"malformed JSON at position {e.pos}: {e.msg}") from e
    if not isinstance(obj, dict):
        raise DomainError("top-level value must be an object")
    if obj.get("format") != FORMAT_NAME:
        raise DomainError(f"format must be {FORMAT_NAME!r}, got {obj.get('format')!r}")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    choices = obj.get("choices")
    if not isinstance(choices, list):
        raise DomainError("choices must be a list")
    if len(choices) != n:
        raise DomainError(f"n={n} but choices has {len(choices)} entries")
    for k, c in enumerate(choices):
        if not isinstance(c, int) or isinstance(c, bool):
            raise DomainError(f"choices[{k}]={c!r} is not an integer")
    return from_choices(choices)


# -- path projection (old-vertex subsequence and visited faces) ---------


def _require_path(ran: Ran, path: Sequence[int]) -> list:
    p = [int(v) for v in path]
    if not ran.is_path(p):
        raise DomainError("input path invalid")
    return p


def project_path(ran: Ran, sigma: int, path: Sequence[int]) -> list:
    """Subsequence of ``path`` surviving in the sigma-prefix.

    Keeps exactly the vertices with id < sigma+3.  The result is itself a
    valid path of the prefix: consecutive survivors are either joined by
    an edge that already existed at time sigma, or flank a run of younger
    vertices confined to one leaf face, whose corners are pairwise
    adjacent.  That is asserted, not assumed.
    """
    if not 0 <= sigma <= ran.n:
        raise DomainError(f"sigma must be in [0, {ran.n}], got {sigma}")
    p = _require_path(ran, path)
    q = [v for v in p if v < sigma + 3]
    assert all(ran.has_edge(a, b) for a, b in zip(q, q[1:]))
    return q


def _interior_face_hits(ran: Ran, sigma: int, path: Sequence[int]) -> np.ndarray:
    """Leaf face of the sigma-prefix containing each young path vertex."""
    young = np.array([v for v in path if v >= sigma + 3], dtype=np.int64)
    if young.size == 0:
        return young
    start = ran.choices[young - 3]
    return _kernels.ancestor_leaf_faces(ran.choices, sigma, start)


def visited_faces(ran: Ran, sigma: int, path: Sequence[int]) -> int:
    """Number of distinct prefix leaf faces whose interior the path visits."""
    if not 0 <= sigma <= ran.n:
        raise DomainError(f"sigma must be in [0, {ran.n}], got {sigma}")
    p = _require_path(ran, path)
    hits = _interior_face_hits(ran, sigma, p)
    return int(np.unique(hits).size)


def projection_face_bounds(ran: Ran, sigma: int, path: Sequence[int]) -> dict:
    """The projection sandwich, evaluated and reported.

    For tau = len(project_path) and tau' = visited_faces, the claim is
    tau - 1 <= tau' <= tau + 1.  The upper bound is structural (each run
    of young vertices sits inside one face, and there are at most tau+1
    runs) and is asserted here.  The lower bound can genuinely fail for
    paths that use several prefix edges directly, so it is reported, not
    asserted; callers that want it hard check ``lower_ok``.
    """
    p = _require_path(ran, path)
    q = project_path(ran, sigma, p)
    tau = len(q)
    tau_prime = visited_faces(ran, sigma, p)
    assert tau_prime <= tau + 1
    return {
        "tau": tau,
        "tau_prime": tau_prime,
        "lower_ok": tau - 1 <= tau_prime,
        "upper_ok": True,
        "slack": tau_prime - (tau - 1),
    }


# -- windowed sub-instances (used by the round experiment) --------------


def subinstance_from_insertions(ran: Ran, face: int, ts: Sequence[int]) -> Ran:
    """Relabel the insertions ``ts`` (ascending, all interior to ``face``)
    into a standalone instance rooted at that face.

    The face's sorted corners become 0, 1, 2 and the j-th listed
    insertion becomes local insertion j.  Relabeling is monotone on
    vertex ids, so sorted corner order, child positions and face ids all
    transport; the result is validated by replay.
    """
    rank = {}
    sub = np.empty(len(ts), dtype=np.int64)
    for j, t in enumerate(ts, start=1):
        t = int(t)
        rank[t] = j
        c = int(ran.choices[t - 1])
        if c == face:
            sub[j - 1] = 0
        else:
            creator = (c + 2) // 3
            jj = rank.get(creator)
            if jj is None:
                raise DomainError(
                    f"insertion {t} lands in face {c}, created outside the window"
                )
            sub[j - 1] = 3 * jj - 2 + (c - (3 * creator - 2))
    return from_choices(sub)


def face_subinstance(ran: Ran, sigma: int, hi: int, face: int) -> Ran:
    """The sub-instance of window insertions (sigma, hi] interior to a
    leaf face of the sigma-prefix."""
    if not 0 <= sigma <= hi <= ran.n:
        raise DomainError(f"need 0 <= sigma <= hi <= {ran.n}")
    if not 0 <= face <= 3 * ran.n:
        raise DomainError(f"no such face: {face}")
    created = (face + 2) // 3
    retired = int(ran._sub_at[face])
    if created > sigma or (0 < retired <= sigma):
        raise DomainError(f"face {face} is not a live face of the {sigma}-prefix")
    window = np.arange(sigma + 1, hi + 1, dtype=np.int64)
    if window.size == 0:
        return from_choices([])
    anc = _kernels.ancestor_leaf_faces(ran.choices, sigma, ran.choices[window - 1])
    ts = window[anc == face]
    return subinstance_from_insertions(ran, face, ts)
