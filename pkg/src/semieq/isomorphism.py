"""Canonical forms, isomorphism tests and duals of polygonal maps.

A map is encoded through its flags.  Starting from one flag, a
breadth-first search numbers flags in discovery order and records, for
each flag in turn, the numbers of its three neighbours.  The canonical
form is the lexicographically smallest such record over all start flags.
Flags carry no orientation, so reflections are covered automatically.

The search runs in a numba kernel when numba is available.  Setting the
environment variable ``SEMIEQ_NO_NUMBA=1`` selects a vectorised numpy
version that gives identical results.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

import numpy as np

from .mapcore import MAP_TYPES, FlagSystem, PolygonalMap, from_faces, to_flags

__all__ = [
    "CanonicalForm",
    "canonical_form",
    "digest",
    "are_isomorphic",
    "find_isomorphism",
    "dual",
    "backend",
]


def _want_numba() -> bool:
    return os.environ.get("SEMIEQ_NO_NUMBA", "").strip().lower() not in {"1", "true", "yes", "on"}


try:  # pragma: no cover - exercised through both backends in the tests
    if not _want_numba():
        raise ImportError("numba disabled by SEMIEQ_NO_NUMBA")
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def backend() -> str:
    return "numba" if _HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# kernels


def _bfs_code_py(perms: np.ndarray, start: int, best: np.ndarray, code: np.ndarray, num: np.ndarray, queue: np.ndarray) -> int:
    """BFS code from ``start`` written into ``code``.

    Returns -1, 0 or 1 as the code is smaller than, equal to or larger than
    ``best`` (stopping at the first larger entry).  ``best[0] < 0`` means no
    best yet.
    """
    size = perms.shape[1]
    for x in range(size):
        num[x] = -1
    num[start] = 0
    queue[0] = start
    tail = 1
    state = 0 if best[0] >= 0 else -1
    pos = 0
    for head in range(size):
        x = queue[head]
        for i in range(3):
            y = perms[i, x]
            if num[y] < 0:
                num[y] = tail
                queue[tail] = y
                tail += 1
            c = num[y]
            code[pos] = c
            if state == 0:
                if c < best[pos]:
                    state = -1
                elif c > best[pos]:
                    return 1
            pos += 1
    return state


if _HAVE_NUMBA:
    _bfs_code = njit(cache=True, nogil=True)(_bfs_code_py)

    @njit(cache=True, nogil=True)
    def _canonical_kernel(perms):  # pragma: no cover - compiled
        size = perms.shape[1]
        best = np.full(3 * size, -1, dtype=np.int64)
        code = np.empty(3 * size, dtype=np.int64)
        num = np.empty(size, dtype=np.int64)
        queue = np.empty(size, dtype=np.int64)
        best_start = -1
        for start in range(size):
            state = _bfs_code(perms, start, best, code, num, queue)
            if state < 0:
                best[:] = code
                best_start = start
        return best, best_start


def _canonical_numpy(perms: np.ndarray) -> tuple[np.ndarray, int]:
    """Run the searches from all start flags in lock step, keeping only the
    starts whose record so far is minimal."""
    size = perms.shape[1]
    active = np.arange(size)
    num = np.full((size, size), -1, dtype=np.int32)
    queue = np.empty((size, size), dtype=np.int32)
    rows = np.arange(size)
    num[rows, active] = 0
    queue[:, 0] = active
    tail = np.ones(size, dtype=np.int32)
    out = np.empty(3 * size, dtype=np.int64)
    for head in range(size):
        x = queue[rows, head]
        codes = np.empty((rows.size, 3), dtype=np.int64)
        for i in range(3):
            y = perms[i, x]
            fresh = num[rows, y] < 0
            num[rows[fresh], y[fresh]] = tail[fresh]
            queue[rows[fresh], tail[fresh]] = y[fresh]
            tail[fresh] += 1
            codes[:, i] = num[rows, y]
        # keep the rows whose three new entries are lexicographically least
        keep = np.ones(rows.size, dtype=bool)
        for i in range(3):
            low = codes[keep, i].min()
            keep &= codes[:, i] == low
        out[3 * head : 3 * head + 3] = codes[keep][0]
        if not keep.all():
            rows, tail = rows[keep], tail[keep]
    return out, int(queue[rows[0], 0])


def _canonical(perms: np.ndarray) -> tuple[np.ndarray, int]:
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    if _HAVE_NUMBA:
        best, start = _canonical_kernel(perms)
        return best, int(start)
    return _canonical_numpy(perms)


# ---------------------------------------------------------------------------
# public API


@dataclass(frozen=True)
class CanonicalForm:
    """Relabelling-invariant encoding; equal forms mean isomorphic maps."""

    code: bytes
    n_flags: int

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.n_flags.to_bytes(8, "little") + self.code).hexdigest()

    def __str__(self) -> str:
        return self.digest


def _form_and_start(m: PolygonalMap) -> tuple[CanonicalForm, FlagSystem, int]:
    flags = to_flags(m)
    code, start = _canonical(flags.perms())
    return CanonicalForm(code.astype("<i4").tobytes(), flags.size), flags, start


def canonical_form(m: PolygonalMap) -> CanonicalForm:
    return _form_and_start(m)[0]


def digest(m: PolygonalMap) -> str:
    return canonical_form(m).digest


def _bfs_order(flags: FlagSystem, start: int) -> np.ndarray:
    perms = flags.perms()
    seen = np.full(flags.size, -1, dtype=np.int64)
    order = [start]
    seen[start] = 0
    for x in order:
        for i in range(3):
            y = int(perms[i, x])
            if seen[y] < 0:
                seen[y] = len(order)
                order.append(y)
    return np.asarray(order)


def find_isomorphism(m1: PolygonalMap, m2: PolygonalMap) -> list[int] | None:
    """A vertex bijection ``m1 -> m2`` sending faces to faces, or None.

    The bijection is read off the two canonical searches and checked
    against the face lists before it is returned.
    """
    if m1.f_vector != m2.f_vector:
        return None
    f1, flags1, s1 = _form_and_start(m1)
    f2, flags2, s2 = _form_and_start(m2)
    if f1 != f2:
        return None
    o1, o2 = _bfs_order(flags1, s1), _bfs_order(flags2, s2)
    phi = [-1] * m1.n_vertices
    for a, b in zip(flags1.vertex[o1], flags2.vertex[o2]):
        a, b = int(a), int(b)
        if phi[a] not in (-1, b):
            raise AssertionError("canonical searches disagree on a vertex image")
        phi[a] = b
    if not _is_isomorphism(m1, m2, phi):
        raise AssertionError("equal canonical forms but the induced vertex map is not an isomorphism")
    return phi


def _cyclic_key(face) -> tuple[int, ...]:
    k = len(face)
    rots = [tuple(face[(i + j) % k] for j in range(k)) for i in range(k)]
    rev = tuple(reversed(face))
    rots += [tuple(rev[(i + j) % k] for j in range(k)) for i in range(k)]
    return min(rots)


def _is_isomorphism(m1: PolygonalMap, m2: PolygonalMap, phi: list[int]) -> bool:
    if sorted(phi) != list(range(m2.n_vertices)):
        return False
    target = {_cyclic_key(f) for f in m2.faces}
    return len(target) == len(m1.faces) and all(_cyclic_key([phi[v] for v in f]) in target for f in m1.faces)


def are_isomorphic(m1: PolygonalMap, m2: PolygonalMap, *, witness: bool = False):
    """Whether the maps are isomorphic; with ``witness`` also return the
    verified vertex bijection (or None)."""
    phi = find_isomorphism(m1, m2)
    return (phi is not None, phi) if witness else phi is not None


_DUAL_TYPE = {"3.6": "6.3", "6.3": "3.6", "4.4": "4.4"}


def dual(m: PolygonalMap) -> PolygonalMap:
    """Faces become vertices and vertex links become faces."""
    faces = [list(link.faces) for link in m.links]
    name = m.map_type_hint.name if m.map_type_hint else None
    dual_type = MAP_TYPES[_DUAL_TYPE[name]] if name in _DUAL_TYPE else None
    return from_faces(m.n_faces, faces, map_type=dual_type, meta={"dual": True})
