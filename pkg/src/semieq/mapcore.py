"""Polygonal maps on closed surfaces: validation, links, face sequences, flags."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

import json

import numpy as np

FORMAT = "semieq-map/1"

__all__ = [
    "MapError",
    "DegenerateInput",
    "EdgeNotTwoSided",
    "LinkNotSingleCycle",
    "Disconnected",
    "DuplicateVertexInFace",
    "MapType",
    "MAP_TYPES",
    "map_type",
    "lookup_type",
    "PolygonalMap",
    "VertexLink",
    "FlagSystem",
    "from_faces",
    "vertex_link",
    "face_sequence_at",
    "is_semi_equivelar",
    "euler_characteristic",
    "is_orientable",
    "to_flags",
    "canonical_cycle",
    "map_to_dict",
    "map_from_dict",
    "dumps",
    "loads",
    "FORMAT",
]


class MapError(ValueError):
    """A face list that does not describe a polyhedral map on a closed surface."""

    kind = "MapError"

    def __init__(self, message: str, **where: Any):
        super().__init__(message)
        self.where = where

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self), **{k: _jsonable(v) for k, v in self.where.items()}}


class DegenerateInput(MapError):
    kind = "DegenerateInput"


class EdgeNotTwoSided(MapError):
    kind = "EdgeNotTwoSided"


class LinkNotSingleCycle(MapError):
    kind = "LinkNotSingleCycle"


class Disconnected(MapError):
    kind = "Disconnected"


class DuplicateVertexInFace(MapError):
    kind = "DuplicateVertexInFace"


def _jsonable(value):
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    return value


def canonical_cycle(seq: Sequence) -> tuple:
    """Smallest rotation of ``seq`` or of its reversal."""
    seq = tuple(seq)
    if not seq:
        return seq
    best = None
    for cand in (seq, seq[::-1]):
        for i in range(len(cand)):
            rot = cand[i:] + cand[:i]
            if best is None or rot < best:
                best = rot
    return best


@dataclass(frozen=True)
class MapType:
    """One of the eleven vertex types, named by its dotted face sequence."""

    name: str
    signature: tuple[int, ...]
    symbol: str

    @property
    def canonical(self) -> tuple[int, ...]:
        return canonical_cycle(self.signature)

    @property
    def degree(self) -> int:
        return len(self.signature)

    def __str__(self) -> str:
        return self.name


MAP_TYPES: dict[str, MapType] = {
    t.name: t
    for t in (
        MapType("3.6", (3, 3, 3, 3, 3, 3), "{3^6}"),
        MapType("4.4", (4, 4, 4, 4), "{4^4}"),
        MapType("6.3", (6, 6, 6), "{6^3}"),
        MapType("3.3.4.4", (3, 3, 3, 4, 4), "{3^3,4^2}"),
        MapType("3.3.4.3.4", (3, 3, 4, 3, 4), "{3^2,4,3,4}"),
        MapType("3.6.3.6", (3, 6, 3, 6), "{3,6,3,6}"),
        MapType("3.4.6", (3, 3, 3, 3, 6), "{3^4,6}"),
        MapType("4.8.8", (4, 8, 8), "{4,8^2}"),
        MapType("3.12.12", (3, 12, 12), "{3,12^2}"),
        MapType("4.6.12", (4, 6, 12), "{4,6,12}"),
        MapType("3.4.6.4", (3, 4, 6, 4), "{3,4,6,4}"),
    )
}

_ALIASES = {"3-4.6": "3.4.6", "3.3.3.4.4": "3.3.4.4", "3.3.3.3.6": "3.4.6"}


def lookup_type(name: str | MapType) -> MapType:
    """Look up a map type by its dotted name (a few spellings are accepted)."""
    if isinstance(name, MapType):
        return name
    key = _ALIASES.get(name, name)
    try:
        return MAP_TYPES[key]
    except KeyError:
        raise KeyError(f"unknown map type {name!r}; expected one of {sorted(MAP_TYPES)}") from None


map_type = lookup_type


@dataclass(frozen=True)
class VertexLink:
    """Neighbours and faces around a vertex, in cyclic order.

    ``cycle[i] = (u_i, f_i)`` where ``f_i`` is the face between the edge to
    ``u_i`` and the edge to ``u_{i+1}``.  ``vertices`` is the full link cycle,
    including the vertices of incident faces that are not adjacent to the
    centre.
    """

    center: int
    cycle: tuple[tuple[int, int], ...]
    vertices: tuple[int, ...]

    @property
    def neighbors(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.cycle)

    @property
    def faces(self) -> tuple[int, ...]:
        return tuple(f for _, f in self.cycle)

    @property
    def degree(self) -> int:
        return len(self.cycle)


@dataclass(frozen=True, eq=False)
class PolygonalMap:
    """Faces as cyclic vertex sequences over vertices ``0..n_vertices-1``.

    Instances are only created through :func:`from_faces`, which validates
    them, and are immutable afterwards.
    """

    n_vertices: int
    faces: tuple[tuple[int, ...], ...]
    map_type_hint: MapType | None = None
    rep: Any = None
    meta: dict = field(default_factory=dict, compare=False)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self._edge_faces))

    @cached_property
    def _edge_faces(self) -> dict[tuple[int, int], list[int]]:
        table: dict[tuple[int, int], list[int]] = defaultdict(list)
        for fi, face in enumerate(self.faces):
            m = len(face)
            for i in range(m):
                a, b = face[i], face[(i + 1) % m]
                table[(a, b) if a < b else (b, a)].append(fi)
        return dict(table)

    @cached_property
    def _corners(self) -> list[list[tuple[int, int]]]:
        corners: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for fi, face in enumerate(self.faces):
            for i, v in enumerate(face):
                corners[v].append((fi, i))
        return corners

    @cached_property
    def links(self) -> tuple[VertexLink, ...]:
        return tuple(_build_link(self, v) for v in range(self.n_vertices))

    @property
    def n_edges(self) -> int:
        return len(self._edge_faces)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def faces_of_edge(self, u: int, v: int) -> list[int]:
        return list(self._edge_faces[(u, v) if u < v else (v, u)])

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_faces

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.links[v].neighbors

    def degree(self, v: int) -> int:
        return self.links[v].degree

    @property
    def f_vector(self) -> tuple[int, int, int]:
        return (self.n_vertices, self.n_edges, self.n_faces)

    def face_sizes(self) -> dict[int, int]:
        counts: dict[int, int] = defaultdict(int)
        for face in self.faces:
            counts[len(face)] += 1
        return dict(sorted(counts.items()))

    def relabeled(self, perm: Sequence[int]) -> "PolygonalMap":
        """Same map with vertex ``v`` renamed ``perm[v]``."""
        faces = [tuple(perm[v] for v in face) for face in self.faces]
        return from_faces(self.n_vertices, faces, map_type=self.map_type_hint, rep=self.rep)

    def __repr__(self) -> str:
        tag = f" {self.map_type_hint.name}" if self.map_type_hint else ""
        return f"<PolygonalMap{tag} V={self.n_vertices} E={self.n_edges} F={self.n_faces}>"


def _build_link(m: PolygonalMap, v: int) -> VertexLink:
    # each corner contributes the path next(v) ... prev(v) around its face
    paths = {}
    for fi, i in m._corners[v]:
        face = m.faces[fi]
        k = len(face)
        path = tuple(face[(i + j) % k] for j in range(1, k))
        paths[fi] = path
    by_start: dict[int, list[int]] = defaultdict(list)
    for fi, path in paths.items():
        by_start[path[0]].append(fi)
    by_end: dict[int, list[int]] = defaultdict(list)
    for fi, path in paths.items():
        by_end[path[-1]].append(fi)
    # orient corners greedily: faces may be listed with inconsistent orientation
    start = min(paths)
    order = [(start, paths[start])]
    used = {start}
    cur_end = paths[start][-1]
    while len(used) < len(paths):
        nxt = None
        for fi, path in paths.items():
            if fi in used:
                continue
            if path[0] == cur_end:
                nxt = (fi, path)
                break
            if path[-1] == cur_end:
                nxt = (fi, path[::-1])
                break
        if nxt is None:
            raise LinkNotSingleCycle(
                f"faces around vertex {v} do not close into one cycle", vertex=v
            )
        order.append(nxt)
        used.add(nxt[0])
        cur_end = nxt[1][-1]
    if cur_end != order[0][1][0]:
        raise LinkNotSingleCycle(f"faces around vertex {v} do not close up", vertex=v)
    verts = []
    cycle = []
    for fi, path in order:
        cycle.append((path[0], fi))
        verts.extend(path[:-1])
    if len(set(verts)) != len(verts):
        raise LinkNotSingleCycle(f"link of vertex {v} repeats a vertex", vertex=v, link=verts)
    return VertexLink(v, tuple(cycle), tuple(verts))


def from_faces(
    n: int,
    faces: Iterable[Sequence[int]],
    *,
    map_type: MapType | str | None = None,
    rep: Any = None,
    meta: dict | None = None,
) -> PolygonalMap:
    """Validate a face list and wrap it as an immutable :class:`PolygonalMap`.

    Raises one of the :class:`MapError` subclasses naming the offending
    vertex, edge or face.
    """
    faces = tuple(tuple(int(v) for v in face) for face in faces)
    if n < 3 or not faces:
        raise DegenerateInput(f"need at least 3 vertices and one face (got n={n}, {len(faces)} faces)", n=n)
    for fi, face in enumerate(faces):
        if len(face) < 3:
            raise DegenerateInput(f"face {fi} has fewer than 3 vertices", face=fi)
        for v in face:
            if not 0 <= v < n:
                raise DegenerateInput(f"face {fi} uses vertex {v} outside 0..{n - 1}", face=fi, vertex=v)
        if len(set(face)) != len(face):
            raise DuplicateVertexInFace(f"face {fi} repeats a vertex: {list(face)}", face=fi)
    mt = lookup_type(map_type) if map_type is not None else None
    m = PolygonalMap(n, faces, mt, rep, dict(meta or {}))
    for edge, fs in m._edge_faces.items():
        if len(fs) != 2:
            raise EdgeNotTwoSided(f"edge {edge} lies on {len(fs)} face sides", edge=edge, faces=fs)
    for v in range(n):
        if not m._corners[v]:
            raise Disconnected(f"vertex {v} lies on no face", vertex=v)
    _check_connected(m)
    for v in range(n):
        _ = m.links[v]
    return m


def _check_connected(m: PolygonalMap) -> None:
    adj: list[list[int]] = [[] for _ in range(m.n_vertices)]
    for a, b in m._edge_faces:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * m.n_vertices
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    if not all(seen):
        missing = seen.index(False)
        raise Disconnected(f"edge graph is disconnected; vertex {missing} unreachable from 0", vertex=missing)


def vertex_link(m: PolygonalMap, v: int) -> VertexLink:
    return m.links[v]


def face_sequence_at(m: PolygonalMap, v: int) -> tuple[int, ...]:
    """Sizes of the faces around ``v``, canonical up to rotation and reflection."""
    return canonical_cycle(len(m.faces[f]) for f in m.links[v].faces)


def is_semi_equivelar(m: PolygonalMap, t: MapType | str) -> bool:
    target = lookup_type(t).canonical
    return all(face_sequence_at(m, v) == target for v in range(m.n_vertices))


def euler_characteristic(m: PolygonalMap) -> int:
    return m.n_vertices - m.n_edges + m.n_faces


def is_orientable(m: PolygonalMap) -> bool:
    """Try to orient all faces coherently by propagation across edges."""
    sign = [0] * m.n_faces
    sign[0] = 1
    queue = deque([0])
    while queue:
        f = queue.popleft()
        face = m.faces[f]
        k = len(face)
        for i in range(k):
            a, b = face[i], face[(i + 1) % k]
            if sign[f] < 0:
                a, b = b, a
            for g in m.faces_of_edge(a, b):
                if g == f:
                    continue
                # g must traverse the edge as b -> a
                other = m.faces[g]
                j = other.index(a)
                forward = other[(j + 1) % len(other)] == b
                want = -1 if forward else 1
                if sign[g] == 0:
                    sign[g] = want
                    queue.append(g)
                elif sign[g] != want:
                    return False
    return True


@dataclass(frozen=True, eq=False)
class FlagSystem:
    """Flags of a map with the three incidence-swapping involutions.

    Flag ``i`` stands for the triple ``(vertex[i], edge[i], face[i])``;
    ``s0`` changes the vertex, ``s1`` the edge and ``s2`` the face.
    """

    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    vertex: np.ndarray
    face: np.ndarray
    edge: np.ndarray

    @property
    def size(self) -> int:
        return int(self.s0.shape[0])

    def perms(self) -> np.ndarray:
        return np.stack([self.s0, self.s1, self.s2]).astype(np.int64)

    def is_connected(self) -> bool:
        seen = np.zeros(self.size, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            x = stack.pop()
            for s in (self.s0, self.s1, self.s2):
                y = int(s[x])
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        return bool(seen.all())


def to_flags(m: PolygonalMap) -> FlagSystem:
    """One flag per (vertex, edge, face) incidence; ``4E`` flags in all."""
    offsets = np.zeros(m.n_faces + 1, dtype=np.int64)
    for fi, face in enumerate(m.faces):
        offsets[fi + 1] = offsets[fi] + 2 * len(face)
    total = int(offsets[-1])
    s0 = np.empty(total, dtype=np.int64)
    s1 = np.empty(total, dtype=np.int64)
    s2 = np.empty(total, dtype=np.int64)
    vertex = np.empty(total, dtype=np.int64)
    face_of = np.empty(total, dtype=np.int64)
    edge_of = np.empty(total, dtype=np.int64)
    edge_index = {e: i for i, e in enumerate(m.edges)}
    # flag (f, i, +) sits at vertex face[i] on edge face[i]face[i+1];
    # flag (f, i, -) sits at vertex face[i] on edge face[i-1]face[i]
    position = {}
    for fi, face in enumerate(m.faces):
        for i, v in enumerate(face):
            position[(fi, v)] = i

    def fid(fi: int, i: int, plus: bool) -> int:
        k = len(m.faces[fi])
        return int(offsets[fi]) + 2 * (i % k) + (0 if plus else 1)

    for fi, face in enumerate(m.faces):
        k = len(face)
        for i, v in enumerate(face):
            for plus in (True, False):
                x = fid(fi, i, plus)
                w = face[(i + 1) % k] if plus else face[(i - 1) % k]
                vertex[x] = v
                face_of[x] = fi
                edge_of[x] = edge_index[(v, w) if v < w else (w, v)]
                s1[x] = fid(fi, i, not plus)
                s0[x] = fid(fi, i + 1, False) if plus else fid(fi, i - 1, True)
                (g,) = [h for h in m.faces_of_edge(v, w) if h != fi] or [fi]
                j = position[(g, v)]
                kg = len(m.faces[g])
                s2[x] = fid(g, j, m.faces[g][(j + 1) % kg] == w)
    return FlagSystem(s0, s1, s2, vertex, face_of, edge_of)


def _rotate_min(face: Sequence[int]) -> list[int]:
    i = min(range(len(face)), key=face.__getitem__)
    return list(face[i:]) + list(face[:i])


def map_to_dict(m: PolygonalMap) -> dict:
    """The canonical JSON object for ``m``: each face starts at its smallest
    vertex and the face list is sorted."""
    meta = dict(m.meta)
    if m.rep is not None:
        meta["rep"] = m.rep.to_dict() if hasattr(m.rep, "to_dict") else m.rep
    return {
        "format": FORMAT,
        "type": m.map_type_hint.name if m.map_type_hint else None,
        "n": m.n_vertices,
        "faces": sorted(_rotate_min(f) for f in m.faces),
        "meta": _jsonable_meta(meta),
    }


def _jsonable_meta(value):
    if isinstance(value, dict):
        return {str(k): _jsonable_meta(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable_meta(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    return value


def map_from_dict(data: dict) -> PolygonalMap:
    if data.get("format") != FORMAT:
        raise DegenerateInput(f"unsupported map format {data.get('format')!r}; expected {FORMAT!r}")
    meta = dict(data.get("meta") or {})
    return from_faces(data["n"], data["faces"], map_type=data.get("type"), rep=meta.get("rep"), meta=meta)


def dumps(m: PolygonalMap) -> str:
    return json.dumps(map_to_dict(m), separators=(",", ":"), sort_keys=True)


def loads(text: str) -> PolygonalMap:
    return map_from_dict(json.loads(text))
