"""Straight-ahead paths through vertex links and the strips around cycles.

A :class:`PathRule` decides, at each vertex, where a path continues given
the vertex it came from.  Rules look at the cyclic sequence of face sizes
around the current vertex, read from the previous vertex in the direction
of a *tracked side*.  The tracked side is carried from edge to edge, so
rules that are chiral (``A2``/``A3``) stay on the same geometric line.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .mapcore import PolygonalMap, lookup_type

__all__ = [
    "WalkerError",
    "RuleInapplicable",
    "NotACycle",
    "MetadataMissing",
    "PathRule",
    "RULES",
    "rules_for",
    "Walk",
    "trace",
    "traced_cycles",
    "StripClassification",
    "classify_strip",
    "row_cycles",
]


class WalkerError(ValueError):
    pass


class RuleInapplicable(WalkerError):
    """The link at the current vertex does not fit the rule."""


class NotACycle(WalkerError):
    pass


class MetadataMissing(WalkerError):
    """The map carries no row data from a constructor."""


# A transition receives the face sizes around the current vertex, starting
# at the edge to the previous vertex and running along the tracked side.
# It returns how many faces to step over to reach the next vertex.
Transition = Callable[[tuple[int, ...]], "int | None"]


def _fixed(pattern: Sequence[int], step: int, *more: tuple[Sequence[int], int]) -> Transition:
    table = {tuple(pattern): step}
    table.update((tuple(p), s) for p, s in more)
    return table.get


@dataclass(frozen=True)
class PathRule:
    """A deterministic straight-ahead rule for one map type."""

    type_tag: str
    map_type: str
    transition: Transition = field(repr=False, compare=False)
    description: str = ""

    def step(self, sizes: tuple[int, ...]) -> int:
        q = self.transition(sizes)
        if q is None:
            raise RuleInapplicable(f"rule {self.type_tag} does not apply where the faces read {sizes}")
        return q


T, Q = 3, 4

RULES: dict[str, PathRule] = {
    "A": PathRule("A", "3.6", _fixed((T,) * 6, 3), "three triangles on each side"),
    "B": PathRule("B", "4.4", _fixed((Q,) * 4, 2), "two squares on each side"),
    "A1": PathRule(
        "A1",
        "3.3.4.4",
        _fixed((T, T, T, Q, Q), 3, ((Q, Q, T, T, T), 2)),
        "all triangles on one side, all squares on the other",
    ),
    # A2 and A3 cross the square and triangle bands and are mirror images.
    # After a square edge A2 leans towards the tracked side and A3 away from
    # it; after a triangle edge both head for the vertex between the two
    # squares, which pins down the side the path arrived on.
    "A2": PathRule(
        "A2",
        "3.3.4.4",
        _fixed((Q, T, T, T, Q), 2, ((T, T, Q, Q, T), 3)),
        "square edge, then a triangle edge leaning to the tracked side",
    ),
    "A3": PathRule(
        "A3",
        "3.3.4.4",
        _fixed((Q, T, T, T, Q), 3, ((T, Q, Q, T, T), 2)),
        "square edge, then a triangle edge leaning away from the tracked side",
    ),
    "B1": PathRule(
        "B1",
        "3.3.4.3.4",
        _fixed((T, Q, T, T, Q), 2, ((Q, T, T, Q, T), 3)),
        "a triangle and a square on one side, a square and two triangles on the other",
    ),
}


def rules_for(t) -> list[PathRule]:
    name = lookup_type(t).name
    return [rule for rule in RULES.values() if rule.map_type == name]


def _resolve(rule: PathRule | str) -> PathRule:
    if isinstance(rule, PathRule):
        return rule
    try:
        return RULES[rule]
    except KeyError:
        raise WalkerError(f"unknown path rule {rule!r}; expected one of {sorted(RULES)}") from None


@dataclass(frozen=True)
class Walk:
    """A closed walk; ``vertices`` does not repeat the start at the end."""

    vertices: tuple[int, ...]
    closed: bool
    rule: str

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def visits(self) -> Counter:
        return Counter(self.vertices)


def _advance(m: PolygonalMap, rule: PathRule, prev: int, cur: int, tracked: int) -> tuple[int, int]:
    link = m.links[cur].cycle
    d = len(link)
    try:
        i = next(idx for idx, (u, _) in enumerate(link) if u == prev)
    except StopIteration:
        raise RuleInapplicable(f"{prev} is not a neighbour of {cur}") from None
    if link[i][1] == tracked:
        direction = 1
        faces = [link[(i + j) % d][1] for j in range(d)]
    elif link[i - 1][1] == tracked:
        direction = -1
        faces = [link[(i - 1 - j) % d][1] for j in range(d)]
    else:
        raise RuleInapplicable(f"face {tracked} does not meet the edge {prev}-{cur}")
    q = rule.step(tuple(len(m.faces[f]) for f in faces))
    nxt = link[(i + direction * q) % d][0]
    return nxt, faces[q - 1]


def trace(m: PolygonalMap, rule: PathRule | str, start_edge: tuple[int, int], *, side: int = 0) -> Walk:
    """Follow ``rule`` from the directed edge ``start_edge`` until a directed
    edge repeats.

    ``side`` (0 or 1) picks which face of the start edge is tracked; it only
    matters for the chiral rules.
    """
    rule = _resolve(rule)
    u, v = start_edge
    if not m.has_edge(u, v):
        raise WalkerError(f"({u}, {v}) is not an edge")
    tracked = sorted(m.faces_of_edge(u, v))[side]
    seen = {(u, v)}
    walk = [u]
    prev, cur = u, v
    while True:
        nxt, tracked = _advance(m, rule, prev, cur, tracked)
        if (cur, nxt) in seen:
            return Walk(tuple(walk), (cur, nxt) == (u, v), rule.type_tag)
        walk.append(cur)
        seen.add((cur, nxt))
        prev, cur = cur, nxt


def _cycle_key(vertices: Sequence[int]) -> frozenset:
    n = len(vertices)
    return frozenset(frozenset((vertices[i], vertices[(i + 1) % n])) for i in range(n))


def traced_cycles(m: PolygonalMap, rule: PathRule | str) -> list[Walk]:
    """Every distinct closed walk the rule produces from any edge."""
    rule = _resolve(rule)
    found: dict[frozenset, Walk] = {}
    for a, b in m.edges:
        for start in ((a, b), (b, a)):
            for side in (0, 1):
                try:
                    w = trace(m, rule, start, side=side)
                except RuleInapplicable:
                    continue
                found.setdefault(_cycle_key(w.vertices), w)
    return list(found.values())


# ---------------------------------------------------------------------------
# strips


@dataclass(frozen=True)
class StripClassification:
    """Topology of the faces sharing a vertex with a cycle.

    ``kind`` is ``Cylinder`` (both sides are annuli), ``MobiusStrip`` (the
    cycle is one-sided, so its neighbourhood is a single band) or
    ``CylinderPlusMobius`` (one side is a Möbius strip bounded by the cycle,
    glued to an annulus on the other side).
    """

    kind: str
    boundary: tuple[tuple[int, ...], ...]
    face_content: dict[int, int]
    faces: tuple[int, ...]
    mobius_faces: tuple[int, ...] = ()
    gluing_cycle: tuple[int, ...] = ()

    def mobius_content(self, m: PolygonalMap) -> dict[int, int]:
        return dict(sorted(Counter(len(m.faces[f]) for f in self.mobius_faces).items()))

    def to_dict(self, m: PolygonalMap | None = None) -> dict:
        short = {"Cylinder": "cylinder", "MobiusStrip": "mobius", "CylinderPlusMobius": "cylinder+mobius"}[self.kind]
        out = {
            "kind": short,
            "boundary": [list(b) for b in self.boundary],
            "faces": {str(k): v for k, v in self.face_content.items()},
        }
        if self.gluing_cycle:
            out["gluing_cycle"] = list(self.gluing_cycle)
        if m is not None and self.mobius_faces:
            out["mobius_faces"] = {str(k): v for k, v in self.mobius_content(m).items()}
        return out


def _check_cycle(m: PolygonalMap, cycle: Sequence[int]) -> tuple[int, ...]:
    cycle = tuple(cycle)
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise NotACycle(f"{list(cycle)} is not a simple cycle")
    for i, v in enumerate(cycle):
        if not m.has_edge(v, cycle[(i + 1) % len(cycle)]):
            raise NotACycle(f"{v} and {cycle[(i + 1) % len(cycle)]} are not adjacent")
    return cycle


def _arcs(m: PolygonalMap, v: int, a: int, b: int) -> tuple[list[int], list[int]]:
    """Faces around ``v`` on the two arcs of its link between ``a`` and ``b``."""
    link = m.links[v].cycle
    d = len(link)
    ia = next(i for i, (u, _) in enumerate(link) if u == a)
    ib = next(i for i, (u, _) in enumerate(link) if u == b)
    forward = [link[(ia + j) % d][1] for j in range((ib - ia) % d)]
    backward = [link[(ib + j) % d][1] for j in range((ia - ib) % d)]
    return forward, backward


def _sides(m: PolygonalMap, cycle: tuple[int, ...]) -> tuple[set[int], set[int], bool]:
    """Faces on each side of the cycle, and whether the cycle is one-sided.

    One side is followed around the cycle by carrying a face across each
    cycle edge; the cycle is one-sided when that face comes back on the
    other side of the start vertex.
    """
    n = len(cycle)
    near: set[int] = set()
    far: set[int] = set()
    start_bwd = carried = None
    for i, v in enumerate(cycle):
        fwd, bwd = _arcs(m, v, cycle[i - 1], cycle[(i + 1) % n])
        if i == 0:
            start_bwd = bwd
            mine_fwd = True
        else:
            mine_fwd = carried == fwd[0]
        mine, other = (fwd, bwd) if mine_fwd else (bwd, fwd)
        near.update(mine)
        far.update(other)
        # the face of the followed side that lies on the edge to the next vertex
        carried = fwd[-1] if mine_fwd else bwd[0]
    one_sided = carried == start_bwd[-1]
    return near, far, one_sided


def _is_orientable(m: PolygonalMap, faces: Sequence[int]) -> bool:
    # try to orient faces consistently across edges shared inside the set
    faces = list(faces)
    index = {f: i for i, f in enumerate(faces)}
    by_edge = defaultdict(list)
    for f in faces:
        face = m.faces[f]
        for i in range(len(face)):
            a, b = face[i], face[(i + 1) % len(face)]
            by_edge[frozenset((a, b))].append((f, a, b))
    sign = [0] * len(faces)
    for root in range(len(faces)):
        if sign[root]:
            continue
        sign[root] = 1
        stack = [faces[root]]
        while stack:
            f = stack.pop()
            face = m.faces[f]
            for i in range(len(face)):
                a, b = face[i], face[(i + 1) % len(face)]
                for g, c, _ in by_edge[frozenset((a, b))]:
                    if g == f:
                        continue
                    # consistent orientations traverse a shared edge in opposite directions
                    want = -sign[index[f]] if c == a else sign[index[f]]
                    if sign[index[g]] == 0:
                        sign[index[g]] = want
                        stack.append(g)
                    elif sign[index[g]] != want:
                        return False
    return True


def _boundary_walks(m: PolygonalMap, faces: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    count = Counter()
    for f in faces:
        face = m.faces[f]
        for i in range(len(face)):
            count[frozenset((face[i], face[(i + 1) % len(face)]))] += 1
    adj = defaultdict(list)
    for e, c in count.items():
        if c == 1:
            a, b = tuple(e)
            adj[a].append(b)
            adj[b].append(a)
    used = set()
    walks = []
    for start in sorted(adj):
        for first in sorted(adj[start]):
            if frozenset((start, first)) in used:
                continue
            walk, prev, cur = [start], start, first
            used.add(frozenset((start, first)))
            while cur != start:
                walk.append(cur)
                options = [w for w in sorted(adj[cur]) if frozenset((cur, w)) not in used]
                if not options:
                    break
                prev, cur = cur, options[0]
                used.add(frozenset((prev, cur)))
            walks.append(tuple(walk))
    return tuple(walks)


def classify_strip(m: PolygonalMap, cycle: Sequence[int]) -> StripClassification:
    """Classify the union of faces that share a vertex with ``cycle``."""
    cycle = _check_cycle(m, cycle)
    left, right, one_sided = _sides(m, cycle)
    faces = tuple(sorted(left | right))
    content = dict(sorted(Counter(len(m.faces[f]) for f in faces).items()))
    boundary = _boundary_walks(m, faces)
    if one_sided:
        return StripClassification("MobiusStrip", boundary, content, faces, mobius_faces=faces)
    mobius = [side for side in (left, right) if not _is_orientable(m, sorted(side))]
    if not mobius:
        return StripClassification("Cylinder", boundary, content, faces)
    return StripClassification(
        "CylinderPlusMobius", boundary, content, faces, mobius_faces=tuple(sorted(mobius[0])), gluing_cycle=cycle
    )


def row_cycles(m: PolygonalMap, p=None) -> list[tuple[int, ...]]:
    """Rows recorded by the constructor, in order from one end to the other."""
    rows = (m.meta or {}).get("rows")
    if rows is None:
        raise MetadataMissing("map was not built by a constructor that records its rows")
    if p is not None and m.rep is not None and p != m.rep:
        raise MetadataMissing(f"map was built as {m.rep}, not {p}")
    return [tuple(r) for r in rows]
