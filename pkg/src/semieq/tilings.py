"""Periodic plane tilings with exact coordinates.

Every tiling used here has its vertices in the ring Z[sqrt 3] / 4, so a
coordinate ``(a, b)`` stands for ``(a + b*sqrt(3)) / 4`` and a point is the
4-tuple ``(xa, xb, ya, yb)``.  All arithmetic stays in integers; comparisons
are exact.  Tilings are oriented so that row cycles run horizontally and the
tiling has vertical mirror lines, which is what the twisted closures need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

SQRT3 = math.sqrt(3.0)

Point = tuple[int, int, int, int]
Polygon = tuple[Point, ...]

# unit vectors at multiples of 30 degrees, scaled by 4
DIRS: tuple[Point, ...] = (
    (4, 0, 0, 0),
    (0, 2, 2, 0),
    (2, 0, 0, 2),
    (0, 0, 4, 0),
    (-2, 0, 0, 2),
    (0, -2, 2, 0),
    (-4, 0, 0, 0),
    (0, -2, -2, 0),
    (-2, 0, 0, -2),
    (0, 0, -4, 0),
    (2, 0, 0, -2),
    (0, 2, -2, 0),
)


def num(value: Fraction | int, root: Fraction | int = 0) -> tuple[int, int]:
    """Encode ``value + root*sqrt(3)`` in quarter units."""
    a, b = Fraction(value) * 4, Fraction(root) * 4
    if a.denominator != 1 or b.denominator != 1:
        raise ValueError(f"{value}+{root}*sqrt3 is not in Z[sqrt3]/4")
    return int(a), int(b)


def pt(x: tuple[int, int], y: tuple[int, int]) -> Point:
    return (x[0], x[1], y[0], y[1])


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3])


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3])


def scale(p: Point, m: int) -> Point:
    return (p[0] * m, p[1] * m, p[2] * m, p[3] * m)


def sign(a: int, b: int) -> int:
    """Exact sign of ``a + b*sqrt(3)``."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    d = a * a - 3 * b * b
    return (1 if d > 0 else -1) if a > 0 else (1 if d < 0 else -1)


def as_float(a: int, b: int) -> float:
    return (a + b * SQRT3) / 4.0


def floor_div(a: int, b: int, pa: int, pb: int) -> int:
    """Exact ``floor((a + b r3) / (pa + pb r3))`` for a positive divisor."""
    q = math.floor(as_float(a, b) / as_float(pa, pb))
    while sign(a - q * pa, b - q * pb) < 0:
        q -= 1
    while sign(a - (q + 1) * pa, b - (q + 1) * pb) >= 0:
        q += 1
    return q


def walk(*steps: int) -> Point:
    """Point reached from the origin by unit steps in the given directions."""
    p = (0, 0, 0, 0)
    for d in steps:
        p = add(p, DIRS[d % 12])
    return p


def regular_polygon(start: Point, direction: int, sides: int) -> Polygon:
    """Regular polygon with unit edges, traversed counter-clockwise."""
    turn = 12 // sides
    verts = []
    p, d = start, direction % 12
    for _ in range(sides):
        verts.append(p)
        p = add(p, DIRS[d])
        d = (d + turn) % 12
    return tuple(verts)


def direction_of(p: Point, q: Point) -> int:
    return DIRS.index(sub(q, p))


def polygon_on_edge(p: Point, q: Point, sides: int) -> Polygon:
    """Regular polygon lying to the left of the unit edge ``p -> q``."""
    return regular_polygon(p, direction_of(p, q), sides)


def centroid_float(poly: Polygon) -> tuple[float, float]:
    n = len(poly)
    return (
        sum(as_float(p[0], p[1]) for p in poly) / n,
        sum(as_float(p[2], p[3]) for p in poly) / n,
    )


def mul(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    """``(a + b r3)(c + d r3)`` as a pair of integer coefficients."""
    return a * c + 3 * b * d, a * d + b * c


def dot(p: Point, q: Point) -> tuple[int, int]:
    x = mul(p[0], p[1], q[0], q[1])
    y = mul(p[2], p[3], q[2], q[3])
    return x[0] + y[0], x[1] + y[1]


def reframe(p: Point, u: Point, v: Point) -> Point:
    """Coordinates of ``p`` along the orthogonal, equal-length axes ``u``, ``v``.

    The result is a similarity image of ``p`` (rotation plus uniform
    scaling), so incidences and reflections are preserved.
    """
    return dot(p, u) + dot(p, v)


@dataclass(frozen=True)
class Tiling:
    """A doubly periodic tiling.

    ``period`` is a horizontal translation, ``layer`` a second lattice
    vector pointing upwards, and ``cells`` lists one face from every
    translation orbit of faces.
    """

    name: str
    period: Point
    layer: Point
    cells: tuple[Polygon, ...]

    def __post_init__(self):
        if self.period[2:] != (0, 0) or sign(self.period[0], self.period[1]) <= 0:
            raise ValueError("period must point right along the x axis")
        if sign(self.layer[2], self.layer[3]) <= 0:
            raise ValueError("layer must point upwards")

    def lattice_offset(self, p: Point, weight: int = 1) -> tuple[int, int]:
        """Lattice coordinates ``(i, j)`` of the cell containing ``p / weight``."""
        j = floor_div(p[2], p[3], weight * self.layer[2], weight * self.layer[3])
        q = sub(p, scale(self.layer, weight * j))
        i = floor_div(q[0], q[1], weight * self.period[0], weight * self.period[1])
        return i, j

    def translate(self, poly: Polygon, i: int, j: int) -> Polygon:
        off = add(scale(self.period, i), scale(self.layer, j))
        return tuple(add(p, off) for p in poly)

    def face_key(self, poly: Polygon) -> frozenset[Point]:
        """Vertex set of ``poly`` moved so its centroid lies in the base cell."""
        total = (0, 0, 0, 0)
        for p in poly:
            total = add(total, p)
        i, j = self.lattice_offset(total, len(poly))
        return frozenset(self.translate(poly, -i, -j))

    @cached_property
    def cell_keys(self) -> frozenset[frozenset[Point]]:
        return frozenset(self.face_key(c) for c in self.cells)

    def has_face(self, poly: Polygon) -> bool:
        return self.face_key(poly) in self.cell_keys

    def preserved_by(self, f) -> bool:
        """Whether the point map ``f`` sends every face to a face."""
        return all(self.has_face(tuple(f(p) for p in c)) for c in self.cells)

    @cached_property
    def vertex_orbits(self) -> tuple[Point, ...]:
        """One vertex from each translation orbit, in the base cell."""
        seen = {}
        for c in self.cells:
            for p in c:
                i, j = self.lattice_offset(p)
                q = sub(sub(p, scale(self.period, i)), scale(self.layer, j))
                seen[q] = None
        return tuple(sorted(seen, key=lambda q: (as_float(q[2], q[3]), as_float(q[0], q[1]))))

    def faces_in_box(self, x0: float, x1: float, y0: float, y1: float) -> list[Polygon]:
        """Every face whose centroid lies in the box (plus a few outside it)."""
        px = as_float(self.period[0], self.period[1])
        lx, ly = as_float(self.layer[0], self.layer[1]), as_float(self.layer[2], self.layer[3])
        reach = max(
            math.hypot(as_float(p[0], p[1]), as_float(p[2], p[3])) for c in self.cells for p in c
        ) + px + abs(lx) + ly
        out = []
        for j in range(math.floor((y0 - reach) / ly), math.ceil((y1 + reach) / ly) + 1):
            shift = j * lx
            for i in range(math.floor((x0 - reach - shift) / px), math.ceil((x1 + reach - shift) / px) + 1):
                for c in self.cells:
                    moved = self.translate(c, i, j)
                    cx, cy = centroid_float(moved)
                    if x0 - 1e-9 <= cx <= x1 + 1e-9 and y0 - 1e-9 <= cy <= y1 + 1e-9:
                        out.append(moved)
        return out


def _reframed(name: str, u: Point, v: Point, cells, w: Point | None = None) -> Tiling:
    """Tiling whose period is the image of ``u`` and layer the image of ``w``."""
    moved = tuple(tuple(reframe(p, u, v) for p in c) for c in cells)
    return Tiling(name, reframe(u, u, v), reframe(v if w is None else w, u, v), moved)


def _triangular() -> Tiling:
    up = regular_polygon(walk(), 0, 3)
    down = regular_polygon(walk(), 2, 3)
    return Tiling("3.6", walk(0), walk(4), (up, down))


def _square() -> Tiling:
    return Tiling("4.4", walk(0), walk(3), (regular_polygon(walk(), 0, 4),))


def _elongated_triangular() -> Tiling:
    # a band of squares under a band of triangles
    square = regular_polygon(walk(), 0, 4)
    up = regular_polygon(walk(3), 0, 3)
    down = regular_polygon(walk(3), 2, 3)
    return Tiling("3.3.4.4", walk(0), walk(3, 2), (square, up, down))


def _snub_square() -> Tiling:
    # built with one family of squares axis-aligned, then turned so that the
    # translation lattice (a square lattice) is axis-aligned instead
    s1 = regular_polygon(walk(), 0, 4)
    s2 = regular_polygon(walk(0), 8, 4)
    triangles = (
        regular_polygon(walk(), 10, 3),
        regular_polygon(walk(0), 1, 3),
        regular_polygon(walk(0, 3), 4, 3),
        regular_polygon(walk(3), 7, 3),
    )
    return _reframed("3.3.4.3.4", walk(0, 11), walk(3, 2), (s1, s2) + triangles)


def _trihexagonal() -> Tiling:
    up = regular_polygon(walk(), 0, 3)
    down = regular_polygon(walk(0, 0), 6, 3)
    hexagon = regular_polygon(walk(0), 0, 6)
    return Tiling("3.6.3.6", walk(0, 0), walk(2, 2), (up, down, hexagon))


def _snub_hexagonal() -> Tiling:
    # the triangular lattice with an index-7 sublattice of points deleted;
    # the six neighbours of each deleted point bound a hexagon
    def deleted(i: int, j: int) -> bool:
        return (3 * i + j) % 7 == 0 and (2 * j - i) % 7 == 0

    def coords(p: Point) -> tuple[int, int]:
        # inverse of i*walk(0) + j*walk(2) for lattice points
        j = p[3] // 2
        return (p[0] - 2 * j) // 4, j

    cells = []
    for i in range(7):
        base = scale(walk(0), i)
        for tri in (regular_polygon(base, 0, 3), regular_polygon(base, 2, 3)):
            if not any(deleted(*coords(p)) for p in tri):
                cells.append(tri)
    cells.append(regular_polygon(walk(0), 4, 6))
    u = walk(0, 0, 2)
    v = (0, -2, 10, 0)  # u turned through 90 degrees
    return _reframed("3.4.6", u, v, cells, walk(2, 2, 4))


def _truncated_square() -> Tiling:
    def q(x: int, y: int) -> Point:
        return (4 * x, 0, 4 * y, 0)

    octagon = tuple(q(*xy) for xy in ((2, -1), (2, 1), (1, 2), (-1, 2), (-2, 1), (-2, -1), (-1, -2), (1, -2)))
    square = tuple(q(*xy) for xy in ((2, 1), (3, 2), (2, 3), (1, 2)))
    # turn by 45 degrees so the lattice diagonals become horizontal
    return _reframed("4.8.8", q(4, -4), q(4, 4), (octagon, square), q(4, 0))


def _truncated_hexagonal() -> Tiling:
    # dodecagons sharing their vertical edges; triangles fill the holes
    d = regular_polygon(walk(), 0, 12)
    lower = polygon_on_edge(d[5], d[4], 3)
    upper = polygon_on_edge(d[7], d[6], 3)
    period = pt(num(2, 1), num(0))
    layer = pt(num(1, Fraction(1, 2)), num(Fraction(3, 2), 1))
    return Tiling("3.12.12", period, layer, (d, lower, upper))


def _truncated_trihexagonal() -> Tiling:
    d = regular_polygon(walk(), 0, 12)
    squares = tuple(polygon_on_edge(d[i + 1], d[i], 4) for i in (3, 5, 7))
    hexagons = tuple(polygon_on_edge(d[i + 1], d[i], 6) for i in (4, 6))
    period = pt(num(3, 1), num(0))
    layer = pt(num(Fraction(3, 2), Fraction(1, 2)), num(Fraction(3, 2), Fraction(3, 2)))
    return Tiling("4.6.12", period, layer, (d,) + squares + hexagons)


def _rhombitrihexagonal() -> Tiling:
    # hexagons with vertical sides, squares between horizontal neighbours
    h = regular_polygon(walk(), 11, 6)
    squares = tuple(polygon_on_edge(h[(i + 1) % 6], h[i], 4) for i in (1, 2, 3))
    triangles = (regular_polygon(h[2], 10, 3), regular_polygon(h[3], 0, 3))
    period = pt(num(1, 1), num(0))
    layer = pt(num(Fraction(1, 2), Fraction(1, 2)), num(Fraction(3, 2), Fraction(1, 2)))
    return Tiling("3.4.6.4", period, layer, (h,) + squares + triangles)


TILINGS = {
    "3.6": _triangular,
    "4.4": _square,
    "3.3.4.4": _elongated_triangular,
    "3.3.4.3.4": _snub_square,
    "3.6.3.6": _trihexagonal,
    "3.4.6": _snub_hexagonal,
    "4.8.8": _truncated_square,
    "3.12.12": _truncated_hexagonal,
    "4.6.12": _truncated_trihexagonal,
    "3.4.6.4": _rhombitrihexagonal,
}


def tiling(name: str) -> Tiling:
    return TILINGS[name]()


# ---------------------------------------------------------------------------
# Klein-bottle groups acting on a tiling

Num = tuple[int, int]  # a + b*sqrt(3), in quarter units


def x_of(p: Point) -> Num:
    return p[0], p[1]


def y_of(p: Point) -> Num:
    return p[2], p[3]


def nadd(u: Num, v: Num) -> Num:
    return u[0] + v[0], u[1] + v[1]


def nsub(u: Num, v: Num) -> Num:
    return u[0] - v[0], u[1] - v[1]


def nscale(u: Num, m: int) -> Num:
    return u[0] * m, u[1] * m


def nfloor(u: Num, v: Num) -> int:
    return floor_div(u[0], u[1], v[0], v[1])


def nmod(u: Num, v: Num) -> Num:
    return nsub(u, nscale(v, nfloor(u, v)))


def nsign(u: Num) -> int:
    return sign(u[0], u[1])


def nfloat(u: Num) -> float:
    return as_float(u[0], u[1])


def halve(u: Num) -> Num:
    if u[0] % 2 or u[1] % 2:
        raise ValueError(f"{u} is not divisible by 2 in quarter units")
    return u[0] // 2, u[1] // 2


@dataclass(frozen=True)
class VerticalGlideGroup:
    """The group generated by ``(x, y) -> (x + P, y)`` and ``(x, y) -> (c - x, y + H)``.

    Reduction picks the representative with ``y0 <= y < y0 + H`` and
    ``x0 <= x < x0 + P``.  Works for any point map, symmetric or not.
    """

    P: Num
    H: Num
    c: Num
    x0: Num = (0, 0)
    y0: Num = (0, 0)

    def __post_init__(self):
        if nsign(self.P) <= 0 or nsign(self.H) <= 0:
            raise ValueError("translation and glide height must be positive")

    def reduce(self, p: Point, w: int = 1) -> Point:
        x, y = x_of(p), y_of(p)
        h = nscale(self.H, w)
        q = nfloor(nsub(y, nscale(self.y0, w)), h)
        y = nsub(y, nscale(h, q))
        if q % 2:
            x = nsub(nscale(self.c, w), x)
        x0 = nscale(self.x0, w)
        x = nadd(x0, nmod(nsub(x, x0), nscale(self.P, w)))
        return x + y

    def generators(self):
        return (
            lambda p: add(p, (self.P[0], self.P[1], 0, 0)),
            lambda p: (self.c[0] - p[0], self.c[1] - p[1], p[2] + self.H[0], p[3] + self.H[1]),
        )

    def box(self) -> tuple[float, float, float, float]:
        x0, y0 = nfloat(self.x0), nfloat(self.y0)
        return x0, x0 + nfloat(self.P), y0, y0 + nfloat(self.H)


@dataclass(frozen=True)
class HorizontalGlideGroup:
    """The group generated by two glide reflections with horizontal axes.

    Axis heights are stored doubled (``Y = 2y``) so they stay in the
    quarter-unit ring; both glides shift by ``a``.  Reduction lands in the
    band between the axes, and on an axis the glide shift is factored out.
    """

    Y1: Num
    Y2: Num
    a: Num
    x0: Num = (0, 0)

    def __post_init__(self):
        if nsign(nsub(self.Y2, self.Y1)) <= 0 or nsign(self.a) <= 0:
            raise ValueError("need Y1 < Y2 and a positive glide shift")

    def reduce(self, p: Point, w: int = 1) -> Point:
        x, y = x_of(p), y_of(p)
        Y1, Y2 = nscale(self.Y1, w), nscale(self.Y2, w)
        gap = nsub(Y2, Y1)
        q = nfloor(nsub(nscale(y, 2), Y1), nscale(gap, 2))
        y = nsub(y, nscale(gap, q))
        if nsign(nsub(nscale(y, 2), Y2)) > 0:
            y = nsub(Y2, y)
            x = nadd(x, nscale(self.a, w))
        on_axis = nscale(y, 2) in (Y1, Y2)
        span = nscale(self.a, w if on_axis else 2 * w)
        x0 = nscale(self.x0, w)
        x = nadd(x0, nmod(nsub(x, x0), span))
        return x + y

    def generators(self):
        def glide(Y):
            return lambda p: (p[0] + self.a[0], p[1] + self.a[1], Y[0] - p[2], Y[1] - p[3])

        return glide(self.Y1), glide(self.Y2)

    def box(self) -> tuple[float, float, float, float]:
        x0 = nfloat(self.x0)
        return x0, x0 + 2 * nfloat(self.a), nfloat(self.Y1) / 2, nfloat(self.Y2) / 2


@dataclass
class Quotient:
    """Vertex orbits (as canonical points) and faces of a tiling modulo a group."""

    points: list[Point]
    faces: list[tuple[Point, ...]]

    def index(self, order: list[Point] | None = None) -> tuple[dict[Point, int], list[list[int]]]:
        """Number the vertices (``order`` first, the rest by height then x)."""
        ids: dict[Point, int] = {}
        for p in order or ():
            ids.setdefault(p, len(ids))
        key = lambda q: (as_float(q[2], q[3]), as_float(q[0], q[1]))  # noqa: E731
        for p in sorted(self.points, key=key):
            ids.setdefault(p, len(ids))
        return ids, [[ids[p] for p in f] for f in self.faces]


def quotient(t: Tiling, group) -> Quotient:
    """Glue the faces of ``t`` in one fundamental domain of ``group``.

    A face is kept when its centroid is its own canonical representative,
    so each face orbit contributes exactly once.  Nothing here checks that
    the group preserves the tiling; validation of the result does that.
    """
    faces, points = [], {}
    for poly in t.faces_in_box(*group.box()):
        total = (0, 0, 0, 0)
        for p in poly:
            total = add(total, p)
        if group.reduce(total, len(poly)) != total:
            continue
        face = tuple(group.reduce(p) for p in poly)
        faces.append(face)
        for p in face:
            points[p] = None
    return Quotient(list(points), faces)


def _is_lattice(t: Tiling, v: Point) -> bool:
    i, j = t.lattice_offset(v)
    return sub(sub(v, scale(t.period, i)), scale(t.layer, j)) == (0, 0, 0, 0)


@cached_property
def _vertical_step(self: Tiling) -> int:
    # smallest j > 0 with j*layer plus some multiple of period vertical
    for j in range(1, 25):
        rem = nmod(nscale(x_of(self.layer), j), x_of(self.period))
        if rem == (0, 0):
            return j
    raise ValueError("tiling has no vertical translation")


Tiling.vertical_step = _vertical_step
Tiling.vertical_step.__set_name__(Tiling, "vertical_step")


def vertical_height(t: Tiling) -> Num:
    """Height of the shortest vertical translation of ``t``."""
    return nscale(y_of(t.layer), t.vertical_step)


def _local_vertices(t: Tiling) -> set[Point]:
    P = nfloat(x_of(t.period)) + nfloat(y_of(t.layer)) * t.vertical_step
    return {p for c in t.faces_in_box(-P, P, -P, P) for p in c}


def vertical_glides(t: Tiling) -> list[tuple[int, Num]]:
    """Glide reflections with vertical axes, as ``(j, c)``.

    ``j`` is 1 or 2: the glide height is ``j`` halves of the vertical
    translation height; ``c`` is the reflection offset modulo the period.
    """
    h0 = vertical_height(t)
    found = set()
    verts = _local_vertices(t)
    for j in (1, 2):
        H = h0 if j == 2 else halve(h0)
        for p in t.vertex_orbits:
            for q in verts:
                if y_of(q) != nadd(y_of(p), H):
                    continue
                c = nmod(nadd(x_of(p), x_of(q)), x_of(t.period))
                if (j, c) in found:
                    continue
                g = VerticalGlideGroup(x_of(t.period), H, c)
                if t.preserved_by(g.generators()[1]):
                    found.add((j, c))
    return sorted(found)


def horizontal_axes(t: Tiling) -> list[tuple[Num, Num]]:
    """Glide reflections with horizontal axes, as ``(Y, a)``.

    ``Y`` is twice the axis height, reduced modulo twice the layer height
    (translating an axis by the layer gives an equivalent one); ``a`` is
    the glide shift modulo the period, so it is 0 or half a period.
    """
    found = set()
    span = nscale(y_of(t.layer), 2)
    period = x_of(t.period)
    for p in t.vertex_orbits:
        for q in _local_vertices(t):
            Y = nmod(nadd(y_of(p), y_of(q)), span)
            a = nmod(nsub(x_of(q), x_of(p)), period)
            if (Y, a) in found:
                continue
            g = lambda z, Y=Y, a=a: (z[0] + a[0], z[1] + a[1], Y[0] - z[2], Y[1] - z[3])  # noqa: E731
            if t.preserved_by(g):
                found.add((Y, a))
    return sorted(found)


def vertex_density(t: Tiling) -> Fraction:
    """Vertices in one ``period x vertical_height`` box."""
    return Fraction(len(t.vertex_orbits) * t.vertical_step)
