"""Planar ``K(r, s, k)`` and Möbius-pair ``K(l, t)`` representations.

Both kinds are built the same way: a Klein-bottle group acting on the
type's plane tiling is written down from the parameters, one fundamental
domain of faces is glued up, and the result is validated.  A planar
representation uses a glide with a vertical axis, so the ``s`` horizontal
rows of width ``r`` close up with the top row reversed and shifted by
``k``.  A Möbius-pair representation uses two glides with horizontal axes;
the ``t`` rows of length ``l`` between the axes form a cylinder and each
axis carries a Möbius strip.

Admissibility is a separate, purely arithmetic test checking the
closed-form parameter conditions clause by clause.  Construction is the
arbiter of what actually closes: a parameter set that passes the
arithmetic test but does not give a valid map raises
:class:`InternalClosureFailure`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Union

from . import tilings as tl
from .mapcore import (
    MapError,
    MapType,
    PolygonalMap,
    euler_characteristic,
    from_faces,
    is_orientable,
    is_semi_equivelar,
    lookup_type,
)

__all__ = [
    "Planar",
    "MobiusPair",
    "RepParams",
    "AdmissibilityVerdict",
    "InadmissibleParams",
    "InternalClosureFailure",
    "parse_rep",
    "rep_from_dict",
    "admissible",
    "build",
    "build_planar",
    "build_mobius",
    "reduce_k",
    "canonical_reps",
    "admissible_reps",
    "mobius_variants",
    "planar_vertex_count",
    "mobius_vertex_count",
    "GroupSpec",
    "klein_quotients",
]


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True, order=True)
class Planar:
    r: int
    s: int
    k: int

    kind = "planar"

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise ValueError(f"planar parameters need r, s >= 1 (got r={self.r}, s={self.s})")
        if not 0 <= self.k < self.r:
            raise ValueError(f"planar twist needs 0 <= k <= r-1 (got k={self.k}, r={self.r})")

    def to_dict(self) -> dict:
        return {"kind": "planar", "r": self.r, "s": self.s, "k": self.k}

    def __str__(self) -> str:
        return f"K({self.r},{self.s},{self.k})"


_VARIANT_ALIASES = {"mmplain": "plain", "mm36": "m36", "mm312": "m312", "mm412": "m412", "mm34": "m34", "mm46": "m46"}


def _variant_name(v: str) -> str:
    v = v.strip().lower()
    return _VARIANT_ALIASES.get(v, v)


@dataclass(frozen=True, order=True)
class MobiusPair:
    variant: str
    l: int  # noqa: E741 - the conventional name
    t: int

    kind = "mobius"

    def __post_init__(self):
        object.__setattr__(self, "variant", _variant_name(self.variant))
        if self.l < 1 or self.t < 1:
            raise ValueError(f"Möbius-pair parameters need l, t >= 1 (got l={self.l}, t={self.t})")

    def to_dict(self) -> dict:
        return {"kind": "mobius", "variant": self.variant, "l": self.l, "t": self.t}

    def __str__(self) -> str:
        return f"K[{self.variant}]({self.l},{self.t})"


RepParams = Union[Planar, MobiusPair]


def parse_rep(spec: str) -> RepParams:
    """Parse ``planar:r,s,k`` or ``mobius:variant,l,t``."""
    kind, _, rest = spec.partition(":")
    parts = [p.strip() for p in rest.split(",")]
    kind = kind.strip().lower()
    try:
        if kind == "planar" and len(parts) == 3:
            return Planar(*map(int, parts))
        if kind == "mobius" and len(parts) == 3:
            return MobiusPair(parts[0], int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise ValueError(f"bad representation {spec!r}: {exc}") from None
    raise ValueError(f"bad representation {spec!r}; expected planar:r,s,k or mobius:variant,l,t")


def rep_from_dict(data: dict) -> RepParams:
    if data.get("kind") == "planar":
        return Planar(data["r"], data["s"], data["k"])
    if data.get("kind") == "mobius":
        return MobiusPair(data["variant"], data["l"], data["t"])
    raise ValueError(f"unknown representation kind in {data!r}")


# ---------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class AdmissibilityVerdict:
    violated: tuple[tuple[str, str], ...] = ()

    @property
    def admissible(self) -> bool:
        return not self.violated

    def __bool__(self) -> bool:
        return self.admissible

    def to_dict(self) -> dict:
        return {"admissible": self.admissible, "violated": [list(v) for v in self.violated]}

    def __str__(self) -> str:
        if self.admissible:
            return "admissible"
        return "; ".join(msg for _, msg in self.violated)


class InadmissibleParams(ValueError):
    def __init__(self, map_type: MapType, params: RepParams, verdict: AdmissibilityVerdict):
        super().__init__(f"{map_type.name} {params}: {verdict}")
        self.map_type = map_type
        self.params = params
        self.verdict = verdict


class InternalClosureFailure(RuntimeError):
    """Parameters that should close up into a map did not."""

    def __init__(self, map_type: MapType, params, reason: str):
        super().__init__(f"{map_type.name} {params}: {reason}")
        self.map_type = map_type
        self.params = params
        self.reason = reason


Clause = tuple[str, str, Callable[..., bool]]


def _pl(tag: str, text: str, test: Callable[[int, int, int], bool]) -> Clause:
    return (tag, text, test)


def _k_range(name: str) -> Clause:
    return _pl(f"{name}/k-range", "0 ≤ k ≤ r−1", lambda r, s, k: 0 <= k < r)


def _triangular_planar(name: str, min_rs: int) -> list[Clause]:
    return [
        _pl(f"{name}/rs-min", f"rs ≥ {min_rs}", lambda r, s, k: r * s >= min_rs),
        _pl(f"{name}/r-min", "r ≥ 3", lambda r, s, k: r >= 3),
        _pl(f"{name}/s-min", "s ≥ 3", lambda r, s, k: s >= 3),
        _k_range(name),
    ]


_PLANAR_CLAUSES: dict[str, list[Clause]] = {
    "3.6": _triangular_planar("3.6", 9),
    "4.4": _triangular_planar("4.4", 9),
    "3.3.4.4": [
        _pl("3.3.4.4/rs-min", "rs ≥ 12", lambda r, s, k: r * s >= 12),
        _pl("3.3.4.4/r-min", "r ≥ 3", lambda r, s, k: r >= 3),
        _pl("3.3.4.4/s-min", "s ≥ 4", lambda r, s, k: s >= 4),
        _k_range("3.3.4.4"),
    ],
    "3.3.4.3.4": [
        _pl("3.3.4.3.4/rs-min", "rs ≥ 12", lambda r, s, k: r * s >= 12),
        _pl("3.3.4.3.4/r-min", "r ≥ 4", lambda r, s, k: r >= 4),
        _pl("3.3.4.3.4/r-even", "2 | r", lambda r, s, k: r % 2 == 0),
        _pl("3.3.4.3.4/s-min", "s ≥ 3", lambda r, s, k: s >= 3),
        _pl("3.3.4.3.4/s-odd", "s odd", lambda r, s, k: s % 2 == 1),
        _pl("3.3.4.3.4/k-even", "k even", lambda r, s, k: k % 2 == 0),
        _k_range("3.3.4.3.4"),
    ],
    "4.8.8": [
        _pl("4.8.8/rs-min", "rs ≥ 24", lambda r, s, k: r * s >= 24),
        _pl("4.8.8/r-div4", "4 | r", lambda r, s, k: r % 4 == 0),
        _pl("4.8.8/s-min", "s ≥ 3", lambda r, s, k: s >= 3),
        _pl("4.8.8/r-min", "r ≥ 8", lambda r, s, k: r >= 8),
        _pl("4.8.8/k-odd-s", "k ∈ {4t+3} when s is odd", lambda r, s, k: s % 2 == 0 or k % 4 == 3),
        _pl(
            "4.8.8/k-even-s",
            "k ∈ {(4t+2) mod r} when s is even",
            lambda r, s, k: s % 2 == 1 or (s >= 4 and k in {(4 * i + 2) % r for i in range(r)}),
        ),
        _k_range("4.8.8"),
    ],
    "3.6.3.6": [
        _pl("3.6.3.6/n-min", "(3/2)rs ≥ 27", lambda r, s, k: 3 * r * s >= 54),
        _pl("3.6.3.6/s-min", "s ≥ 3", lambda r, s, k: s >= 3),
        _pl("3.6.3.6/r-even", "2 | r", lambda r, s, k: r % 2 == 0),
        _pl("3.6.3.6/r-min", "r ≥ 6", lambda r, s, k: r >= 6),
        _pl("3.6.3.6/k-odd", "k odd", lambda r, s, k: k % 2 == 1),
        _k_range("3.6.3.6"),
    ],
    "3.12.12": [
        _pl("3.12.12/n-div6", "6 | n where n = (3/2)rs", lambda r, s, k: (3 * r * s) % 12 == 0),
        _pl("3.12.12/r-div4", "4 | r", lambda r, s, k: r % 4 == 0),
        _pl("3.12.12/s-min", "s ≥ 3", lambda r, s, k: s >= 3),
        _pl("3.12.12/r-min", "r ≥ 12", lambda r, s, k: r >= 12),
        _pl("3.12.12/k-class", "k ∈ {4t+2}", lambda r, s, k: k % 4 == 2),
        _k_range("3.12.12"),
    ],
    "4.6.12": [
        _pl("4.6.12/n-min", "n = rs ≥ 48", lambda r, s, k: r * s >= 48),
        _pl("4.6.12/s-even", "2 | s", lambda r, s, k: s % 2 == 0),
        _pl("4.6.12/r-div6", "6 | r", lambda r, s, k: r % 6 == 0),
        _pl("4.6.12/s-min", "s ≥ 4", lambda r, s, k: s >= 4),
        _pl("4.6.12/n-div12", "12 | n", lambda r, s, k: (r * s) % 12 == 0),
        _pl("4.6.12/r-min", "r ≥ 12", lambda r, s, k: r >= 12),
        _pl("4.6.12/k-class", "k ∈ {6t+4}", lambda r, s, k: k % 6 == 4),
        _k_range("4.6.12"),
    ],
    "3.4.6.4": [
        _pl("3.4.6.4/n-min", "n = rs ≥ 24", lambda r, s, k: r * s >= 24),
        _pl("3.4.6.4/r-div3", "3 | r", lambda r, s, k: r % 3 == 0),
        _pl("3.4.6.4/s-even", "2 | s", lambda r, s, k: s % 2 == 0),
        _pl("3.4.6.4/s-min", "s ≥ 4", lambda r, s, k: s >= 4),
        _pl("3.4.6.4/r-min", "r ≥ 6", lambda r, s, k: r >= 6),
        _pl("3.4.6.4/k-class", "k ∈ {3t+2}", lambda r, s, k: k % 3 == 2),
        _k_range("3.4.6.4"),
    ],
}


def _mb(tag: str, text: str, test: Callable[[int, int], bool]) -> Clause:
    return (tag, text, test)


def _stacked_squares(name: str, odd: bool) -> list[Clause]:
    parity = "odd" if odd else "even"
    return [
        _mb(f"{name}/tl-min", "tl ≥ 10", lambda l, t: t * l >= 10),
        _mb(f"{name}/t-min", "t ≥ 2", lambda l, t: t >= 2),
        _mb(f"{name}/t-even", "t even", lambda l, t: t % 2 == 0),
        _mb(f"{name}/l-min-t2", "l ≥ 5 when t = 2", lambda l, t: t != 2 or l >= 5),
        _mb(f"{name}/l-min-t4", "l ≥ 4 when t ≥ 4", lambda l, t: t < 4 or l >= 4),
        _mb(f"{name}/l-parity", f"l {parity} for this closure", lambda l, t: l % 2 == (1 if odd else 0)),
    ]


_MOBIUS_CLAUSES: dict[str, dict[str, list[Clause]]] = {
    "3.6": {
        "plain": [
            _mb("3.6/plain/tl-min", "tl ≥ 10", lambda l, t: t * l >= 10),
            _mb("3.6/plain/t-min", "t ≥ 2", lambda l, t: t >= 2),
            _mb("3.6/plain/l-odd", "l odd", lambda l, t: l % 2 == 1),
            _mb("3.6/plain/l-min", "l ≥ 5", lambda l, t: l >= 5),
        ]
    },
    "3.3.4.4": {
        "tri": _stacked_squares("3.3.4.4/tri", odd=True),
        "quad": _stacked_squares("3.3.4.4/quad", odd=False),
    },
    "3.6.3.6": {
        "m36": [
            _mb("3.6.3.6/m36/t-min", "t ≥ 2", lambda l, t: t >= 2),
            _mb("3.6.3.6/m36/l-div4", "4 | l", lambda l, t: l % 4 == 0),
            _mb("3.6.3.6/m36/l-min", "l ≥ 12", lambda l, t: l >= 12),
        ],
        "plain": [
            _mb("3.6.3.6/plain/t-min", "t ≥ 1", lambda l, t: t >= 1),
            _mb("3.6.3.6/plain/l-even", "2 | l", lambda l, t: l % 2 == 0),
            _mb("3.6.3.6/plain/l-min", "l ≥ 10", lambda l, t: l >= 10),
        ],
        "mixed": [
            _mb("3.6.3.6/mixed/t-min", "t ≥ 1", lambda l, t: t >= 1),
            _mb("3.6.3.6/mixed/l-div4", "4 | l", lambda l, t: l % 4 == 0),
            _mb("3.6.3.6/mixed/l-min", "l ≥ 12", lambda l, t: l >= 12),
        ],
    },
    "3.12.12": {
        "m312": [
            _mb("3.12.12/m312/l-div8", "8 | l", lambda l, t: l % 8 == 0),
            _mb("3.12.12/m312/l-min", "l ≥ 24", lambda l, t: l >= 24),
            _mb("3.12.12/m312/t-min", "t ≥ 2", lambda l, t: t >= 2),
        ],
        "plain": [
            _mb("3.12.12/plain/t-min", "t ≥ 1", lambda l, t: t >= 1),
            _mb("3.12.12/plain/l-div4", "4 | l", lambda l, t: l % 4 == 0),
            _mb("3.12.12/plain/l-min", "l ≥ 20", lambda l, t: l >= 20),
        ],
        "mixed": [
            _mb("3.12.12/mixed/t-min", "t ≥ 1", lambda l, t: t >= 1),
            _mb("3.12.12/mixed/l-div4", "4 | l", lambda l, t: l % 4 == 0),
            _mb("3.12.12/mixed/l-min", "l ≥ 24", lambda l, t: l >= 24),
        ],
    },
    "4.6.12": {
        "m412": [
            _mb("4.6.12/m412/t-min", "t ≥ 2", lambda l, t: t >= 2),
            _mb("4.6.12/m412/t-even", "t even", lambda l, t: t % 2 == 0),
            _mb("4.6.12/m412/l-div12", "12 | l", lambda l, t: l % 12 == 0),
            _mb("4.6.12/m412/l-min", "l ≥ 24", lambda l, t: l >= 24),
        ]
    },
    "3.4.6.4": {
        "m34": [
            _mb("3.4.6.4/m34/t-min", "t ≥ 2", lambda l, t: t >= 2),
            _mb("3.4.6.4/m34/l-class", "6 | (l−3)", lambda l, t: (l - 3) % 6 == 0),
            _mb("3.4.6.4/m34/l-min", "l ≥ 9", lambda l, t: l >= 9),
        ],
        "m46": [
            _mb("3.4.6.4/m46/t-min", "t ≥ 2", lambda l, t: t >= 2),
            _mb("3.4.6.4/m46/l-div6", "6 | l", lambda l, t: l % 6 == 0),
            _mb("3.4.6.4/m46/l-min", "l ≥ 12", lambda l, t: l >= 12),
        ],
        "mixed": [
            _mb("3.4.6.4/mixed/none", "a mixed closure never yields a map of this type", lambda l, t: False),
        ],
    },
}

# closed-form vertex counts of the Möbius-pair closures, as functions of (l, t)
_MOBIUS_COUNTS: dict[tuple[str, str], Callable[[int, int], Fraction]] = {
    ("3.6", "plain"): lambda l, t: Fraction(t * l),
    ("3.3.4.4", "tri"): lambda l, t: Fraction(t * l),
    ("3.3.4.4", "quad"): lambda l, t: Fraction(t * l),
    ("3.6.3.6", "m36"): lambda l, t: Fraction(3 * t * l, 2) + Fraction(l, 2),
    ("3.6.3.6", "plain"): lambda l, t: Fraction(l * (t + 2)),
    ("3.6.3.6", "mixed"): lambda l, t: l * (t + Fraction(5, 4)),
    ("3.12.12", "m312"): lambda l, t: Fraction(3 * t * l, 2) + Fraction(l, 2),
    ("3.12.12", "plain"): lambda l, t: Fraction(l * (t + 2)),
    ("3.12.12", "mixed"): lambda l, t: l * (t + Fraction(5, 4)),
    ("4.6.12", "m412"): lambda l, t: Fraction(t * l),
    ("3.4.6.4", "m34"): lambda l, t: Fraction(t * l),
    ("3.4.6.4", "m46"): lambda l, t: Fraction(t * l),
    ("3.4.6.4", "mixed"): lambda l, t: Fraction(t * l),
}

_PLANAR_RATIO = {"3.6.3.6": Fraction(3, 2), "3.12.12": Fraction(3, 2)}

_NONEXISTENT = "3.4.6"


def mobius_variants(t: MapType | str) -> tuple[str, ...]:
    name = _base(lookup_type(t)).name
    return tuple(_MOBIUS_CLAUSES.get(name, {}))


def planar_vertex_count(t: MapType | str, r: int, s: int) -> Fraction:
    mt = lookup_type(t)
    if mt.name == "6.3":
        return 2 * planar_vertex_count("3.6", r, s)
    return _PLANAR_RATIO.get(mt.name, Fraction(1)) * r * s


def mobius_vertex_count(t: MapType | str, variant: str, l: int, t_: int) -> Fraction | None:  # noqa: E741
    """Closed-form vertex count of a Möbius-pair closure, or None if none is stated."""
    mt = lookup_type(t)
    if mt.name == "6.3":
        base = mobius_vertex_count("3.6", variant, l, t_)
        return None if base is None else 2 * base
    f = _MOBIUS_COUNTS.get((mt.name, _variant_name(variant)))
    return None if f is None else f(l, t_)


def _base(mt: MapType) -> MapType:
    # maps of type 6.3 are handled as duals of type 3.6
    return lookup_type("3.6") if mt.name == "6.3" else mt


def admissible(t: MapType | str, p: RepParams) -> AdmissibilityVerdict:
    """Check ``p`` against every published condition for type ``t``."""
    mt = lookup_type(t)
    base = _base(mt)
    if base.name == _NONEXISTENT:
        return AdmissibilityVerdict(((f"{base.name}/none", f"no map of type {base.name} exists on the Klein bottle"),))
    violated = []
    if isinstance(p, Planar):
        for tag, text, test in _PLANAR_CLAUSES[base.name]:
            if not test(p.r, p.s, p.k):
                violated.append((tag, f"{text} violated"))
    else:
        table = _MOBIUS_CLAUSES.get(base.name, {})
        if not table:
            violated.append((f"{base.name}/mobius", f"type {base.name} has no Möbius-pair representation"))
        elif p.variant not in table:
            violated.append(
                (f"{base.name}/variant", f"unknown closure {p.variant!r} for type {base.name}; expected one of {sorted(table)}")
            )
        else:
            for tag, text, test in table[p.variant]:
                if not test(p.l, p.t):
                    violated.append((tag, f"{text} violated"))
    return AdmissibilityVerdict(tuple(violated))


def reduce_k(t: MapType | str, r: int, s: int, k: int, *, check: bool = True) -> int:
    """Canonical twist class: 0 if ``k`` or ``k + r`` is even, else 1."""
    if check:
        p = Planar(r, s, k)
        verdict = admissible(t, p)
        if not verdict:
            raise InadmissibleParams(lookup_type(t), p, verdict)
    return 0 if k % 2 == 0 or (k + r) % 2 == 0 else 1


# ---------------------------------------------------------------------------
# row frames: how the rows of each tiling are laid out

Ref = tuple[int, int, int]  # (vertex orbit, period shift, layer shift)


@dataclass(frozen=True)
class Frame:
    rows: tuple[tuple[Ref, ...], ...]
    axes: dict[str, tl.Num] = field(default_factory=dict)
    variants: dict[str, tuple[str, str]] = field(default_factory=dict)

    @property
    def row_len(self) -> int:
        return len(self.rows[0])


FRAMES: dict[str, Frame] = {
    "3.6": Frame(((( 0, 0, 0),),), {"between": (0, 2)}, {"plain": ("between", "between")}),
    "4.4": Frame((((0, 0, 0),),)),
    "3.3.4.4": Frame(
        (((0, 0, 0),), ((1, 0, 0),)),
        {"square": (4, 0), "triangle": (8, 2)},
        {"quad": ("square", "square"), "tri": ("triangle", "triangle")},
    ),
    "3.3.4.3.4": Frame((((0, 0, 0), (1, 0, 0)), ((2, 0, 0), (3, 1, 0)))),
    "3.6.3.6": Frame(
        (((0, 0, 0), (1, 0, 0)),),
        {"line": (0, 0), "sparse": (0, 4)},
        {"m36": ("sparse", "sparse"), "plain": ("line", "line"), "mixed": ("line", "sparse")},
    ),
    "3.4.6": Frame(tuple(((i, 0, 0),) for i in range(6))),
    "4.8.8": Frame((((2, 0, 0), (0, 0, 0), (1, 0, 0), (3, 0, 0)),)),
    "3.12.12": Frame(
        (((0, 0, 0), (1, 0, 0), (2, 0, 0), (3, 0, 0)),),
        {"row": (2, 0), "dodecagon": (8, 4)},
        {"m312": ("dodecagon", "dodecagon"), "plain": ("row", "row"), "mixed": ("row", "dodecagon")},
    ),
    "4.6.12": Frame(
        (
            ((0, 0, 0), (1, 0, 0), (2, 0, 0), (4, 0, 0), (5, 0, 0), (3, 0, 0)),
            ((6, 0, 0), (7, 0, 0), (9, 0, 0), (10, 1, 0), (11, 1, 0), (8, 1, 0)),
        ),
        {"square": (8, 4)},
        {"m412": ("square", "square")},
    ),
    "3.4.6.4": Frame(
        (((0, 0, 0), (5, 0, -1), (1, 0, 0)), ((2, 0, 0), (4, 0, 0), (3, 0, 0))),
        {"hexagon": (4, 0), "triangle": (10, 2)},
        {"m46": ("hexagon", "hexagon"), "m34": ("triangle", "triangle"), "mixed": ("triangle", "hexagon")},
    ),
}


@lru_cache(maxsize=None)
def _tiling(name: str) -> tl.Tiling:
    return tl.tiling(name)


class _Layout:
    """Row ``i``, column ``j`` of a type's tiling as an exact point."""

    def __init__(self, name: str):
        self.tiling = _tiling(name)
        self.frame = FRAMES[name]
        self.rho = len(self.frame.rows)
        self.L = self.frame.row_len
        orbits = self.tiling.vertex_orbits
        self.templates = [
            [tl.add(tl.add(orbits[o], tl.scale(self.tiling.period, di)), tl.scale(self.tiling.layer, dj)) for o, di, dj in row]
            for row in self.frame.rows
        ]

    def point(self, i: int, j: int) -> tl.Point:
        row = self.templates[i % self.rho]
        p = row[j % self.L]
        p = tl.add(p, tl.scale(self.tiling.period, j // self.L))
        return tl.add(p, tl.scale(self.tiling.layer, i // self.rho))

    def doubled_mean_height(self, i: int) -> float:
        # rows are far apart, so a float is precise enough to order them
        row = [self.point(i, j) for j in range(self.L)]
        return 2 * sum(tl.as_float(p[2], p[3]) for p in row) / self.L


@lru_cache(maxsize=None)
def _layout(name: str) -> _Layout:
    return _Layout(name)


# ---------------------------------------------------------------------------
# construction


def _fail(mt: MapType, p, reason: str) -> InternalClosureFailure:
    return InternalClosureFailure(mt, p, reason)


def _validate(mt: MapType, p, n: int, faces, rows, meta, expected: Fraction | None) -> PolygonalMap:
    try:
        m = from_faces(n, faces, map_type=mt, rep=p, meta={**meta, "rows": rows})
    except MapError as exc:
        raise _fail(mt, p, f"glued complex is not a polyhedral map ({exc.kind}: {exc})") from exc
    if not is_semi_equivelar(m, mt):
        raise _fail(mt, p, f"glued map is not of type {mt.name} at every vertex")
    if euler_characteristic(m) != 0 or is_orientable(m):
        raise _fail(mt, p, "glued map is not a Klein bottle")
    if expected is not None and n != expected:
        raise _fail(mt, p, f"glued map has {n} vertices, the closed form gives {expected}")
    for row in rows:
        for a, b in zip(row, row[1:] + row[:1]):
            if not m.has_edge(a, b):
                raise _fail(mt, p, f"row {row} is not a cycle of the map")
    return m


def _assemble(mt: MapType, p, t: tl.Tiling, group, row_points: list[list[tl.Point]], expected, extra_meta=None):
    q = tl.quotient(t, group)
    flat = [group.reduce(pt) for row in row_points for pt in row]
    if len(set(flat)) != len(flat):
        raise _fail(mt, p, "two row positions are identified by the closure")
    ids, faces = q.index(flat)
    if len(ids) != len(q.points):
        raise _fail(mt, p, "row positions are not vertices of the glued complex")
    rows = [[ids[group.reduce(pt)] for pt in row] for row in row_points]
    return _validate(mt, p, len(ids), faces, rows, extra_meta or {}, expected)


def _check(mt: MapType, p: RepParams, check: bool) -> None:
    if check:
        verdict = admissible(mt, p)
        if not verdict:
            raise InadmissibleParams(mt, p, verdict)


def planar_group(name: str, r: int, s: int, k: int) -> tl.VerticalGlideGroup:
    """The group gluing ``s`` rows of width ``r`` with twist ``k``.

    The glide sends ``u(0, k)`` to ``u(s, 0)`` and reverses the rows, so
    ``u(s, j)`` is glued to ``u(0, k - j)``.
    """
    lay = _layout(name)
    if r % lay.L:
        raise ValueError(f"row width {r} is not a multiple of the strip period {lay.L}")
    P = tl.nscale(tl.x_of(lay.tiling.period), r // lay.L)
    top, bottom = lay.point(s, 0), lay.point(0, k)
    H = tl.nsub(tl.y_of(top), tl.y_of(bottom))
    if tl.nsign(H) <= 0:
        raise ValueError("row s does not lie above row 0")
    c = tl.nadd(tl.x_of(top), tl.x_of(bottom))
    origin = lay.point(0, 0)
    return tl.VerticalGlideGroup(P, H, c, tl.x_of(origin), tl.y_of(origin))


def build_planar(t: MapType | str, r: int, s: int, k: int, *, check: bool = True) -> PolygonalMap:
    """Build ``K(r, s, k)`` for type ``t``."""
    mt = lookup_type(t)
    p = Planar(r, s, k)
    _check(mt, p, check)
    if mt.name == "6.3":
        from .isomorphism import dual

        return _dual_rep(dual(build_planar("3.6", r, s, k, check=False)), mt, p)
    lay = _layout(mt.name)
    try:
        group = planar_group(mt.name, r, s, k)
    except ValueError as exc:
        raise _fail(mt, p, str(exc)) from None
    for j in range(r):
        if group.reduce(lay.point(s, j)) != group.reduce(lay.point(0, (k - j) % r)):
            raise _fail(mt, p, f"the twist does not glue u(s,{j}) to u(0,{(k - j) % r})")
    rows = [[lay.point(i, j) for j in range(r)] for i in range(s)]
    return _assemble(mt, p, lay.tiling, group, rows, planar_vertex_count(mt, r, s))


def _dual_rep(m: PolygonalMap, mt: MapType, p: RepParams) -> PolygonalMap:
    return from_faces(m.n_vertices, m.faces, map_type=mt, rep=p, meta={"dual_of": "3.6"})


def mobius_group(name: str, variant: str, l: int, t: int) -> tuple[tl.HorizontalGlideGroup, int]:  # noqa: E741
    """The group for ``K(l, t)`` and the index of the first row above the lower axis."""
    lay = _layout(name)
    frame = lay.frame
    if variant not in frame.variants:
        raise ValueError(f"no closure {variant!r} for type {name}")
    low, high = frame.variants[variant]
    Y1 = frame.axes[low]
    span = 2 * lay.L
    a_num = tl.nscale(tl.x_of(lay.tiling.period), l)
    if a_num[0] % span or a_num[1] % span:
        raise ValueError(f"l = {l} does not fit whole strip periods of {lay.L} vertices")
    a = (a_num[0] // span, a_num[1] // span)
    y1 = tl.nfloat(Y1)
    first = next(i for i in range(-4 * lay.rho, 8 * lay.rho) if lay.doubled_mean_height(i) > y1 + 1e-9)
    last = first + t - 1
    step = tl.nscale(tl.y_of(lay.tiling.layer), 2)
    Y2 = frame.axes[high]
    while tl.nfloat(Y2) <= lay.doubled_mean_height(last) + 1e-9:
        Y2 = tl.nadd(Y2, step)
    while tl.nfloat(tl.nsub(Y2, step)) > lay.doubled_mean_height(last) + 1e-9:
        Y2 = tl.nsub(Y2, step)
    if tl.nfloat(Y2) > lay.doubled_mean_height(last + 1) + 1e-9:
        raise ValueError(f"no {high} axis leaves exactly {t} rows above the {low} axis")
    return tl.HorizontalGlideGroup(Y1, Y2, a), first


def build_mobius(t: MapType | str, variant: str, l: int, t_: int, *, check: bool = True, strict: bool = True) -> PolygonalMap:  # noqa: E741
    """Build the Möbius-pair representation ``K(l, t)`` with the given closure.

    With ``strict`` the vertex count must equal the closed form for the
    closure; pass ``strict=False`` to accept whatever the gluing gives.
    """
    mt = lookup_type(t)
    p = MobiusPair(variant, l, t_)
    _check(mt, p, check)
    if mt.name == "6.3":
        from .isomorphism import dual

        return _dual_rep(dual(build_mobius("3.6", p.variant, l, t_, check=False, strict=strict)), mt, p)
    lay = _layout(mt.name)
    try:
        group, first = mobius_group(mt.name, p.variant, l, t_)
    except ValueError as exc:
        raise _fail(mt, p, str(exc)) from None
    rows = [[lay.point(i, j) for j in range(l)] for i in range(first, first + t_)]
    expected = mobius_vertex_count(mt, p.variant, l, t_) if strict else None
    return _assemble(mt, p, lay.tiling, group, rows, expected)


def build(t: MapType | str, p: RepParams, **kwargs) -> PolygonalMap:
    if isinstance(p, Planar):
        kwargs.pop("strict", None)
        return build_planar(t, p.r, p.s, p.k, **kwargs)
    return build_mobius(t, p.variant, p.l, p.t, **kwargs)


# ---------------------------------------------------------------------------
# parameter enumeration


def _divisor_pairs(n: int) -> Iterator[tuple[int, int]]:
    for a in range(1, n + 1):
        if n % a == 0:
            yield a, n // a


def admissible_reps(t: MapType | str, n: int) -> list[RepParams]:
    """Every admissible parameter tuple (all twists, all closures) with ``n`` vertices."""
    mt = lookup_type(t)
    base = _base(mt)
    if mt.name == "6.3":
        if n % 2:
            return []
        return admissible_reps(base, n // 2)
    out: list[RepParams] = []
    if base.name == _NONEXISTENT:
        return out
    ratio = _PLANAR_RATIO.get(base.name, Fraction(1))
    rs = Fraction(n) / ratio
    if rs.denominator == 1:
        for r, s in _divisor_pairs(int(rs)):
            for k in range(r):
                p = Planar(r, s, k)
                if admissible(base, p):
                    out.append(p)
    for variant in mobius_variants(base):
        for l in range(1, 4 * n + 1):  # noqa: E741
            for t_ in range(1, n + 1):
                count = mobius_vertex_count(base, variant, l, t_)
                if count == n:
                    p = MobiusPair(variant, l, t_)
                    if admissible(base, p):
                        out.append(p)
    return out


def canonical_reps(t: MapType | str, n: int) -> list[RepParams]:
    """Admissible parameters at ``n`` vertices after the published reductions.

    Planar twists collapse to ``reduce_k``; of the Möbius pairs one tuple
    per ``(closure, l)`` is kept, since at fixed ``n`` the same ``l`` gives
    isomorphic maps.
    """
    out: list[RepParams] = []
    seen = set()
    for p in admissible_reps(t, n):
        if isinstance(p, Planar):
            key = ("planar", p.r, p.s, reduce_k(t, p.r, p.s, p.k, check=False))
            q: RepParams = Planar(p.r, p.s, key[3])
        else:
            key = ("mobius", p.variant, p.l)
            q = p
        if key not in seen:
            seen.add(key)
            out.append(q)
    return out


# ---------------------------------------------------------------------------
# every Klein-bottle group, for an independent census


def _diagonal_square() -> tl.Tiling:
    u, v = tl.walk(0, 3), tl.sub(tl.walk(3), tl.walk(0))
    cells = (tl.regular_polygon(tl.walk(), 0, 4),)
    moved = tuple(tuple(tl.reframe(p, u, v) for p in c) for c in cells)
    return tl.Tiling("4.4", tl.reframe(u, u, v), tl.reframe(tl.walk(3), u, v), moved)


def _diagonal_snub() -> tl.Tiling:
    base = _tiling("3.3.4.3.4")
    # base lattice is square: period (p, 0) and layer (0, p); turn by 45 degrees
    u = tl.add(base.period, base.layer)
    v = tl.sub(base.layer, base.period)
    moved = tuple(tuple(tl.reframe(p, u, v) for p in c) for c in base.cells)
    return tl.Tiling("3.3.4.3.4", tl.reframe(u, u, v), tl.reframe(base.layer, u, v), moved)


def _axis_truncated_square() -> tl.Tiling:
    def q(x: int, y: int) -> tl.Point:
        return (4 * x, 0, 4 * y, 0)

    octagon = tuple(q(*xy) for xy in ((2, -1), (2, 1), (1, 2), (-1, 2), (-2, 1), (-2, -1), (-1, -2), (1, -2)))
    square = tuple(q(*xy) for xy in ((2, 1), (3, 2), (2, 3), (1, 2)))
    return tl.Tiling("4.8.8", q(4, 0), q(0, 4), (octagon, square))


@lru_cache(maxsize=None)
def quotient_frames(name: str) -> tuple[tl.Tiling, ...]:
    """Orientations of the tiling covering every class of glide direction."""
    extra = {"4.4": _diagonal_square, "3.3.4.3.4": _diagonal_snub, "4.8.8": _axis_truncated_square}
    frames = [_tiling(name)]
    if name in extra:
        frames.append(extra[name]())
    return tuple(frames)


@dataclass(frozen=True)
class GroupSpec:
    """A Klein-bottle group on one frame of a tiling.

    ``family`` is ``"vertical"`` (translation by ``m`` periods and a glide
    of height ``j`` half vertical steps with offset ``c``) or
    ``"horizontal"`` (glides along the axis ``Y`` shifting by ``m`` half
    periods, and a vertical translation of ``j`` steps).
    """

    frame: int
    family: str
    m: int
    j: int
    offset: tl.Num

    def to_dict(self) -> dict:
        return {"frame": self.frame, "family": self.family, "m": self.m, "j": self.j, "offset": list(self.offset)}

    def group(self, t: tl.Tiling):
        p0 = tl.x_of(t.period)
        h0 = tl.vertical_height(t)
        if self.family == "vertical":
            H = tl.nscale(h0, self.j // 2) if self.j % 2 == 0 else tl.halve(tl.nscale(h0, self.j))
            return tl.VerticalGlideGroup(tl.nscale(p0, self.m), H, self.offset)
        a = tl.halve(tl.nscale(p0, self.m))
        return tl.HorizontalGlideGroup(self.offset, tl.nadd(self.offset, tl.nscale(h0, self.j)), a)


def _group_specs(t: tl.Tiling, frame: int, n: int) -> Iterator[GroupSpec]:
    # vertices per (period x vertical step) cell; n = density * m * j / 2
    density = tl.vertex_density(t)
    p0 = tl.x_of(t.period)
    for j_class, c in tl.vertical_glides(t):
        for j in range(j_class, 4 * n + 1, 2):
            size = density * j / 2
            m = Fraction(n) / size
            if m.denominator != 1 or m < 1:
                continue
            for i in range(int(m)):
                yield GroupSpec(frame, "vertical", int(m), j, tl.nadd(c, tl.nscale(p0, i)))
    for Y, a in tl.horizontal_axes(t):
        half = 0 if a == (0, 0) else 1
        for j in range(1, 2 * n + 1):
            m = Fraction(2 * n) / (density * j)
            if m.denominator != 1 or m < 1 or int(m) % 2 != half:
                continue
            yield GroupSpec(frame, "horizontal", int(m), j, Y)


def klein_quotients(t: MapType | str, n: int) -> Iterator[tuple[GroupSpec, PolygonalMap]]:
    """Every quotient of the type's tiling by a Klein-bottle group with ``n``
    vertices that is a valid map of the type.

    This does not look at rows or published parameters at all; it walks
    all glide directions, axes and translation lengths.
    """
    mt = lookup_type(t)
    if mt.name == "6.3":
        from .isomorphism import dual

        if n % 2 == 0:
            for spec, m in klein_quotients("3.6", n // 2):
                d = dual(m)
                yield spec, from_faces(d.n_vertices, d.faces, map_type=mt, meta={"group": spec.to_dict(), "dual_of": "3.6"})
        return
    for index, frame in enumerate(quotient_frames(mt.name)):
        for spec in _group_specs(frame, index, n):
            q = tl.quotient(frame, spec.group(frame))
            if len(q.points) != n:
                continue
            _, faces = q.index()
            try:
                m = from_faces(n, faces, map_type=mt, meta={"group": spec.to_dict()})
            except MapError:
                continue
            if is_semi_equivelar(m, mt) and not is_orientable(m):
                yield spec, m
