"""Closed-form class counts, enumeration by construction, and the
reconciliation of the two.

``formula_count`` evaluates the published counting clauses exactly as
written.  ``formula_slots`` names the parameter tuple behind every unit the
clause counts, so that a disagreement can be pinned to concrete maps:
two slots with the same canonical form (the clause counts a class twice),
a slot that does not build (the clause counts a map that does not exist),
or a constructed class no slot accounts for (the clause misses it).
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator

from . import __version__
from .isomorphism import digest
from .mapcore import MapError, MapType, PolygonalMap, lookup_type
from .representations import (
    InadmissibleParams,
    InternalClosureFailure,
    MobiusPair,
    Planar,
    RepParams,
    admissible_reps,
    build,
    klein_quotients,
)

__all__ = [
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "budget",
    "formula_count",
    "formula_slots",
    "ClassRecord",
    "enumerate_classes",
    "CensusEntry",
    "CensusReport",
    "census_entry",
    "concordance",
    "admissible_ns",
]

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 120
REPORT_FORMAT = "semieq-census/1"


class BudgetExceeded(RuntimeError):
    def __init__(self, n: int, limit: int):
        super().__init__(f"n = {n} is above the enumeration budget {limit} (set SEMIEQ_BUDGET or --budget to raise it)")
        self.n = n
        self.limit = limit


def budget(override: int | None = None) -> int:
    if override is not None:
        return override
    raw = os.environ.get("SEMIEQ_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _check_budget(n: int, limit: int | None) -> None:
    cap = budget(limit)
    if n > cap:
        raise BudgetExceeded(n, cap)


# ---------------------------------------------------------------------------
# the counting clauses, verbatim


def _count(pred, ms: Iterable[int]) -> int:
    return sum(1 for m in ms if pred(m))


def _tuples(ms: Iterable[int], cond, upper) -> int:
    # |{(l, m, n) : cond(m), 0 <= l <= upper(m)}|
    return sum(upper(m) + 1 for m in ms if cond(m) and upper(m) >= 0)


def _clause_36(n: int) -> int:
    ms = range(1, n + 1)
    first = sum(i * _count(lambda m: m >= 3 and n >= 3 * m and gcd(n, 2 * m) == i * m, ms) for i in (1, 2))
    second = _count(lambda m: m >= 2 and n % m == 0 and n >= 5 * m and gcd(n, 2 * m) == m, ms)
    return first + second


def _clause_44(n: int) -> int:
    ms = range(1, n + 1)
    return sum(i * _count(lambda m: m >= 3 and n >= 3 * m and gcd(n, 2 * m) == i * m, ms) for i in (1, 2))


def _clause_3344(n: int) -> int:
    ms = range(1, n + 1)
    first = sum(i * _count(lambda m: m >= 4 and m % 2 == 0 and n >= 3 * m and gcd(n, 2 * m) == m, ms) for i in (1, 2))
    second = _count(lambda m: m >= 5 and n == 2 * m, ms)
    third = _count(lambda m: m >= 4 and n >= 4 * m and n % (2 * m) == 0, ms)
    return first + second + third


def _clause_33434(n: int) -> int:
    return _count(lambda m: m >= 3 and m % 2 == 1 and n % (2 * m) == 0 and n >= 12, range(1, n + 1))


def _clause_488(n: int) -> int:
    ms = range(1, n + 1)
    base = lambda m: m >= 3 and n >= 8 * m and n % (4 * m) == 0  # noqa: E731
    upper = lambda m: n // (4 * m) - 1  # noqa: E731
    return _tuples(ms, lambda m: base(m) and m % 2 == 0, upper) + _tuples(ms, lambda m: base(m) and m % 2 == 1, upper)


def _clause_3636(n: int) -> int:
    ms = range(1, n + 1)
    return (
        _tuples(ms, lambda m: m >= 3 and n % (3 * m) == 0 and n >= 9 * m, lambda m: n // (3 * m) - 1)
        + _count(lambda m: m >= 2 and n % (6 * m + 2) == 0 and n >= 6 * (3 * m + 1), ms)
        + _count(lambda m: m >= 1 and n % (2 * (m + 2)) == 0 and n >= 10 * (m + 2), ms)
        + _count(lambda m: m >= 1 and n % (4 * m + 5) == 0 and n >= 12 * (4 * m + 5), ms)
    )


def _clause_31212(n: int) -> int:
    ms = range(1, n + 1)
    return (
        _tuples(ms, lambda m: m >= 3 and n % (3 * m) == 0 and n >= 9 * m, lambda m: n // (6 * m) - 1)
        + _count(lambda m: m >= 2 and n % (4 * (3 * m + 1)) == 0 and n >= 12 * (3 * m + 1), ms)
        + _count(lambda m: m >= 1 and n % (4 * (m + 2)) == 0 and n >= 20 * (m + 2), ms)
        + _count(lambda m: m >= 1 and n % (4 * m + 5) == 0 and n >= 24 * (4 * m + 5), ms)
    )


def _clause_4612(n: int) -> int:
    ms = range(1, n + 1)
    return _tuples(
        ms, lambda m: m >= 4 and m % 2 == 0 and n % (6 * m) == 0 and n >= 12 * m, lambda m: n // (6 * m) - 1
    ) + _count(lambda m: m >= 2 and m % 2 == 0 and n % (12 * m) == 0 and n >= 24 * m, ms)


def _clause_3464(n: int) -> int:
    ms = range(1, n + 1)
    return (
        _tuples(ms, lambda m: m >= 4 and m % 2 == 0 and n % (3 * m) == 0 and n >= 6 * m, lambda m: n // (3 * m) - 1)
        + _count(lambda m: m >= 2 and (n - 3 * m) % (6 * m) == 0 and n >= 9 * m, ms)
        + _count(lambda m: m >= 2 and n % (6 * m) == 0 and n >= 12 * m, ms)
    )


_CLAUSES = {
    "3.6": _clause_36,
    "4.4": _clause_44,
    "6.3": lambda n: _clause_36(n // 2) if n % 2 == 0 else 0,
    "3.3.4.4": _clause_3344,
    "3.3.4.3.4": _clause_33434,
    "4.8.8": _clause_488,
    "3.6.3.6": _clause_3636,
    "3.12.12": _clause_31212,
    "3.4.6": lambda n: 0,
    "4.6.12": _clause_4612,
    "3.4.6.4": _clause_3464,
}


def formula_count(t: MapType | str, n: int) -> int:
    """The published number of classes with ``n`` vertices."""
    if n < 1:
        return 0
    return _CLAUSES[lookup_type(t).name](n)


# ---------------------------------------------------------------------------
# slots: which parameter tuple each counted unit stands for


@dataclass(frozen=True)
class Slot:
    term: int
    params: RepParams

    def to_dict(self) -> dict:
        return {"term": self.term, "params": self.params.to_dict()}


def _planar_slots(n: int, min_m: int, extra=lambda m: True) -> Iterator[Slot]:
    for m in range(min_m, n + 1):
        if n < 3 * m or not extra(m):
            continue
        r = n // m
        g = gcd(n, 2 * m)
        if g == m:
            yield Slot(1, Planar(r, m, 0))
        elif g == 2 * m:
            yield Slot(1, Planar(r, m, 0))
            yield Slot(1, Planar(r, m, 1))


def _slots_36(n: int) -> list[Slot]:
    out = list(_planar_slots(n, 3))
    for m in range(2, n + 1):
        if n % m == 0 and n >= 5 * m and gcd(n, 2 * m) == m:
            out.append(Slot(2, MobiusPair("plain", n // m, m)))
    return out


def _slots_3344(n: int) -> list[Slot]:
    out = []
    for m in range(4, n + 1, 2):
        if n >= 3 * m and gcd(n, 2 * m) == m:
            r = n // m
            # the clause weighs each m by 1 + 2, once per value of i
            out += [Slot(1, Planar(r, m, 0)), Slot(1, Planar(r, m, 0)), Slot(1, Planar(r, m, 1))]
    for m in range(5, n + 1):
        if n == 2 * m:
            out.append(Slot(2, MobiusPair("tri" if m % 2 else "quad", m, 2)))
    for m in range(4, n + 1):
        if n >= 4 * m and n % (2 * m) == 0:
            out.append(Slot(3, MobiusPair("tri" if m % 2 else "quad", m, n // m)))
    return out


def _slots_33434(n: int) -> list[Slot]:
    return [Slot(1, Planar(n // m, m, 0)) for m in range(3, n + 1, 2) if n % (2 * m) == 0 and n >= 12]


def _slots_488(n: int) -> list[Slot]:
    out = []
    for m in range(3, n + 1):
        if n >= 8 * m and n % (4 * m) == 0:
            r = n // m
            for l in range(n // (4 * m)):  # noqa: E741
                k = (4 * l + 2) % r if m % 2 == 0 else 4 * l + 3
                out.append(Slot(1 if m % 2 == 0 else 2, Planar(r, m, k)))
    return out


def _slots_trihex(n: int, kind: str) -> list[Slot]:
    # 3.6.3.6 and 3.12.12 share the layout of their clauses
    out = []
    twelve = kind == "3.12.12"
    for m in range(3, n + 1):
        if n % (3 * m) == 0 and n >= 9 * m:
            r = 2 * n // (3 * m)
            count = n // (6 * m) if twelve else n // (3 * m)
            for l in range(count):  # noqa: E741
                out.append(Slot(1, Planar(r, m, 4 * l + 2 if twelve else 2 * l + 1)))
    step2 = (lambda m: 4 * (3 * m + 1)) if twelve else (lambda m: 6 * m + 2)
    low2 = 12 if twelve else 6
    for m in range(2, n + 1):
        if n % step2(m) == 0 and n >= low2 * (3 * m + 1):
            out.append(Slot(2, MobiusPair("m312" if twelve else "m36", 2 * n // (3 * m + 1), m)))
    step3 = 4 if twelve else 2
    low3 = 20 if twelve else 10
    for m in range(1, n + 1):
        if n % (step3 * (m + 2)) == 0 and n >= low3 * (m + 2):
            out.append(Slot(3, MobiusPair("plain", n // (m + 2), m)))
    low4 = 24 if twelve else 12
    for m in range(1, n + 1):
        if n % (4 * m + 5) == 0 and n >= low4 * (4 * m + 5):
            out.append(Slot(4, MobiusPair("mixed", 4 * n // (4 * m + 5), m)))
    return out


def _slots_4612(n: int) -> list[Slot]:
    out = []
    for m in range(4, n + 1, 2):
        if n % (6 * m) == 0 and n >= 12 * m:
            out += [Slot(1, Planar(n // m, m, 6 * l + 4)) for l in range(n // (6 * m))]  # noqa: E741
    for m in range(2, n + 1, 2):
        if n % (12 * m) == 0 and n >= 24 * m:
            out.append(Slot(2, MobiusPair("m412", n // m, m)))
    return out


def _slots_3464(n: int) -> list[Slot]:
    out = []
    for m in range(4, n + 1, 2):
        if n % (3 * m) == 0 and n >= 6 * m:
            out += [Slot(1, Planar(n // m, m, 3 * l + 2)) for l in range(n // (3 * m))]  # noqa: E741
    for m in range(2, n + 1):
        if (n - 3 * m) % (6 * m) == 0 and n >= 9 * m:
            out.append(Slot(2, MobiusPair("m34", n // m, m)))
    for m in range(2, n + 1):
        if n % (6 * m) == 0 and n >= 12 * m:
            out.append(Slot(3, MobiusPair("m46", n // m, m)))
    return out


_SLOTS = {
    "3.6": _slots_36,
    "4.4": lambda n: list(_planar_slots(n, 3)),
    "6.3": lambda n: _slots_36(n // 2) if n % 2 == 0 else [],
    "3.3.4.4": _slots_3344,
    "3.3.4.3.4": _slots_33434,
    "4.8.8": _slots_488,
    "3.6.3.6": lambda n: _slots_trihex(n, "3.6.3.6"),
    "3.12.12": lambda n: _slots_trihex(n, "3.12.12"),
    "3.4.6": lambda n: [],
    "4.6.12": _slots_4612,
    "3.4.6.4": _slots_3464,
}


def formula_slots(t: MapType | str, n: int) -> list[Slot]:
    """One parameter tuple per unit counted by the clause for ``t`` at ``n``."""
    return _SLOTS[lookup_type(t).name](n) if n >= 1 else []


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class ClassRecord:
    digest: str
    params: list[RepParams]
    map: PolygonalMap = field(repr=False)

    @property
    def representative(self) -> RepParams:
        return self.params[0]


def _try_build(t: MapType, p: RepParams) -> tuple[PolygonalMap | None, str | None]:
    try:
        return build(t, p, check=False), None
    except (InternalClosureFailure, InadmissibleParams, MapError, ValueError) as exc:
        return None, str(exc)


def enumerate_classes(t: MapType | str, n: int, *, limit: int | None = None, failures: list | None = None) -> list[ClassRecord]:
    """Build every admissible representation with ``n`` vertices and keep
    one map per canonical form.

    Tuples that are admissible but do not close into a valid map are
    appended to ``failures`` as ``(params, reason)`` when a list is given.
    """
    mt = lookup_type(t)
    _check_budget(n, limit)
    classes: dict[str, ClassRecord] = {}
    for p in admissible_reps(mt, n):
        m, err = _try_build(mt, p)
        if m is None:
            log.info("%s %s does not close: %s", mt.name, p, err)
            if failures is not None:
                failures.append((p, err))
            continue
        d = digest(m)
        if d in classes:
            classes[d].params.append(p)
        else:
            classes[d] = ClassRecord(d, [p], m)
    return list(classes.values())


def admissible_ns(t: MapType | str, count: int, *, limit: int | None = None) -> list[int]:
    """The ``count`` smallest ``n`` with at least one admissible tuple."""
    cap = budget(limit)
    out = []
    for n in range(1, cap + 1):
        if admissible_reps(t, n):
            out.append(n)
            if len(out) == count:
                break
    return out


# ---------------------------------------------------------------------------
# reconciliation


@dataclass
class CensusEntry:
    map_type: str
    n: int
    formula: int
    classes: list[dict]
    verdict: str
    witnesses: list[dict]
    quotient_classes: int | None = None

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "formula": self.formula,
            "classes": len(self.classes),
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "representatives": self.classes,
        }
        if self.quotient_classes is not None:
            out["quotient_classes"] = self.quotient_classes
        return out


@dataclass
class CensusReport:
    map_type: str
    entries: list[CensusEntry]

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "version": __version__,
            "type": self.map_type,
            "entries": [e.to_dict() for e in self.entries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @property
    def consistent(self) -> bool:
        """Every mismatch comes with at least one witness."""
        return all(e.verdict == "match" or e.witnesses for e in self.entries)


def census_entry(t: MapType | str, n: int, *, limit: int | None = None, quotients: bool = True) -> CensusEntry:
    """Formula against construction at one ``n``, with witnesses for every
    way the two sides disagree."""
    mt = lookup_type(t)
    _check_budget(n, limit)
    formula = formula_count(mt, n)
    failures: list = []
    classes = enumerate_classes(mt, n, limit=limit, failures=failures)
    witnesses: list[dict] = []

    slot_digests: dict[str, list[Slot]] = {}
    for slot in formula_slots(mt, n):
        m, err = _try_build(mt, slot.params)
        if m is None:
            witnesses.append({"kind": "unrealizable", "slot": slot.to_dict(), "reason": err})
            continue
        slot_digests.setdefault(digest(m), []).append(slot)
    for d, slots in slot_digests.items():
        if len(slots) > 1:
            witnesses.append({"kind": "shared-digest", "digest": d, "slots": [s.to_dict() for s in slots]})

    for record in classes:
        if record.digest not in slot_digests:
            witnesses.append(
                {
                    "kind": "unslotted",
                    "source": "admissible",
                    "digest": record.digest,
                    "params": [p.to_dict() for p in record.params],
                }
            )
    quotient_count = None
    if quotients:
        known = {r.digest for r in classes}
        seen: dict[str, dict] = {}
        for spec, m in klein_quotients(mt, n):
            seen.setdefault(digest(m), spec.to_dict())
        quotient_count = len(seen)
        for d, spec in seen.items():
            if d not in slot_digests and d not in known:
                witnesses.append({"kind": "unslotted", "source": "quotient", "digest": d, "group": spec})
        for record in classes:
            if record.digest not in seen:
                witnesses.append(
                    {"kind": "missed-by-quotients", "digest": record.digest, "params": record.representative.to_dict()}
                )
    for p, err in failures:
        witnesses.append({"kind": "admissible-but-invalid", "params": p.to_dict(), "reason": err})

    verdict = "match" if formula == len(classes) else "mismatch"
    reps = [{"digest": r.digest, "params": r.representative.to_dict()} for r in classes]
    return CensusEntry(mt.name, n, formula, reps, verdict, witnesses, quotient_count)


def _entry_job(args) -> CensusEntry:
    t, n, limit, quotients = args
    return census_entry(t, n, limit=limit, quotients=quotients)


def concordance(
    t: MapType | str,
    ns: Iterable[int],
    *,
    limit: int | None = None,
    workers: int = 1,
    quotients: bool = True,
) -> CensusReport:
    """Reconcile formula and construction for every ``n`` in ``ns``."""
    mt = lookup_type(t)
    ns = sorted(set(ns))
    for n in ns:
        _check_budget(n, limit)
    jobs = [(mt.name, n, limit, quotients) for n in ns]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_entry_job, jobs))
    else:
        entries = [_entry_job(j) for j in jobs]
    return CensusReport(mt.name, entries)
