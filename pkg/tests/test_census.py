import json

import pytest

from semieq import census as cz
from semieq.census import (
    BudgetExceeded,
    admissible_ns,
    census_entry,
    concordance,
    enumerate_classes,
    formula_count,
    formula_slots,
)
from semieq.isomorphism import digest, dual
from semieq.mapcore import MAP_TYPES
from semieq.representations import Planar, canonical_reps


class TestFormula:
    # worked by hand from the clauses, term by term
    @pytest.mark.parametrize(
        "t,n,want",
        [
            ("3.4.6", 30, 0),
            ("3.6", 8, 0),
            ("3.6", 9, 1),  # m=3, gcd(9,6)=3
            ("3.6", 10, 1),  # Möbius term m=2
            ("3.6", 12, 3),  # m=3 weighs 2, m=4 weighs 1
            ("4.4", 12, 3),
            ("3.3.4.3.4", 12, 1),
            ("3.3.4.4", 10, 1),  # n = 2m with m=5
            ("4.8.8", 24, 2),  # m=3, l in {0, 1}
        ],
    )
    def test_worked_values(self, t, n, want):
        assert formula_count(t, n) == want

    def test_hexagonal_halves(self):
        for n in range(1, 121):
            assert formula_count("6.3", 2 * n) == formula_count("3.6", n)
            assert formula_count("6.3", 2 * n + 1) == 0

    def test_snub_hexagonal_is_zero(self):
        assert all(formula_count("3-4.6", n) == 0 for n in range(1, 121))

    @pytest.mark.parametrize("name", sorted(MAP_TYPES))
    def test_one_slot_per_counted_unit(self, name):
        for n in range(1, 121):
            assert len(formula_slots(name, n)) == formula_count(name, n)

    def test_positive_where_nothing_is_admissible(self):
        # the clauses count a few sizes at which no representation is admissible
        found = {
            t: [n for n in range(1, 61) if formula_count(t, n) and not canonical_reps(t, n)] for t in MAP_TYPES
        }
        assert found["3.3.4.3.4"] == [14, 22, 26, 34, 38, 46, 58]
        assert found["3.12.12"] == [27, 36, 45, 48]
        assert all(not v for t, v in found.items() if t not in ("3.3.4.3.4", "3.12.12"))


class TestBudget:
    def test_default(self, monkeypatch):
        monkeypatch.delenv("SEMIEQ_BUDGET", raising=False)
        assert cz.budget() == 120

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("SEMIEQ_BUDGET", "30")
        assert cz.budget() == 30
        with pytest.raises(BudgetExceeded):
            enumerate_classes("3.6", 36)

    def test_explicit_limit_wins(self, monkeypatch):
        monkeypatch.setenv("SEMIEQ_BUDGET", "30")
        assert len(enumerate_classes("3.6", 36, limit=40)) > 0
        with pytest.raises(BudgetExceeded) as err:
            concordance("3.6", [9, 12], limit=10)
        assert err.value.limit == 10


class TestEnumeration:
    def test_nothing_for_snub_hexagonal(self):
        assert enumerate_classes("3.4.6", 36) == []

    def test_nine_vertices(self):
        classes = enumerate_classes("3.6", 9)
        assert len(classes) == 1
        assert set(classes[0].params) == {Planar(3, 3, 0), Planar(3, 3, 1), Planar(3, 3, 2)}

    def test_failures_collected(self):
        failures = []
        enumerate_classes("3.3.4.4", 16, failures=failures)
        assert failures and all(isinstance(reason, str) for _, reason in failures)

    def test_order_independent(self, monkeypatch):
        forward = {c.digest for c in enumerate_classes("4.4", 36)}
        original = cz.admissible_reps
        monkeypatch.setattr(cz, "admissible_reps", lambda t, n: list(reversed(original(t, n))))
        assert {c.digest for c in enumerate_classes("4.4", 36)} == forward

    @pytest.mark.parametrize("n", [9, 10, 12, 15])
    def test_hexagonal_classes_are_duals(self, n):
        tri = {digest(dual(c.map)) for c in enumerate_classes("3.6", n)}
        hexa = {c.digest for c in enumerate_classes("6.3", 2 * n)}
        assert tri == hexa

    def test_smallest_sizes(self):
        assert admissible_ns("3.6", 5) == [9, 10, 12, 14, 15]
        assert admissible_ns("3.4.6", 5) == []


class TestConcordance:
    def test_snub_hexagonal_matches_everywhere(self):
        report = concordance("3.4.6", range(1, 61), quotients=False)
        assert all(e.verdict == "match" and e.formula == 0 and not e.classes for e in report.entries)

    def test_match(self):
        entry = census_entry("4.4", 12)
        assert (entry.formula, len(entry.classes), entry.verdict, entry.witnesses) == (3, 3, "match", [])

    def test_overcount_and_undercount_witnesses(self):
        entry = census_entry("3.6", 12)
        assert entry.verdict == "mismatch"
        kinds = {w["kind"]: w for w in entry.witnesses}
        shared = kinds["shared-digest"]["slots"]
        assert [s["params"] for s in shared] == [
            {"kind": "planar", "r": 4, "s": 3, "k": 0},
            {"kind": "planar", "r": 4, "s": 3, "k": 1},
        ]
        assert kinds["unslotted"]["source"] == "quotient"
        assert entry.quotient_classes == 3

    def test_unrealizable_slot(self):
        entry = census_entry("3.3.4.3.4", 14)
        assert entry.verdict == "mismatch"
        assert entry.witnesses[0]["kind"] == "unrealizable"
        assert entry.witnesses[0]["slot"]["params"] == {"kind": "planar", "r": 2, "s": 7, "k": 0}

    def test_hexagonal_mirrors_triangular(self):
        tri = concordance("3.6", range(9, 19))
        hexa = concordance("6.3", range(18, 37, 2))
        for a, b in zip(tri.entries, hexa.entries):
            assert (a.formula, len(a.classes), a.verdict) == (b.formula, len(b.classes), b.verdict)

    def test_workers_do_not_change_the_report(self):
        ns = [9, 10, 12, 14]
        assert concordance("3.6", ns, workers=2).dumps() == concordance("3.6", ns).dumps()

    def test_report_format(self):
        data = json.loads(concordance("3.6", [9, 12]).dumps())
        assert data["format"] == "semieq-census/1"
        assert data["type"] == "3.6"
        assert data["version"]
        entry = data["entries"][1]
        assert set(entry) >= {"n", "formula", "classes", "verdict", "witnesses"}
        assert entry["classes"] == 2

    def test_mismatches_carry_witnesses(self):
        for t in ("3.6", "4.4", "3.3.4.4", "3.4.6.4"):
            assert concordance(t, admissible_ns(t, 5)).consistent
