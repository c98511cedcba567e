from fractions import Fraction

import pytest

from semieq.isomorphism import are_isomorphic, digest
from semieq.mapcore import MAP_TYPES, euler_characteristic, is_orientable, is_semi_equivelar, map_to_dict
from semieq.representations import (
    InadmissibleParams,
    InternalClosureFailure,
    MobiusPair,
    Planar,
    admissible,
    admissible_reps,
    build,
    build_mobius,
    build_planar,
    canonical_reps,
    klein_quotients,
    mobius_vertex_count,
    parse_rep,
    planar_vertex_count,
    reduce_k,
    rep_from_dict,
)


def assert_klein(m, t):
    assert euler_characteristic(m) == 0
    assert not is_orientable(m)
    assert is_semi_equivelar(m, t)


class TestAdmissibility:
    def test_smallest_triangular(self):
        assert admissible("3.6", Planar(3, 3, 0))

    def test_short_rows_rejected(self):
        verdict = admissible("3.6", Planar(2, 5, 0))
        assert not verdict
        assert "r ≥ 3 violated" in str(verdict)
        assert verdict.to_dict()["admissible"] is False

    def test_every_violation_listed(self):
        verdict = admissible("3.6", Planar(2, 2, 0))
        assert [tag for tag, _ in verdict.violated] == ["3.6/rs-min", "3.6/r-min", "3.6/s-min"]

    def test_smallest_mobius_pair(self):
        assert admissible("3.6", MobiusPair("plain", 5, 2))
        assert not admissible("3.6", MobiusPair("plain", 6, 2))

    @pytest.mark.parametrize("p", [Planar(4, 4, 0), Planar(6, 6, 3), MobiusPair("plain", 7, 3)])
    def test_snub_hexagonal_never_admissible(self, p):
        assert not admissible("3.4.6", p)

    def test_unknown_variant(self):
        verdict = admissible("3.6", MobiusPair("m36", 7, 3))
        assert "unknown closure" in str(verdict)

    def test_build_refuses_inadmissible(self):
        with pytest.raises(InadmissibleParams) as err:
            build("3.6", Planar(2, 5, 0))
        assert not err.value.verdict


class TestPlanar:
    def test_smallest_triangular_counts(self):
        m = build_planar("3.6", 3, 3, 0)
        assert m.f_vector == (9, 27, 18)
        assert_klein(m, "3.6")

    @pytest.mark.parametrize("r,s,k", [(3, 3, 0), (5, 4, 3), (6, 4, 1)])
    def test_square_grid_counts(self, r, s, k):
        m = build_planar("4.4", r, s, k)
        assert m.f_vector == (r * s, 2 * r * s, r * s)
        assert_klein(m, "4.4")

    def test_twisted_top_row(self):
        # with twist 1 the upper copy of the first row reads 1, 0, r-1, ..., 2
        m = build_planar("3.6", 7, 4, 1)
        rows = m.meta["rows"]
        assert len(rows) == 4 and all(len(r) == 7 for r in rows)
        assert map_to_dict(m)["meta"]["rep"] == {"kind": "planar", "r": 7, "s": 4, "k": 1}

    def test_hexagonal_via_dual(self):
        m = build_planar("6.3", 4, 3, 0)
        assert m.n_vertices == 24
        assert_klein(m, "6.3")

    @pytest.mark.xfail(strict=True, raises=InternalClosureFailure, reason="this twist does not close; k = 1 mod 6 does")
    def test_truncated_trihexagonal_at_the_bound(self):
        build_planar("4.6.12", 12, 4, 4)

    def test_truncated_trihexagonal_closing_twist(self):
        m = build_planar("4.6.12", 12, 4, 1, check=False)
        assert m.n_vertices == 48
        assert_klein(m, "4.6.12")

    def test_vertex_count_formula(self):
        assert planar_vertex_count("3.6.3.6", 6, 4) == 36
        assert planar_vertex_count("4.8.8", 8, 3) == 24


class TestMobius:
    def test_smallest_triangular(self):
        m = build_mobius("3.6", "plain", 5, 2)
        assert m.n_vertices == 10
        assert_klein(m, "3.6")

    def test_seven_by_four(self):
        m = build_mobius("3.6", "plain", 7, 4)
        assert m.n_vertices == 28
        assert_klein(m, "3.6")

    @pytest.mark.xfail(strict=True, raises=InternalClosureFailure, reason="the glued map has 36 vertices, not 42")
    def test_trihexagonal_sparse_closure(self):
        build_mobius("3.6.3.6", "m36", 12, 2)

    def test_trihexagonal_sparse_closure_size(self):
        m = build_mobius("3.6.3.6", "m36", 12, 2, strict=False)
        assert m.n_vertices == 36
        assert mobius_vertex_count("3.6.3.6", "m36", 12, 2) == 42

    def test_elongated_closure_content(self):
        tri = build_mobius("3.3.4.4", "tri", 5, 4)
        quad = build_mobius("3.3.4.4", "quad", 10, 2)
        assert tri.n_vertices == quad.n_vertices == 20
        assert_klein(tri, "3.3.4.4")
        assert_klein(quad, "3.3.4.4")
        assert not are_isomorphic(tri, quad)


class TestReduction:
    @pytest.mark.parametrize("t,r,s,k,want", [("3.6", 7, 4, 5, 0), ("3.6", 6, 4, 3, 1), ("4.4", 6, 4, 2, 0)])
    def test_examples(self, t, r, s, k, want):
        assert reduce_k(t, r, s, k) == want

    def test_idempotent(self):
        for r in range(3, 9):
            for k in range(r):
                once = reduce_k("4.4", r, 3, k)
                assert reduce_k("4.4", r, 3, once) == once

    @pytest.mark.parametrize("r,s", [(4, 3), (5, 4), (6, 3)])
    def test_reduced_twist_is_isomorphic(self, r, s):
        for t in ("3.6", "4.4"):
            for k in range(r):
                p = Planar(r, s, k)
                if admissible(t, p):
                    assert are_isomorphic(build(t, p), build(t, Planar(r, s, reduce_k(t, r, s, k))))


class TestEnumeration:
    def test_examples(self):
        assert canonical_reps("3.4.6", 30) == []
        assert canonical_reps("3.6", 8) == []
        assert len(canonical_reps("3.6", 12)) == 3

    @pytest.mark.parametrize("name", sorted(MAP_TYPES))
    def test_vertex_counts_match_formulas(self, name):
        for n in range(1, 37):
            for p in admissible_reps(name, n):
                if isinstance(p, Planar):
                    assert planar_vertex_count(name, p.r, p.s) == n
                else:
                    assert mobius_vertex_count(name, p.variant, p.l, p.t) == Fraction(n)

    def test_quotients_are_klein_bottles(self):
        seen = set()
        for spec, m in klein_quotients("3.6", 12):
            assert m.n_vertices == 12
            assert_klein(m, "3.6")
            seen.add(digest(m))
        assert len(seen) == 3


class TestParsing:
    def test_round_trip(self):
        for text, p in [("planar:7,4,1", Planar(7, 4, 1)), ("mobius:m34,9,3", MobiusPair("m34", 9, 3))]:
            assert parse_rep(text) == p
            assert rep_from_dict(p.to_dict()) == p

    def test_legacy_variant_spelling(self):
        assert parse_rep("mobius:MMplain,5,2").variant == "plain"

    @pytest.mark.parametrize("text", ["planar:1,2", "torus:1,2,3", "planar:a,b,c"])
    def test_rejects_garbage(self, text):
        with pytest.raises(ValueError):
            parse_rep(text)
