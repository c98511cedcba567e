import random

import numpy as np
import pytest

from semieq.mapcore import (
    DegenerateInput,
    Disconnected,
    DuplicateVertexInFace,
    EdgeNotTwoSided,
    LinkNotSingleCycle,
    MAP_TYPES,
    dumps,
    euler_characteristic,
    face_sequence_at,
    from_faces,
    is_orientable,
    is_semi_equivelar,
    loads,
    lookup_type,
    map_to_dict,
    to_flags,
    vertex_link,
)
from semieq.representations import Planar, build

from conftest import TETRAHEDRON, hex_wheel_sphere, square_torus


def test_tetrahedron_is_a_sphere():
    m = from_faces(4, TETRAHEDRON)
    assert m.f_vector == (4, 6, 4)
    assert euler_characteristic(m) == 2
    assert is_orientable(m)
    assert to_flags(m).size == 24


def test_disjoint_tetrahedra_rejected():
    second = [[v + 4 for v in f] for f in TETRAHEDRON]
    with pytest.raises(Disconnected):
        from_faces(8, TETRAHEDRON + second)


def test_open_surface_rejected():
    with pytest.raises(EdgeNotTwoSided) as err:
        from_faces(4, TETRAHEDRON[:3])
    assert "edge" in err.value.to_dict()


def test_repeated_vertex_in_face_rejected():
    with pytest.raises(DuplicateVertexInFace):
        from_faces(4, [[0, 1, 1], *TETRAHEDRON])


@pytest.mark.parametrize("n,faces", [(2, [[0, 1, 0]]), (4, []), (4, [[0, 1]])])
def test_degenerate_inputs(n, faces):
    with pytest.raises(DegenerateInput):
        from_faces(n, faces)


def test_pinched_vertex_rejected():
    # two tetrahedra sharing vertex 0: every edge is fine, the link of 0 is not
    second = [[0 if v == 0 else v + 3 for v in f] for f in TETRAHEDRON]
    with pytest.raises(LinkNotSingleCycle) as err:
        from_faces(7, TETRAHEDRON + second)
    assert err.value.where["vertex"] == 0


def test_hexagonal_wheel_link():
    m = from_faces(8, hex_wheel_sphere())
    link = vertex_link(m, 0)
    assert sorted(link.neighbors) == list(range(2, 8))
    assert link.degree == 6
    assert len(set(link.faces)) == 6


def test_figure1_fixture(figure1):
    m, ix = figure1
    assert m.f_vector == (28, 84, 56)
    assert euler_characteristic(m) == 0
    assert not is_orientable(m)
    assert is_semi_equivelar(m, "3.6")
    assert not is_semi_equivelar(m, "4.4")
    assert to_flags(m).size == 336
    # the neighbours of v1 read off the picture
    names = {i: v for v, i in ix.items()}
    around = {names[u] for u in vertex_link(m, ix["v1"]).neighbors}
    assert around == {"v2", "v7", "w1", "w2", "u1", "u2"}


def test_square_torus_is_orientable():
    m = from_faces(12, square_torus(4, 3))
    assert euler_characteristic(m) == 0
    assert is_orientable(m)
    assert face_sequence_at(m, 5) == (4, 4, 4, 4)


def test_face_sequence_up_to_rotation_and_reflection():
    m = build("3.3.4.3.4", Planar(4, 3, 0))
    assert all(face_sequence_at(m, v) == lookup_type("3.3.4.3.4").canonical for v in range(m.n_vertices))
    m = build("4.8.8", Planar(8, 3, 3))
    assert is_semi_equivelar(m, "4.8.8")
    link = vertex_link(m, 0)
    assert link.degree == 3
    assert sorted(len(m.faces[f]) for f in link.faces) == [4, 8, 8]


def test_face_sequence_survives_relabelling():
    m = build("3.4.6.4", Planar(6, 4, 2))
    perm = list(range(m.n_vertices))
    random.Random(7).shuffle(perm)
    other = m.relabeled(perm)
    for v in range(m.n_vertices):
        assert face_sequence_at(other, perm[v]) == face_sequence_at(m, v)


def test_flag_involutions(figure1):
    flags = to_flags(figure1[0])
    ids = np.arange(flags.size)
    for s in (flags.s0, flags.s1, flags.s2):
        assert (s[s] == ids).all()
        assert (s != ids).all()
    assert (flags.s0[flags.s2] == flags.s2[flags.s0]).all()
    assert flags.is_connected()


def test_json_round_trip_is_canonical():
    m = build("3.6", Planar(7, 4, 1))
    data = map_to_dict(m)
    assert data["format"] == "semieq-map/1"
    assert data["type"] == "3.6"
    assert data["meta"]["rep"] == {"kind": "planar", "r": 7, "s": 4, "k": 1}
    assert all(f[0] == min(f) for f in data["faces"])
    assert data["faces"] == sorted(data["faces"])
    again = loads(dumps(m))
    assert dumps(again) == dumps(m)


def test_unknown_format_rejected():
    with pytest.raises(DegenerateInput):
        loads('{"format": "other", "n": 4, "faces": []}')


def test_type_names():
    assert len(MAP_TYPES) == 11
    assert lookup_type("3-4.6").name == "3.4.6"
    with pytest.raises(KeyError):
        lookup_type("5.5")
