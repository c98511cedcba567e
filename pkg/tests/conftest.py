import json
from pathlib import Path

import pytest

from semieq.mapcore import from_faces

FIXTURES = Path(__file__).parent / "fixtures"


def load_labelled(name):
    """A map from a fixture of labelled faces, plus the label -> vertex index."""
    faces = json.loads((FIXTURES / name).read_text())["faces"]
    labels = sorted({v for f in faces for v in f})
    index = {v: i for i, v in enumerate(labels)}
    return from_faces(len(labels), [[index[v] for v in f] for f in faces]), index


@pytest.fixture(scope="session")
def figure1():
    return load_labelled("figure1_faces.json")


@pytest.fixture(scope="session")
def figure6():
    return load_labelled("figure6_faces.json")


TETRAHEDRON = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]


def square_torus(r, s):
    def u(i, j):
        return (i % s) * r + j % r

    return [[u(i, j), u(i, j + 1), u(i + 1, j + 1), u(i + 1, j)] for i in range(s) for j in range(r)]


def hex_wheel_sphere():
    # hexagonal bipyramid: the two apexes have wheel links of length 6
    faces = []
    for i in range(6):
        a, b = 2 + i, 2 + (i + 1) % 6
        faces += [[0, a, b], [1, a, b]]
    return faces


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
