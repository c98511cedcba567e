import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from semieq.cli import main
from semieq.mapcore import loads


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args])

    return invoke


def test_build_writes_map(run):
    result = run("build", "--type", "3.6", "--rep", "planar:7,4,1", "--out", "a.json")
    assert result.exit_code == 0, result.output
    assert "n=28 E=84 F=56 chi=0 non-orientable" in result.output
    assert loads(open("a.json").read()).n_vertices == 28


def test_build_rejects_inadmissible(run):
    result = run("build", "--type", "3.6", "--rep", "planar:2,5,0")
    assert result.exit_code == 2
    assert "r ≥ 3 violated" in result.output


def test_build_reports_closure_failure(run):
    result = run("build", "--type", "3.4.6.4", "--rep", "mobius:m34,9,3")
    assert result.exit_code == 2
    assert "K[m34](9,3)" in result.output


def test_build_bad_spec(run):
    assert run("build", "--type", "3.6", "--rep", "planar:x").exit_code == 2
    assert run("build", "--type", "9.9", "--rep", "planar:3,3,0").exit_code == 2


@pytest.mark.parametrize("fmt,head", [("off", "OFF"), ("dot", "graph map {")])
def test_exports(run, fmt, head):
    result = run("build", "--type", "4.4", "--rep", "planar:4,4,0", "--format", fmt, "--out", "m.txt")
    assert result.exit_code == 0
    text = open("m.txt").read()
    assert text.startswith(head)
    if fmt == "off":
        assert text.splitlines()[1] == "16 16 32"
    else:
        assert text.count("--") == 32


def test_count(run):
    result = run("count", "--type", "3-4.6", "--n", 48)
    assert (result.exit_code, result.output.strip()) == (0, "0")
    assert run("count", "--type", "3.6", "--n", 12).output.strip() == "3"


def test_verify(run):
    run("build", "--type", "3.6", "--rep", "planar:7,4,1", "--out", "a.json")
    result = run("verify", "a.json")
    report = json.loads(result.output)
    assert report["klein_bottle"] and report["types"] == ["3.6"]


def test_verify_rejects_broken_file(run, tmp_path):
    (tmp_path / "bad.json").write_text(json.dumps({"format": "semieq-map/1", "n": 4, "faces": [[0, 1, 2]]}))
    assert run("verify", "bad.json").exit_code == 2
    (tmp_path / "junk.json").write_text("{")
    assert run("verify", "junk.json").exit_code == 1
    assert run("verify", "missing.json").exit_code == 1


def test_iso_after_relabel(run):
    run("build", "--type", "3.6", "--rep", "planar:7,4,1", "--out", "a.json")
    assert run("--seed", 5, "relabel", "a.json", "--out", "b.json").exit_code == 0
    result = run("iso", "a.json", "b.json")
    verdict = json.loads(result.output)
    assert verdict["isomorphic"] and len(verdict["witness"]) == 28
    digests = run("iso", "--digest", "a.json", "b.json").output.splitlines()[:2]
    assert digests[0].split()[0] == digests[1].split()[0]


def test_relabel_is_seeded(run):
    run("build", "--type", "3.6", "--rep", "planar:7,4,1", "--out", "a.json")
    first = run("--seed", 1, "relabel", "a.json").output
    assert run("--seed", 1, "relabel", "a.json").output == first
    assert run("--seed", 2, "relabel", "a.json").output != first


def test_iso_negative(run):
    run("build", "--type", "3.6", "--rep", "planar:7,4,0", "--out", "a.json")
    run("build", "--type", "3.6", "--rep", "mobius:plain,7,4", "--out", "b.json")
    assert json.loads(run("iso", "a.json", "b.json").output) == {"isomorphic": False, "witness": None}


def test_dual(run):
    run("build", "--type", "3.6", "--rep", "planar:4,3,0", "--out", "a.json")
    assert run("dual", "a.json", "--out", "d.json").exit_code == 0
    d = loads(open("d.json").read())
    assert d.n_vertices == 24 and d.map_type_hint.name == "6.3"


def test_decompose(run):
    run("build", "--type", "3.6", "--rep", "planar:7,4,0", "--out", "a.json")
    data = json.loads(run("decompose", "a.json", "--row", 1).output)
    assert data["kind"] == "cylinder" and data["faces"] == {"3": 28}
    data = json.loads(run("decompose", "a.json", "--cycle", "0,1,2,3,4,5,6").output)
    assert data["kind"] == "cylinder"
    assert run("decompose", "a.json", "--cycle", "0,2,9").exit_code == 2
    assert run("decompose", "a.json", "--row", 9).exit_code == 2


def test_census(run):
    result = run("census", "--type", "3.6", "--n", "9..12", "--workers", 1, "--out", "c.json")
    assert result.exit_code == 0
    data = json.load(open("c.json"))
    assert data["format"] == "semieq-census/1"
    assert [e["n"] for e in data["entries"]] == [9, 10, 11, 12]
    assert [e["verdict"] for e in data["entries"]] == ["match", "match", "match", "mismatch"]


def test_census_budget(run, monkeypatch):
    assert run("census", "--type", "3.6", "--n-range", "9,130", "--workers", 1).exit_code == 2
    monkeypatch.setenv("SEMIEQ_BUDGET", "10")
    assert run("census", "--type", "3.6", "--n", "12", "--workers", 1).exit_code == 2


def test_census_all_types(run):
    result = run("census", "--type", "all", "--n", "9", "--workers", 1, "--no-quotients")
    assert result.exit_code == 0
    reports = json.loads(result.stdout)
    assert len(reports) == 11


def test_deterministic_output(run):
    outputs = {run("build", "--type", "3.4.6.4", "--rep", "planar:6,4,2").stdout for _ in range(2)}
    assert len(outputs) == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "semieq", "count", "--type", "3.6", "--n", "12"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "3"
