import json
import subprocess
import sys
from pathlib import Path

import pytest

from skeleta.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, RunConfig, main, quiver_presentation, render_quiver
from skeleta.errors import InputError
from skeleta.lincat import category_to_dict
from skeleta.simplicial import SimplicialComplex, full_simplex
from skeleta.toric import build_B_category

GOLDEN = Path(__file__).parent / "golden"
PP = str(GOLDEN / "punctured_plane.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def test_components(capsys):
    code, out, _ = run(capsys, "components", "--input", PP)
    assert code == EXIT_OK
    assert out == (GOLDEN / "punctured_plane_components.tsv").read_text()
    assert len(out.strip().splitlines()) == 7


@pytest.mark.parametrize("data,rows", [({"n": 1, "facets": [[1]]}, 3),
                                       ({"n": 0, "facets": []}, 1)])
def test_component_rows(capsys, tmp_path, data, rows):
    code, out, _ = run(capsys, "components", "--input", write(tmp_path, "k.json", data), "--out", "json")
    assert code == EXIT_OK and len(json.loads(out)) == rows


def test_quiver_golden_and_deterministic(capsys):
    code, out, _ = run(capsys, "quiver", "--input", PP)
    assert code == EXIT_OK
    assert out == (GOLDEN / "punctured_plane_quiver.tsv").read_text()
    _, again, _ = run(capsys, "quiver", "--input", PP)
    assert again == out


def test_quiver_full_simplex_and_torus():
    Q = quiver_presentation(full_simplex(2))
    assert len(Q["arrows"]) == 4 and len(Q["relations"]) == 1 and not Q["higher"]
    T = SimplicialComplex.from_facets(1, [], vertex_complete=False)
    Q = quiver_presentation(T)
    assert [a["name"] for a in Q["arrows"]] == ["e_1", "e_1^-1"]
    assert Q["invertible"] == ["e_1", "e_1^-1"]
    assert "O(0)" in render_quiver(Q, "json")


def test_ext_table(capsys):
    code, out, _ = run(capsys, "ext-table", "--input", PP, "--pipeline", "b")
    assert code == EXIT_OK
    assert out == (GOLDEN / "punctured_plane_ext_b.tsv").read_text()
    code, out, _ = run(capsys, "ext-table", "--input", PP, "--pipeline", "b", "--out", "json")
    assert json.loads(out) == json.loads((GOLDEN / "punctured_plane_ext_b.json").read_text())
    code, out, _ = run(capsys, "ext-table", "--input", PP)
    assert code == EXIT_OK and "# pipeline A" in out and "# pipeline B" in out


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--input", PP)
    assert code == EXIT_OK
    assert all(line.split(":")[1].startswith(" pass") for line in out.strip().splitlines())


def test_verify_prime_field(capsys, tmp_path):
    path = write(tmp_path, "k.json", {"n": 3, "facets": [[1, 2, 3]]})
    code, _, _ = run(capsys, "verify", "--input", path, "--field", "fp:32003")
    assert code == EXIT_OK


def test_verify_dump_and_corruption(capsys, tmp_path):
    K = SimplicialComplex.from_facets(2, [[1], [2]])
    D, F = build_B_category(K)
    dump = category_to_dict(D, F)
    dump["complex"] = json.loads(K.to_json())
    code, _, _ = run(capsys, "verify", "--input", write(tmp_path, "good.json", dump))
    assert code == EXIT_OK
    for m in dump["functor"]["morphism_map"]:
        if m[2] != "[]":
            m[3] = {}
    code, out, _ = run(capsys, "verify", "--input", write(tmp_path, "bad.json", dump))
    assert code == EXIT_FAIL
    assert "FAIL" in out and "\tfail\t" in out


def test_verify_catalogue(capsys):
    code, out, _ = run(capsys, "verify", "--catalogue", "2")
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 4


def test_koszul(capsys):
    code, out, _ = run(capsys, "koszul", "--input", PP, "--out", "json")
    rows = json.loads(out)
    assert code == EXIT_OK
    assert [(r["I"], r["acyclic"]) for r in rows] == [([], False), ([1], False), ([1, 2], True), ([2], False)]
    code, out, _ = run(capsys, "koszul", "--input", PP, "--I", "1", "--J", "2")
    assert code == EXIT_OK and out.strip().splitlines()[1].startswith("[1]\t[2]\t2\tFalse")


def test_cohomology(capsys):
    code, out, _ = run(capsys, "cohomology", "--input", PP, "--weight=-1,-1")
    assert code == EXIT_OK and out.strip().splitlines()[1] == "-1,-1\t1\t1"
    code, out, _ = run(capsys, "cohomology", "--input", PP, "--range", "1", "--out", "json")
    assert len(json.loads(out)) == 9


@pytest.mark.parametrize("argv", [
    ["verify", "--input", "/nonexistent.json"],
    ["verify"],
    ["quiver", "--input", "NOTJSON"],
    ["verify", "--input", "PP", "--field", "fp:8"],
    ["cohomology", "--input", "PP", "--weight", "1"],
    ["cohomology", "--input", "PP", "--weight", "a,b"],
    ["components", "--input", "PP", "--n-cap", "21"],
])
def test_input_errors(capsys, tmp_path, argv):
    argv = [PP if a == "PP" else a for a in argv]
    argv = [write(tmp_path, "x.json", "{not json") if a == "NOTJSON" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert "input error" in err


def test_bad_complex_file(capsys, tmp_path):
    code, _, _ = run(capsys, "components", "--input", write(tmp_path, "k.json", {"n": 2, "facets": [[1, 5]]}))
    assert code == EXIT_INPUT


def test_runconfig_cap():
    with pytest.raises(InputError):
        RunConfig("verify", n_cap=25)


def test_flow_check(capsys, tmp_path):
    csv = tmp_path / "orbit.csv"
    code, out, _ = run(capsys, "flow-check", "--grid", "41", "--horizon", "5", "--orbit-csv", str(csv))
    assert code == EXIT_OK and out.startswith("flow: pass")
    assert csv.read_text().startswith("t,x1,y1")
    code, _, _ = run(capsys, "flow-check", "--w", "1.0", "--grid", "21", "--horizon", "2")
    assert code == EXIT_FAIL


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "skeleta", "quiver", "--input", PP], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout == (GOLDEN / "punctured_plane_quiver.tsv").read_text()
