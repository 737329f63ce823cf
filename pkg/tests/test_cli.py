import csv
import io
import json
import subprocess
import sys

import pytest

from coarse_ep.cli import main, parse_tuple_file
from coarse_ep.errors import PreconditionError
from coarse_ep.generators import disjoint_cycles, generate, grid, random_gnm, subdivision
from coarse_ep.graph_core import build_graph, cycle_rank, write_graph
from coarse_ep.oracle import max_d_packing
from coarse_ep.solver import Certificate

from conftest import cycle_graph

TUPLES = """\
# one path on three vertices
forest 3 2
0 1
1 2
tuple: 0:0,1
tuple: 0:1,2
tuple: 0:0,1,2
"""


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "tri.txt"
    write_graph(build_graph(3, cycle_graph(3)), path)
    return path


def test_generators():
    G = disjoint_cycles(3, 4, 5)
    assert G.n == 12 and max_d_packing(G, 5) == 3
    # grid(2, 2) is the 4-cycle 0-1-3-2.
    assert grid(2, 2).edges() == build_graph(4, [(0, 1), (1, 3), (3, 2), (2, 0)]).edges()
    assert random_gnm(7, 0).edges() == []
    S = subdivision(5, 6, 2, seed=1)
    assert S.n == 5 + 12 and len(S.edges()) == 18
    assert cycle_rank(S) == cycle_rank(random_gnm(5, 6, 1))
    with pytest.raises(PreconditionError, match="needs parameter"):
        generate("grid", {"rows": 2})
    with pytest.raises(PreconditionError):
        random_gnm(4, 7)


def test_generate_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        assert main(["generate", "random-gnm", "n=30", "m=40", "--seed", "9", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    main(["generate", "random-gnm", "n=30", "m=40", "--seed", "10"])
    assert capsys.readouterr().out != a.read_text()


def test_solve_and_verify_exit_codes(tmp_path, triangle_file, capsys):
    cert_path = tmp_path / "cert.json"
    assert main(["solve", "--graph", str(triangle_file), "--k", "1", "--d", "1", "--out", str(cert_path)]) == 0
    assert Certificate.from_json(cert_path.read_text()).is_packing
    assert main(["verify", "--graph", str(triangle_file), "--cert", str(cert_path), "--k", "1", "--d", "1"]) == 0

    assert main(["solve", "--graph", str(triangle_file), "--k", "2", "--d", "1", "--out", str(cert_path)]) == 1
    assert main(["verify", "--graph", str(triangle_file), "--cert", str(cert_path), "--k", "2", "--d", "1"]) == 1

    data = json.loads(cert_path.read_text())
    data["X"] = []
    cert_path.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["verify", "--graph", str(triangle_file), "--cert", str(cert_path), "--k", "2", "--d", "1"]) == 2
    assert "not a forest" in capsys.readouterr().err


def test_bad_input_exits_2(tmp_path, triangle_file, capsys):
    assert main(["solve", "--graph", str(triangle_file), "--k", "0", "--d", "1"]) == 2
    assert main(["solve", "--graph", str(tmp_path / "missing.txt"), "--k", "1", "--d", "1"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 7\n")
    assert main(["solve", "--graph", str(bad), "--k", "1", "--d", "1"]) == 2
    garbage = tmp_path / "cert.json"
    garbage.write_text("{")
    assert main(["verify", "--graph", str(triangle_file), "--cert", str(garbage), "--k", "1", "--d", "1"]) == 2


def test_oracle_commands(triangle_file, capsys, monkeypatch):
    assert main(["oracle", "max-packing", "--graph", str(triangle_file), "--d", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["oracle", "min-hitting", "--graph", str(triangle_file), "--radius", "0"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["oracle", "cycles", "--graph", str(triangle_file)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 1
    monkeypatch.setenv("COARSE_EP_LIMITS", "2,10")
    assert main(["oracle", "cycles", "--graph", str(triangle_file)]) == 2


def test_helly_file(tmp_path, capsys):
    forests, tuples = parse_tuple_file(TUPLES)
    assert len(forests) == 1 and len(tuples) == 3
    path = tmp_path / "fam.txt"
    path.write_text(TUPLES)
    assert main(["helly", "--tuples", str(path), "--k", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"type": "hit", "X": [[1]], "size": 1}
    with pytest.raises(PreconditionError, match="line 1"):
        parse_tuple_file("tuple: 0:1\n")
    with pytest.raises(PreconditionError, match="no forest 3"):
        parse_tuple_file("forest 2 1\n0 1\ntuple: 3:0\n")


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--count", "20", "--out", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["instance", "n", "m", "k", "d", "outcome", "|X|", "runtime_ms"]
    assert len(rows) == 21
    assert {r[5] for r in rows[1:]} <= {"packing", "hitting"}


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1] == "9/9 properties passed"
    assert all(line.startswith("PASS") for line in lines[:-1])


def test_module_entry_point(triangle_file):
    proc = subprocess.run(
        [sys.executable, "-m", "coarse_ep", "solve", "--graph", str(triangle_file), "--k", "1", "--d", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert Certificate.from_json(proc.stdout).is_packing
