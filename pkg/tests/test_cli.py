import json
import subprocess
import sys

import numpy as np
import pytest

from cvp_toolkit.cli import ResolveError, dumps, main, resolve_endpoint
from cvp_toolkit.fixtures import letter_graph
from cvp_toolkit.graph import Graph, NodeGeometry, write_dimacs
from cvp_toolkit.trellis import planted_bands


@pytest.fixture
def files(tmp_path):
    gr = tmp_path / "letter.gr"
    gr.write_text(write_dimacs(letter_graph()))
    js = tmp_path / "letter.json"
    js.write_text(json.dumps(letter_graph().to_json()))
    co = tmp_path / "letter.co"
    co.write_text("".join(f"v {i + 1} {i * 1000000} {(i % 3) * 1000000}\n" for i in range(14)))
    return gr, js, co


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cvp_k5_costs(files, capsys):
    code, out, _ = run(capsys, "cvp", "--graph", files[0], "--source", 1, "--target", 14, "--k", 5)
    assert code == 0
    assert [p["cost"] for p in json.loads(out)["paths"]] == [11, 11, 12, 13, 13]


def test_json_graph_uses_zero_based_ids(files, capsys):
    code, out, _ = run(capsys, "cvp", "--graph", files[1], "--source", 0, "--target", 13, "--k", 1)
    assert json.loads(out)["paths"][0]["nodes"] == [0, 3, 6, 9, 13]


def test_output_is_byte_identical(files, capsys):
    args = ("cvp", "--graph", files[0], "--source", 1, "--target", 14, "--measure", "rho")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_ksp_with_and_without_reduction(files, capsys):
    for extra in ((), ("--reduce",)):
        code, out, err = run(capsys, "ksp", "--graph", files[0], "--source", 1, "--target", 14, "--k", 3, *extra)
        assert code == 0
        assert [p["cost"] for p in json.loads(out)["paths"]] == [11, 11, 12]
        timing = json.loads(err)
        assert "yen_ms" in timing
    assert timing["reduced_nodes"] <= 14


def test_partition_methods(files, capsys):
    for method, count in (("rpc", 5), ("components", 5)):
        _, out, _ = run(capsys, "partition", "--graph", files[0], "--source", 1, "--target", 14, "--method", method)
        assert json.loads(out)["count"] == count
    _, out, _ = run(capsys, "partition", "--graph", files[0], "--source", 1, "--target", 14,
                    "--method", "plateau", "--plateau-edges", "graph", "--visit-order", "8 7")
    assert json.loads(out)["count"] == 4


def test_diversity_and_oracle(files, capsys):
    _, out, _ = run(capsys, "diversity", "--graph", files[0], "--source", 1, "--target", 14, "--k", 2)
    d = json.loads(out)
    assert d["diversity"] == pytest.approx(1 / 3, abs=1e-8)
    _, out, _ = run(capsys, "oracle", "--graph", files[0], "--source", 1, "--target", 14)
    assert json.loads(out)["violations"] == []


def test_exit_codes(files, capsys):
    gr = files[0]
    assert run(capsys, "cvp", "--graph", gr, "--source", 99, "--target", 14)[0] == 2
    assert run(capsys, "cvp", "--graph", gr, "--source", 14, "--target", 1)[0] == 3
    assert run(capsys, "cvp", "--graph", gr, "--source", 1, "--target", 1)[0] == 1
    assert run(capsys, "cvp", "--graph", gr, "--source", 1, "--target", 14, "--k", 0)[0] == 1
    assert run(capsys, "cvp", "--graph", gr / "missing", "--source", 1, "--target", 2)[0] == 2
    assert run(capsys, "cvp", "--graph", gr, "--source=-1.0,2.0", "--target", 14)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["cvp", "--bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["ksp", "--graph", str(gr)])
    assert exc.value.code == 1


def test_coordinates_and_geojson(files, capsys):
    gr, _, co = files
    code, out, _ = run(capsys, "cvp", "--graph", gr, "--coords", co, "--source=0.1,0.1", "--target", 14,
                       "--k", 1, "--format", "geojson")
    fc = json.loads(out)
    assert code == 0 and fc["type"] == "FeatureCollection"
    assert fc["features"][0]["geometry"]["coordinates"][0] == [0.0, 0.0]
    code, out, _ = run(capsys, "cvp", "--graph", gr, "--coords", co, "--source", 1, "--target", 14, "--format", "svg")
    assert out.startswith("<svg")


def test_pairs_batch_with_jobs(files, capsys, tmp_path):
    pairs = tmp_path / "pairs.txt"
    pairs.write_text("1 14\n2 14  # from b\n")
    outs = []
    for jobs in (1, 2):
        code, out, _ = run(capsys, "cvp", "--graph", files[0], "--pairs", pairs, "--jobs", jobs, "--k", 1)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert [json.loads(l)["paths"][0]["cost"] for l in outs[0].splitlines()] == [11, 10]


def test_layers_json_and_svg(tmp_path, capsys):
    csv = tmp_path / "bands.csv"
    np.savetxt(csv, planted_bands(16, 20, [4, 11]).values, delimiter=",")
    code, out, _ = run(capsys, "layers", csv)
    assert code == 0 and len(json.loads(out)["boundaries"]) == 2
    flat = tmp_path / "flat.csv"
    np.savetxt(flat, np.ones((5, 5)), delimiter=",")
    assert json.loads(run(capsys, "layers", flat)[1])["boundaries"] == []
    assert run(capsys, "layers", csv, "--format", "svg")[1].startswith("<svg")
    assert run(capsys, "layers", csv, "--sigma", "0")[0] == 1


def test_speed_model(tmp_path, capsys):
    g = Graph.from_edges(2, [(0, 1, 70.0)], categories=[11])
    gr = tmp_path / "road.gr"
    gr.write_text(write_dimacs(g))
    _, out, _ = run(capsys, "cvp", "--graph", gr, "--source", 1, "--target", 2, "--speed-model", "road")
    p = json.loads(out)["paths"][0]
    assert p["time"] == "1 hrs, 0 mins" and p["seconds"] == 3600


def test_resolve_endpoint_ties_and_missing_geometry():
    geo = NodeGeometry(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 5.0]]))
    assert resolve_endpoint(geo, 2.0, 0.0) == 1
    assert resolve_endpoint(geo, 1.0, 0.0) == 0
    with pytest.raises(ResolveError):
        resolve_endpoint(None, 0, 0)


def test_dumps_rounding():
    assert dumps({"x": 1 / 3, "y": float("inf")}) == '{"x": 0.333333333, "y": null}'


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "cvp_toolkit.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "layers" in out.stdout
