from __future__ import annotations

import json

import pytest

from minent.cli import main
from minent.io import complex_from_json, complex_to_json, config_hash, load_complex
from minent.errors import InvalidSpec


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    (tmp_path / "free2.json").write_text(json.dumps({"generators": ["a", "b"], "relators": []}))
    (tmp_path / "z2.json").write_text(json.dumps({"generators": ["a", "b"], "relators": ["abAB"]}))
    (tmp_path / "trivial.json").write_text(json.dumps({"generators": ["a"], "relators": ["a"]}))
    (tmp_path / "split.json").write_text(json.dumps({"vertices": 4, "edges": [[0, 1], [2, 3]]}))
    return tmp_path


def test_growth_free(files, capsys):
    code, out, _ = _run(capsys, "growth", files / "free2.json", "-n", 10, "--out", files / "o")
    assert code == 0
    data = json.loads(out)
    assert data["result"]["counts"][-1] == 2 * 3 ** 10 - 1
    assert data["seed"] == 0 and data["config_hash"] == config_hash(data["config"])
    assert (files / "o" / "growth.csv").read_text().startswith("radius,count")


def test_growth_abelian_and_trivial(files, capsys):
    code, out, _ = _run(capsys, "growth", files / "z2.json", "-n", 20)
    assert code == 0 and json.loads(out)["result"]["estimate"]["value"] <= 0.2
    code, out, _ = _run(capsys, "growth", files / "trivial.json", "-n", 6)
    assert code == 0 and json.loads(out)["result"]["estimate"]["value"] == 0


def test_outputs_are_deterministic(files, capsys):
    a = _run(capsys, "growth", files / "z2.json", "-n", 8)[1]
    b = _run(capsys, "growth", files / "z2.json", "-n", 8)[1]
    assert a == b


def test_exit_codes(files, capsys):
    assert _run(capsys, "growth", files / "free2.json", "--backend", "abelian")[0] == 2
    assert _run(capsys, "growth", files / "free2.json", "-n", 20, "--state-cap", 100)[0] == 3
    assert _run(capsys, "growth", files / "missing.json")[0] == 4
    assert _run(capsys, "entropy", files / "split.json")[0] == 4
    assert _run(capsys, "growth", files / "free2.json", "--t-max", -1)[0] == 4


def test_zoo_build_entropy_margulis(files, capsys):
    path = files / "fig8.json"
    assert _run(capsys, "zoo", "build", "wedge_circles", "k=2", "-o", path)[0] == 0
    code, out, _ = _run(capsys, "entropy", path, "--t-max", 10)
    assert code == 0
    assert abs(json.loads(out)["result"]["estimate"]["value"] - 1.0986) < 0.05
    code, out, _ = _run(capsys, "margulis", path)
    assert code == 0 and json.loads(out)["result"]["value"] == 1.0


def test_zoo_list_and_verify(capsys):
    code, out, _ = _run(capsys, "zoo", "list")
    assert code == 0 and "torus" in out
    code, out, _ = _run(capsys, "verify", "attached_surface", "h=2", "d=3")
    assert code == 0 and json.loads(out)["result"]["h1_ok"]


def test_collapse_nerve_width(files, capsys):
    path = files / "prod.json"
    _run(capsys, "zoo", "build", "product_with_circle", "c=3", "-o", path)
    cfg = files / "cfg.json"
    cfg.write_text(json.dumps({"complex": "prod.json", "map": "base", "schedule": [1, 0.5],
                               "t_max": 6}))
    code, out, _ = _run(capsys, "collapse", cfg, "--out", files / "c")
    res = json.loads(out)["result"]
    assert code == 0 and res["verdict"]["kind"] == "collapsing" and res["volumes_decreasing"]
    assert (files / "c" / "collapse.csv").exists()
    code, out, _ = _run(capsys, "nerve", path, "--map", "base", "--tag")
    res = json.loads(out)["result"]
    assert code == 0 and res["multiplicity"] == 2 and res["nerve_dimension"] == 1
    assert res["tagging"]["kind"] == "collapsing_via_cover"
    code, out, _ = _run(capsys, "width", path, "--map", "base")
    assert code == 0 and json.loads(out)["result"]["value"] > 0
    assert _run(capsys, "width", path, "--map", "nope")[0] == 4


def test_io_roundtrip(figure_eight, product, tmp_path):
    data = complex_to_json(figure_eight)
    again = complex_from_json(data)
    assert again.edge_lengths == figure_eight.edge_lengths
    p = tmp_path / "prod.json"
    p.write_text(json.dumps(complex_to_json(product.metric(), product.maps)))
    metric, maps = load_complex(p)
    assert set(maps) == {"base", "circle"}
    with pytest.raises(InvalidSpec):
        complex_from_json({"vertices": 2, "edges": [[0, 5]]})
    with pytest.raises(InvalidSpec):
        complex_from_json({"edges": []})
