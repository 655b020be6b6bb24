import json

import pytest

from pezzo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_contrib(capsys):
    code, out, _ = run(capsys, "contrib", "I4", "1", "3")
    assert code == 0
    assert json.loads(out)["contribution"] == "1/4"


def test_contrib_domain_error(capsys):
    code, _, err = run(capsys, "contrib", "I4", "9", "0")
    assert code == 1
    assert json.loads(err)["error"] == "BadComponentIndex"


def test_rank(capsys):
    code, out, _ = run(capsys, "rank", "I9,3I1")
    assert code == 0
    data = json.loads(out)
    assert data["mordell_weil_rank"] == 0
    assert data["trivial_lattice"] == "A8"


def test_sections_from_catalog(capsys):
    code, out, _ = run(capsys, "sections", "--catalog", "0", "--number", "11")
    assert code == 0
    data = json.loads(out)
    names = {r["name"] for r in data["solutions"][0]["sections"]}
    assert names == {"Q1", "Q2"}


def test_sections_from_config(capsys):
    code, out, _ = run(
        capsys, "sections", "--config", "3I3,I2,I1",
        "--height", "1/6", "--torsion", "3",
    )
    assert code == 0
    data = json.loads(out)
    assert any(
        r["name"].startswith("P3") and r["height"] == "3/2"
        for r in data["solutions"][0]["sections"]
    )


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--rank", "0", "--picard", "1")
    assert code == 0
    assert len(json.loads(out)["types"]) == 27


def test_tables(capsys):
    code, out, _ = run(capsys, "tables", "T5.4")
    assert code == 0
    assert "D6 | infinite" in out


def test_weierstrass(capsys):
    code, out, _ = run(
        capsys, "weierstrass", "--g2", "X*Y^3", "--g3", "Y^6"
    )
    assert code == 0
    assert json.loads(out)["fibers"] == ["I1", "I1", "I1", "III*"]


def test_blowdown_and_dot(tmp_path, capsys):
    from pezzo.cascade import build_surface, seed_catalog

    seed = [s for s in seed_catalog(0) if s.number == 11][0]
    g = build_surface(seed)
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g.to_json()))
    code, out, _ = run(capsys, "blowdown", str(path), "O")
    assert code == 0
    assert json.loads(out)["k_squared"] == 1
    code, out, _ = run(capsys, "export-dot", str(path))
    assert code == 0
    assert out.startswith("graph curves {")


def test_missing_file(capsys):
    code, _, err = run(capsys, "blowdown", "/nonexistent.json", "O")
    assert code == 1
    assert err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["bogus-command"])
    assert exc.value.code == 2
