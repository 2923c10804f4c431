import json
from pathlib import Path

import pytest

from homorder.cli import main

MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        f = tmp_path / name
        f.write_text(text)
        return str(f)

    return {
        "p1": write("p1.txt", "F"),
        "p2": write("p2.txt", "FFFF"),
        "p3": write("p3.txt", "FFF"),
        "l1": write("l1.txt", "FFBFF"),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_hom_positive_and_negative(files, capsys):
    code, out = run(capsys, "hom", "--from", files["l1"], "--to", files["p3"], "--json")
    assert code == 0
    assert json.loads(out) == {"exists": True, "map": [0, 1, 2, 1, 2, 3]}

    code, out = run(capsys, "hom", "--from", files["p3"], "--to", files["l1"])
    assert code == 1

    code, out = run(
        capsys, "hom", "--from", files["l1"], "--to", files["p3"], "--oracle", "brute"
    )
    assert code == 0


def test_hom_missing_file_is_an_error(files, capsys):
    code = main(["hom", "--from", str(files["dir"] / "nope.txt"), "--to", files["p3"]])
    capsys.readouterr()
    assert code == 2


def test_core_height_classify(files, capsys):
    code, out = run(capsys, "core", "--in", files["l1"])
    assert code == 0 and out.strip() == "FFBFF"

    code, out = run(capsys, "height", "--in", files["l1"], "--json")
    assert code == 0 and json.loads(out) == {"height": 3}

    code, out = run(
        capsys, "classify", "--lower", files["p1"], "--upper", files["p2"], "--json"
    )
    assert code == 0
    assert json.loads(out)["classification"] == "Universal"


def test_between_found_and_gap(files, capsys):
    code, out = run(capsys, "between", "--lower", files["p1"], "--upper", files["p3"])
    assert code == 0 and out.startswith("found")

    empty = files["dir"] / "p0.txt"
    empty.write_text("")
    code, out = run(capsys, "between", "--lower", str(empty), "--upper", files["p1"], "--json")
    assert code == 1
    assert json.loads(out)["status"] == "certified-gap"


def test_catalog(capsys):
    code, out = run(capsys, "catalog", "lpath", "2")
    assert code == 0 and out.strip() == "FFBFBFF"
    code, out = run(capsys, "catalog", "dpath", "4")
    assert out.strip() == "FFFF"
    code, out = run(capsys, "catalog", "zigzag", "3", "--start", "B")
    assert out.strip() == "BFB"
    code, out = run(capsys, "catalog", "chain", "2")
    lines = dict(line.split() if len(line.split()) == 2 else (line.split()[0], "")
                 for line in out.strip().splitlines())
    assert lines["P2"] == "FF" and lines["L1"] == "FFBFF" and lines["L0"] == "FFF"


def test_export_dot(files, capsys):
    code, out = run(capsys, "export-dot", "--in", files["l1"])
    assert code == 0 and out.startswith("digraph") and out.count("->") == 5


def test_gadget_verify_and_embed_on_shipped_bundle(capsys):
    bundle = str(MANIFESTS / "demo_gadget.json")
    code, out = run(capsys, "gadget", "verify", "--bundle", bundle, "--q-bound", "2", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["condition_i"]["status"] == "Verified"
    assert report["condition_ii"]["status"] == "Verified"
    assert report["condition_iii"]["status"] == "Verified"

    code, out = run(capsys, "embed-verify", "--bundle", bundle, "--max-arcs", "2", "--json")
    assert code == 0 and json.loads(out)["all_ok"] is True


def test_gadget_build_roundtrip(files, capsys, tmp_path):
    mid = tmp_path / "mid.txt"
    mid.write_text("FFBFFBBFFF")
    out_file = tmp_path / "bundle.json"
    code, _ = run(
        capsys,
        "gadget", "build",
        "--p1", files["p1"], "--p2", files["p2"], "--p", str(mid),
        "--q-bound", "2", "--out", str(out_file),
    )
    assert code == 0
    bundle = json.loads(out_file.read_text())
    assert bundle["p1"] == "F" and bundle["p2"] == "FFFF"

    code, out = run(capsys, "gadget", "verify", "--bundle", str(out_file), "--q-bound", "2")
    assert code == 0 and out.strip() == "verified"


def test_batch_verify(capsys, tmp_path):
    manifest = {
        "checks": [
            {"name": "chain", "kind": "chain", "k_max": 3},
            {"name": "gaps", "kind": "gaps", "max_arcs": 6},
            {"name": "oracles", "kind": "oracle-equivalence", "max_arcs": 3},
        ]
    }
    f = tmp_path / "m.json"
    f.write_text(json.dumps(manifest))
    code, out = run(capsys, "batch-verify", "--manifest", str(f), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["ok"] is True
    assert set(report["checks"]) == {"chain", "gaps", "oracles"}


def test_batch_verify_shipped_manifest(capsys):
    code, out = run(capsys, "batch-verify", "--manifest", str(MANIFESTS / "default.json"))
    assert code == 0 and "all ok" in out


def test_json_output_is_deterministic(files, capsys):
    args = ("classify", "--lower", files["p1"], "--upper", files["p2"], "--json")
    _, out1 = run(capsys, *args)
    _, out2 = run(capsys, *args)
    assert out1 == out2
