import json
import os

import pytest

from finitespaces import io, models
from finitespaces.cli import main
from finitespaces.homotopy import find_beat_points

FIX = models.fixtures_dir()


def fx(name):
    return os.path.join(FIX, name)


def run_json(capsys, *argv):
    code = main(["--json", *argv])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("argv, code", [
    (["check", fx("pseudocircle.toml"), "schematic"], 1),
    (["check", fx("p1.toml"), "schematic"], 0),
    (["check", fx("p1.toml"), "affine"], 2),
    (["check", fx("doubled_origin_plane.toml"), "semiseparated"], 1),
    (["check", fx("p1.toml"), "quasicoherent", "--sheaf", "O(1)"], 0),
    (["check", fx("plane_fine.toml"), "qc-isomorphism"], 0),
    (["check", fx("p1.toml"), "schematic", "--window", "-2", "2"], 0),
    (["validate", fx("p1_over_point.toml")], 0),
    (["check", fx("missing.toml"), "schematic"], 3),
    (["check", fx("p1.toml"), "no-such-predicate"], 3),
    (["check", fx("p1.toml"), "quasicoherent", "--sheaf", "O(99)"], 3),
    (["check", fx("p1.toml"), "topological-criterion", "--morphism", "x"], 3),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    capsys.readouterr()


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("points = [\n")
    assert main(["--json", "validate", str(bad)]) == 3
    out = json.loads(capsys.readouterr().out)
    assert out["kind"] == "ParseError" and "line" in out["error"]


def test_json_output_is_stable(capsys):
    argv = ["cohomology", fx("p1.toml"), "--sheaf", "O(-3)"]
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    assert a == b
    assert a["degrees"]["1"]["dims"] == {"-1": 1, "-2": 1}


def test_verdict_json(capsys):
    code, out = run_json(capsys, "check", fx("doubled_origin_plane.toml"), "semiseparated")
    assert code == 1
    assert out["verdict"]["value"] == "No"
    assert out["verdict"]["witness"]["degree"] == 1


def test_core_roundtrip(tmp_path, capsys):
    path = tmp_path / "cone.toml"
    io.save(io.space_to_dict(models.cone(models.pseudocircle())), str(path))
    out = tmp_path / "core.toml"
    code, res = run_json(capsys, "core", str(path), "--seed", "3", "-o", str(out))
    assert code == 0 and len(res["trace"]) == 4
    doc = io.load(str(out))
    assert len(doc.space.points) == 1 and not find_beat_points(doc.space)
    code, res = run_json(capsys, "core", str(out))
    assert res["trace"] == []


def test_hequiv(tmp_path, capsys):
    a = tmp_path / "a.toml"
    io.save(io.space_to_dict(models.cone(models.pseudocircle())), str(a))
    b = tmp_path / "b.toml"
    io.save({"format": 1, "points": ["*"]}, str(b))
    assert main(["hequiv", str(a), str(b)]) == 0
    assert main(["hequiv", fx("pseudocircle.toml"), str(b)]) == 1
    capsys.readouterr()


def test_stein(tmp_path, capsys):
    out = tmp_path / "middle.toml"
    code, res = run_json(capsys, "stein", fx("p1_over_point.toml"), "to_point", "-o", str(out))
    assert code == 0
    assert set(res["first"].values()) == {"*"}
    doc = io.load(str(out))
    assert len(doc.space.points) == 1 and "g" in doc.morphisms


def test_fprod(capsys):
    p = fx("p1_over_point.toml")
    code, res = run_json(capsys, "fprod", p, p, fx("point_k1.toml"), "--f", "to_point", "--g", "to_point")
    # P1 -> point is not affine and the certification cascade cannot decide it
    assert code == 2
    assert res["certificates"]["f_affine"]["value"] == "Unknown"
    assert len(res["product"]["points"]) == 9
    assert res["certificates"]["flat"]["value"] in ("Yes", "WindowYes")
    assert "pushforward_tensor" not in res["certificates"]
