import json
import subprocess
import sys

import numpy as np
import pytest

from crooked.cli import run_cli
from crooked.disjointness import Verdict, crooked_disjoint
from crooked.errors import GeometryError, ParseError, SchemaError
from crooked.foliation import build_foliation, leaf
from crooked.formats import (
    dumps, export_obj, foliation_document, parse_foliation, parse_scene, read_obj_vertices,
    scene_text, write_foliation,
)
from crooked.geometry import CrookedPlane, Piece, crooked_contains, mesh_crooked_plane

from conftest import COSH1, E1, SINH1


def test_parse_scene_examples():
    s = parse_scene(b'{"planes":[{"vertex":[0,0,0],"direction":[1,0,0]}]}')
    assert len(s.planes) == 1
    np.testing.assert_array_equal(s.planes[0].direction, E1)
    with pytest.raises(GeometryError):
        parse_scene(b'{"planes":[{"vertex":[0,0,0],"direction":[0,0,1]}]}')
    with pytest.raises(ParseError):
        parse_scene(b'{"planes":[{"vertex":[0,0,0],"dir')


@pytest.mark.parametrize("text", [
    b'{"planes":[{"vertex":[0,0,0],"direction":[1,0,0],"color":1}]}',
    b'{"planes":[{"vertex":[0,0],"direction":[1,0,0]}]}',
    b'{"planes":{}}',
    b'{"planes":[], "extra": 1}',
    b'[1, 2]',
    b'{"planes":[{"vertex":[0,0,"a"],"direction":[1,0,0]}]}',
])
def test_parse_scene_schema_errors(text):
    with pytest.raises(SchemaError):
        parse_scene(text)


def test_parse_scene_rejects_nan():
    with pytest.raises((ParseError, SchemaError)):
        parse_scene(b'{"planes":[{"vertex":[NaN,0,0],"direction":[1,0,0]}]}')


def test_parse_scene_renormalizes():
    d = [1 + 1e-7, 0, 0]
    s = parse_scene(json.dumps({"planes": [{"vertex": [0, 0, 0], "direction": d}]}))
    assert s.planes[0].direction[0] == pytest.approx(1.0, abs=1e-15)


def test_scene_round_trip(canonical_planes):
    again = parse_scene(scene_text(canonical_planes)).planes
    for a, b in zip(again, canonical_planes):
        np.testing.assert_array_equal(a.vertex, b.vertex)
        np.testing.assert_array_equal(a.direction, b.direction)


def test_dumps_round_trips_floats():
    xs = [0.1, 1 / 3, -0.0, np.pi * 1e-300, -2.5e17, 5e-324]
    back = json.loads(dumps({"x": xs}))["x"]
    assert back == xs and np.array_equal(np.signbit(back), np.signbit(xs))


def test_obj_one_leaf(tmp_path):
    mesh = mesh_crooked_plane(CrookedPlane([0, 0, 0], E1), 1.0, 4)
    (path,) = export_obj([mesh], tmp_path)
    assert path.name == "leaf_000.obj"
    text = path.read_text()
    groups = [line for line in text.splitlines() if line.startswith("g ")]
    assert sorted(set(groups)) == ["g stem", "g wing_minus", "g wing_plus"]
    faces = [line.split()[1:] for line in text.splitlines() if line.startswith("f ")]
    idx = np.array(faces, dtype=int)
    assert idx.min() == 1 and idx.max() == len(mesh.vertices)
    np.testing.assert_array_equal(read_obj_vertices(path), mesh.vertices)


def test_obj_empty_list(tmp_path):
    assert export_obj([], tmp_path / "none") == []


@pytest.fixture(scope="module")
def fol():
    P = CrookedPlane([0.0, 0.0, 0.0], E1)
    Q = CrookedPlane([0.0, -2 * np.sqrt(2.0), 0.0], [-COSH1, 0.0, SINH1])
    return build_foliation(P, Q)


def test_foliation_file_round_trip(fol, tmp_path):
    out = tmp_path / "fol.json"
    write_foliation(fol, out, 9)
    ff = parse_foliation(out.read_bytes())
    assert len(ff.samples) == 9
    for t, v, d in ff.samples:
        lf = leaf(fol, t)
        np.testing.assert_array_equal(v, lf.vertex)
        np.testing.assert_array_equal(d, lf.direction)
        assert np.array_equal(np.signbit(d), np.signbit(lf.direction))
    # re-serializing the parsed document reproduces the file
    doc = json.loads(out.read_text())
    assert dumps(doc) + "\n" == out.read_text()


def test_foliation_file_deterministic(fol, tmp_path):
    write_foliation(fol, tmp_path / "a.json", 7)
    write_foliation(fol, tmp_path / "b.json", 7)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_parse_foliation_rejects_bad_format(fol):
    doc = foliation_document(fol, 3)
    doc["format"] = "other/9"
    with pytest.raises(SchemaError):
        parse_foliation(dumps(doc))
    doc = foliation_document(fol, 3)
    del doc["solver"]["n"]
    with pytest.raises(SchemaError):
        parse_foliation(dumps(doc))


# -- command line ------------------------------------------------------------

def write_scene(tmp_path, planes, name="scene.json"):
    p = tmp_path / name
    p.write_text(scene_text(planes))
    return p


def run(argv, capsys):
    code = run_cli([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_check(tmp_path, capsys, canonical_planes):
    scene = write_scene(tmp_path, canonical_planes)
    code, out, _ = run(["check", "--scene", scene], capsys)
    assert code == 0 and json.loads(out) == {"verdict": "disjoint"}
    P, _ = canonical_planes
    scene = write_scene(tmp_path, [P, CrookedPlane([0, 0, 3], [-COSH1, 0, SINH1])])
    code, out, _ = run(["check", "--scene", scene], capsys)
    assert json.loads(out) == {"verdict": "intersect"}


def test_cli_check_degenerate_reports_oracle(tmp_path, capsys):
    scene = write_scene(tmp_path, [CrookedPlane([0, 0, 0], E1), CrookedPlane([0, -1, 0], E1)])
    code, out, _ = run(["check", "--scene", scene], capsys)
    res = json.loads(out)
    assert code == 0 and res["verdict"] == "degenerate" and "oracle" in res


def test_cli_one_plane_scene(tmp_path, capsys):
    scene = write_scene(tmp_path, [CrookedPlane([0, 0, 0], E1)])
    code, out, err = run(["check", "--scene", scene], capsys)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "SchemaError"


def test_cli_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["check", "--scene", bad], capsys)[0] == 2
    assert run(["check"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["check", "--scene", tmp_path / "missing.json"], capsys)[0] == 1


def test_cli_foliate_mesh(tmp_path, capsys, canonical_planes):
    scene = write_scene(tmp_path, canonical_planes)
    out_file = tmp_path / "fol.json"
    code, out, _ = run(["foliate", "--scene", scene, "--out", out_file, "--samples", 12], capsys)
    assert code == 0 and json.loads(out)["passed"]
    ff = parse_foliation(out_file.read_bytes())
    planes = ff.planes()
    # any two serialized leaves check as disjoint
    for i, j in [(0, 1), (0, 11), (3, 7), (10, 11)]:
        assert crooked_disjoint(planes[i], planes[j]) is Verdict.DISJOINT
    code, out, _ = run(["mesh", "--foliation", out_file, "--out", tmp_path / "obj",
                        "--radius", 2, "--resolution", 6], capsys)
    files = json.loads(out)["files"]
    assert code == 0 and len(files) == 12
    verts = read_obj_vertices(files[5])
    assert all(crooked_contains(q, planes[5], tol=1e-8).piece is not Piece.OUTSIDE for q in verts)


def test_cli_foliate_no_foliation(tmp_path, capsys, canonical_planes):
    P, _ = canonical_planes
    scene = write_scene(tmp_path, [P, CrookedPlane([0, 0, 3], [-COSH1, 0, SINH1])])
    code, _, err = run(["foliate", "--scene", scene, "--out", tmp_path / "x.json"], capsys)
    assert code == 4 and json.loads(err)["error"] == "NotDisjoint"
    assert not (tmp_path / "x.json").exists()
    code, _, _ = run(["foliate", "--scene", scene, "--out", tmp_path / "x.json", "--samples", 1], capsys)
    assert code == 2


def test_cli_oracle(tmp_path, capsys, canonical_planes):
    scene = write_scene(tmp_path, canonical_planes)
    code, out, _ = run(["oracle", "--scene", scene, "--resolution", 32], capsys)
    assert code == 0 and json.loads(out) == {"witness": None, "radius": 20.0}
    P, _ = canonical_planes
    scene = write_scene(tmp_path, [P, CrookedPlane([0, 0, 3], [-COSH1, 0, SINH1])])
    code, out, _ = run(["oracle", "--scene", scene, "--resolution", 32], capsys)
    w = json.loads(out)["witness"]
    assert w is not None and w["separation"] <= 1e-6


def test_module_entry_point(tmp_path, canonical_planes):
    scene = write_scene(tmp_path, canonical_planes)
    res = subprocess.run([sys.executable, "-m", "crooked", "check", "--scene", str(scene)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout) == {"verdict": "disjoint"}
