"""
Scene and foliation JSON files, and Wavefront OBJ export.

Floats are written as decimals with 17 significant digits, which
round-trips every binary64 value exactly.
"""
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GeometryError, NotUnitSpacelike, ParseError, SchemaError
from .foliation import Foliation, ValidationReport, leaf
from .geometry import CrookedPlane, Mesh, Piece
from .lorentz import lorentz_dot

FOLIATION_FORMAT = "crooked-foliation/1"
SCENE_UNIT_TOL = 1e-6
GROUP_ORDER = (Piece.STEM, Piece.WING_PLUS, Piece.WING_MINUS)


def fmt(x) -> str:
    x = float(x)
    if x == 0.0 and math.copysign(1.0, x) < 0:
        return "-0.0"  # JSON reads a bare -0 as the integer 0
    return format(x, ".17g")


def dumps(obj, indent=0) -> str:
    """JSON text with floats at 17 significant digits; keys keep insertion order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + "  " + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]" if items else "[]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError("non-finite float")
        return fmt(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _reject_constant(name):
    raise ParseError(f"non-standard JSON constant {name}")


def _load_json(text):
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(str(exc)) from exc
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc


def _expect_keys(obj, keys, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    if set(obj) != set(keys):
        raise SchemaError(f"{where}: expected keys {sorted(keys)}, got {sorted(obj)}")


def _triple(x, where):
    if (not isinstance(x, list) or len(x) != 3
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in x)):
        raise SchemaError(f"{where}: expected a list of three numbers")
    a = np.array(x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise SchemaError(f"{where}: non-finite coordinate")
    return a


@dataclass
class Scene:
    planes: list


def parse_scene(text) -> Scene:
    """
    Parse ``{"planes": [{"vertex": [x, y, z], "direction": [x, y, z]}, ...]}``.

    Directions within 1e-6 of unit spacelike are accepted (and renormalized
    if they miss by more than 1e-9); anything else is a GeometryError.
    """
    doc = _load_json(text)
    _expect_keys(doc, {"planes"}, "scene")
    if not isinstance(doc["planes"], list):
        raise SchemaError("scene.planes: expected a list")
    planes = []
    for k, item in enumerate(doc["planes"]):
        where = f"scene.planes[{k}]"
        _expect_keys(item, {"vertex", "direction"}, where)
        vertex = _triple(item["vertex"], where + ".vertex")
        u = _triple(item["direction"], where + ".direction")
        q = lorentz_dot(u, u)
        if not abs(q - 1.0) <= SCENE_UNIT_TOL:
            raise GeometryError(f"{where}.direction is not unit spacelike (u.u = {q!r})")
        if abs(q - 1.0) > 1e-9:
            u = u / math.sqrt(q)
        try:
            planes.append(CrookedPlane(vertex, u))
        except NotUnitSpacelike as exc:
            raise GeometryError(str(exc)) from exc
    return Scene(planes)


def scene_text(planes) -> str:
    return dumps({"planes": [{"vertex": p.vertex.tolist(), "direction": p.direction.tolist()}
                             for p in planes]}) + "\n"


@dataclass
class FoliationFile:
    path: dict
    solver: dict
    validation: dict
    samples: list  # (t, vertex, direction) triples

    def planes(self):
        return [CrookedPlane(v, d) for _, v, d in self.samples]


def foliation_document(fol: Foliation, samples=50, report: ValidationReport = None) -> dict:
    ts = np.linspace(0.0, 1.0, samples)
    rows = []
    for t in ts:
        lf = leaf(fol, t)
        rows.append({"t": float(t), "vertex": lf.vertex.tolist(), "direction": lf.direction.tolist()})
    basis = fol.curve.basis
    doc = {
        "format": FOLIATION_FORMAT,
        "path": fol.path.descriptor,
        "solver": {
            "n": int(basis.n),
            "coefficients": basis.coefficients.tolist(),
            "delta": float(basis.delta),
            "residual": fol.residual,
            "p0": fol.curve.p0.tolist(),
            "target": fol.target.tolist(),
            "sign": int(fol.sign),
        },
        "validation": None if report is None else {
            "passed": report.passed,
            "pairs_checked": report.pairs_checked,
            "endpoint_residual": report.endpoint_residual,
            "failures": len(report.failures),
            "derivative_cone_violations": len(report.derivative_cone_violations),
            "orientation_violations": len(report.orientation_violations),
        },
        "samples": rows,
    }
    return doc


def write_foliation(fol: Foliation, path, samples=50, report=None):
    Path(path).write_text(dumps(foliation_document(fol, samples, report)) + "\n")


def parse_foliation(text) -> FoliationFile:
    doc = _load_json(text)
    _expect_keys(doc, {"format", "path", "solver", "validation", "samples"}, "foliation")
    if doc["format"] != FOLIATION_FORMAT:
        raise SchemaError(f"unsupported format {doc['format']!r}")
    if not isinstance(doc["path"], dict) or doc["path"].get("type") not in ("interp", "sampled"):
        raise SchemaError("foliation.path: expected an interp or sampled descriptor")
    _expect_keys(doc["solver"], {"n", "coefficients", "delta", "residual", "p0", "target", "sign"},
                 "foliation.solver")
    if not isinstance(doc["samples"], list):
        raise SchemaError("foliation.samples: expected a list")
    rows = []
    for k, row in enumerate(doc["samples"]):
        where = f"foliation.samples[{k}]"
        _expect_keys(row, {"t", "vertex", "direction"}, where)
        t = row["t"]
        if not isinstance(t, (int, float)) or isinstance(t, bool):
            raise SchemaError(where + ".t: expected a number")
        rows.append((float(t), _triple(row["vertex"], where + ".vertex"),
                     _triple(row["direction"], where + ".direction")))
    return FoliationFile(doc["path"], doc["solver"], doc["validation"], rows)


def obj_text(mesh: Mesh) -> str:
    lines = [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.vertices]
    tags = np.array([t.value for t in mesh.tags])
    for piece in GROUP_ORDER:
        idx = np.flatnonzero(tags == piece.value)
        if len(idx) == 0:
            continue
        lines.append(f"g {piece.value}")
        lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles[idx])
    return "\n".join(lines) + "\n"


def export_obj(meshes, directory):
    """Write ``leaf_000.obj``, ``leaf_001.obj``, ... into ``directory``; return the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, mesh in enumerate(meshes):
        p = directory / f"leaf_{k:03d}.obj"
        p.write_text(obj_text(mesh))
        paths.append(p)
    return paths


def read_obj_vertices(path) -> np.ndarray:
    rows = [line.split()[1:4] for line in Path(path).read_text().splitlines() if line.startswith("v ")]
    return np.array(rows, dtype=float).reshape(-1, 3)
