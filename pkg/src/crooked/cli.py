"""
Command line interface.

    crooked check   --scene F [--tol T]
    crooked foliate --scene F --out G [--samples K] [--tol T] [--n-max N]
    crooked mesh    --foliation G --out DIR [--radius R] [--resolution N]
    crooked oracle  --scene F [--radius R] [--resolution N]

Results go to stdout as JSON; errors go to stderr as a one-line JSON object.
Exit codes: 0 success, 1 I/O failure, 2 bad input, 3 foliation failed
validation, 4 no foliation exists for the input.
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .disjointness import Verdict, crooked_disjoint
from .errors import (
    DegenerateCase, GeometryError, Infeasible, InvalidParams, NotDisjoint,
    ParseError, PreconditionFailed, SchemaError,
)
from .foliation import build_foliation, validate_foliation
from .formats import (
    dumps, export_obj, parse_foliation, parse_scene, write_foliation,
)
from .geometry import CrookedPlane, mesh_crooked_plane
from .oracle import crooked_intersect_oracle

log = logging.getLogger("crooked")

EXIT_IO = 1
EXIT_INPUT = 2
EXIT_VALIDATION = 3
EXIT_NO_FOLIATION = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _configure_logging():
    level = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("CROOKED_LOG", "quiet").lower(), logging.WARNING)
    root = logging.getLogger("crooked")
    if not root.handlers:
        h = logging.StreamHandler(sys.stderr)
        h.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(h)
    root.setLevel(level)


def _fail(kind, message, code):
    print(json.dumps({"error": kind, "message": str(message)}), file=sys.stderr)
    return code


def _out(obj):
    print(json.dumps(obj))


def _read(path):
    return Path(path).read_bytes()


def _load_scene(path, need=1):
    scene = parse_scene(_read(path))
    if len(scene.planes) < need:
        raise SchemaError(f"scene needs at least {need} planes, has {len(scene.planes)}")
    return scene


def _witness_json(w):
    if w is None:
        return None
    return {
        "point": w.point.tolist(),
        "piece_a": w.piece_a.piece.value,
        "piece_b": w.piece_b.piece.value,
        "marginal": bool(w.piece_a.marginal or w.piece_b.marginal),
        "separation": w.separation,
    }


def cmd_check(args):
    scene = _load_scene(args.scene, 2)
    P, Q = scene.planes[:2]
    verdict = crooked_disjoint(P, Q, args.tol)
    log.info("verdict %s for %r and %r", verdict.value, P, Q)
    result = {"verdict": verdict.value}
    if verdict is Verdict.DEGENERATE:
        w = crooked_intersect_oracle(P, Q, 20.0, 64)
        result["oracle"] = {"radius": 20.0, "witness": _witness_json(w)}
    _out(result)
    return 0


def cmd_foliate(args):
    scene = _load_scene(args.scene, 2)
    P, Q = scene.planes[:2]
    try:
        fol = build_foliation(P, Q, solver_tol=args.tol, n_max=args.n_max)
    except (NotDisjoint, DegenerateCase, Infeasible, PreconditionFailed) as exc:
        return _fail(type(exc).__name__, exc, EXIT_NO_FOLIATION)
    report = validate_foliation(fol, args.samples)
    write_foliation(fol, args.out, args.samples, report)
    log.info("n=%d residual=%.3e pairs=%d", fol.curve.basis.n, fol.residual, report.pairs_checked)
    _out({"passed": report.passed, "residual": fol.residual, "pairs_checked": report.pairs_checked,
          "out": str(args.out)})
    return 0 if report.passed else EXIT_VALIDATION


def cmd_mesh(args):
    ff = parse_foliation(_read(args.foliation))
    meshes = [mesh_crooked_plane(CrookedPlane(v, d), args.radius, args.resolution)
              for _, v, d in ff.samples]
    paths = export_obj(meshes, args.out)
    _out({"files": [str(p) for p in paths]})
    return 0


def cmd_oracle(args):
    scene = _load_scene(args.scene, 2)
    P, Q = scene.planes[:2]
    w = crooked_intersect_oracle(P, Q, args.radius, args.resolution)
    _out({"witness": _witness_json(w), "radius": args.radius})
    return 0


def build_parser():
    p = _Parser(prog="crooked", description="Crooked planes in Minkowski 3-space.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="disjointness verdict for the first two planes")
    c.add_argument("--scene", required=True)
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_check)

    f = sub.add_parser("foliate", help="foliation between the first two planes")
    f.add_argument("--scene", required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--samples", type=int, default=50)
    f.add_argument("--tol", type=float, default=1e-8)
    f.add_argument("--n-max", type=int, default=60)
    f.set_defaults(func=cmd_foliate)

    m = sub.add_parser("mesh", help="OBJ meshes of the leaves of a foliation file")
    m.add_argument("--foliation", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--radius", type=float, default=5.0)
    m.add_argument("--resolution", type=int, default=32)
    m.set_defaults(func=cmd_mesh)

    o = sub.add_parser("oracle", help="brute-force intersection search")
    o.add_argument("--scene", required=True)
    o.add_argument("--radius", type=float, default=20.0)
    o.add_argument("--resolution", type=int, default=128)
    o.set_defaults(func=cmd_oracle)
    return p


def run_cli(argv=None) -> int:
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "samples", 2) < 2:
            raise InvalidParams("--samples must be at least 2")
        return args.func(args)
    except _UsageError as exc:
        return _fail("UsageError", exc, EXIT_INPUT)
    except (ParseError, SchemaError, GeometryError, InvalidParams) as exc:
        return _fail(type(exc).__name__, exc, EXIT_INPUT)
    except OSError as exc:
        return _fail("IoError", exc, EXIT_IO)


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
