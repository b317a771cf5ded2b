"""Crooked planes in Minkowski 3-space: disjointness and crooked foliations."""
from .disjointness import (
    ConicalHull, Containment, PairClass, SignChoice, Verdict, classify_pair, cone_A,
    cone_contains, consistently_oriented, crooked_disjoint, orient_pair,
)
from .errors import CrookedError
from .foliation import (
    BasisFamily, DirectingPath, Foliation, Ray, ValidationReport, VertexCurve,
    build_foliation, displacement_integral, extreme_ray_displacement, interp_path, leaf,
    sampled_path, solve_vertex_path, validate_foliation, validate_path,
)
from .geometry import (
    CrookedPlane, FrameCoords, Mesh, Piece, PieceLabel, crooked_contains, frame_coordinates,
    mesh_crooked_plane, piece_classify, stem_contains, stem_quadrant_contains,
)
from .lorentz import (
    CausalClass, NullFrame, classify_vector, det3, lorentz_cross, lorentz_dot,
    normalize_spacelike, null_frame, unit_spacelike,
)
from .oracle import Witness, cone_contains_oracle, crooked_intersect_oracle, tri_tri_intersect

__version__ = "0.1.0"
