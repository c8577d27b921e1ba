"""Spherical origami: fold axioms, flat-foldability and 3D folds on the unit sphere."""

from .errors import (
    AntipodalError,
    CoincidentCirclesError,
    CurvePlacementError,
    DegenerateInputError,
    FoldRangeError,
    ParseError,
    SphericalOrigamiError,
    TessellationError,
    ValidationError,
)
from .sphere_core import (
    DEFAULT_TOL,
    GeodesicArc,
    GreatCircle,
    SmallCircle,
    Tolerances,
    great_great_intersections,
    great_small_intersections,
    midpoint,
    reflect,
    rotate,
)
from .axioms import FoldSolutionSet, solve
from .flat_fold import VertexPattern, fold_oracle, ftiling_check, kawasaki_check
from .fold3d import FoldCurve3D, FoldDirection, SphericalFace, dihedral_angle, fold_face, make_fold_curve
from .bird_models import BirdParams, DigonSheet, build_bird, digon_foldout, expand_wings, fold_flat_bird
from .mesh import TriangleMesh, export_obj, tessellate_face
from .pattern import PatternDocument, read_pattern, write_pattern

__version__ = "0.1.0"
