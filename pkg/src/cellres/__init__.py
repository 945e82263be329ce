"""Exact cellular resolutions of multiplier ideals from arrangement data."""
from .arrangement import DivisorialData, Level, signature_at, subdivide, translate_refine
from .exact import affine_hull_dim, rank_over_rationals, smith_normal_form
from .monomial import (
    LabeledComplex,
    ModuleComplex,
    MonomialModule,
    bs_acyclicity,
    exactness_check,
    free_complex,
    label_complex,
    minimalize,
    module_of,
    restrict_leq,
)
from .multiplier import (
    MonomialIdealInput,
    multiplier_cellular,
    multiplier_howald,
    multiplier_hullfloors,
    skoda_complex,
    summation_report,
)
from .polytope import HalfSpace, Polytope, convex_hull, split, standard_simplex
from .simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    boundary_complex,
    is_rimmed,
    link,
    prop_m_check,
    reduced_homology,
    relative_homology,
)

__version__ = "0.1.0"

__all__ = [
    "DivisorialData",
    "HalfSpace",
    "LabeledComplex",
    "Level",
    "ModuleComplex",
    "MonomialIdealInput",
    "MonomialModule",
    "Polytope",
    "SimplicialComplex",
    "affine_hull_dim",
    "barycentric_subdivision",
    "boundary_complex",
    "bs_acyclicity",
    "convex_hull",
    "exactness_check",
    "free_complex",
    "is_rimmed",
    "label_complex",
    "link",
    "minimalize",
    "module_of",
    "multiplier_cellular",
    "multiplier_howald",
    "multiplier_hullfloors",
    "prop_m_check",
    "rank_over_rationals",
    "reduced_homology",
    "relative_homology",
    "restrict_leq",
    "signature_at",
    "skoda_complex",
    "smith_normal_form",
    "split",
    "standard_simplex",
    "subdivide",
    "summation_report",
    "translate_refine",
]
