"""Chain-level cone pairing engine: models, axioms, classes and traces."""
from .cone import ConePairing, beta_map, cohomology_nondegenerate, cone_complex, dilation_defect
from .lagrangian import (CardyReport, CrossDatum, ExtendedModel, LagrangianDatum, cardy_check,
                         equivariant_class, hexagon_functional, hexagon_kills_coboundaries, hexagon_map,
                         phi_endomorphism, phi_on_cohomology, str_main_terms)
from .model import (AxiomReport, AxiomResult, FloerModel, check_a1, check_a2s, check_a2w, check_a3,
                    check_a4, check_a5, check_a6, check_axioms, from_simplicial)
from .surface import dual_loop_datum, surface_extended_model
from .synthetic import FrobeniusAlgebra, corrupt_star, exterior_bv_model, synthetic
from .tensors import BilinearMap
from .traces import EigenFactor, bullet_supertrace, charpoly, q_refined, refined_supertrace, supertrace, total_euler

__all__ = [
    "AxiomReport", "AxiomResult", "BilinearMap", "CardyReport", "ConePairing", "CrossDatum", "EigenFactor",
    "ExtendedModel", "FloerModel", "FrobeniusAlgebra", "LagrangianDatum", "beta_map", "bullet_supertrace",
    "cardy_check", "charpoly", "check_a1", "check_a2s", "check_a2w", "check_a3", "check_a4", "check_a5",
    "check_a6", "check_axioms", "cohomology_nondegenerate", "cone_complex", "corrupt_star", "dilation_defect",
    "dual_loop_datum", "equivariant_class", "exterior_bv_model", "from_simplicial", "hexagon_functional",
    "hexagon_kills_coboundaries", "hexagon_map", "phi_endomorphism", "phi_on_cohomology", "q_refined",
    "refined_supertrace", "str_main_terms", "supertrace", "surface_extended_model", "synthetic", "total_euler",
]
