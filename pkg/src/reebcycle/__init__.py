"""Reeb spaces of simplicial maps and the top-dimensional cycle built from
fiber classes: construction, cycle check and nontriviality."""
from .algebra import (AbelianGroup, CoefficientModule, IntMatrix, ModuleElement,
                      QuotientLabelModule, in_image, quotient_module, smith_normal_form)
from .complex import (Cochain, Orientation, SimplicialComplex, barycentric_subdivide,
                      build_complex, homology, orient_coherently)
from .cycle import (Labeler, LabelTable, LabeledTopChain, build_cycle, check_cycle,
                    corollary_report, nontriviality)
from .errors import ParseError, PreconditionError
from .fiber import evaluate_cocycle_on_loop, fiber_euler_char, fiber_loop, fiber_over
from .generators import generate
from .maps import SimplicialMap, subdivide_map, validate_map
from .pq import PseudoQuotient, load_pq, pq_verify, reeb_to_pq
from .reeb import ReebComplex, build_reeb, reeb_homology, sweep_oracle

__all__ = [
    "AbelianGroup", "CoefficientModule", "IntMatrix", "ModuleElement", "QuotientLabelModule",
    "in_image", "quotient_module", "smith_normal_form", "Cochain", "Orientation",
    "SimplicialComplex", "barycentric_subdivide", "build_complex", "homology",
    "orient_coherently", "Labeler", "LabelTable", "LabeledTopChain", "build_cycle",
    "check_cycle", "corollary_report", "nontriviality", "ParseError", "PreconditionError",
    "evaluate_cocycle_on_loop", "fiber_euler_char", "fiber_loop", "fiber_over", "generate",
    "SimplicialMap", "subdivide_map", "validate_map", "PseudoQuotient", "load_pq", "pq_verify",
    "reeb_to_pq", "ReebComplex", "build_reeb", "reeb_homology", "sweep_oracle",
]
