"""Finite-dimensional models of normed quasi *-algebras and their tensor products."""
from .algebra import QuasiPair, StarAlgebraModel, UnitNormWarning, unitize
from .bilinear import DEFAULT_SEED
from .crossnorms import (TensorElement, CrossNormResult, check_compatibility_sandwich, check_uniformity,
                         crossnorm_value, hilbert_norm, injective_norm, projective_norm)
from .instances import bundled_suite, generate_instance
from .lp_models import make_lp_pair, refinement_family
from .norms import NormSpec
from .representability import (FormModel, FunctionalModel, check_representable, fully_representable_check,
                               gns, positive_cone_membership, semisimple_check)
from .tensor_construction import TensorQuasiPair, build_tensor_pair
from .tensor_reps import (RepresentationModel, full_rep_transfer_harness, phi_omega_build, tensor_form,
                          theorem_SS_harness)

__version__ = "0.1.0"

__all__ = [
    "QuasiPair", "StarAlgebraModel", "UnitNormWarning", "unitize", "DEFAULT_SEED",
    "TensorElement", "CrossNormResult", "check_compatibility_sandwich", "check_uniformity",
    "crossnorm_value", "hilbert_norm", "injective_norm", "projective_norm",
    "bundled_suite", "generate_instance", "make_lp_pair", "refinement_family", "NormSpec",
    "FormModel", "FunctionalModel", "check_representable", "fully_representable_check", "gns",
    "positive_cone_membership", "semisimple_check", "TensorQuasiPair", "build_tensor_pair",
    "RepresentationModel", "full_rep_transfer_harness", "phi_omega_build", "tensor_form",
    "theorem_SS_harness",
]
