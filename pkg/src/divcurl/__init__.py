"""Spectral div-curl toolkit on discrete tori.

Riesz transforms, Leray projections, commutators, Hardy/BMO surrogates and
exterior calculus on one- and two-parameter periodic grids, plus a harness
that checks the algebraic identities behind multi-parameter div-curl lemmas
and monitors the corresponding inequalities.
"""
from .commutators import (IdentityViolation, SymbolFunction, check_decomposition_1p,
                          check_decomposition_2p, check_pairing_identity,
                          check_projection_pairing, commutator_projection,
                          commutator_riesz, iterated_commutator)
from .exterior import (BiGradedForm, Form, d_x, d_y, exterior_derivative,
                       make_closed_form, make_uniformly_closed_form, top_coefficient,
                       wedge, wedge_bigraded)
from .fields import MatrixField, VectorField
from .harness import ExperimentConfig, run_experiment, scaling_scan
from .leray import (HypothesisError, curl, divergence, leray_project, leray_project_x,
                    leray_project_y, make_bi_curl_free, make_bi_div_free,
                    make_curl_free_1p, make_uniform_curl_free, make_uniform_div_free,
                    recover_potential_1p)
from .multipliers import (MultiplierSymbol, partial_derivative, riesz, riesz_x, riesz_y)
from .norms import (bmo_norm_1p, duality_h1_estimate, h1_norm_1p, h1_norm_product,
                    little_bmo_norm, lp_norm, mixed_h1_norm, rect_bmo_norm)
from .torus import ScalarField, Spectrum, TorusGrid, dft, frequency, idft

__version__ = "0.1.0"

__all__ = [
    "BiGradedForm",
    "ExperimentConfig",
    "Form",
    "HypothesisError",
    "IdentityViolation",
    "MatrixField",
    "MultiplierSymbol",
    "ScalarField",
    "Spectrum",
    "SymbolFunction",
    "TorusGrid",
    "VectorField",
    "bmo_norm_1p",
    "check_decomposition_1p",
    "check_decomposition_2p",
    "check_pairing_identity",
    "check_projection_pairing",
    "commutator_projection",
    "commutator_riesz",
    "curl",
    "d_x",
    "d_y",
    "dft",
    "divergence",
    "duality_h1_estimate",
    "exterior_derivative",
    "frequency",
    "h1_norm_1p",
    "h1_norm_product",
    "idft",
    "iterated_commutator",
    "leray_project",
    "leray_project_x",
    "leray_project_y",
    "little_bmo_norm",
    "lp_norm",
    "make_bi_curl_free",
    "make_bi_div_free",
    "make_closed_form",
    "make_curl_free_1p",
    "make_uniform_curl_free",
    "make_uniform_div_free",
    "make_uniformly_closed_form",
    "mixed_h1_norm",
    "partial_derivative",
    "recover_potential_1p",
    "rect_bmo_norm",
    "riesz",
    "riesz_x",
    "riesz_y",
    "run_experiment",
    "scaling_scan",
    "top_coefficient",
    "wedge",
    "wedge_bigraded",
]
