"""coxlab: a workbench for finite-rank Coxeter groups.

Normal forms and fast multiplication for right-angled systems, an exact
budgeted word engine for arbitrary labels, reflection/wall geometry,
self-similar endomorphism tooling, definability probes, affine models and
the rank-doubling right-angled Artin bridge.
"""

from .system import CoxeterSystem, CoxFormatError, INF_CODE
from .words import (
    GroupElement,
    SearchBudgetExceeded,
    ball,
    centralizer,
    cyclic_reduce,
    cyclic_root,
    element_order,
    equals_general,
    generator,
    generators,
    identity,
    is_reflection,
    normalize,
    parse_word,
    render_word,
)
from .walls import (
    canonical_generators,
    conjugating_element,
    enumerate_reflections,
    is_geometric_set,
    reflection_parts,
    wall_distance,
    wall_distance_matrix,
)
from .linrep import (
    exact_reflection_length_spherical,
    fixed_space_codim,
    reflection_length_bounds,
)
from .endo import (
    Endo,
    alpha_p,
    alpha_p_determinant,
    classify,
    complexity_matrix,
    enumerate_clique_maps,
    enumerate_sims,
    identity_endo,
    parse_endo,
    partial_conjugation,
    sim_check,
)
from .formulas import fo_eval, phi_gamma_formula, psi_formula
from .probes import (
    ProbeScopeError,
    ProbeVerificationError,
    delta_2spherical_check,
    domain_check,
    finite_continuation,
    phi_gamma_bounded,
    phi_gamma_check,
    psi_bounded,
    psi_reflection_check,
    rigidity_check,
    unsuperstability_tree,
)
from .affine import (
    AffineElement,
    AffineGroup,
    AffineModelError,
    affine_reflection_length,
    build_affine,
    build_custom,
    epsilon,
    interpret_in_Z,
    kernel_index,
    reflection_length_profile,
)
from .raag import (
    Raag,
    RaagError,
    beta_embed,
    coset_index,
    gamma_plus,
    theta,
    verify_embedding,
)
from .suites import CHECKS, run_suite

__version__ = "0.1.0"

__all__ = [
    "CoxeterSystem",
    "CoxFormatError",
    "INF_CODE",
    "GroupElement",
    "SearchBudgetExceeded",
    "ball",
    "centralizer",
    "cyclic_reduce",
    "cyclic_root",
    "element_order",
    "equals_general",
    "generator",
    "generators",
    "identity",
    "is_reflection",
    "normalize",
    "parse_word",
    "render_word",
    "canonical_generators",
    "conjugating_element",
    "enumerate_reflections",
    "is_geometric_set",
    "reflection_parts",
    "wall_distance",
    "wall_distance_matrix",
    "exact_reflection_length_spherical",
    "fixed_space_codim",
    "reflection_length_bounds",
    "Endo",
    "alpha_p",
    "alpha_p_determinant",
    "classify",
    "complexity_matrix",
    "enumerate_clique_maps",
    "enumerate_sims",
    "identity_endo",
    "parse_endo",
    "partial_conjugation",
    "sim_check",
    "fo_eval",
    "phi_gamma_formula",
    "psi_formula",
    "ProbeScopeError",
    "ProbeVerificationError",
    "delta_2spherical_check",
    "domain_check",
    "finite_continuation",
    "phi_gamma_bounded",
    "phi_gamma_check",
    "psi_bounded",
    "psi_reflection_check",
    "rigidity_check",
    "unsuperstability_tree",
    "AffineElement",
    "AffineGroup",
    "AffineModelError",
    "affine_reflection_length",
    "build_affine",
    "build_custom",
    "epsilon",
    "interpret_in_Z",
    "kernel_index",
    "reflection_length_profile",
    "Raag",
    "RaagError",
    "beta_embed",
    "coset_index",
    "gamma_plus",
    "theta",
    "verify_embedding",
    "CHECKS",
    "run_suite",
    "__version__",
]
