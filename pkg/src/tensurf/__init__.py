"""Exact implicitization of bidegree-(a, 1) tensor product surfaces.

The pipeline: a point set on P^1 x P^1 and four generic bidegree-(a, 1)
forms vanishing on it parameterize a surface in P^3; the two free
syzygies of the forms assemble into a matrix of linear forms whose
maximal-minor ratio is the implicit equation.  Everything is computed in
exact rational arithmetic, with modular shortcuts that are always
verified exactly.
"""

from __future__ import annotations

from .bipoly import BiForm, SurfForm, mono_basis, parse_biform, \
    parse_surfform, substitute_surface, surf_mono_list
from .errors import DegeneracyError, PipelineError, StepCapExceeded
from .groebner import ElimPoly, buchberger, eliminate_params
from .ideal_pieces import basis_a1, choose_generic_U, ideal_piece, \
    m_generators, minors_certificate, subspace_from_forms
from .instances import Instance, fixture, fixture_names, \
    instance_from_json, instance_to_json, load_instance, save_instance
from .interpolate import interp_simplex_exact, newton_nodes, \
    simplex_points
from .points import GenericityError, Partition, PointP1P1, PointSet, \
    conjugate, hilbert, hilbert_table, is_generic, partitions, \
    random_generic_points, stabilization_indices, stabilized_hilbert_check
from .syzygy import MuBasis, QPMatrix, graded_kernel, mu_basis, \
    qp_decompose
from .zcomplex import ComplexNu, ImplicitResult, PipelineOutput, \
    build_d1, build_d1_direct, choose_minor_columns, composition_vanishes, \
    compute_d2, det_complex, implicitize, membership_rank_test, \
    perfect_power_screen, verify_implicit

__version__ = "0.1.0"

__all__ = [
    "BiForm", "SurfForm", "mono_basis", "parse_biform", "parse_surfform",
    "substitute_surface", "surf_mono_list",
    "DegeneracyError", "PipelineError", "StepCapExceeded",
    "ElimPoly", "buchberger", "eliminate_params",
    "basis_a1", "choose_generic_U", "ideal_piece", "m_generators",
    "minors_certificate", "subspace_from_forms",
    "Instance", "fixture", "fixture_names", "instance_from_json",
    "instance_to_json", "load_instance", "save_instance",
    "interp_simplex_exact", "newton_nodes", "simplex_points",
    "GenericityError", "Partition", "PointP1P1", "PointSet", "conjugate",
    "hilbert", "hilbert_table", "is_generic", "partitions",
    "random_generic_points", "stabilization_indices",
    "stabilized_hilbert_check",
    "MuBasis", "QPMatrix", "graded_kernel", "mu_basis", "qp_decompose",
    "ComplexNu", "ImplicitResult", "PipelineOutput", "build_d1",
    "build_d1_direct", "choose_minor_columns", "compute_d2",
    "det_complex", "implicitize", "membership_rank_test",
    "composition_vanishes", "perfect_power_screen", "verify_implicit",
    "__version__",
]
