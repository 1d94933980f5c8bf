"""Parametrizations of matrix-product states and their symmetries."""

from .families import (OBFamily, ParametrizedFamily, PBFamily, PhiFamily, RhoFamily,
                       make_family, word_products_mod_p)
from .maps import (BoundaryPair, MatrixTuple, as_matrix, gauge_conjugate, gl_action_params,
                   gl_action_state, mat_mul, mat_trace, ob_values, pb_necklace_values, psi_ob,
                   psi_pb)
from .rho import NonGenericError, RhoParams, build_rho_matrices, pb_normal_form, rho
from .traces import (MAX_REDUCE_LENGTH, RealizationError, TraceCoordinates, generator_count,
                     phi_trace, realize_trace_coords, trace_coords, trace_generator_words,
                     trace_label, trace_labels, trace_word_reduce, word_trace)

__all__ = [
    "BoundaryPair", "MAX_REDUCE_LENGTH", "MatrixTuple", "NonGenericError", "OBFamily",
    "PBFamily", "ParametrizedFamily", "PhiFamily", "RealizationError", "RhoFamily", "RhoParams",
    "TraceCoordinates", "as_matrix", "build_rho_matrices", "gauge_conjugate", "generator_count",
    "gl_action_params", "gl_action_state", "make_family", "mat_mul", "mat_trace", "ob_values",
    "pb_necklace_values", "pb_normal_form", "phi_trace", "psi_ob", "psi_pb",
    "realize_trace_coords", "rho", "trace_coords", "trace_generator_words", "trace_label",
    "trace_labels", "trace_word_reduce", "word_products_mod_p", "word_trace",
]
