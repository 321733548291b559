#include "substatic/errors.hpp"

namespace substatic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::no_horizon: return "no-horizon";
    case ErrorCode::non_regular_horizon: return "non-regular-horizon";
    case ErrorCode::out_of_interval: return "out-of-interval";
    case ErrorCode::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case ErrorCode::singular_matrix: return "singular-matrix";
    case ErrorCode::nonconvergence: return "nonconvergence";
    case ErrorCode::cg_nonconvergence: return "cg-nonconvergence";
    case ErrorCode::degenerate_triangle: return "degenerate-triangle";
    case ErrorCode::invalid_mesh: return "invalid-mesh";
    case ErrorCode::step_too_large: return "step-too-large";
    case ErrorCode::wrong_geometry: return "wrong-geometry";
    case ErrorCode::residual_too_large: return "residual-too-large";
    case ErrorCode::nonpositive_denominator: return "nonpositive-denominator";
    case ErrorCode::nonpositive_mean_curvature: return "nonpositive-mean-curvature";
    case ErrorCode::unsupported_surface: return "unsupported-surface";
    case ErrorCode::config_parse: return "config-parse";
    case ErrorCode::insufficient_levels: return "insufficient-levels";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace substatic
