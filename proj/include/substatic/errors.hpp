#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace substatic {

enum class ErrorCode {
  invalid_argument,
  invalid_dimension,
  no_horizon,
  non_regular_horizon,
  out_of_interval,
  quadrature_nonconvergence,
  singular_matrix,
  nonconvergence,
  cg_nonconvergence,
  degenerate_triangle,
  invalid_mesh,
  step_too_large,
  wrong_geometry,
  residual_too_large,
  nonpositive_denominator,
  nonpositive_mean_curvature,
  unsupported_surface,
  config_parse,
  insufficient_levels,
  io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the toolkit; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace substatic
