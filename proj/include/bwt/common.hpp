// Shared scalar/field aliases and the error type used across the library.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bwt {

using Scalar = double;
using Vec2 = Eigen::Vector2d;

// 2D fields are dense Eigen arrays indexed (i, j) = (x, y). Column-major
// storage keeps the x index contiguous, so inner loops run over i.
using Field = Eigen::ArrayXXd;
using BoolField = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

enum class ErrorCode {
  invalid_geometry,
  unknown_design,
  geometry_outside_domain,
  geometry_resolution,
  degenerate_timestep,
  numerical_blowup,
  poisson_divergence,
  empty_run,
  insufficient_data,
  sampling,
  normalization,
  division_domain,
  extrapolation,
  campaign,
  config,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bwt
