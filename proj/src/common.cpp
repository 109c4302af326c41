#include "bwt/common.hpp"

namespace bwt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_geometry: return "invalid-geometry";
    case ErrorCode::unknown_design: return "unknown-design";
    case ErrorCode::geometry_outside_domain: return "geometry-outside-domain";
    case ErrorCode::geometry_resolution: return "geometry-resolution";
    case ErrorCode::degenerate_timestep: return "degenerate-timestep";
    case ErrorCode::numerical_blowup: return "numerical-blowup";
    case ErrorCode::poisson_divergence: return "poisson-divergence";
    case ErrorCode::empty_run: return "empty-run";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::sampling: return "sampling";
    case ErrorCode::normalization: return "normalization";
    case ErrorCode::division_domain: return "division-domain";
    case ErrorCode::extrapolation: return "extrapolation";
    case ErrorCode::campaign: return "campaign";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "error";
}

}  // namespace bwt
