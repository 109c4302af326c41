// Physical and numerical parameters for one flow case.
#pragma once

#include "bwt/common.hpp"

namespace bwt {

enum class InletMode { uniform, paper_shear };
enum class BoundaryMode { inflow_outflow, periodic };

struct SimulationConfig {
  Scalar U = 1.0;                  // inlet reference speed (m/s)
  Scalar nu = 1.5e-5;              // kinematic viscosity (m^2/s)
  InletMode inlet_mode = InletMode::uniform;
  Scalar shear_slope_factor = 5.0; // u(y) = slope * U * (y + offset), 0.5/0.1 per m
  Scalar shear_offset = 0.05;      // m
  Scalar rho = 1.0;                // density; enters only normalization
  Scalar cfl = 0.35;               // Courant number
  Scalar t_end = 0.0;              // simulated seconds; <= 0 means caller decides
  int sample_every = 0;            // steps between force samples; 0 = auto
  Scalar poisson_tolerance = 1e-6;
  int poisson_max_iterations = 10000;
  Scalar advection_blend = 0.9;    // central fraction; remainder first-order upwind
  BoundaryMode boundary = BoundaryMode::inflow_outflow;
  Scalar re_surrogate = 0.0;       // > 0: rescale nu so U*D/nu equals this
  Scalar perturbation = 0.02;      // solenoidal seed amplitude x U for bluff runs
  Scalar snapshot_every = 0.0;     // seconds; 0 with a snapshot hook = final only
  Scalar velocity_headroom = 2.0;  // fixed-dt speed cap as multiple of inlet max
  int threads = 0;                 // worker threads for grid loops; 0 = library default
};

// Throws config errors on violated invariants (cfl is only required to be
// positive: values above 1 are accepted so instability paths stay reachable).
void validate(const SimulationConfig& cfg);

}  // namespace bwt
