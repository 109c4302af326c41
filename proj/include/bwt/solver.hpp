// Staggered-grid fractional-step solver for 2D incompressible flow past a
// rasterized body, with direct-forcing body enforcement and force recording.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bwt/common.hpp"
#include "bwt/config.hpp"
#include "bwt/geometry.hpp"
#include "bwt/grid.hpp"

namespace bwt {

// MAC layout with a one-cell ghost ring:
//   u(i, j): x-face f = i-1 at x = origin.x + f*dx, row j at y = (j-0.5)*dy;
//            valid i in [1, nx+1], j in [1, ny]; dims (nx+3) x (ny+2)
//   v(i, j): cell column i at x = (i-0.5)*dx, y-face f = j-1 at y = f*dy;
//            valid i in [1, nx], j in [1, ny+1]; dims (nx+2) x (ny+3)
//   p(i, j): cell centers, valid i in [1, nx], j in [1, ny]; dims (nx+2) x (ny+2)
struct FlowState {
  Grid grid;
  Field u, v, p;
  SolidMask mask;          // interior cell flags/fractions
  BoolField u_solid;       // face-center-inside-body flags, u layout
  BoolField v_solid;       // v layout
  Scalar time = 0.0;
  long step_index = 0;
};

struct ForceSample {
  Scalar t;
  Scalar fx;  // streamwise force per unit span (drag direction)
  Scalar fy;  // cross-stream force per unit span (lift direction)
};

struct ForceHistory {
  Scalar dt_sample = 0.0;
  std::vector<ForceSample> samples;
};

struct PoissonStats {
  int iterations = 0;
  Scalar final_residual = 0.0;     // max-norm of b - L(phi)
  Scalar rhs_norm = 0.0;
  bool converged = true;
  std::vector<Scalar> residual_envelope;  // best residual after each cycle
};

struct StepResult {
  Scalar dt = 0.0;
  Scalar fx = 0.0;
  Scalar fy = 0.0;
  Scalar max_divergence = 0.0;  // max |div u| over fluid cells after projection
  Scalar max_velocity = 0.0;    // max |u|,|v| component after projection
  PoissonStats poisson;
};

struct RunStats {
  long steps = 0;
  Scalar dt = 0.0;
  Scalar max_divergence = 0.0;         // max over all steps
  Scalar divergence_bound = 0.0;       // poisson_tolerance * U / dx
  Scalar max_velocity = 0.0;
  long poisson_iterations = 0;
};

struct RunResult {
  ForceHistory history;
  FlowState final_state;
  RunStats stats;
};

struct RunHooks {
  std::function<void(const FlowState&)> on_snapshot;
  std::function<void(long step, long total, Scalar time)> on_progress;
};

// Inlet profile of the paper_shear mode: slope*U*(y + offset), clamped at 0.
Scalar inlet_profile(Scalar U, Scalar y, const SimulationConfig& cfg);

// Zero pressure, columnwise inlet velocity, zero v; solid faces zeroed.
FlowState initialize(const Grid& grid, const Shape& shape, const SimulationConfig& cfg);

// dt = cfl * min(dx/|u|max, dy/|v|max, 0.25*min(dx,dy)^2/nu).
Scalar cfl_dt(const FlowState& state, const SimulationConfig& cfg);

void apply_boundary_conditions(FlowState& state, const SimulationConfig& cfg);

// u* = u + dt*(-(u.grad)u + nu lap u), blended central/upwind advection.
void predict_velocity(const FlowState& state, Scalar dt, const SimulationConfig& cfg,
                      Field& u_star, Field& v_star);

class PoissonSolver;

// Solves lap(phi) = (rho/dt) div(u*), corrects the velocity, stores phi as
// the pressure. Returns solve stats; the step result's divergence is the
// post-correction max |div u| over fluid cells.
StepResult project(Field& u_star, Field& v_star, FlowState& state, Scalar dt,
                   const SimulationConfig& cfg, PoissonSolver& poisson);

// Zeroes velocity at solid faces; returns the fluid-on-body force per unit
// span implied by the removed momentum.
Vec2 enforce_body(FlowState& state, Scalar dt, const SimulationConfig& cfg);

// One full step at the current CFL timestep.
StepResult step(FlowState& state, const SimulationConfig& cfg);

// Fixed-timestep variant used by run(); dt must satisfy the CFL bound.
StepResult step_with_dt(FlowState& state, const SimulationConfig& cfg, Scalar dt,
                        PoissonSolver& poisson, Field& u_star, Field& v_star);

// Advances to t_end with a fixed timestep chosen from the inlet speed with
// overshoot headroom, sampling forces every sample_every steps.
RunResult run(const Shape& shape, const SimulationConfig& cfg, const Grid& grid,
              const RunHooks* hooks = nullptr);

// Cell-centered vorticity dv/dx - du/dy; zero in solid cells.
Field vorticity(const FlowState& state);

// Cell-centered divergence (diagnostic).
Field divergence(const FlowState& state);

Scalar max_abs_divergence_fluid(const FlowState& state);

// Geometric multigrid with red-black Gauss-Seidel smoothing for the pressure
// Poisson problem. One instance per run; reuse across steps warm-starts from
// the previous pressure.
class PoissonSolver {
 public:
  PoissonSolver(const Grid& grid, BoundaryMode mode, int threads = 0);
  ~PoissonSolver();
  PoissonSolver(PoissonSolver&&) noexcept;
  PoissonSolver& operator=(PoissonSolver&&) noexcept;

  // phi: (nx+2)x(ny+2) padded field, warm-start contents are used and the
  // ghost ring is managed internally. b: same dims, interior valid.
  // Stops when max-norm residual <= abs_threshold.
  PoissonStats solve(Field& phi, const Field& b, Scalar abs_threshold,
                     int max_cycles);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bwt
