#include "bwt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bwt {

namespace {

int thread_count(const SimulationConfig& cfg) {
#ifdef _OPENMP
  return cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#else
  (void)cfg;
  return 1;
#endif
}

Scalar inlet_value(Scalar U, Scalar y, const SimulationConfig& cfg) {
  if (cfg.inlet_mode == InletMode::uniform) return U;
  return std::max<Scalar>(0.0, cfg.shear_slope_factor * U * (y + cfg.shear_offset));
}

void apply_velocity_bcs(Field& u, Field& v, const Grid& g,
                        const SimulationConfig& cfg) {
  const Index nx = g.nx, ny = g.ny;
  if (cfg.boundary == BoundaryMode::periodic) {
    for (Index j = 1; j <= ny; ++j) {
      u(nx + 1, j) = u(1, j);  // duplicated face
      u(0, j) = u(nx, j);
      u(nx + 2, j) = u(2, j);
    }
    for (Index i = 0; i <= nx + 2; ++i) {
      u(i, 0) = u(i, ny);
      u(i, ny + 1) = u(i, 1);
    }
    for (Index j = 1; j <= ny; ++j) {
      v(0, j) = v(nx, j);
      v(nx + 1, j) = v(1, j);
    }
    for (Index i = 0; i <= nx + 1; ++i) {
      v(i, ny + 1) = v(i, 1);  // duplicated face
      v(i, 0) = v(i, ny);
      v(i, ny + 2) = v(i, 2);
    }
    return;
  }

  // inlet: Dirichlet u from the profile, v = 0 at the boundary plane
  for (Index j = 0; j <= ny + 1; ++j) {
    const Scalar uin = inlet_value(cfg.U, g.y_center(j - 1), cfg);
    u(0, j) = uin;
    u(1, j) = uin;
    u(nx + 1, j) = u(nx, j);  // outlet: zero-gradient
    u(nx + 2, j) = u(nx + 1, j);
  }
  for (Index j = 0; j <= ny + 2; ++j) {
    v(0, j) = -v(1, j);
    v(nx + 1, j) = v(nx, j);
  }
  // top/bottom: free slip (zero normal velocity, zero-gradient tangential)
  for (Index i = 0; i <= nx + 1; ++i) {
    v(i, 1) = 0.0;
    v(i, ny + 1) = 0.0;
    v(i, 0) = 0.0;
    v(i, ny + 2) = 0.0;
  }
  for (Index i = 0; i <= nx + 2; ++i) {
    u(i, 0) = u(i, 1);
    u(i, ny + 1) = u(i, ny);
  }
}

void apply_pressure_ghosts(Field& p, const Grid& g, const SimulationConfig& cfg) {
  const Index nx = g.nx, ny = g.ny;
  if (cfg.boundary == BoundaryMode::periodic) {
    for (Index j = 1; j <= ny; ++j) {
      p(0, j) = p(nx, j);
      p(nx + 1, j) = p(1, j);
    }
    for (Index i = 0; i <= nx + 1; ++i) {
      p(i, 0) = p(i, ny);
      p(i, ny + 1) = p(i, 1);
    }
    return;
  }
  for (Index j = 1; j <= ny; ++j) {
    p(0, j) = p(1, j);
    p(nx + 1, j) = -p(nx, j);  // outlet held at zero pressure
  }
  for (Index i = 0; i <= nx + 1; ++i) {
    p(i, 0) = p(i, 1);
    p(i, ny + 1) = p(i, ny);
  }
}

// max |div|, max velocity magnitude component, over interior cells;
// divergence restricted to fluid cells.
struct FieldDiag {
  Scalar max_div = 0.0;
  Scalar max_vel = 0.0;
};

FieldDiag field_diagnostics(const FlowState& s) {
  const Grid& g = s.grid;
  const Scalar idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  FieldDiag d;
  for (Index j = 1; j <= g.ny; ++j) {
    for (Index i = 1; i <= g.nx; ++i) {
      const Scalar div = (s.u(i + 1, j) - s.u(i, j)) * idx +
                         (s.v(i, j + 1) - s.v(i, j)) * idy;
      if (!s.mask.solid(i - 1, j - 1)) d.max_div = std::max(d.max_div, std::abs(div));
      d.max_vel = std::max({d.max_vel, std::abs(s.u(i, j)), std::abs(s.v(i, j))});
    }
  }
  return d;
}

// Deterministic solenoidal seed: a gaussian streamfunction bump slightly
// off-axis behind the body. Symmetric masks at shedding Reynolds numbers
// otherwise take very long to destabilize.
void seed_asymmetry(FlowState& s, const Shape& shape, const SimulationConfig& cfg) {
  const Grid& g = s.grid;
  const Scalar D = shape.frontal_width;
  if (!(D > 0.0)) return;
  const Scalar sigma = 0.75 * D;
  const Scalar x0 = shape.center.x() + 1.2 * D;
  const Scalar y0 = shape.center.y() + 0.6 * D;
  const Scalar A = cfg.perturbation * cfg.U * sigma;

  Field psi = Field::Zero(g.nx + 1, g.ny + 1);  // nodes
  for (Index j = 0; j <= g.ny; ++j) {
    const Scalar y = g.y_face(j);
    for (Index i = 0; i <= g.nx; ++i) {
      const Scalar x = g.x_face(i);
      const Scalar r2 = ((x - x0) * (x - x0) + (y - y0) * (y - y0)) / (2.0 * sigma * sigma);
      psi(i, j) = (r2 < 40.0) ? A * std::exp(-r2) : 0.0;
    }
  }
  for (Index j = 1; j <= g.ny; ++j)
    for (Index i = 1; i <= g.nx + 1; ++i)
      s.u(i, j) += (psi(i - 1, j) - psi(i - 1, j - 1)) / g.dy;
  for (Index j = 1; j <= g.ny + 1; ++j)
    for (Index i = 1; i <= g.nx; ++i)
      s.v(i, j) -= (psi(i, j - 1) - psi(i - 1, j - 1)) / g.dx;
  // keep the body interior quiescent
  for (Index j = 1; j <= g.ny; ++j)
    for (Index i = 1; i <= g.nx + 1; ++i)
      if (s.u_solid(i, j)) s.u(i, j) = 0.0;
  for (Index j = 1; j <= g.ny + 1; ++j)
    for (Index i = 1; i <= g.nx; ++i)
      if (s.v_solid(i, j)) s.v(i, j) = 0.0;
}

}  // namespace

void validate(const SimulationConfig& cfg) {
  if (!(cfg.U > 0.0)) fail(ErrorCode::config, "U must be positive");
  if (!(cfg.nu > 0.0)) fail(ErrorCode::config, "nu must be positive");
  if (!(cfg.rho > 0.0)) fail(ErrorCode::config, "rho must be positive");
  if (!(cfg.cfl > 0.0)) fail(ErrorCode::config, "cfl must be positive");
  if (!(cfg.poisson_tolerance > 0.0))
    fail(ErrorCode::config, "poisson tolerance must be positive");
  if (cfg.poisson_max_iterations < 1)
    fail(ErrorCode::config, "poisson iteration cap must be at least 1");
  if (!(cfg.advection_blend >= 0.0 && cfg.advection_blend <= 1.0))
    fail(ErrorCode::config, "advection blend must lie in [0,1]");
  if (!(cfg.velocity_headroom >= 1.0))
    fail(ErrorCode::config, "velocity headroom must be >= 1");
  if (cfg.sample_every < 0) fail(ErrorCode::config, "sample_every must be >= 0");
  if (!(cfg.perturbation >= 0.0))
    fail(ErrorCode::config, "perturbation amplitude must be >= 0");
}

Scalar inlet_profile(Scalar U, Scalar y, const SimulationConfig& cfg) {
  return std::max<Scalar>(0.0, cfg.shear_slope_factor * U * (y + cfg.shear_offset));
}

FlowState initialize(const Grid& grid, const Shape& shape, const SimulationConfig& cfg) {
  validate(cfg);
  FlowState s;
  s.grid = grid;
  s.mask = rasterize(shape, grid);
  s.u = Field::Zero(grid.nx + 3, grid.ny + 2);
  s.v = Field::Zero(grid.nx + 2, grid.ny + 3);
  s.p = Field::Zero(grid.nx + 2, grid.ny + 2);
  s.u_solid = BoolField::Constant(grid.nx + 3, grid.ny + 2, false);
  s.v_solid = BoolField::Constant(grid.nx + 2, grid.ny + 3, false);

  if (!shape.empty()) {
    for (Index j = 1; j <= grid.ny; ++j)
      for (Index i = 1; i <= grid.nx + 1; ++i)
        s.u_solid(i, j) =
            sdf_eval(shape, Vec2(grid.x_face(i - 1), grid.y_center(j - 1))) < 0.0;
    for (Index j = 1; j <= grid.ny + 1; ++j)
      for (Index i = 1; i <= grid.nx; ++i)
        s.v_solid(i, j) =
            sdf_eval(shape, Vec2(grid.x_center(i - 1), grid.y_face(j - 1))) < 0.0;
  }

  for (Index j = 0; j <= grid.ny + 1; ++j) {
    const Scalar uin = inlet_value(cfg.U, grid.y_center(j - 1), cfg);
    for (Index i = 0; i <= grid.nx + 2; ++i) s.u(i, j) = uin;
  }
  for (Index j = 1; j <= grid.ny; ++j)
    for (Index i = 1; i <= grid.nx + 1; ++i)
      if (s.u_solid(i, j)) s.u(i, j) = 0.0;

  apply_boundary_conditions(s, cfg);
  return s;
}

Scalar cfl_dt(const FlowState& state, const SimulationConfig& cfg) {
  const Grid& g = state.grid;
  Scalar umax = 0.0, vmax = 0.0;
  for (Index j = 1; j <= g.ny; ++j)
    for (Index i = 1; i <= g.nx + 1; ++i)
      umax = std::max(umax, std::abs(state.u(i, j)));
  for (Index j = 1; j <= g.ny + 1; ++j)
    for (Index i = 1; i <= g.nx; ++i)
      vmax = std::max(vmax, std::abs(state.v(i, j)));
  if (!std::isfinite(umax) || !std::isfinite(vmax))
    fail(ErrorCode::numerical_blowup, "non-finite velocity field in cfl_dt");

  Scalar bound = std::numeric_limits<Scalar>::max();
  bool any = false;
  if (umax > 0.0) { bound = std::min(bound, g.dx / umax); any = true; }
  if (vmax > 0.0) { bound = std::min(bound, g.dy / vmax); any = true; }
  if (cfg.nu > 0.0) {
    const Scalar h = std::min(g.dx, g.dy);
    bound = std::min(bound, 0.25 * h * h / cfg.nu);
    any = true;
  }
  if (!any)
    fail(ErrorCode::degenerate_timestep,
         "zero velocity everywhere and no diffusion bound");
  return cfg.cfl * bound;
}

void apply_boundary_conditions(FlowState& state, const SimulationConfig& cfg) {
  apply_velocity_bcs(state.u, state.v, state.grid, cfg);
  apply_pressure_ghosts(state.p, state.grid, cfg);
}

void predict_velocity(const FlowState& state, Scalar dt, const SimulationConfig& cfg,
                      Field& u_star, Field& v_star) {
  const Grid& g = state.grid;
  const Index nx = g.nx, ny = g.ny;
  const Scalar idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  const Scalar i2dx = 0.5 * idx, i2dy = 0.5 * idy;
  const Scalar idx2 = idx * idx, idy2 = idy * idy;
  const Scalar nu = cfg.nu;
  const Scalar th = cfg.advection_blend, uw1 = 1.0 - th;
  const bool periodic = cfg.boundary == BoundaryMode::periodic;
  const Field& u = state.u;
  const Field& v = state.v;

  u_star = u;
  v_star = v;

  const Index iu0 = periodic ? 1 : 2;  // inlet face is Dirichlet
  const Index iu1 = nx;                // outlet face set by extrapolation
  const int nt = thread_count(cfg);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
  for (Index j = 1; j <= ny; ++j) {
    for (Index i = iu0; i <= iu1; ++i) {
      const Scalar uc = u(i, j);
      const Scalar ue = u(i + 1, j), uw = u(i - 1, j);
      const Scalar un = u(i, j + 1), us = u(i, j - 1);
      const Scalar vb = 0.25 * (v(i - 1, j) + v(i, j) + v(i - 1, j + 1) + v(i, j + 1));
      const Scalar ddx_c = (ue - uw) * i2dx;
      const Scalar ddx_u = uc >= 0.0 ? (uc - uw) * idx : (ue - uc) * idx;
      const Scalar ddy_c = (un - us) * i2dy;
      const Scalar ddy_u = vb >= 0.0 ? (uc - us) * idy : (un - uc) * idy;
      const Scalar adv = uc * (th * ddx_c + uw1 * ddx_u) + vb * (th * ddy_c + uw1 * ddy_u);
      const Scalar lap = (ue - 2.0 * uc + uw) * idx2 + (un - 2.0 * uc + us) * idy2;
      u_star(i, j) = uc + dt * (nu * lap - adv);
    }
  }

  const Index jv0 = periodic ? 1 : 2;  // wall faces are Dirichlet
  const Index jv1 = ny;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
  for (Index j = jv0; j <= jv1; ++j) {
    for (Index i = 1; i <= nx; ++i) {
      const Scalar vc = v(i, j);
      const Scalar ve = v(i + 1, j), vw = v(i - 1, j);
      const Scalar vn = v(i, j + 1), vs = v(i, j - 1);
      const Scalar ub = 0.25 * (u(i, j) + u(i + 1, j) + u(i, j - 1) + u(i + 1, j - 1));
      const Scalar ddx_c = (ve - vw) * i2dx;
      const Scalar ddx_u = ub >= 0.0 ? (vc - vw) * idx : (ve - vc) * idx;
      const Scalar ddy_c = (vn - vs) * i2dy;
      const Scalar ddy_u = vc >= 0.0 ? (vc - vs) * idy : (vn - vc) * idy;
      const Scalar adv = ub * (th * ddx_c + uw1 * ddx_u) + vc * (th * ddy_c + uw1 * ddy_u);
      const Scalar lap = (ve - 2.0 * vc + vw) * idx2 + (vn - 2.0 * vc + vs) * idy2;
      v_star(i, j) = vc + dt * (nu * lap - adv);
    }
  }
  (void)nt;

  if (!u_star.allFinite() || !v_star.allFinite())
    fail(ErrorCode::numerical_blowup, "predictor produced non-finite velocities");
}

StepResult project(Field& u_star, Field& v_star, FlowState& state, Scalar dt,
                   const SimulationConfig& cfg, PoissonSolver& poisson) {
  const Grid& g = state.grid;
  const Index nx = g.nx, ny = g.ny;
  const Scalar idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  const Scalar rho_dt = cfg.rho / dt;
  const Scalar dt_rho = dt / cfg.rho;
  const bool periodic = cfg.boundary == BoundaryMode::periodic;

  apply_velocity_bcs(u_star, v_star, g, cfg);

  Field b = Field::Zero(nx + 2, ny + 2);
  for (Index j = 1; j <= ny; ++j)
    for (Index i = 1; i <= nx; ++i)
      b(i, j) = rho_dt * ((u_star(i + 1, j) - u_star(i, j)) * idx +
                          (v_star(i, j + 1) - v_star(i, j)) * idy);
  if (!b.allFinite())
    fail(ErrorCode::numerical_blowup, "non-finite divergence source");

  // meet both the relative-residual contract and the divergence bound
  // tol * U / dx expressed on the residual scale
  Scalar bmax = 0.0;
  for (Index j = 1; j <= ny; ++j)
    for (Index i = 1; i <= nx; ++i) bmax = std::max(bmax, std::abs(b(i, j)));
  const Scalar div_cap = rho_dt * cfg.U / std::min(g.dx, g.dy);
  const Scalar threshold = cfg.poisson_tolerance * std::min(bmax, div_cap);

  StepResult result;
  result.poisson = poisson.solve(state.p, b, threshold, cfg.poisson_max_iterations);
  if (!result.poisson.converged) {
    std::ostringstream msg;
    msg << "pressure solve hit the iteration cap (" << cfg.poisson_max_iterations
        << " cycles), final residual " << result.poisson.final_residual;
    fail(ErrorCode::poisson_divergence, msg.str());
  }

  Field& p = state.p;
  Field& u = state.u;
  Field& v = state.v;
  u = u_star;
  v = v_star;

  if (periodic) {
    apply_pressure_ghosts(p, g, cfg);
    for (Index j = 1; j <= ny; ++j)
      for (Index i = 1; i <= nx; ++i)
        u(i, j) -= dt_rho * (p(i, j) - p(i - 1, j)) * idx;
    for (Index j = 1; j <= ny; ++j)
      for (Index i = 1; i <= nx; ++i)
        v(i, j) -= dt_rho * (p(i, j) - p(i, j - 1)) * idy;
    for (Index j = 1; j <= ny; ++j) u(nx + 1, j) = u(1, j);
    for (Index i = 1; i <= nx; ++i) v(i, ny + 1) = v(i, 1);
  } else {
    for (Index j = 1; j <= ny; ++j) {
      for (Index i = 2; i <= nx; ++i)
        u(i, j) -= dt_rho * (p(i, j) - p(i - 1, j)) * idx;
      // outlet face: Dirichlet p = 0 gives ghost -p(nx,j)
      u(nx + 1, j) -= dt_rho * (-2.0 * p(nx, j)) * idx;
    }
    for (Index j = 2; j <= ny; ++j)
      for (Index i = 1; i <= nx; ++i)
        v(i, j) -= dt_rho * (p(i, j) - p(i, j - 1)) * idy;
    apply_pressure_ghosts(p, g, cfg);
  }

  const FieldDiag diag = field_diagnostics(state);
  result.dt = dt;
  result.max_divergence = diag.max_div;
  result.max_velocity = diag.max_vel;
  return result;
}

Vec2 enforce_body(FlowState& state, Scalar dt, const SimulationConfig& cfg) {
  const Grid& g = state.grid;
  const Scalar coeff = cfg.rho * g.dx * g.dy / dt;
  Scalar fx = 0.0, fy = 0.0;
  for (Index j = 1; j <= g.ny; ++j)
    for (Index i = 1; i <= g.nx + 1; ++i)
      if (state.u_solid(i, j)) {
        fx += coeff * state.u(i, j);
        state.u(i, j) = 0.0;
      }
  for (Index j = 1; j <= g.ny + 1; ++j)
    for (Index i = 1; i <= g.nx; ++i)
      if (state.v_solid(i, j)) {
        fy += coeff * state.v(i, j);
        state.v(i, j) = 0.0;
      }
  return Vec2(fx, fy);
}

StepResult step_with_dt(FlowState& state, const SimulationConfig& cfg, Scalar dt,
                        PoissonSolver& poisson, Field& u_star, Field& v_star) {
  apply_boundary_conditions(state, cfg);
  predict_velocity(state, dt, cfg, u_star, v_star);
  StepResult r = project(u_star, v_star, state, dt, cfg, poisson);
  const Vec2 f = enforce_body(state, dt, cfg);
  r.fx = f.x();
  r.fy = f.y();
  state.time += dt;
  state.step_index += 1;
  if (!std::isfinite(r.max_velocity))
    fail(ErrorCode::numerical_blowup, "non-finite velocity after projection");
  return r;
}

StepResult step(FlowState& state, const SimulationConfig& cfg) {
  const Scalar dt = cfl_dt(state, cfg);
  PoissonSolver poisson(state.grid, cfg.boundary, cfg.threads);
  Field u_star, v_star;
  return step_with_dt(state, cfg, dt, poisson, u_star, v_star);
}

RunResult run(const Shape& shape, const SimulationConfig& cfg, const Grid& grid,
              const RunHooks* hooks) {
  if (!(cfg.t_end > 0.0))
    fail(ErrorCode::empty_run, "t_end must be positive for a run");
  validate(cfg);

  SimulationConfig ecfg = cfg;
  const Scalar D = shape.frontal_width;
  if (cfg.re_surrogate > 0.0) {
    if (!(D > 0.0))
      fail(ErrorCode::config, "surrogate Reynolds mode needs a body with frontal width");
    ecfg.nu = cfg.U * D / cfg.re_surrogate;
  }

  FlowState state = initialize(grid, shape, ecfg);
  if (state.mask.any_solid() && ecfg.perturbation > 0.0)
    seed_asymmetry(state, shape, ecfg);

  // Fixed timestep from the inlet scale with overshoot headroom, so force
  // samples stay uniformly spaced for the whole run.
  Scalar u0max = 0.0;
  for (Index j = 1; j <= grid.ny; ++j)
    u0max = std::max(u0max, inlet_value(ecfg.U, grid.y_center(j - 1), ecfg));
  Scalar bound = std::numeric_limits<Scalar>::max();
  bool any = false;
  if (u0max > 0.0) {
    bound = std::min(bound, std::min(grid.dx, grid.dy) / (ecfg.velocity_headroom * u0max));
    any = true;
  }
  if (ecfg.nu > 0.0) {
    const Scalar h = std::min(grid.dx, grid.dy);
    bound = std::min(bound, 0.25 * h * h / ecfg.nu);
    any = true;
  }
  if (!any)
    fail(ErrorCode::degenerate_timestep, "no admissible timestep bound");
  const Scalar dt = ecfg.cfl * bound;

  const long nsteps = long(std::ceil(ecfg.t_end / dt - 1e-9));
  long sample_every = ecfg.sample_every;
  if (sample_every <= 0) {
    const Scalar t_scale = (D > 0.0 ? D : grid.Lx) / ecfg.U;
    sample_every = std::max<long>(1, llround(t_scale / (20.0 * dt)));
  }
  if (nsteps / sample_every < 2) sample_every = std::max<long>(1, nsteps / 2);

  PoissonSolver poisson(grid, ecfg.boundary, ecfg.threads);
  Field u_star, v_star;

  RunResult out;
  out.history.dt_sample = dt * Scalar(sample_every);
  out.stats.dt = dt;
  out.stats.divergence_bound =
      ecfg.poisson_tolerance * ecfg.U / std::min(grid.dx, grid.dy);

  Scalar next_snapshot = ecfg.snapshot_every;
  const long progress_stride = std::max<long>(1, nsteps / 50);

  for (long k = 1; k <= nsteps; ++k) {
    StepResult r;
    try {
      r = step_with_dt(state, ecfg, dt, poisson, u_star, v_star);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::numerical_blowup) {
        std::ostringstream msg;
        msg << e.what() << " [step " << k << ", t=" << (k - 1) * dt
            << " s, last max |velocity| " << out.stats.max_velocity << " m/s]";
        fail(ErrorCode::numerical_blowup, msg.str());
      }
      throw;
    }
    state.time = Scalar(k) * dt;

    out.stats.max_divergence = std::max(out.stats.max_divergence, r.max_divergence);
    out.stats.max_velocity = std::max(out.stats.max_velocity, r.max_velocity);
    out.stats.poisson_iterations += r.poisson.iterations;

    if (k % sample_every == 0)
      out.history.samples.push_back({Scalar(k) * dt, r.fx, r.fy});

    if (hooks && hooks->on_snapshot && ecfg.snapshot_every > 0.0 &&
        state.time + 1e-12 >= next_snapshot) {
      hooks->on_snapshot(state);
      next_snapshot += ecfg.snapshot_every;
    }
    if (hooks && hooks->on_progress && (k % progress_stride == 0 || k == nsteps))
      hooks->on_progress(k, nsteps, state.time);
  }
  out.stats.steps = nsteps;

  if (hooks && hooks->on_snapshot && !(ecfg.snapshot_every > 0.0))
    hooks->on_snapshot(state);

  if (out.history.samples.size() < 2)
    fail(ErrorCode::insufficient_data, "run produced fewer than 2 force samples");

  out.final_state = std::move(state);
  return out;
}

Field vorticity(const FlowState& state) {
  const Grid& g = state.grid;
  const Index nx = g.nx, ny = g.ny;
  const Scalar idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  const Field& u = state.u;
  const Field& v = state.v;

  auto uat = [&](Index i, Index j) {
    return u(std::clamp<Index>(i, 1, nx + 1), std::clamp<Index>(j, 1, ny));
  };
  auto vat = [&](Index i, Index j) {
    return v(std::clamp<Index>(i, 1, nx), std::clamp<Index>(j, 1, ny + 1));
  };
  // corner vorticity at node (i, j), i in 0..nx, j in 0..ny
  auto corner = [&](Index i, Index j) {
    const Scalar dvdx = (vat(i + 1, j + 1) - vat(i, j + 1)) * idx;
    const Scalar dudy = (uat(i + 1, j + 1) - uat(i + 1, j)) * idy;
    return dvdx - dudy;
  };

  Field w = Field::Zero(nx, ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      if (state.mask.solid(i, j)) continue;
      w(i, j) = 0.25 * (corner(i, j) + corner(i + 1, j) + corner(i, j + 1) +
                        corner(i + 1, j + 1));
    }
  return w;
}

Field divergence(const FlowState& state) {
  const Grid& g = state.grid;
  const Scalar idx = 1.0 / g.dx, idy = 1.0 / g.dy;
  Field d = Field::Zero(g.nx, g.ny);
  for (Index j = 1; j <= g.ny; ++j)
    for (Index i = 1; i <= g.nx; ++i)
      d(i - 1, j - 1) = (state.u(i + 1, j) - state.u(i, j)) * idx +
                        (state.v(i, j + 1) - state.v(i, j)) * idy;
  return d;
}

Scalar max_abs_divergence_fluid(const FlowState& state) {
  return field_diagnostics(state).max_div;
}

}  // namespace bwt
