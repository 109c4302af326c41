// Geometric multigrid (V-cycles, red-black Gauss-Seidel smoothing) for the
// cell-centered pressure Poisson problem. Boundary conditions are absorbed
// into per-cell diagonal coefficients with a zero ghost ring, so the sweep
// stencil is uniform:
//   inflow_outflow: Neumann at inlet/top/bottom, Dirichlet p=0 at the outlet
//   periodic: wrap ghosts, compatibility by mean subtraction
// All sweeps are fixed-order; red-black updates only read the opposite
// color, so results are bitwise independent of thread count.
#include <algorithm>
#include <cmath>
#include <vector>

#include "bwt/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bwt {

namespace {

struct Level {
  Index nx = 0, ny = 0;
  Scalar cx = 0.0, cy = 0.0;  // 1/dx^2, 1/dy^2
  Field ap_inv;               // padded, interior valid
  Field phi, b, res;          // padded scratch (phi/b unused on level 0)
};

}  // namespace

struct PoissonSolver::Impl {
  BoundaryMode mode;
  int threads;
  std::vector<Level> levels;

  int nthreads() const {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    return 1;
#endif
  }

  static Field make_padded(Index nx, Index ny) {
    return Field::Zero(nx + 2, ny + 2);
  }

  void build(const Grid& grid) {
    Index nx = grid.nx, ny = grid.ny;
    Scalar dx = grid.dx, dy = grid.dy;
    while (true) {
      Level lv;
      lv.nx = nx;
      lv.ny = ny;
      lv.cx = 1.0 / (dx * dx);
      lv.cy = 1.0 / (dy * dy);
      lv.ap_inv = make_padded(nx, ny);
      lv.phi = make_padded(nx, ny);
      lv.b = make_padded(nx, ny);
      lv.res = make_padded(nx, ny);
      for (Index j = 1; j <= ny; ++j) {
        for (Index i = 1; i <= nx; ++i) {
          Scalar ap;
          if (mode == BoundaryMode::periodic) {
            ap = 2.0 * lv.cx + 2.0 * lv.cy;
          } else {
            const Scalar west = (i == 1) ? 0.0 : 1.0;   // Neumann inlet
            const Scalar east = (i == nx) ? 2.0 : 1.0;  // Dirichlet outlet face
            const Scalar south = (j == 1) ? 0.0 : 1.0;  // free-slip walls
            const Scalar north = (j == ny) ? 0.0 : 1.0;
            ap = lv.cx * (west + east) + lv.cy * (south + north);
          }
          lv.ap_inv(i, j) = 1.0 / ap;
        }
      }
      levels.push_back(std::move(lv));
      if (nx % 2 == 0 && ny % 2 == 0 && nx >= 8 && ny >= 8) {
        nx /= 2;
        ny /= 2;
        dx *= 2.0;
        dy *= 2.0;
      } else {
        break;
      }
    }
  }

  void wrap_ghosts(const Level& lv, Field& f) const {
    const Index nx = lv.nx, ny = lv.ny;
    for (Index j = 1; j <= ny; ++j) {
      f(0, j) = f(nx, j);
      f(nx + 1, j) = f(1, j);
    }
    for (Index i = 0; i <= nx + 1; ++i) {
      f(i, 0) = f(i, ny);
      f(i, ny + 1) = f(i, 1);
    }
  }

  void zero_ghosts(const Level& lv, Field& f) const {
    const Index nx = lv.nx, ny = lv.ny;
    for (Index j = 0; j <= ny + 1; ++j) {
      f(0, j) = 0.0;
      f(nx + 1, j) = 0.0;
    }
    for (Index i = 0; i <= nx + 1; ++i) {
      f(i, 0) = 0.0;
      f(i, ny + 1) = 0.0;
    }
  }

  void smooth(const Level& lv, Field& phi, const Field& b, int sweeps) const {
    const Index nx = lv.nx, ny = lv.ny;
    const Scalar cx = lv.cx, cy = lv.cy;
    const int nt = nthreads();
    for (int s = 0; s < sweeps; ++s) {
      for (int color = 0; color < 2; ++color) {
        if (mode == BoundaryMode::periodic) wrap_ghosts(lv, phi);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
        for (Index j = 1; j <= ny; ++j) {
          const Index i0 = 1 + ((j + color + 1) & 1);
          for (Index i = i0; i <= nx; i += 2) {
            phi(i, j) = (cx * (phi(i - 1, j) + phi(i + 1, j)) +
                         cy * (phi(i, j - 1) + phi(i, j + 1)) - b(i, j)) *
                        lv.ap_inv(i, j);
          }
        }
      }
    }
    (void)nt;
  }

  // r = b - L(phi); returns max-norm. Result written into lv.res when wanted.
  Scalar residual(const Level& lv, Field& phi, const Field& b, Field* out) const {
    const Index nx = lv.nx, ny = lv.ny;
    const Scalar cx = lv.cx, cy = lv.cy;
    if (mode == BoundaryMode::periodic) wrap_ghosts(lv, phi);
    Scalar rmax = 0.0;
    const int nt = nthreads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : rmax) num_threads(nt)
#endif
    for (Index j = 1; j <= ny; ++j) {
      for (Index i = 1; i <= nx; ++i) {
        const Scalar lap = cx * (phi(i - 1, j) + phi(i + 1, j)) +
                           cy * (phi(i, j - 1) + phi(i, j + 1)) -
                           phi(i, j) / lv.ap_inv(i, j);
        const Scalar r = b(i, j) - lap;
        if (out) (*out)(i, j) = r;
        rmax = std::max(rmax, std::abs(r));
      }
    }
    (void)nt;
    return rmax;
  }

  // 2x2 average of the fine residual onto the coarse right-hand side.
  void restrict_residual(const Level& fine, Level& coarse) const {
    for (Index J = 1; J <= coarse.ny; ++J) {
      const Index j = 2 * J - 1;
      for (Index I = 1; I <= coarse.nx; ++I) {
        const Index i = 2 * I - 1;
        coarse.b(I, J) = 0.25 * (fine.res(i, j) + fine.res(i + 1, j) +
                                 fine.res(i, j + 1) + fine.res(i + 1, j + 1));
      }
    }
  }

  // Ghost ring for a coarse correction so bilinear prolongation respects the
  // homogeneous boundary conditions of the error equation.
  void correction_ghosts(const Level& lv, Field& e) const {
    const Index nx = lv.nx, ny = lv.ny;
    if (mode == BoundaryMode::periodic) {
      wrap_ghosts(lv, e);
      // corners needed by the bilinear stencil
      e(0, 0) = e(nx, ny);
      e(nx + 1, 0) = e(1, ny);
      e(0, ny + 1) = e(nx, 1);
      e(nx + 1, ny + 1) = e(1, 1);
      return;
    }
    for (Index j = 1; j <= ny; ++j) {
      e(0, j) = e(1, j);        // Neumann
      e(nx + 1, j) = -e(nx, j); // Dirichlet face
    }
    for (Index i = 0; i <= nx + 1; ++i) {
      e(i, 0) = e(i, 1);
      e(i, ny + 1) = e(i, ny);
    }
  }

  // Bilinear cell-centered prolongation, added into the fine iterate.
  void prolong_add(Level& coarse, const Level& fine, Field& fine_phi) const {
    correction_ghosts(coarse, coarse.phi);
    const int nt = nthreads();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (Index j = 1; j <= fine.ny; ++j) {
      const Index J = (j + 1) / 2;
      const Index Jn = (j % 2 == 1) ? J - 1 : J + 1;
      for (Index i = 1; i <= fine.nx; ++i) {
        const Index I = (i + 1) / 2;
        const Index In = (i % 2 == 1) ? I - 1 : I + 1;
        fine_phi(i, j) += (9.0 * coarse.phi(I, J) + 3.0 * coarse.phi(In, J) +
                           3.0 * coarse.phi(I, Jn) + coarse.phi(In, Jn)) /
                          16.0;
      }
    }
    (void)nt;
  }

  void vcycle(std::size_t k, Field& phi, const Field& b) {
    Level& lv = levels[k];
    if (k + 1 == levels.size()) {
      const int sweeps = std::min<Index>(400, 8 * (lv.nx + lv.ny));
      smooth(lv, phi, b, int(sweeps));
      return;
    }
    smooth(lv, phi, b, 2);
    residual(lv, phi, b, &lv.res);
    Level& next = levels[k + 1];
    restrict_residual(lv, next);
    next.phi.setZero();
    vcycle(k + 1, next.phi, next.b);
    prolong_add(next, lv, phi);
    smooth(lv, phi, b, 2);
  }
};

PoissonSolver::PoissonSolver(const Grid& grid, BoundaryMode mode, int threads)
    : impl_(std::make_unique<Impl>()) {
  impl_->mode = mode;
  impl_->threads = threads;
  impl_->build(grid);
}

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;

PoissonStats PoissonSolver::solve(Field& phi, const Field& b, Scalar abs_threshold,
                                  int max_cycles) {
  Impl& im = *impl_;
  Level& fine = im.levels.front();

  fine.b = b;
  if (im.mode == BoundaryMode::periodic) {
    // compatibility: remove the mean source (serial fixed-order sum)
    Scalar mean = 0.0;
    for (Index j = 1; j <= fine.ny; ++j)
      for (Index i = 1; i <= fine.nx; ++i) mean += fine.b(i, j);
    mean /= Scalar(fine.nx) * Scalar(fine.ny);
    for (Index j = 1; j <= fine.ny; ++j)
      for (Index i = 1; i <= fine.nx; ++i) fine.b(i, j) -= mean;
  } else {
    im.zero_ghosts(fine, phi);
  }

  PoissonStats stats;
  stats.rhs_norm = 0.0;
  for (Index j = 1; j <= fine.ny; ++j)
    for (Index i = 1; i <= fine.nx; ++i)
      stats.rhs_norm = std::max(stats.rhs_norm, std::abs(fine.b(i, j)));

  Scalar best = im.residual(fine, phi, fine.b, nullptr);
  stats.residual_envelope.push_back(best);
  stats.final_residual = best;
  if (best <= abs_threshold) {
    stats.converged = true;
    return stats;
  }

  for (int cycle = 1; cycle <= max_cycles; ++cycle) {
    im.vcycle(0, phi, fine.b);
    const Scalar r = im.residual(fine, phi, fine.b, nullptr);
    best = std::min(best, r);
    stats.residual_envelope.push_back(best);
    stats.iterations = cycle;
    stats.final_residual = r;
    if (r <= abs_threshold) {
      stats.converged = true;
      return stats;
    }
  }
  stats.converged = false;
  return stats;
}

}  // namespace bwt
