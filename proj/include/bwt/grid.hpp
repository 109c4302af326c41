// Uniform Cartesian grid the staggered fields live on.
#pragma once

#include "bwt/common.hpp"

namespace bwt {

struct Grid {
  Index nx = 0;
  Index ny = 0;
  Scalar dx = 0.0;
  Scalar dy = 0.0;
  Vec2 origin = Vec2::Zero();
  Scalar Lx = 0.0;
  Scalar Ly = 0.0;

  // cell centers (0-based cell indices)
  Scalar x_center(Index i) const { return origin.x() + (Scalar(i) + 0.5) * dx; }
  Scalar y_center(Index j) const { return origin.y() + (Scalar(j) + 0.5) * dy; }
  // face coordinates (face f lies at the low edge of cell f)
  Scalar x_face(Index f) const { return origin.x() + Scalar(f) * dx; }
  Scalar y_face(Index f) const { return origin.y() + Scalar(f) * dy; }
};

// Validates nx, ny >= 16 and positive extents.
Grid make_grid(Index nx, Index ny, Scalar Lx, Scalar Ly, Vec2 origin = Vec2::Zero());

}  // namespace bwt
