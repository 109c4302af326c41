// Rigid 2D cross-sections as signed-distance functions, the three mast
// design variants, and rasterization onto the solver grid.
#pragma once

#include <string>
#include <vector>

#include "bwt/common.hpp"
#include "bwt/grid.hpp"

namespace bwt {

enum class ShapeKind { circle, ellipse, composite };

enum class DesignTag { ID, MD1, MD2 };

const char* to_string(DesignTag tag);
DesignTag parse_design(const std::string& name);  // unknown-design on bad tag

// A rigid cross-section. Signed distance is negative inside, positive
// outside, zero on the boundary; exact for circles, iterative nearest-point
// for ellipses. Values are immutable after construction.
struct Shape {
  ShapeKind kind = ShapeKind::composite;
  Vec2 center = Vec2::Zero();
  // circle
  Scalar diameter = 0.0;
  // ellipse: semi-axis a along the long axis, b along the short one;
  // orientation is the angle of the long axis relative to +x.
  Scalar short_diameter = 0.0;
  Scalar long_diameter = 0.0;
  Scalar orientation = 0.0;
  // composite (union of parts)
  std::vector<Shape> parts;
  // cached cross-stream extent for +x flow
  Scalar frontal_width = 0.0;

  bool empty() const;
};

Shape circle(Vec2 center, Scalar diameter);
Shape ellipse(Vec2 center, Scalar short_diameter, Scalar long_diameter,
              Scalar orientation);
Shape composite(std::vector<Shape> parts);
Shape design(DesignTag tag);
Shape translated(const Shape& shape, Vec2 new_center);

Scalar sdf_eval(const Shape& shape, Vec2 point);
Scalar frontal_width(const Shape& shape, Vec2 flow_direction);
Scalar shape_area(const Shape& shape);  // analytic; composite assumes disjoint parts
Vec2 bbox_min(const Shape& shape);
Vec2 bbox_max(const Shape& shape);

// Per-cell solid flags and volume fractions on the interior of a grid.
struct SolidMask {
  Index nx = 0;
  Index ny = 0;
  BoolField solid;     // nx x ny, true iff fraction > 0.5
  Field fraction;      // nx x ny, solid volume fraction in [0,1]

  bool any_solid() const { return solid.size() > 0 && solid.any(); }
  Scalar solid_area(Scalar dx, Scalar dy) const {
    return fraction.size() == 0 ? 0.0 : fraction.sum() * dx * dy;
  }
};

// Volume fractions from 4x4 sub-cell SDF sampling. The shape's bounding box
// must lie strictly inside the grid domain.
SolidMask rasterize(const Shape& shape, const Grid& grid);

}  // namespace bwt
