#include "bwt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bwt {

namespace {

constexpr Scalar kHuge = std::numeric_limits<Scalar>::max();

// Signed distance from a point in the first quadrant to an axis-aligned
// ellipse with semi-axes a >= b > 0. Nearest-point solve on the standard
// root function F(s) = (a x / (s + a^2))^2 + (b y / (s + b^2))^2 - 1,
// which is strictly decreasing on (-b^2, inf); bisection-safeguarded
// Newton keeps it robust for interior points near the evolute.
Scalar ellipse_quadrant_sdf(Scalar a, Scalar b, Scalar x, Scalar y) {
  const Scalar tiny = 1e-14 * a;
  if (y <= tiny) {
    // On the major axis the nearest point is either the vertex (a, 0) or,
    // inside the evolute cusp, the off-axis foot.
    const Scalar cusp = (a * a - b * b) / a;
    if (x >= cusp) return x - a;
    const Scalar cx = a * a * x / (a * a - b * b);
    const Scalar cy = b * std::sqrt(std::max<Scalar>(0.0, 1.0 - (cx / a) * (cx / a)));
    return -std::hypot(x - cx, cy);
  }
  if (x <= tiny) {
    // Minor axis: nearest boundary point is (0, b) for a >= b.
    return y - b;
  }

  const Scalar ax = a * x;
  const Scalar by = b * y;
  auto F = [&](Scalar s) {
    const Scalar tx = ax / (s + a * a);
    const Scalar ty = by / (s + b * b);
    return tx * tx + ty * ty - 1.0;
  };
  auto dF = [&](Scalar s) {
    const Scalar tx = ax / (s + a * a);
    const Scalar ty = by / (s + b * b);
    return -2.0 * (tx * tx / (s + a * a) + ty * ty / (s + b * b));
  };

  // F(-b^2 + b*y) >= 0 always, so it brackets from below; expand upward
  // until F < 0.
  Scalar lo = -b * b + by;
  Scalar hi = std::max(lo + a * a, a * std::hypot(x, y));
  while (F(hi) > 0.0) hi = 2.0 * hi + a * a;

  Scalar s = 0.5 * (lo + hi);
  if (F(0.0) > 0.0) s = std::max(s, 0.0);  // outside: s >= 0
  for (int it = 0; it < 64; ++it) {
    const Scalar f = F(s);
    if (f > 0.0) lo = s; else hi = s;
    const Scalar d = dF(s);
    Scalar next = (d != 0.0) ? s - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-10 * std::max<Scalar>(1.0, std::abs(s))) {
      s = next;
      break;
    }
    s = next;
  }

  const Scalar cx = a * a * x / (s + a * a);
  const Scalar cy = b * b * y / (s + b * b);
  const Scalar dist = std::hypot(x - cx, y - cy);
  const Scalar inside = (x / a) * (x / a) + (y / b) * (y / b) - 1.0;
  return inside < 0.0 ? -dist : dist;
}

Scalar ellipse_sdf(const Shape& e, Vec2 p) {
  const Scalar a = 0.5 * e.long_diameter;
  const Scalar b = 0.5 * e.short_diameter;
  const Scalar c = std::cos(e.orientation);
  const Scalar s = std::sin(e.orientation);
  const Vec2 d = p - e.center;
  // into the ellipse frame (long axis along +x), then first quadrant
  const Scalar lx = std::abs(c * d.x() + s * d.y());
  const Scalar ly = std::abs(-s * d.x() + c * d.y());
  if (a == b) return std::hypot(lx, ly) - a;
  return ellipse_quadrant_sdf(a, b, lx, ly);
}

// Half-extent of a shape along a unit direction n (support radius).
Scalar half_extent(const Shape& shape, Vec2 n) {
  switch (shape.kind) {
    case ShapeKind::circle:
      return 0.5 * shape.diameter;
    case ShapeKind::ellipse: {
      const Scalar a = 0.5 * shape.long_diameter;
      const Scalar b = 0.5 * shape.short_diameter;
      const Vec2 e_long(std::cos(shape.orientation), std::sin(shape.orientation));
      const Vec2 e_short(-e_long.y(), e_long.x());
      const Scalar pa = a * n.dot(e_long);
      const Scalar pb = b * n.dot(e_short);
      return std::hypot(pa, pb);
    }
    case ShapeKind::composite:
      return 0.0;  // handled by caller over parts
  }
  return 0.0;
}

}  // namespace

const char* to_string(DesignTag tag) {
  switch (tag) {
    case DesignTag::ID: return "ID";
    case DesignTag::MD1: return "MD1";
    case DesignTag::MD2: return "MD2";
  }
  return "?";
}

DesignTag parse_design(const std::string& name) {
  if (name == "ID") return DesignTag::ID;
  if (name == "MD1") return DesignTag::MD1;
  if (name == "MD2") return DesignTag::MD2;
  fail(ErrorCode::unknown_design, "no design variant named '" + name + "'");
}

bool Shape::empty() const {
  if (kind == ShapeKind::composite) {
    return std::all_of(parts.begin(), parts.end(),
                       [](const Shape& s) { return s.empty(); });
  }
  return false;
}

Shape circle(Vec2 center, Scalar diameter) {
  if (!(diameter > 0.0))
    fail(ErrorCode::invalid_geometry, "circle diameter must be positive");
  Shape s;
  s.kind = ShapeKind::circle;
  s.center = center;
  s.diameter = diameter;
  s.frontal_width = diameter;
  return s;
}

Shape ellipse(Vec2 center, Scalar short_diameter, Scalar long_diameter,
              Scalar orientation) {
  if (!(short_diameter > 0.0) || !(long_diameter >= short_diameter))
    fail(ErrorCode::invalid_geometry,
         "ellipse requires 0 < short_diameter <= long_diameter");
  Shape s;
  s.kind = ShapeKind::ellipse;
  s.center = center;
  s.short_diameter = short_diameter;
  s.long_diameter = long_diameter;
  s.orientation = orientation;
  s.frontal_width = frontal_width(s, Vec2(1.0, 0.0));
  return s;
}

Shape composite(std::vector<Shape> parts) {
  Shape s;
  s.kind = ShapeKind::composite;
  s.parts = std::move(parts);
  if (!s.parts.empty()) {
    Vec2 c = Vec2::Zero();
    for (const Shape& p : s.parts) c += p.center;
    s.center = c / Scalar(s.parts.size());
  }
  s.frontal_width = frontal_width(s, Vec2(1.0, 0.0));
  return s;
}

Shape design(DesignTag tag) {
  switch (tag) {
    case DesignTag::ID: return circle(Vec2::Zero(), 0.10);
    case DesignTag::MD1: return circle(Vec2::Zero(), 0.05);
    case DesignTag::MD2: return ellipse(Vec2::Zero(), 0.05, 0.15, 0.0);
  }
  fail(ErrorCode::unknown_design, "invalid design tag");
}

Shape translated(const Shape& shape, Vec2 new_center) {
  Shape s = shape;
  const Vec2 shift = new_center - shape.center;
  s.center = new_center;
  for (Shape& p : s.parts) p = translated(p, p.center + shift);
  return s;
}

Scalar sdf_eval(const Shape& shape, Vec2 point) {
  switch (shape.kind) {
    case ShapeKind::circle:
      return (point - shape.center).norm() - 0.5 * shape.diameter;
    case ShapeKind::ellipse:
      return ellipse_sdf(shape, point);
    case ShapeKind::composite: {
      Scalar d = kHuge;
      for (const Shape& p : shape.parts) d = std::min(d, sdf_eval(p, point));
      return d;
    }
  }
  return kHuge;
}

Scalar frontal_width(const Shape& shape, Vec2 flow_direction) {
  const Vec2 n(-flow_direction.y(), flow_direction.x());  // cross-stream
  if (shape.kind == ShapeKind::composite) {
    if (shape.parts.empty()) return 0.0;
    Scalar lo = kHuge, hi = -kHuge;
    for (const Shape& p : shape.parts) {
      const Scalar c = n.dot(p.center);
      const Scalar h = (p.kind == ShapeKind::composite)
                           ? 0.5 * frontal_width(p, flow_direction)
                           : half_extent(p, n);
      lo = std::min(lo, c - h);
      hi = std::max(hi, c + h);
    }
    return hi - lo;
  }
  return 2.0 * half_extent(shape, n);
}

Scalar shape_area(const Shape& shape) {
  switch (shape.kind) {
    case ShapeKind::circle: {
      const Scalar r = 0.5 * shape.diameter;
      return M_PI * r * r;
    }
    case ShapeKind::ellipse:
      return M_PI * 0.25 * shape.short_diameter * shape.long_diameter;
    case ShapeKind::composite: {
      Scalar a = 0.0;
      for (const Shape& p : shape.parts) a += shape_area(p);
      return a;
    }
  }
  return 0.0;
}

Vec2 bbox_min(const Shape& shape) {
  if (shape.kind == ShapeKind::composite) {
    Vec2 lo(kHuge, kHuge);
    for (const Shape& p : shape.parts) lo = lo.cwiseMin(bbox_min(p));
    return shape.parts.empty() ? shape.center : lo;
  }
  const Scalar hx = half_extent(shape, Vec2(1.0, 0.0));
  const Scalar hy = half_extent(shape, Vec2(0.0, 1.0));
  return shape.center - Vec2(hx, hy);
}

Vec2 bbox_max(const Shape& shape) {
  if (shape.kind == ShapeKind::composite) {
    Vec2 hi(-kHuge, -kHuge);
    for (const Shape& p : shape.parts) hi = hi.cwiseMax(bbox_max(p));
    return shape.parts.empty() ? shape.center : hi;
  }
  const Scalar hx = half_extent(shape, Vec2(1.0, 0.0));
  const Scalar hy = half_extent(shape, Vec2(0.0, 1.0));
  return shape.center + Vec2(hx, hy);
}

SolidMask rasterize(const Shape& shape, const Grid& grid) {
  SolidMask mask;
  mask.nx = grid.nx;
  mask.ny = grid.ny;
  mask.solid = BoolField::Constant(grid.nx, grid.ny, false);
  mask.fraction = Field::Zero(grid.nx, grid.ny);
  if (shape.empty()) return mask;

  const Vec2 lo = bbox_min(shape);
  const Vec2 hi = bbox_max(shape);
  const Vec2 dom_lo = grid.origin;
  const Vec2 dom_hi = grid.origin + Vec2(grid.Lx, grid.Ly);
  if (!(lo.x() > dom_lo.x() && lo.y() > dom_lo.y() && hi.x() < dom_hi.x() &&
        hi.y() < dom_hi.y()))
    fail(ErrorCode::geometry_outside_domain,
         "shape bounding box must lie strictly inside the grid domain");

  // only cells overlapping the bounding box can be solid
  const Index i0 = std::max<Index>(0, Index((lo.x() - grid.origin.x()) / grid.dx) - 1);
  const Index i1 = std::min<Index>(grid.nx - 1, Index((hi.x() - grid.origin.x()) / grid.dx) + 1);
  const Index j0 = std::max<Index>(0, Index((lo.y() - grid.origin.y()) / grid.dy) - 1);
  const Index j1 = std::min<Index>(grid.ny - 1, Index((hi.y() - grid.origin.y()) / grid.dy) + 1);

  constexpr int kSub = 4;  // 4x4 sub-cell sampling
  for (Index j = j0; j <= j1; ++j) {
    for (Index i = i0; i <= i1; ++i) {
      int inside = 0;
      for (int sj = 0; sj < kSub; ++sj) {
        const Scalar y = grid.y_face(j) + (sj + 0.5) * grid.dy / kSub;
        for (int si = 0; si < kSub; ++si) {
          const Scalar x = grid.x_face(i) + (si + 0.5) * grid.dx / kSub;
          if (sdf_eval(shape, Vec2(x, y)) < 0.0) ++inside;
        }
      }
      const Scalar frac = Scalar(inside) / Scalar(kSub * kSub);
      mask.fraction(i, j) = frac;
      mask.solid(i, j) = frac > 0.5;
    }
  }

  if (shape_area(shape) > 0.0 && !mask.any_solid())
    fail(ErrorCode::geometry_resolution,
         "grid too coarse to resolve the shape: no cell is majority solid");
  return mask;
}

Grid make_grid(Index nx, Index ny, Scalar Lx, Scalar Ly, Vec2 origin) {
  if (nx < 16 || ny < 16)
    fail(ErrorCode::config, "grid needs nx, ny >= 16");
  if (!(Lx > 0.0) || !(Ly > 0.0))
    fail(ErrorCode::config, "grid needs positive extents");
  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.Lx = Lx;
  g.Ly = Ly;
  g.dx = Lx / Scalar(nx);
  g.dy = Ly / Scalar(ny);
  g.origin = origin;
  return g;
}

}  // namespace bwt
