#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "pfw/spectral_grid.hpp"

namespace pfw {

using Point = std::array<double, 3>;

class Shape;
using ShapePtr = std::shared_ptr<const Shape>;

/// Immutable CSG node on the periodic unit box. Distances use the minimal-image
/// displacement, so primitives wrap across the box faces. Negative inside.
class Shape {
 public:
  enum class Kind { ball, torus, cylinder, halfspace, box, union_, xor_ };

  Kind kind() const noexcept { return kind_; }

  /// Signed distance at x; only the first dims coordinates are used.
  double distance(const Point& x, int dims) const;
  /// Phase field value: q(d/eps) for primitives and unions, uA + uB - 2 uA uB for xor.
  double phase(const Point& x, int dims, double eps) const;
  /// Axis-aligned extent [lo, hi] per axis, or empty for unbounded shapes.
  bool bounds(int dims, Point& lo, Point& hi) const;

  friend ShapePtr make_ball(const Point&, double);
  friend ShapePtr make_torus(const Point&, const Point&, double, double);
  friend ShapePtr make_cylinder(const Point&, const Point&, double);
  friend ShapePtr make_halfspace(const Point&, int, int);
  friend ShapePtr make_box(const Point&, const Point&);
  friend ShapePtr make_union(ShapePtr, ShapePtr);
  friend ShapePtr make_xor(ShapePtr, ShapePtr);

 private:
  Kind kind_ = Kind::ball;
  Point center_{};
  Point axis_{};
  double r1_ = 0.0;
  double r2_ = 0.0;
  int normal_axis_ = 0;
  int normal_sign_ = 1;
  ShapePtr a_, b_;
};

/// Circle (2D) or sphere (3D) of radius R.
ShapePtr make_ball(const Point& center, double radius);
/// Torus with unit axis, major radius R and minor radius r.
ShapePtr make_torus(const Point& center, const Point& axis, double major, double minor);
/// Infinite cylinder around the line through point with direction axis.
ShapePtr make_cylinder(const Point& point, const Point& axis, double radius);
/// Periodic half-space with an axis-aligned normal (sign = +1 or -1). Inside is the
/// half of the box behind the plane through point, so interfaces sit at the plane and
/// half a period away from it.
ShapePtr make_halfspace(const Point& point, int normal_axis, int normal_sign);
ShapePtr make_box(const Point& center, const Point& half_extents);
ShapePtr make_union(ShapePtr a, ShapePtr b);
/// Symmetric difference, used to cut a set by a line or plane.
ShapePtr make_xor(ShapePtr a, ShapePtr b);

double signed_distance(const ShapePtr& shape, const Point& x, int dims);

struct InitPair {
  ScalarField u0;
  ScalarField mu0;  // W'(u0)/eps^2 - Laplacian(u0)
  double eps = 0.0;
  std::vector<std::string> warnings;
};

/// Samples u0 = q(d/eps) on the grid and derives mu0 from the constitutive relation.
/// Throws ValidationError when eps < 2 dx.
InitPair init_fields(const ShapePtr& shape, const PeriodicGrid& grid, double eps);

struct SceneParams {
  int dims = 2;
  double eps = 0.0;
  double radius = -1.0;        // scene default when negative
  double minor_radius = -1.0;  // torus only
  double gap = -1.0;           // two-body scenes; 4 eps when negative
  double shift = 0.0;          // added to every coordinate of the scene center
};

std::vector<std::string> builtin_scene_names();
ShapePtr builtin_scene(const std::string& name, const SceneParams& params);

}  // namespace pfw
