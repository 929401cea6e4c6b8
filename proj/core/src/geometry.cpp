#include "pfw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pfw/errors.hpp"
#include "pfw/profiles.hpp"

namespace pfw {

namespace {

double wrap(double d) { return d - std::round(d); }

Point displacement(const Point& x, const Point& c, int dims) {
  Point d{0.0, 0.0, 0.0};
  for (int a = 0; a < dims; ++a) d[a] = wrap(x[a] - c[a]);
  return d;
}

double dot(const Point& a, const Point& b, int dims) {
  double s = 0.0;
  for (int k = 0; k < dims; ++k) s += a[k] * b[k];
  return s;
}

Point normalized(const Point& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(n > 0.0)) throw ValidationError("axis vector must be non-zero");
  return {v[0] / n, v[1] / n, v[2] / n};
}

void require_positive(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError(std::string(what) + " must be positive");
}

}  // namespace

ShapePtr make_ball(const Point& center, double radius) {
  require_positive(radius, "radius");
  auto s = std::make_shared<Shape>();
  s->kind_ = Shape::Kind::ball;
  s->center_ = center;
  s->r1_ = radius;
  return s;
}

ShapePtr make_torus(const Point& center, const Point& axis, double major, double minor) {
  require_positive(major, "torus major radius");
  require_positive(minor, "torus minor radius");
  auto s = std::make_shared<Shape>();
  s->kind_ = Shape::Kind::torus;
  s->center_ = center;
  s->axis_ = normalized(axis);
  s->r1_ = major;
  s->r2_ = minor;
  return s;
}

ShapePtr make_cylinder(const Point& point, const Point& axis, double radius) {
  require_positive(radius, "cylinder radius");
  auto s = std::make_shared<Shape>();
  s->kind_ = Shape::Kind::cylinder;
  s->center_ = point;
  s->axis_ = normalized(axis);
  s->r1_ = radius;
  return s;
}

ShapePtr make_halfspace(const Point& point, int normal_axis, int normal_sign) {
  if (normal_axis < 0 || normal_axis > 2) throw ValidationError("halfspace normal axis must be 0..2");
  if (normal_sign != 1 && normal_sign != -1) throw ValidationError("halfspace normal sign must be +-1");
  auto s = std::make_shared<Shape>();
  s->kind_ = Shape::Kind::halfspace;
  s->center_ = point;
  s->normal_axis_ = normal_axis;
  s->normal_sign_ = normal_sign;
  return s;
}

ShapePtr make_box(const Point& center, const Point& half_extents) {
  auto s = std::make_shared<Shape>();
  s->kind_ = Shape::Kind::box;
  s->center_ = center;
  s->axis_ = half_extents;
  return s;
}

ShapePtr make_union(ShapePtr a, ShapePtr b) {
  if (!a || !b) throw ValidationError("union of null shapes");
  auto s = std::make_shared<Shape>();
  s->kind_ = Shape::Kind::union_;
  s->a_ = std::move(a);
  s->b_ = std::move(b);
  return s;
}

ShapePtr make_xor(ShapePtr a, ShapePtr b) {
  if (!a || !b) throw ValidationError("xor of null shapes");
  auto s = std::make_shared<Shape>();
  s->kind_ = Shape::Kind::xor_;
  s->a_ = std::move(a);
  s->b_ = std::move(b);
  return s;
}

double Shape::distance(const Point& x, int dims) const {
  switch (kind_) {
    case Kind::ball: {
      const Point d = displacement(x, center_, dims);
      return std::sqrt(dot(d, d, dims)) - r1_;
    }
    case Kind::torus: {
      const Point d = displacement(x, center_, dims);
      const double h = dot(d, axis_, dims);
      Point radial{d[0] - h * axis_[0], d[1] - h * axis_[1], d[2] - h * axis_[2]};
      const double rho = std::sqrt(dot(radial, radial, dims));
      return std::hypot(rho - r1_, h) - r2_;
    }
    case Kind::cylinder: {
      const Point d = displacement(x, center_, dims);
      const double h = dot(d, axis_, dims);
      Point radial{d[0] - h * axis_[0], d[1] - h * axis_[1], d[2] - h * axis_[2]};
      return std::sqrt(dot(radial, radial, dims)) - r1_;
    }
    case Kind::halfspace: {
      // s in [-1/2, 1/2): signed offset from the plane along the normal.
      const double s = normal_sign_ * wrap(x[normal_axis_] - center_[normal_axis_]);
      if (s > 0.25) return 0.5 - s;
      if (s < -0.25) return -0.5 - s;
      return s;
    }
    case Kind::box: {
      const Point d = displacement(x, center_, dims);
      double outside = 0.0, inside = -1e300;
      for (int a = 0; a < dims; ++a) {
        const double q = std::abs(d[a]) - axis_[a];
        outside += std::max(q, 0.0) * std::max(q, 0.0);
        inside = std::max(inside, q);
      }
      return std::sqrt(outside) + std::min(inside, 0.0);
    }
    case Kind::union_:
      return std::min(a_->distance(x, dims), b_->distance(x, dims));
    case Kind::xor_: {
      const double da = a_->distance(x, dims);
      const double db = b_->distance(x, dims);
      return std::min(std::max(da, -db), std::max(db, -da));
    }
  }
  return 0.0;
}

double Shape::phase(const Point& x, int dims, double eps) const {
  if (kind_ == Kind::xor_) {
    const double ua = a_->phase(x, dims, eps);
    const double ub = b_->phase(x, dims, eps);
    return ua + ub - 2.0 * ua * ub;
  }
  return profile_q(distance(x, dims) / eps, 0);
}

bool Shape::bounds(int dims, Point& lo, Point& hi) const {
  switch (kind_) {
    case Kind::ball:
      for (int a = 0; a < dims; ++a) {
        lo[a] = center_[a] - r1_;
        hi[a] = center_[a] + r1_;
      }
      return true;
    case Kind::torus:
      for (int a = 0; a < dims; ++a) {
        lo[a] = center_[a] - r1_ - r2_;
        hi[a] = center_[a] + r1_ + r2_;
      }
      return true;
    case Kind::box:
      for (int a = 0; a < dims; ++a) {
        lo[a] = center_[a] - axis_[a];
        hi[a] = center_[a] + axis_[a];
      }
      return true;
    case Kind::union_: {
      Point la{}, ha{}, lb{}, hb{};
      if (!a_->bounds(dims, la, ha) || !b_->bounds(dims, lb, hb)) return false;
      for (int a = 0; a < dims; ++a) {
        lo[a] = std::min(la[a], lb[a]);
        hi[a] = std::max(ha[a], hb[a]);
      }
      return true;
    }
    default:
      return false;
  }
}

double signed_distance(const ShapePtr& shape, const Point& x, int dims) {
  if (!shape) throw ValidationError("null shape");
  return shape->distance(x, dims);
}

InitPair init_fields(const ShapePtr& shape, const PeriodicGrid& grid, double eps) {
  if (!shape) throw ValidationError("null shape");
  if (!(eps >= 2.0 * grid.spacing()))
    throw ValidationError("eps must be at least 2 dx to resolve the interface");
  InitPair out;
  out.eps = eps;
  out.u0 = ScalarField(grid);
  const int d = grid.dims();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Index3 idx = grid.unravel(n);
    const Point x{grid.coordinate(idx[0]), grid.coordinate(idx[1]), grid.coordinate(idx[2])};
    out.u0[n] = shape->phase(x, d, eps);
  }

  const ScalarField lap = spectral_laplacian(out.u0);
  out.mu0 = ScalarField(grid);
  const double inv_e2 = 1.0 / (eps * eps);
  for (std::size_t n = 0; n < grid.size(); ++n) out.mu0[n] = well(out.u0[n], 1) * inv_e2 - lap[n];

  Point lo{}, hi{};
  if (shape->bounds(d, lo, hi)) {
    const double margin = 4.0 * eps;
    for (int a = 0; a < d; ++a) {
      if (lo[a] < margin || hi[a] > 1.0 - margin) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "shape extent [%.4g, %.4g] on axis %d is closer than 4 eps = %.4g to the box faces",
                      lo[a], hi[a], a, margin);
        out.warnings.emplace_back(buf);
      }
    }
  }
  return out;
}

std::vector<std::string> builtin_scene_names() {
  return {"circle", "two_circles", "two_tangent_circles", "circle_cut_by_line", "torus", "two_spheres",
          "two_cylinders", "cube_cut_by_plane", "cross", "slab"};
}

ShapePtr builtin_scene(const std::string& name, const SceneParams& p) {
  auto need_dims = [&](int d) {
    if (p.dims != d)
      throw ValidationError("scene '" + name + "' needs dims = " + std::to_string(d) + ", got " +
                            std::to_string(p.dims));
  };
  const double c = 0.5 + p.shift;
  const Point center{c, c, c};
  const double R = p.radius > 0.0 ? p.radius : 0.15;

  if (name == "circle") {
    need_dims(2);
    return make_ball(center, R);
  }
  if (name == "two_circles" || name == "two_tangent_circles" || name == "two_spheres") {
    need_dims(name == "two_spheres" ? 3 : 2);
    double gap = p.gap >= 0.0 ? p.gap : 4.0 * p.eps;
    if (name == "two_tangent_circles") gap = 0.0;
    const double off = R + 0.5 * gap;
    return make_union(make_ball({c - off, c, c}, R), make_ball({c + off, c, c}, R));
  }
  if (name == "circle_cut_by_line") {
    need_dims(2);
    return make_xor(make_ball(center, R), make_halfspace(center, 1, 1));
  }
  if (name == "torus") {
    need_dims(3);
    const double major = p.radius > 0.0 ? p.radius : 0.25;
    const double minor = p.minor_radius > 0.0 ? p.minor_radius : 0.1;
    return make_torus(center, {0.0, 0.0, 1.0}, major, minor);
  }
  if (name == "two_cylinders") {
    need_dims(3);
    const double gap = p.gap >= 0.0 ? p.gap : 4.0 * p.eps;
    const double off = R + 0.5 * gap;
    return make_union(make_cylinder({c - off, c, c}, {0.0, 0.0, 1.0}, R),
                      make_cylinder({c + off, c, c}, {0.0, 0.0, 1.0}, R));
  }
  if (name == "cube_cut_by_plane") {
    need_dims(3);
    return make_xor(make_box(center, {R, R, R}), make_halfspace(center, 2, 1));
  }
  if (name == "cross") {
    need_dims(2);
    // {x > c} xor {y < c}: the phase is close to 1 in the quadrants x>c,y>c and x<c,y<c.
    return make_xor(make_halfspace(center, 0, -1), make_halfspace(center, 1, 1));
  }
  if (name == "slab") {
    // Flat interfaces at 1/4 + shift and 3/4 + shift along axis 0, phase close to 1 between them.
    return make_halfspace({0.25 + p.shift, 0.25 + p.shift, 0.25 + p.shift}, 0, -1);
  }
  throw ValidationError("unknown scene '" + name + "'");
}

}  // namespace pfw
