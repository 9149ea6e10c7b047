#pragma once

#include <array>
#include <cmath>
#include <variant>
#include <vector>

#include "cfm/types.hpp"

namespace cfm {

/// Implicit interface description. eval >= 0 on the Plus side.
class LevelSet {
 public:
  struct Circle {
    Point2 center;
    double radius;
  };
  /// rho^2 - r(theta)^2 with r(theta) = r0 + amplitude * sin(omega * theta).
  struct Star {
    Point2 center;
    double r0;
    double amplitude;
    double omega;
  };
  /// Three mutually tangent circles; the curvilinear triangle they enclose is the Minus side.
  struct TriCircle {
    std::array<Point2, 3> centers;
    double radius;
  };
  /// Signed half-plane normal . (p - origin). Used for flat and absent interfaces.
  struct HalfPlane {
    Point2 origin;
    Point2 normal;
  };
  using Shape = std::variant<Circle, Star, TriCircle, HalfPlane>;

  explicit LevelSet(Shape shape) : shape_(std::move(shape)) {}

  static LevelSet circle(const Point2& center, double radius) { return LevelSet(Circle{center, radius}); }
  static LevelSet star(const Point2& center, double r0, double amplitude, double omega) {
    return LevelSet(Star{center, r0, amplitude, omega});
  }
  /// Circles of the given radius centred at (cx + r, cy), (cx - r, cy) and (cx, cy - sqrt(3) r).
  static LevelSet tri_circle(const Point2& top_cusp, double radius);
  static LevelSet half_plane(const Point2& origin, const Point2& normal) {
    return LevelSet(HalfPlane{origin, normal});
  }

  double eval(const Point2& p) const;
  Point2 grad(const Point2& p) const;
  /// Central differences of the analytic gradient.
  Eigen::Matrix2d hessian(const Point2& p) const;

  const Shape& shape() const { return shape_; }

  /// Radius of star interfaces at polar angle theta.
  static double star_radius(const Star& s, double theta);

 private:
  Shape shape_;
};

double level_set_eval(const LevelSet& ls, const Point2& p);
Side side_of(const LevelSet& ls, const Point2& p);

/// Point of the interface nearest to p. Throws NonConvergence when no root can be located.
Point2 closest_point(const LevelSet& ls, const Point2& p);

/// grad / |grad|; throws DegenerateGradient below 1e-14.
Point2 unit_normal(const LevelSet& ls, const Point2& q);

struct Square {
  Point2 center;
  double side;

  double half() const { return 0.5 * side; }
  bool contains(const Point2& p, double slack = 0.0) const {
    return std::abs(p.x() - center.x()) <= half() + slack && std::abs(p.y() - center.y()) <= half() + slack;
  }
};

struct InterfaceQuadPoint {
  Point2 point;
  double weight;  // arclength measure
  Point2 normal;  // unit, toward Plus
};

struct InterfaceSegment {
  Point2 start;
  Point2 end;
  std::vector<InterfaceQuadPoint> points;
};

/// Samples the level set on a 32x32 sub-grid of the square, joins the crossings into
/// polylines and lays n_q projected Gauss points on each piece.
std::vector<InterfaceSegment> interface_segments(const LevelSet& ls, const Square& square, int n_q = 4);

}  // namespace cfm
