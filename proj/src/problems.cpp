#include "cfm/problems.hpp"

#include <cmath>
#include <numbers>

namespace cfm {

namespace {

constexpr double kPi = std::numbers::pi;

FieldValues circle_fields(Side side, double x, double y, double t) {
  const double sx = std::sin(2 * kPi * x), cx = std::cos(2 * kPi * x);
  const double sy = std::sin(2 * kPi * y), cy = std::cos(2 * kPi * y);
  const double st = std::sin(2 * kPi * t), ct = std::cos(2 * kPi * t);
  if (side == Side::Plus) return {sx * sy * st, cx * cy * st, sx * cy * ct};
  return {-2 * sx * sy * st + 5, -2 * cx * cy * st + 3, -2 * sx * cy * ct + 2};
}

SourceValues circle_sources(Side side, double x, double y, double t) {
  const double st = std::sin(2 * kPi * t), ct = std::cos(2 * kPi * t);
  const double s = std::sin(2 * kPi * x) * std::cos(2 * kPi * y);
  if (side == Side::Plus) return {0.0, 0.0, (2 * kPi * st + ct) * s};
  return {0.0, 0.0, -(4 * kPi * st + 2 * ct) * s + 2};
}

FieldValues star5_fields(Side side, double x, double y, double t) {
  const double st = std::sin(2 * kPi * t), ct = std::cos(2 * kPi * t);
  if (side == Side::Plus) {
    return {std::sin(4 * kPi * x) * std::sin(4 * kPi * y) * ct, std::cos(4 * kPi * x) * std::cos(4 * kPi * y) * ct,
            0.0};
  }
  const double e = std::exp(-x * y);
  return {(-x * e + 2) * st, (y * e + 3) * st, std::sin(2 * kPi * x * y) * ct};
}

SourceValues star5_sources(Side side, double x, double y, double t) {
  const double st = std::sin(2 * kPi * t), ct = std::cos(2 * kPi * t);
  if (side == Side::Plus) {
    const double s4x = std::sin(4 * kPi * x), c4x = std::cos(4 * kPi * x);
    const double s4y = std::sin(4 * kPi * y), c4y = std::cos(4 * kPi * y);
    return {-2 * kPi * s4x * s4y * st, -2 * kPi * c4x * c4y * st, 8 * kPi * s4x * c4y * ct};
  }
  const double e = std::exp(-x * y);
  const double sxy = std::sin(2 * kPi * x * y), cxy = std::cos(2 * kPi * x * y);
  return {(2 * kPi * (-x * e + 2) + 2 * kPi * x * cxy) * ct, 2 * kPi * (y * e - y * cxy + 3) * ct,
          (-2 * kPi * sxy + y * y * e + x * x * e) * st + sxy * ct};
}

}  // namespace

FieldValues Problem::jump(const Point2& p, double t) const {
  const FieldValues plus = exact(Side::Plus, p.x(), p.y(), t);
  const FieldValues minus = exact(Side::Minus, p.x(), p.y(), t);
  return {plus.hx - minus.hx, plus.hy - minus.hy, plus.ez - minus.ez};
}

std::vector<std::string> problem_ids() { return {"circle", "star5", "star3", "nonsmooth", "smooth"}; }

Problem make_problem(const std::string& id) {
  const Point2 mid(0.5, 0.5);
  if (id == "circle") return {id, LevelSet::circle(mid, 0.25), Physics{}, circle_fields, circle_sources};
  if (id == "star5") return {id, LevelSet::star(mid, 0.25, 0.05, 5.0), Physics{}, star5_fields, star5_sources};
  if (id == "star3")
    return {id, LevelSet::star(Point2(0.55, 0.55), 0.25, 0.15, 3.0), Physics{}, circle_fields, circle_sources};
  if (id == "nonsmooth")
    return {id, LevelSet::tri_circle(Point2(0.5, 0.9), std::sqrt(3.0) / 2.0), Physics{}, circle_fields,
            circle_sources};
  if (id == "smooth")
    return {id, LevelSet::half_plane(Point2(0.0, -10.0), Point2(0.0, 1.0)), Physics{}, circle_fields,
            circle_sources};
  throw Error(ErrorCode::UnknownProblem, "unknown problem '" + id + "'");
}

InterfaceJump jump_data(const Problem& problem, const Point2& q, const Point2& n, double t) {
  const FieldValues j = problem.jump(q, t);
  return {j.ez, n.x() * j.hy - n.y() * j.hx, problem.physics.mu * (n.x() * j.hx + n.y() * j.hy)};
}

InterfaceJump jump_data(const Problem& problem, const Point2& q, double t) {
  return jump_data(problem, q, unit_normal(problem.level_set, q), t);
}

CorrectionData correction_data(const Problem& problem) {
  CorrectionData data;
  data.source_jump = [problem](const Point2& x, double t) {
    const SourceValues p = problem.source(Side::Plus, x.x(), x.y(), t);
    const SourceValues m = problem.source(Side::Minus, x.x(), x.y(), t);
    return SourceJump{p.f1x - m.f1x, p.f1y - m.f1y, p.f2 - m.f2};
  };
  data.interface_jump = [problem](const Point2& q, const Point2& n, double t) { return jump_data(problem, q, n, t); };
  return data;
}

}  // namespace cfm
