#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cfm/cfm.hpp"
#include "cfm/geometry.hpp"
#include "cfm/types.hpp"

namespace cfm {

struct FieldValues {
  double hx = 0.0;
  double hy = 0.0;
  double ez = 0.0;

  double operator[](Family f) const { return f == Family::Hx ? hx : (f == Family::Hy ? hy : ez); }
};

struct SourceValues {
  double f1x = 0.0;
  double f1y = 0.0;
  double f2 = 0.0;
};

/// Manufactured solution: per-side closed-form fields and sources on [0,1]^2.
struct Problem {
  std::string id;
  LevelSet level_set;
  Physics physics;
  std::function<FieldValues(Side, double x, double y, double t)> exact;
  std::function<SourceValues(Side, double x, double y, double t)> source;

  /// Exact fields of the side the point lies on.
  FieldValues exact_at(const Point2& p, double t) const { return exact(side_of(level_set, p), p.x(), p.y(), t); }
  /// Plus minus Minus of the exact fields at p.
  FieldValues jump(const Point2& p, double t) const;
};

/// circle, star5, star3, nonsmooth; `smooth` has no interface in the unit square.
Problem make_problem(const std::string& id);
std::vector<std::string> problem_ids();

/// a, b, d from exact trace differences with the given unit normal.
InterfaceJump jump_data(const Problem& problem, const Point2& q, const Point2& normal, double t);
/// Same with the level-set normal at q.
InterfaceJump jump_data(const Problem& problem, const Point2& q, double t);

CorrectionData correction_data(const Problem& problem);

}  // namespace cfm
