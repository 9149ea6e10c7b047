#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cfm/problems.hpp"

using namespace cfm;

namespace {

constexpr double kPi = std::numbers::pi;

// Eighth-order central difference.
double d8(const std::function<double(double)>& f, double x) {
  constexpr double h = 1e-2;
  constexpr double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += w[k] * (f(x + (k + 1) * h) - f(x - (k + 1) * h));
  return s / h;
}

struct Residual {
  double r1x, r1y, r2, div;
};

Residual pde_residual(const Problem& p, Side side, double x, double y, double t) {
  const Physics& ph = p.physics;
  auto field = [&](Family f) {
    return [&, f](double xx, double yy, double tt) { return p.exact(side, xx, yy, tt)[f]; };
  };
  auto dx = [&](Family f) { return d8([&](double s) { return field(f)(s, y, t); }, x); };
  auto dy = [&](Family f) { return d8([&](double s) { return field(f)(x, s, t); }, y); };
  auto dt = [&](Family f) { return d8([&](double s) { return field(f)(x, y, s); }, t); };
  const SourceValues src = p.source(side, x, y, t);
  const double ez = p.exact(side, x, y, t).ez;
  return {ph.mu * dt(Family::Hx) + dy(Family::Ez) - src.f1x, ph.mu * dt(Family::Hy) - dx(Family::Ez) - src.f1y,
          ph.eps * dt(Family::Ez) - dx(Family::Hy) + dy(Family::Hx) + ph.sigma * ez - src.f2,
          dx(Family::Hx) + dy(Family::Hy)};
}

}  // namespace

TEST(Problems, ExactFieldsSatisfyPdes) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& id : problem_ids()) {
    const Problem p = make_problem(id);
    for (Side side : {Side::Plus, Side::Minus}) {
      double worst = 0.0;
      for (int s = 0; s < 1000; ++s) {
        const Residual r = pde_residual(p, side, u(rng), u(rng), u(rng));
        worst = std::max({worst, std::abs(r.r1x), std::abs(r.r1y), std::abs(r.r2), std::abs(r.div)});
      }
      EXPECT_LE(worst, 1e-8) << id << (side == Side::Plus ? " plus" : " minus");
    }
  }
}

TEST(Problems, PrintedFormulas) {
  const Problem circle = make_problem("circle");
  const double x = 0.31, y = 0.77;
  EXPECT_DOUBLE_EQ(circle.exact(Side::Plus, x, y, 0.0).ez, std::sin(2 * kPi * x) * std::cos(2 * kPi * y));
  EXPECT_EQ(circle.exact(Side::Minus, x, y, 0.0).hx, 5.0);
  const Problem star5 = make_problem("star5");
  const double t = 0.13;
  EXPECT_DOUBLE_EQ(star5.source(Side::Plus, x, y, t).f2,
                   8 * kPi * std::sin(4 * kPi * x) * std::cos(4 * kPi * y) * std::cos(2 * kPi * t));
  EXPECT_EQ(star5.exact(Side::Plus, x, y, t).ez, 0.0);
}

TEST(Problems, GeometryParameters) {
  const auto& star3 = std::get<LevelSet::Star>(make_problem("star3").level_set.shape());
  EXPECT_EQ(star3.center, Point2(0.55, 0.55));
  EXPECT_EQ(star3.omega, 3.0);
  const auto& star5 = std::get<LevelSet::Star>(make_problem("star5").level_set.shape());
  EXPECT_EQ(star5.amplitude, 0.05);
  EXPECT_EQ(star5.r0, 0.25);
  const Problem ns = make_problem("nonsmooth");
  // Top cusp where two circles touch.
  EXPECT_NEAR(level_set_eval(ns.level_set, {0.5, 0.9}), 0.0, 1e-14);
}

TEST(Problems, UnknownId) {
  try {
    make_problem("square");
    FAIL() << "expected UnknownProblem";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownProblem);
  }
}

TEST(JumpData, CircleTraceDifference) {
  const Problem circle = make_problem("circle");
  const InterfaceJump j = jump_data(circle, {0.75, 0.5}, 0.0);
  const double plus = std::sin(2 * kPi * 0.75) * std::cos(2 * kPi * 0.5);
  const double minus = -2 * std::sin(2 * kPi * 0.75) * std::cos(2 * kPi * 0.5) + 2;
  EXPECT_NEAR(j.a, plus - minus, 1e-14);
  EXPECT_NEAR(j.a, 3 * std::sin(1.5 * kPi) * std::cos(kPi) - 2, 1e-14);
}

TEST(JumpData, ConstantsOnlyWhenSineVanishes) {
  const Problem circle = make_problem("circle");
  for (double theta : {0.0, 0.7, 2.0, 4.1}) {
    const Point2 q = Point2(0.5, 0.5) + 0.25 * Point2(std::cos(theta), std::sin(theta));
    const Point2 n = unit_normal(circle.level_set, q);
    const InterfaceJump j = jump_data(circle, q, 0.0);
    // H+ = 0 and H- = (5, 3) at t = 0.
    EXPECT_NEAR(j.b, n.x() * -3.0 - n.y() * -5.0, 1e-14);
    EXPECT_NEAR(j.d, n.x() * -5.0 + n.y() * -3.0, 1e-14);
  }
}

TEST(JumpData, Star5NormalComponentWithFiniteDifferenceNormal) {
  const Problem star5 = make_problem("star5");
  const auto& s = std::get<LevelSet::Star>(star5.level_set.shape());
  for (double theta : {0.2, 1.3, 3.5}) {
    const Point2 q = s.center + LevelSet::star_radius(s, theta) * Point2(std::cos(theta), std::sin(theta));
    const double e = 1e-6;
    const auto& ls = star5.level_set;
    const Point2 g((ls.eval(q + Point2(e, 0)) - ls.eval(q - Point2(e, 0))) / (2 * e),
                   (ls.eval(q + Point2(0, e)) - ls.eval(q - Point2(0, e))) / (2 * e));
    const Point2 n = g.normalized();
    const FieldValues jump = star5.jump(q, 0.25);
    EXPECT_NEAR(jump_data(star5, q, 0.25).d, star5.physics.mu * (n.x() * jump.hx + n.y() * jump.hy), 1e-6);
  }
}

TEST(JumpData, PeriodicInTime) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0), a(0.0, 2 * kPi);
  for (const auto& id : {"circle", "star5", "star3"}) {
    const Problem p = make_problem(id);
    for (int s = 0; s < 20; ++s) {
      const double theta = a(rng), t = u(rng);
      const Point2 q = closest_point(p.level_set, Point2(0.5, 0.5) + 0.25 * Point2(std::cos(theta), std::sin(theta)));
      const InterfaceJump j0 = jump_data(p, q, t);
      const InterfaceJump j1 = jump_data(p, q, t + 1.0);
      EXPECT_NEAR(j0.a, j1.a, 1e-12);
      EXPECT_NEAR(j0.b, j1.b, 1e-12);
      EXPECT_NEAR(j0.d, j1.d, 1e-12);
    }
  }
}

TEST(CorrectionData, SourceJumpIsPlusMinusMinus) {
  const Problem circle = make_problem("circle");
  const CorrectionData data = correction_data(circle);
  const Point2 x(0.3, 0.6);
  const SourceJump s = data.source_jump(x, 0.2);
  EXPECT_DOUBLE_EQ(s.f2, circle.source(Side::Plus, 0.3, 0.6, 0.2).f2 - circle.source(Side::Minus, 0.3, 0.6, 0.2).f2);
  EXPECT_EQ(s.f1x, 0.0);
}
