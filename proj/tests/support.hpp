#pragma once

#include <random>

#include "cfm/cfm.hpp"
#include "cfm/poly_basis.hpp"

namespace cfm::test {

/// Value or first space / time derivatives of a correction polynomial in global coordinates.
inline double poly_eval(const CorrectionPoly& cp, Family family, const Point2& x, double t, Derivative d = {}) {
  const Point2 xi = cp.frame.local(x);
  const double tau = (t - cp.anchor_time) / cp.frame.time_width;
  const double scale = std::pow(1.0 / cp.frame.length, d.xi + d.eta) * std::pow(1.0 / cp.frame.time_width, d.tau);
  const int nh = cp.space->magnetic_size();
  if (family == Family::Ez) {
    const auto e = cp.space->electric().eval(xi.x(), xi.y(), tau, d);
    return scale * e.col(0).dot(cp.coefficients.tail(cp.space->electric_size()));
  }
  const auto v = cp.space->magnetic().eval(xi.x(), xi.y(), tau, d);
  return scale * v.col(family == Family::Hx ? 0 : 1).dot(cp.coefficients.head(nh));
}

/// Sources and interface data generated by a known correction polynomial, so the functional
/// has an exact zero at `cp`.
inline CorrectionData data_from_poly(const CorrectionPoly& cp, const Physics& ph) {
  CorrectionData data;
  data.source_jump = [cp, ph](const Point2& x, double t) {
    const double hx_t = poly_eval(cp, Family::Hx, x, t, {0, 0, 1});
    const double hy_t = poly_eval(cp, Family::Hy, x, t, {0, 0, 1});
    const double ez_t = poly_eval(cp, Family::Ez, x, t, {0, 0, 1});
    const double ez_x = poly_eval(cp, Family::Ez, x, t, {1, 0, 0});
    const double ez_y = poly_eval(cp, Family::Ez, x, t, {0, 1, 0});
    const double hy_x = poly_eval(cp, Family::Hy, x, t, {1, 0, 0});
    const double hx_y = poly_eval(cp, Family::Hx, x, t, {0, 1, 0});
    const double ez = poly_eval(cp, Family::Ez, x, t);
    return SourceJump{ph.mu * hx_t + ez_y, ph.mu * hy_t - ez_x, ph.eps * ez_t - hy_x + hx_y + ph.sigma * ez};
  };
  data.interface_jump = [cp, ph](const Point2& q, const Point2& n, double t) {
    const double hx = poly_eval(cp, Family::Hx, q, t);
    const double hy = poly_eval(cp, Family::Hy, q, t);
    return InterfaceJump{poly_eval(cp, Family::Ez, q, t), n.x() * hy - n.y() * hx, ph.mu * (n.x() * hx + n.y() * hy)};
  };
  return data;
}

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = u(rng);
  return v;
}

inline CorrectionData zero_data() {
  CorrectionData data;
  data.source_jump = [](const Point2&, double) { return SourceJump{}; };
  data.interface_jump = [](const Point2&, const Point2&, double) { return InterfaceJump{}; };
  return data;
}

}  // namespace cfm::test
