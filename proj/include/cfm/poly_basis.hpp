#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfm/types.hpp"

namespace cfm {

/// Requested partial derivative orders in (xi, eta, tau).
struct Derivative {
  int xi = 0;
  int eta = 0;
  int tau = 0;
};

struct Monomial {
  int xi;
  int eta;
};

inline int scalar_basis_size(int k) { return (k + 1) * (k + 2) / 2; }
inline int divfree_basis_size(int k) { return (k + 1) * (k + 4) / 2; }

constexpr int kMaxBasisDegree = 6;

namespace detail {

inline void check_degree(int k) {
  if (k < 0 || k > kMaxBasisDegree) throw Error(ErrorCode::UnsupportedDegree, "polynomial degree must lie in 0..6");
}

/// d^order/dx^order of x^power.
template <typename Scalar>
Scalar power_derivative(Scalar x, int power, int order) {
  if (order > power) return Scalar(0);
  Scalar c(1);
  for (int q = 0; q < order; ++q) c *= Scalar(power - q);
  Scalar v(1);
  for (int q = 0; q < power - order; ++q) v *= x;
  return c * v;
}

template <typename Scalar>
Scalar monomial_derivative(const Monomial& m, Scalar xi, Scalar eta, int dxi, int deta) {
  return power_derivative(xi, m.xi, dxi) * power_derivative(eta, m.eta, deta);
}

}  // namespace detail

/// Monomials xi^a eta^b with a + b <= k.
template <typename Scalar>
class ScalarBasisT {
 public:
  static constexpr int kComponents = 1;
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit ScalarBasisT(int degree) : degree_(degree) {
    detail::check_degree(degree);
    for (int d = 0; d <= degree; ++d)
      for (int a = d; a >= 0; --a) terms_.push_back({a, d - a});
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(terms_.size()); }
  const std::vector<Monomial>& terms() const { return terms_; }

  Values eval(Scalar xi, Scalar eta, Derivative d = {}) const {
    Values out(size());
    for (int m = 0; m < size(); ++m) out[m] = detail::monomial_derivative(terms_[m], xi, eta, d.xi, d.eta);
    return out;
  }

 private:
  int degree_;
  std::vector<Monomial> terms_;
};

/// Curls (d_eta psi, -d_xi psi) of the monomials psi of degree 1..k+1. They span the
/// divergence-free subspace of [P^k]^2, which has dimension (k+1)(k+4)/2.
template <typename Scalar>
class DivFreeBasisT {
 public:
  static constexpr int kComponents = 2;
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

  explicit DivFreeBasisT(int degree) : degree_(degree) {
    detail::check_degree(degree);
    for (int d = 1; d <= degree + 1; ++d)
      for (int a = d; a >= 0; --a) streams_.push_back({a, d - a});
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(streams_.size()); }
  /// Stream functions whose curls are the members.
  const std::vector<Monomial>& stream_functions() const { return streams_; }

  Values eval(Scalar xi, Scalar eta, Derivative d = {}) const {
    Values out(size(), 2);
    for (int m = 0; m < size(); ++m) {
      out(m, 0) = detail::monomial_derivative(streams_[m], xi, eta, d.xi, d.eta + 1);
      out(m, 1) = -detail::monomial_derivative(streams_[m], xi, eta, d.xi + 1, d.eta);
    }
    return out;
  }

 private:
  int degree_;
  std::vector<Monomial> streams_;
};

/// Powers tau^m, m = 0..k.
template <typename Scalar>
class TimeBasisT {
 public:
  explicit TimeBasisT(int degree) : degree_(degree) { detail::check_degree(degree); }

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval(Scalar tau, int order = 0) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(size());
    for (int m = 0; m <= degree_; ++m) out[m] = detail::power_derivative(tau, m, order);
    return out;
  }

 private:
  int degree_;
};

/// Tensor product of a spatial basis with a temporal one. Member s * (k_t + 1) + m is
/// spatial member s times tau^m.
template <typename Spatial>
class SpaceTimeBasis {
 public:
  using Scalar = typename Spatial::Values::Scalar;
  static constexpr int kComponents = Spatial::kComponents;
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, kComponents>;

  SpaceTimeBasis(Spatial spatial, TimeBasisT<Scalar> temporal)
      : spatial_(std::move(spatial)), temporal_(std::move(temporal)) {}

  const Spatial& spatial() const { return spatial_; }
  const TimeBasisT<Scalar>& temporal() const { return temporal_; }
  int size() const { return spatial_.size() * temporal_.size(); }

  /// Exact derivatives; at most first order in space and third order in tau.
  Values eval(Scalar xi, Scalar eta, Scalar tau, Derivative d = {}) const {
    if (d.xi < 0 || d.eta < 0 || d.tau < 0 || d.xi + d.eta > 1 || d.tau > 3)
      throw Error(ErrorCode::UnsupportedDerivative, "space-time basis supports d_space <= 1 and d_tau <= 3");
    const auto s = spatial_.eval(xi, eta, Derivative{d.xi, d.eta, 0});
    const auto t = temporal_.eval(tau, d.tau);
    const int nt = temporal_.size();
    Values out(size(), kComponents);
    for (int a = 0; a < spatial_.size(); ++a)
      for (int m = 0; m < nt; ++m) out.row(a * nt + m) = s.row(a) * t[m];
    return out;
  }

 private:
  Spatial spatial_;
  TimeBasisT<Scalar> temporal_;
};

template <typename Spatial>
SpaceTimeBasis<Spatial> spacetime_tensor(Spatial spatial, TimeBasisT<typename Spatial::Values::Scalar> temporal) {
  return SpaceTimeBasis<Spatial>(std::move(spatial), std::move(temporal));
}

template <typename Basis>
typename Basis::Values eval_with_derivs(const Basis& basis, typename Basis::Scalar xi, typename Basis::Scalar eta,
                                        typename Basis::Scalar tau, Derivative d) {
  return basis.eval(xi, eta, tau, d);
}

using ScalarBasis = ScalarBasisT<double>;
using DivFreeBasis = DivFreeBasisT<double>;
using TimeBasis = TimeBasisT<double>;
using ScalarSpaceTimeBasis = SpaceTimeBasis<ScalarBasis>;
using DivFreeSpaceTimeBasis = SpaceTimeBasis<DivFreeBasis>;

inline ScalarBasis scalar_basis(int k) { return ScalarBasis(k); }
inline DivFreeBasis divfree_basis(int k) { return DivFreeBasis(k); }

}  // namespace cfm
