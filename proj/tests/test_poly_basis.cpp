#include <random>

#include <gtest/gtest.h>

#include "cfm/poly_basis.hpp"

using namespace cfm;

namespace {

template <typename Fn>
void expect_throws(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code);
  }
}

}  // namespace

TEST(ScalarBasis, Sizes) {
  EXPECT_EQ(scalar_basis(0).size(), 1);
  EXPECT_EQ(scalar_basis(2).size(), 6);
  EXPECT_EQ(scalar_basis(3).size(), 10);
  for (int k = 0; k <= kMaxBasisDegree; ++k) EXPECT_EQ(scalar_basis(k).size(), scalar_basis_size(k));
}

TEST(ScalarBasis, ConstantMember) {
  const auto v = scalar_basis(0).eval(0.3, -0.2);
  EXPECT_EQ(v[0], 1.0);
}

TEST(DivFreeBasis, Sizes) {
  EXPECT_EQ(divfree_basis(1).size(), 5);
  EXPECT_EQ(divfree_basis(3).size(), 14);
  for (int k = 0; k <= kMaxBasisDegree; ++k) {
    EXPECT_EQ(divfree_basis(k).size(), (k + 1) * (k + 4) / 2);
    if (k >= 1) EXPECT_LT(divfree_basis(k).size(), 2 * scalar_basis_size(k));
  }
}

TEST(DivFreeBasis, MembersAreDivergenceFree) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k <= kMaxBasisDegree; ++k) {
    const DivFreeBasis b(k);
    for (int s = 0; s < 100; ++s) {
      const double xi = u(rng), eta = u(rng);
      const Eigen::VectorXd div = b.eval(xi, eta, {1, 0, 0}).col(0) + b.eval(xi, eta, {0, 1, 0}).col(1);
      EXPECT_LE(div.cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(DivFreeBasis, GramMatrixHasFullRank) {
  for (int k = 0; k <= 4; ++k) {
    const DivFreeBasis b(k);
    const int n = b.size();
    Eigen::MatrixXd samples(0, n);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::MatrixXd a(2 * 4 * n, n);
    for (int s = 0; s < 4 * n; ++s) {
      const auto v = b.eval(u(rng), u(rng));
      a.row(2 * s) = v.col(0).transpose();
      a.row(2 * s + 1) = v.col(1).transpose();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a.transpose() * a);
    EXPECT_EQ(lu.rank(), n) << "k = " << k;
  }
}

TEST(DivFreeBasis, SpansEveryDivergenceFreePolynomialField) {
  // Null space of the divergence map on coefficient pairs of [P^k]^2, then least squares in the basis.
  for (int k = 0; k <= 3; ++k) {
    const ScalarBasis sb(k);
    const int ns = sb.size();
    const auto& terms = sb.terms();
    const ScalarBasis target(std::max(k - 1, 0));
    Eigen::MatrixXd div = Eigen::MatrixXd::Zero(target.size(), 2 * ns);
    auto row_of = [&](int a, int b) {
      for (int r = 0; r < target.size(); ++r)
        if (target.terms()[r].xi == a && target.terms()[r].eta == b) return r;
      return -1;
    };
    for (int m = 0; m < ns; ++m) {
      const Monomial t = terms[m];
      if (t.xi > 0) div(row_of(t.xi - 1, t.eta), m) += t.xi;
      if (t.eta > 0) div(row_of(t.xi, t.eta - 1), ns + m) += t.eta;
    }
    const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(div).kernel();
    const DivFreeBasis b(k);
    ASSERT_EQ(kernel.cols(), b.size()) << "k = " << k;

    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const int np = 3 * b.size();
    Eigen::MatrixXd a(2 * np, b.size());
    Eigen::MatrixXd rhs(2 * np, kernel.cols());
    for (int s = 0; s < np; ++s) {
      const double xi = u(rng), eta = u(rng);
      const auto v = b.eval(xi, eta);
      a.row(2 * s) = v.col(0).transpose();
      a.row(2 * s + 1) = v.col(1).transpose();
      const auto p = sb.eval(xi, eta);
      for (int c = 0; c < kernel.cols(); ++c) {
        rhs(2 * s, c) = p.dot(kernel.col(c).head(ns));
        rhs(2 * s + 1, c) = p.dot(kernel.col(c).tail(ns));
      }
    }
    const Eigen::MatrixXd coef = a.colPivHouseholderQr().solve(rhs);
    EXPECT_LE((a * coef - rhs).norm(), 1e-11 * rhs.norm()) << "k = " << k;
  }
}

TEST(Bases, UnsupportedDegree) {
  expect_throws(ErrorCode::UnsupportedDegree, [] { scalar_basis(7); });
  expect_throws(ErrorCode::UnsupportedDegree, [] { divfree_basis(-1); });
}

TEST(SpaceTimeBasis, Sizes) {
  EXPECT_EQ(spacetime_tensor(divfree_basis(3), TimeBasis(3)).size(), 56);
  EXPECT_EQ(spacetime_tensor(scalar_basis(3), TimeBasis(3)).size(), 40);
}

TEST(SpaceTimeBasis, TimeDerivativeOfStaticMemberIsZero) {
  const auto b = spacetime_tensor(scalar_basis(2), TimeBasis(3));
  // Members s * 4 + 0 carry tau^0.
  const auto d = b.eval(0.1, 0.2, -0.4, {0, 0, 1});
  for (int s = 0; s < 6; ++s) EXPECT_EQ(d(s * 4, 0), 0.0);
}

TEST(SpaceTimeBasis, MonomialDerivatives) {
  const ScalarBasis sb(2);
  // xi * eta is member index 4 (degree-2 block ordered xi^2, xi eta, eta^2).
  ASSERT_EQ(sb.terms()[4].xi, 1);
  ASSERT_EQ(sb.terms()[4].eta, 1);
  EXPECT_EQ(sb.eval(2.0, 3.0, {1, 0, 0})[4], 3.0);
  const TimeBasis tb(3);
  EXPECT_EQ(tb.eval(0.7, 3)[3], 6.0);
}

TEST(SpaceTimeBasis, DerivativesMatchFiniteDifferences) {
  const auto b = spacetime_tensor(divfree_basis(3), TimeBasis(3));
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.5, 0.5), tt(-1.0, 0.0);
  const double e = 1e-5;
  for (int s = 0; s < 20; ++s) {
    const double xi = u(rng), eta = u(rng), tau = tt(rng);
    const auto dx = b.eval(xi, eta, tau, {1, 0, 0});
    const auto dy = b.eval(xi, eta, tau, {0, 1, 0});
    const auto dt = b.eval(xi, eta, tau, {0, 0, 1});
    const auto dt3 = b.eval(xi, eta, tau, {0, 0, 3});
    const Eigen::MatrixXd fx = (b.eval(xi + e, eta, tau) - b.eval(xi - e, eta, tau)) / (2 * e);
    const Eigen::MatrixXd fy = (b.eval(xi, eta + e, tau) - b.eval(xi, eta - e, tau)) / (2 * e);
    const Eigen::MatrixXd ft = (b.eval(xi, eta, tau + e) - b.eval(xi, eta, tau - e)) / (2 * e);
    const Eigen::MatrixXd f3 = (b.eval(xi, eta, tau + e, {0, 0, 2}) - b.eval(xi, eta, tau - e, {0, 0, 2})) / (2 * e);
    EXPECT_LE((dx - fx).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, dx.cwiseAbs().maxCoeff()));
    EXPECT_LE((dy - fy).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, dy.cwiseAbs().maxCoeff()));
    EXPECT_LE((dt - ft).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, dt.cwiseAbs().maxCoeff()));
    EXPECT_LE((dt3 - f3).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, dt3.cwiseAbs().maxCoeff()));
  }
}

TEST(SpaceTimeBasis, UnsupportedDerivative) {
  const auto b = spacetime_tensor(scalar_basis(3), TimeBasis(3));
  expect_throws(ErrorCode::UnsupportedDerivative, [&] { b.eval(0, 0, 0, {2, 0, 0}); });
  expect_throws(ErrorCode::UnsupportedDerivative, [&] { b.eval(0, 0, 0, {1, 1, 0}); });
  expect_throws(ErrorCode::UnsupportedDerivative, [&] { b.eval(0, 0, 0, {0, 0, 4}); });
}
