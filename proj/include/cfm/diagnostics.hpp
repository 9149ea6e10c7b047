#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfm/fdtd.hpp"
#include "cfm/problems.hpp"
#include "cfm/staggered_grid.hpp"

namespace cfm {

/// Corner divergence (nx x ny, storage i + nx j for corner (i+1/2, j+1/2)).
/// With masks and table, H nodes across the interface from the corner are corrected.
Eigen::ArrayXXd discrete_div(const FieldSet& fields, int order, const SideMasks* masks = nullptr,
                             const CorrectionTable* table = nullptr, int stage = 0);

/// Storage indices of corners whose divergence stencil reads H only from the corner's side.
std::vector<int> single_sided_corners(const SideMasks& masks, int order);

struct Norms {
  double linf = 0.0;
  double l1 = 0.0;
};

/// Per family (Hx, Hy, Ez): max |e| and sum |e| dx dy against the exact solution of each node's side.
std::array<Norms, 3> error_norms(const FieldSet& fields, const Problem& problem, double t);

/// Norms of a corner array (the exact divergence is zero).
Norms array_norms(const Eigen::ArrayXXd& values, const GridSpec& spec);

struct ConvergenceRecord {
  double h = 0.0;
  double dt = 0.0;
  std::array<Norms, 3> fields;
  Norms divergence;
  bool failed = false;
  std::string error;
};

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records;

  /// Column names in CSV order, without h and dt.
  static std::vector<std::string> columns();
  /// Error column values of one record in CSV order.
  static std::vector<double> values(const ConvergenceRecord& r);
  /// Least-squares order of one column over the successful records.
  double order(const std::string& column) const;
};

/// Least-squares slope of log(error) against log(h). Throws DegenerateData.
double convergence_order(const std::vector<double>& h, const std::vector<double>& errors);
std::vector<double> pairwise_orders(const std::vector<double>& h, const std::vector<double>& errors);

using Matrix6c = Eigen::Matrix<std::complex<double>, 6, 6>;

/// Fourier symbol of the homogeneous correction-function system for wave vector k.
Matrix6c symbol_matrix(const Eigen::Vector3d& k, double mu, double eps, double sigma);

/// Eigenvalues with multiplicity from the closed forms (cases k = 0, critical k.k, generic).
std::vector<std::complex<double>> closed_form_eigenvalues(const Eigen::Vector3d& k, double mu, double eps,
                                                          double sigma);

/// Max real part of the spectrum of a symbol matrix.
double growth_check(const Matrix6c& a);

/// |det(A - lambda I)| / max(1, |A|_F + |lambda|)^6.
double det_residual(const Matrix6c& a, std::complex<double> lambda);

}  // namespace cfm
