#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cfm/geometry.hpp"
#include "cfm/poly_basis.hpp"
#include "cfm/quadrature.hpp"
#include "cfm/staggered_grid.hpp"
#include "cfm/types.hpp"

namespace cfm {

/// Source differences f_D1 = f1+ - f1-, f_D2 = f2+ - f2-.
struct SourceJump {
  double f1x = 0.0;
  double f1y = 0.0;
  double f2 = 0.0;
};

/// TM_z interface data: a = [Ez], b = n_x [Hy] - n_y [Hx], d = mu (n . [H]).
struct InterfaceJump {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
};

/// Data the correction functional is built from.
struct CorrectionData {
  std::function<SourceJump(const Point2& x, double t)> source_jump;
  std::function<InterfaceJump(const Point2& q, const Point2& normal, double t)> interface_jump;
};

/// Space-time bases for D_H (divergence free) and D_Ez (scalar) at one degree.
class CorrectionSpace {
 public:
  explicit CorrectionSpace(int degree)
      : degree_(degree),
        magnetic_(DivFreeBasis(degree), TimeBasis(degree)),
        electric_(ScalarBasis(degree), TimeBasis(degree)) {}

  int degree() const { return degree_; }
  const DivFreeSpaceTimeBasis& magnetic() const { return magnetic_; }
  const ScalarSpaceTimeBasis& electric() const { return electric_; }
  int magnetic_size() const { return magnetic_.size(); }
  int electric_size() const { return electric_.size(); }
  int size() const { return magnetic_size() + electric_size(); }

 private:
  int degree_;
  DivFreeSpaceTimeBasis magnetic_;
  ScalarSpaceTimeBasis electric_;
};

/// Square patch of side `length` centred on the interface, over [t_n - time_width, t_n].
/// Local coordinates: xi = (x - c) / length in [-1/2, 1/2]^2, tau = (t - t_n) / time_width in [-1, 0].
struct PatchFrame {
  Point2 center;
  double length;
  double time_width;
  double scale;  // weight of the volume residuals

  Point2 local(const Point2& x) const { return (x - center) / length; }
  Point2 global(const Point2& xi) const { return center + length * xi; }
  Square square() const { return {center, length}; }
};

struct QuadratureSpec {
  int space_tiles = 2;      // per direction
  int space_points = 3;     // per tile and direction
  int time_points = 4;
  int interface_points = 4; // per interface segment
};

/// Pivoted LDL^T of a symmetric normal matrix.
class SymmetricFactorization {
 public:
  static constexpr double kPivotThreshold = 1e-14;

  SymmetricFactorization() = default;
  /// Throws SingularNormalMatrix when a pivot falls below kPivotThreshold * max pivot.
  explicit SymmetricFactorization(const Eigen::MatrixXd& m);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return ldlt_.solve(b); }
  Eigen::Index size() const { return ldlt_.rows(); }
  /// min |pivot| / max |pivot|
  double pivot_ratio() const { return pivot_ratio_; }

 private:
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  double pivot_ratio_ = 0.0;
};

SymmetricFactorization factor_symmetric(const Eigen::MatrixXd& m);

/// Volume residual rows on the reference patch. Shared by every patch with the same
/// frame size because the local quadrature does not depend on the patch position.
class VolumeOperator {
 public:
  VolumeOperator(std::shared_ptr<const CorrectionSpace> space, double length, double time_width, double scale,
                 const Physics& physics, const QuadratureSpec& quad);

  /// Local (xi, eta, tau) of each quadrature point.
  const std::vector<Eigen::Vector3d>& points() const { return points_; }
  /// Columns 3p + r: weight * row of residual r at point p.
  const Eigen::MatrixXd& weighted_rows() const { return weighted_rows_; }
  /// Unweighted residual rows (3P x n).
  const Eigen::MatrixXd& rows() const { return rows_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& normal_matrix() const { return normal_matrix_; }

 private:
  std::vector<Eigen::Vector3d> points_;
  Eigen::MatrixXd rows_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd weighted_rows_;
  Eigen::MatrixXd normal_matrix_;
};

/// Interface quadrature point with its spatial basis rows.
struct InterfaceNode {
  Point2 point;
  Point2 normal;
  double weight;  // arclength
  Eigen::VectorXd electric_row;    // scalar members at the point
  Eigen::VectorXd tangential_row;  // n_x v_y - n_y v_x for divergence-free members
  Eigen::VectorXd normal_row;      // n_x v_x + n_y v_y
};

struct Patch {
  NodeId owner;
  Point2 owner_point;
  PatchFrame frame;
  Physics physics;
  std::shared_ptr<const CorrectionSpace> space;
  std::shared_ptr<const VolumeOperator> volume;
  QuadratureRule time_rule;  // tau nodes on [-1, 0]
  std::vector<InterfaceSegment> segments;
  std::vector<InterfaceNode> interface_nodes;
  SymmetricFactorization factorization;
};

/// Solved correction functions on one patch.
struct CorrectionPoly {
  Eigen::VectorXd coefficients;  // magnetic members first, then electric
  double anchor_time = 0.0;
  PatchFrame frame;
  std::shared_ptr<const CorrectionSpace> space;
};

/// Builds patches of one grid/scheme configuration, sharing the volume operator.
class PatchBuilder {
 public:
  PatchBuilder(const GridSpec& spec, int scheme_order, const Physics& physics, int degree = 3,
               QuadratureSpec quad = {});

  /// Patch for a corrected node: centred at the node's closest interface point.
  Patch build(const NodeId& node, const Point2& node_point, const LevelSet& ls) const;
  /// Patch centred at an arbitrary point (the owner only needs to lie inside).
  Patch build_at(const Point2& center, const NodeId& owner, const Point2& owner_point, const LevelSet& ls) const;

  double length() const { return length_; }
  double time_width() const { return time_width_; }
  const std::shared_ptr<const CorrectionSpace>& space() const { return space_; }
  const std::shared_ptr<const VolumeOperator>& volume() const { return volume_; }

 private:
  Physics physics_;
  QuadratureSpec quad_;
  double length_;
  double time_width_;
  std::shared_ptr<const CorrectionSpace> space_;
  std::shared_ptr<const VolumeOperator> volume_;
  QuadratureRule time_rule_;
};

/// Patch side: beta * max(dx, dy) with beta = 1 (order 2) or 3 (order 4).
double patch_length(const GridSpec& spec, int scheme_order);

Patch build_patch(const NodeId& node, const Point2& node_point, const LevelSet& ls, const GridSpec& spec,
                  int scheme_order, const Physics& physics, int degree = 3);

/// Normal matrix recomputed from the patch quadrature (the patch only keeps its factorization).
Eigen::MatrixXd assemble_normal_matrix(const Patch& patch);

Eigen::VectorXd assemble_rhs(const Patch& patch, const CorrectionData& data, double t_n);

CorrectionPoly solve_corrections(const Patch& patch, const Eigen::VectorXd& rhs, double t_n);

/// Value of the discrete quadratic functional at `cp`.
double functional_value(const Patch& patch, const CorrectionData& data, const CorrectionPoly& cp);

/// D_Hx, D_Hy or D_Ez (by family) or its tau_deriv-th time derivative at (point, t).
double eval_correction(const CorrectionPoly& cp, Family family, const Point2& point, double t, int tau_deriv = 0);

/// D and its first three time derivatives at (point, anchor time).
std::array<double, 4> correction_derivatives(const CorrectionPoly& cp, Family family, const Point2& point);

/// Stage values for RK4 from D, dD, d2D, d3D at t_n:
/// D, D + dt/2 D', D + dt/2 D' + dt^2/4 D'', D + dt D' + dt^2/2 D'' + dt^3/4 D'''.
std::array<double, 4> stage_values(const std::array<double, 4>& derivatives, double dt);

std::array<double, 4> staged_corrections(const CorrectionPoly& cp, Family family, const Point2& point, double dt);

}  // namespace cfm
