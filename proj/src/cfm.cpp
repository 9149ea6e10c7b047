#include "cfm/cfm.hpp"

#include <cmath>
#include <string>

namespace cfm {

namespace {

constexpr double kInsideSlack = 1e-9;

// Gram-style block: sum of w * (s s^T) (x) (t t^T) accumulated into m at (offset, offset).
void add_kron(Eigen::MatrixXd& m, int offset, const Eigen::MatrixXd& spatial, const Eigen::MatrixXd& temporal) {
  const int ns = static_cast<int>(spatial.rows());
  const int nt = static_cast<int>(temporal.rows());
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < ns; ++b)
      m.block(offset + a * nt, offset + b * nt, nt, nt) += spatial(a, b) * temporal;
}

void add_kron(Eigen::VectorXd& v, int offset, const Eigen::VectorXd& spatial, const Eigen::VectorXd& temporal) {
  const int nt = static_cast<int>(temporal.size());
  for (int a = 0; a < spatial.size(); ++a) v.segment(offset + a * nt, nt) += spatial[a] * temporal;
}

// Residual rows (3 x n) of the volume terms at a local point.
Eigen::Matrix<double, 3, Eigen::Dynamic> volume_rows(const CorrectionSpace& space, const Eigen::Vector3d& p,
                                                     double length, double time_width, const Physics& ph) {
  const auto& hb = space.magnetic();
  const auto& eb = space.electric();
  const int nh = hb.size();
  const int n = space.size();
  const auto v_t = hb.eval(p[0], p[1], p[2], {0, 0, 1});
  const auto v_x = hb.eval(p[0], p[1], p[2], {1, 0, 0});
  const auto v_y = hb.eval(p[0], p[1], p[2], {0, 1, 0});
  const auto e = eb.eval(p[0], p[1], p[2]);
  const auto e_t = eb.eval(p[0], p[1], p[2], {0, 0, 1});
  const auto e_x = eb.eval(p[0], p[1], p[2], {1, 0, 0});
  const auto e_y = eb.eval(p[0], p[1], p[2], {0, 1, 0});
  const double il = 1.0 / length;
  const double it = 1.0 / time_width;

  Eigen::Matrix<double, 3, Eigen::Dynamic> rows = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, n);
  // mu dt DHx + dy DEz
  rows.row(0).head(nh) = ph.mu * it * v_t.col(0).transpose();
  rows.row(0).tail(n - nh) = il * e_y.transpose();
  // mu dt DHy - dx DEz
  rows.row(1).head(nh) = ph.mu * it * v_t.col(1).transpose();
  rows.row(1).tail(n - nh) = -il * e_x.transpose();
  // eps dt DEz - dx DHy + dy DHx + sigma DEz
  rows.row(2).head(nh) = il * (v_y.col(0) - v_x.col(1)).transpose();
  rows.row(2).tail(n - nh) = (ph.eps * it * e_t + ph.sigma * e).transpose();
  return rows;
}

}  // namespace

SymmetricFactorization::SymmetricFactorization(const Eigen::MatrixXd& m) : ldlt_(m) {
  if (ldlt_.info() != Eigen::Success) throw Error(ErrorCode::SingularNormalMatrix, "LDLT factorization failed");
  const Eigen::VectorXd d = ldlt_.vectorD().cwiseAbs();
  const double top = d.size() > 0 ? d.maxCoeff() : 0.0;
  const double bottom = d.size() > 0 ? d.minCoeff() : 0.0;
  if (!(top > 0.0) || bottom < kPivotThreshold * top)
    throw Error(ErrorCode::SingularNormalMatrix,
                "normal matrix pivot ratio " + std::to_string(top > 0.0 ? bottom / top : 0.0) + " below threshold");
  pivot_ratio_ = bottom / top;
}

SymmetricFactorization factor_symmetric(const Eigen::MatrixXd& m) { return SymmetricFactorization(m); }

VolumeOperator::VolumeOperator(std::shared_ptr<const CorrectionSpace> space, double length, double time_width,
                               double scale, const Physics& physics, const QuadratureSpec& quad) {
  const QuadratureRule sx = composite_gauss(quad.space_tiles, quad.space_points, -0.5, 0.5);
  const QuadratureRule st = gauss_legendre(quad.time_points, -1.0, 0.0);
  const int n = space->size();
  const int np = static_cast<int>(sx.size() * sx.size() * st.size());
  rows_.resize(3 * np, n);
  weights_.resize(np);
  points_.reserve(np);
  const double jac = length * length * time_width * scale;
  int p = 0;
  for (std::size_t a = 0; a < sx.size(); ++a) {
    for (std::size_t b = 0; b < sx.size(); ++b) {
      for (std::size_t c = 0; c < st.size(); ++c, ++p) {
        const Eigen::Vector3d pt(sx.nodes[a], sx.nodes[b], st.nodes[c]);
        points_.push_back(pt);
        weights_[p] = sx.weights[a] * sx.weights[b] * st.weights[c] * jac;
        rows_.middleRows(3 * p, 3) = volume_rows(*space, pt, length, time_width, physics);
      }
    }
  }
  weighted_rows_.resize(n, 3 * np);
  for (int q = 0; q < np; ++q)
    weighted_rows_.middleCols(3 * q, 3) = weights_[q] * rows_.middleRows(3 * q, 3).transpose();
  normal_matrix_ = weighted_rows_ * rows_;
}

double patch_length(const GridSpec& spec, int scheme_order) {
  const double beta = scheme_order == 2 ? 1.0 : (scheme_order == 4 ? 3.0 : 0.0);
  if (beta == 0.0) throw Error(ErrorCode::Config, "scheme order must be 2 or 4");
  return beta * spec.h();
}

PatchBuilder::PatchBuilder(const GridSpec& spec, int scheme_order, const Physics& physics, int degree,
                           QuadratureSpec quad)
    : physics_(physics),
      quad_(quad),
      length_(patch_length(spec, scheme_order)),
      time_width_(std::sqrt(physics.eps * physics.mu) * length_),
      space_(std::make_shared<const CorrectionSpace>(degree)),
      time_rule_(gauss_legendre(quad.time_points, -1.0, 0.0)) {
  volume_ = std::make_shared<const VolumeOperator>(space_, length_, time_width_, length_, physics_, quad_);
}

Patch PatchBuilder::build(const NodeId& node, const Point2& node_point, const LevelSet& ls) const {
  return build_at(closest_point(ls, node_point), node, node_point, ls);
}

Patch PatchBuilder::build_at(const Point2& center, const NodeId& owner, const Point2& owner_point,
                             const LevelSet& ls) const {
  Patch patch;
  patch.owner = owner;
  patch.owner_point = owner_point;
  patch.frame = PatchFrame{center, length_, time_width_, length_};
  patch.physics = physics_;
  patch.space = space_;
  patch.volume = volume_;
  patch.time_rule = time_rule_;
  if (!patch.frame.square().contains(owner_point, 1e-12 * length_))
    throw Error(ErrorCode::OutsidePatch, "owner node lies outside its patch");

  patch.segments = interface_segments(ls, patch.frame.square(), quad_.interface_points);
  const auto& hs = space_->magnetic().spatial();
  const auto& es = space_->electric().spatial();
  for (const auto& seg : patch.segments) {
    for (const auto& qp : seg.points) {
      const Point2 xi = patch.frame.local(qp.point);
      const auto v = hs.eval(xi.x(), xi.y());
      InterfaceNode node;
      node.point = qp.point;
      node.normal = qp.normal;
      node.weight = qp.weight;
      node.electric_row = es.eval(xi.x(), xi.y());
      node.tangential_row = qp.normal.x() * v.col(1) - qp.normal.y() * v.col(0);
      node.normal_row = qp.normal.x() * v.col(0) + qp.normal.y() * v.col(1);
      patch.interface_nodes.push_back(std::move(node));
    }
  }
  patch.factorization = SymmetricFactorization(assemble_normal_matrix(patch));
  return patch;
}

Patch build_patch(const NodeId& node, const Point2& node_point, const LevelSet& ls, const GridSpec& spec,
                  int scheme_order, const Physics& physics, int degree) {
  return PatchBuilder(spec, scheme_order, physics, degree).build(node, node_point, ls);
}

Eigen::MatrixXd assemble_normal_matrix(const Patch& patch) {
  const CorrectionSpace& space = *patch.space;
  const int nh = space.magnetic_size();
  const int nhs = space.magnetic().spatial().size();
  const int nes = space.electric().spatial().size();
  const TimeBasis& tb = space.magnetic().temporal();

  Eigen::MatrixXd gram_t = Eigen::MatrixXd::Zero(tb.size(), tb.size());
  for (std::size_t m = 0; m < patch.time_rule.size(); ++m) {
    const Eigen::VectorXd t = tb.eval(patch.time_rule.nodes[m]);
    gram_t += patch.time_rule.weights[m] * patch.frame.time_width * t * t.transpose();
  }
  Eigen::MatrixXd gram_h = Eigen::MatrixXd::Zero(nhs, nhs);
  Eigen::MatrixXd gram_e = Eigen::MatrixXd::Zero(nes, nes);
  for (const auto& node : patch.interface_nodes) {
    gram_h += node.weight * (node.tangential_row * node.tangential_row.transpose() +
                             node.normal_row * node.normal_row.transpose());
    gram_e += node.weight * node.electric_row * node.electric_row.transpose();
  }
  Eigen::MatrixXd m = patch.volume->normal_matrix();
  add_kron(m, 0, gram_h, gram_t);
  add_kron(m, nh, gram_e, gram_t);
  return m;
}

Eigen::VectorXd assemble_rhs(const Patch& patch, const CorrectionData& data, double t_n) {
  const CorrectionSpace& space = *patch.space;
  const VolumeOperator& vol = *patch.volume;
  const PatchFrame& f = patch.frame;
  const int nh = space.magnetic_size();

  const auto& pts = vol.points();
  Eigen::VectorXd b(3 * pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const Point2 x = f.global(Point2(pts[p][0], pts[p][1]));
    const SourceJump s = data.source_jump(x, t_n + pts[p][2] * f.time_width);
    b[3 * p] = s.f1x;
    b[3 * p + 1] = s.f1y;
    b[3 * p + 2] = s.f2;
  }
  Eigen::VectorXd rhs = vol.weighted_rows() * b;

  const TimeBasis& tb = space.magnetic().temporal();
  const double inv_mu = 1.0 / patch.physics.mu;
  for (std::size_t m = 0; m < patch.time_rule.size(); ++m) {
    const double tau = patch.time_rule.nodes[m];
    const Eigen::VectorXd t = (patch.time_rule.weights[m] * f.time_width) * tb.eval(tau);
    const double time = t_n + tau * f.time_width;
    for (const auto& node : patch.interface_nodes) {
      const InterfaceJump j = data.interface_jump(node.point, node.normal, time);
      add_kron(rhs, 0, node.weight * (j.b * node.tangential_row + j.d * inv_mu * node.normal_row), t);
      add_kron(rhs, nh, node.weight * j.a * node.electric_row, t);
    }
  }
  return rhs;
}

CorrectionPoly solve_corrections(const Patch& patch, const Eigen::VectorXd& rhs, double t_n) {
  if (patch.factorization.size() != rhs.size())
    throw Error(ErrorCode::SingularNormalMatrix, "patch has no factorization matching the rhs");
  return CorrectionPoly{patch.factorization.solve(rhs), t_n, patch.frame, patch.space};
}

double functional_value(const Patch& patch, const CorrectionData& data, const CorrectionPoly& cp) {
  const CorrectionSpace& space = *patch.space;
  const VolumeOperator& vol = *patch.volume;
  const PatchFrame& f = patch.frame;
  const int nh = space.magnetic_size();
  const Eigen::VectorXd c_h = cp.coefficients.head(nh);
  const Eigen::VectorXd c_e = cp.coefficients.tail(space.electric_size());

  double total = 0.0;
  const Eigen::VectorXd r = vol.rows() * cp.coefficients;
  const auto& pts = vol.points();
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const Point2 x = f.global(Point2(pts[p][0], pts[p][1]));
    const SourceJump s = data.source_jump(x, cp.anchor_time + pts[p][2] * f.time_width);
    const double r0 = r[3 * p] - s.f1x;
    const double r1 = r[3 * p + 1] - s.f1y;
    const double r2 = r[3 * p + 2] - s.f2;
    total += 0.5 * vol.weights()[p] * (r0 * r0 + r1 * r1 + r2 * r2);
  }

  const TimeBasis& tb = space.magnetic().temporal();
  const int nt = tb.size();
  for (std::size_t m = 0; m < patch.time_rule.size(); ++m) {
    const double tau = patch.time_rule.nodes[m];
    const Eigen::VectorXd t = tb.eval(tau);
    const double w_t = patch.time_rule.weights[m] * f.time_width;
    // Collapse the time factor: spatial coefficient s -> sum_m c[s * nt + m] t_m.
    const Eigen::VectorXd ch_s = Eigen::Map<const Eigen::MatrixXd>(c_h.data(), nt, c_h.size() / nt).transpose() * t;
    const Eigen::VectorXd ce_s = Eigen::Map<const Eigen::MatrixXd>(c_e.data(), nt, c_e.size() / nt).transpose() * t;
    for (const auto& node : patch.interface_nodes) {
      const InterfaceJump j = data.interface_jump(node.point, node.normal, cp.anchor_time + tau * f.time_width);
      const double ra = node.electric_row.dot(ce_s) - j.a;
      const double rb = node.tangential_row.dot(ch_s) - j.b;
      const double rd = node.normal_row.dot(ch_s) - j.d / patch.physics.mu;
      total += 0.5 * w_t * node.weight * (ra * ra + rb * rb + rd * rd);
    }
  }
  return total;
}

double eval_correction(const CorrectionPoly& cp, Family family, const Point2& point, double t, int tau_deriv) {
  const PatchFrame& f = cp.frame;
  if (!f.square().contains(point, kInsideSlack * f.length))
    throw Error(ErrorCode::OutsidePatch, "evaluation point lies outside the patch");
  const Point2 xi = f.local(point);
  const double tau = (t - cp.anchor_time) / f.time_width;
  const double scale = std::pow(f.time_width, -tau_deriv);
  const Derivative d{0, 0, tau_deriv};
  const int nh = cp.space->magnetic_size();
  if (family == Family::Ez) {
    const auto e = cp.space->electric().eval(xi.x(), xi.y(), tau, d);
    return scale * e.col(0).dot(cp.coefficients.tail(cp.space->electric_size()));
  }
  const auto v = cp.space->magnetic().eval(xi.x(), xi.y(), tau, d);
  return scale * v.col(family == Family::Hx ? 0 : 1).dot(cp.coefficients.head(nh));
}

std::array<double, 4> correction_derivatives(const CorrectionPoly& cp, Family family, const Point2& point) {
  std::array<double, 4> out{};
  for (int q = 0; q < 4; ++q) out[q] = eval_correction(cp, family, point, cp.anchor_time, q);
  return out;
}

std::array<double, 4> stage_values(const std::array<double, 4>& d, double dt) {
  const double h2 = 0.5 * dt;
  return {d[0], d[0] + h2 * d[1], d[0] + h2 * d[1] + 0.25 * dt * dt * d[2],
          d[0] + dt * d[1] + 0.5 * dt * dt * d[2] + 0.25 * dt * dt * dt * d[3]};
}

std::array<double, 4> staged_corrections(const CorrectionPoly& cp, Family family, const Point2& point, double dt) {
  return stage_values(correction_derivatives(cp, family, point), dt);
}

}  // namespace cfm
