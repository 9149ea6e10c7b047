#include "cfm/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace cfm {

Eigen::ArrayXXd discrete_div(const FieldSet& fields, int order, const SideMasks* masks,
                             const CorrectionTable* table, int stage) {
  const GridSpec& spec = fields.spec;
  const Stencil& st = staggered_stencil(order);
  Eigen::ArrayXXd div(spec.nx, spec.ny);
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const Side cs = masks ? masks->corner_sides[i + spec.nx * j] : Side::Plus;
      double sx = 0.0, sy = 0.0;
      for (int k = 0; k < st.size; ++k) {
        const int hx = wrap_half(2 * i + st.offsets[k], 2 * spec.nx);
        const int hy = wrap_half(2 * j + st.offsets[k], 2 * spec.ny);
        const int sx_store = hx / 2 + spec.nx * j;
        const int sy_store = i + spec.nx * (hy / 2);
        if (masks) {
          sx += st.weights[k] * corrected_sample(fields, *masks, table, stage, Family::Hx, sx_store, cs);
          sy += st.weights[k] * corrected_sample(fields, *masks, table, stage, Family::Hy, sy_store, cs);
        } else {
          sx += st.weights[k] * fields.hx(sx_store);
          sy += st.weights[k] * fields.hy(sy_store);
        }
      }
      div(i, j) = sx / spec.dx() + sy / spec.dy();
    }
  }
  return div;
}

std::vector<int> single_sided_corners(const SideMasks& masks, int order) {
  const GridSpec& spec = masks.spec;
  const Stencil& st = staggered_stencil(order);
  std::vector<int> out;
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const Side cs = masks.corner_sides[i + spec.nx * j];
      bool same = true;
      for (int k = 0; k < st.size && same; ++k) {
        const int hx = wrap_half(2 * i + st.offsets[k], 2 * spec.nx);
        const int hy = wrap_half(2 * j + st.offsets[k], 2 * spec.ny);
        same = masks.side(Family::Hx, hx / 2 + spec.nx * j) == cs && masks.side(Family::Hy, i + spec.nx * (hy / 2)) == cs;
      }
      if (same) out.push_back(i + spec.nx * j);
    }
  }
  return out;
}

std::array<Norms, 3> error_norms(const FieldSet& fields, const Problem& problem, double t) {
  const GridSpec& spec = fields.spec;
  std::array<Norms, 3> out;
  for (Family f : {Family::Hx, Family::Hy, Family::Ez}) {
    Norms& n = out[static_cast<int>(f)];
    const auto& a = fields.array(f);
    for (int k = 0; k < spec.nx * spec.ny; ++k) {
      const double e = std::abs(a(k) - problem.exact_at(node_coords(spec, node_from_storage(spec, f, k)), t)[f]);
      n.linf = std::max(n.linf, e);
      n.l1 += e;
    }
    n.l1 *= spec.dx() * spec.dy();
  }
  return out;
}

Norms array_norms(const Eigen::ArrayXXd& values, const GridSpec& spec) {
  Norms n;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double e = std::abs(values(k));
    n.linf = std::max(n.linf, e);
    n.l1 += e;
  }
  n.l1 *= spec.dx() * spec.dy();
  return n;
}

std::vector<std::string> ConvergenceReport::columns() {
  return {"Linf_Hx", "L1_Hx", "Linf_Hy", "L1_Hy", "Linf_Ez", "L1_Ez", "Linf_divH", "L1_divH"};
}

std::vector<double> ConvergenceReport::values(const ConvergenceRecord& r) {
  return {r.fields[0].linf, r.fields[0].l1, r.fields[1].linf, r.fields[1].l1,
          r.fields[2].linf, r.fields[2].l1, r.divergence.linf, r.divergence.l1};
}

double ConvergenceReport::order(const std::string& column) const {
  const auto cols = columns();
  const auto it = std::find(cols.begin(), cols.end(), column);
  if (it == cols.end()) throw Error(ErrorCode::Config, "unknown column '" + column + "'");
  const auto c = static_cast<std::size_t>(it - cols.begin());
  std::vector<double> h, e;
  for (const auto& r : records) {
    if (r.failed) continue;
    h.push_back(r.h);
    e.push_back(values(r)[c]);
  }
  return convergence_order(h, e);
}

namespace {

void check_data(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size() || h.size() < 2) throw Error(ErrorCode::DegenerateData, "need at least two (h, error) pairs");
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!(h[i] > 0.0) || !(errors[i] > 0.0)) throw Error(ErrorCode::DegenerateData, "h and errors must be positive");
}

}  // namespace

double convergence_order(const std::vector<double>& h, const std::vector<double>& errors) {
  check_data(h, errors);
  const auto n = static_cast<double>(h.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]);
    my += std::log(errors[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateData, "all h values are equal");
  return sxy / sxx;
}

std::vector<double> pairwise_orders(const std::vector<double>& h, const std::vector<double>& errors) {
  check_data(h, errors);
  std::vector<double> out;
  for (std::size_t i = 1; i < h.size(); ++i)
    out.push_back(std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]));
  return out;
}

Matrix6c symbol_matrix(const Eigen::Vector3d& k, double mu, double eps, double sigma) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  Matrix6c a = Matrix6c::Zero();
  a(0, 4) = i * k.z() / mu;
  a(0, 5) = -i * k.y() / mu;
  a(1, 3) = -i * k.z() / mu;
  a(1, 5) = i * k.x() / mu;
  a(2, 3) = i * k.y() / mu;
  a(2, 4) = -i * k.x() / mu;
  a(3, 1) = -i * k.z() / eps;
  a(3, 2) = i * k.y() / eps;
  a(4, 0) = i * k.z() / eps;
  a(4, 2) = -i * k.x() / eps;
  a(5, 0) = -i * k.y() / eps;
  a(5, 1) = i * k.x() / eps;
  for (int d = 3; d < 6; ++d) a(d, d) = -sigma / eps;
  return a;
}

std::vector<std::complex<double>> closed_form_eigenvalues(const Eigen::Vector3d& k, double mu, double eps,
                                                          double sigma) {
  using C = std::complex<double>;
  const double kk = k.squaredNorm();
  const double l2 = -sigma / eps;
  if (kk == 0.0) return {0.0, 0.0, 0.0, l2, l2, l2};
  const double critical = mu * sigma * sigma / (4.0 * eps);
  if (std::abs(kk - critical) <= 1e-14 * std::max(kk, critical)) {
    const double l3 = -sigma / (2.0 * eps);
    return {0.0, l2, l3, l3, l3, l3};
  }
  const C root = std::sqrt(C(mu * (4.0 * eps * kk - mu * sigma * sigma), 0.0));
  const C i(0.0, 1.0);
  const C l3 = (-sigma * mu + root * i) / (2.0 * eps * mu);
  const C l4 = (-sigma * mu - root * i) / (2.0 * eps * mu);
  return {0.0, l2, l3, l3, l4, l4};
}

double growth_check(const Matrix6c& a) {
  // Diagonal balancing makes the curl blocks symmetric when the material blocks differ in scale.
  Eigen::Matrix<double, 6, 1> d;
  const double mu_scale = std::max({std::abs(a(0, 4)), std::abs(a(0, 5)), std::abs(a(1, 5))});
  const double eps_scale = std::max({std::abs(a(4, 0)), std::abs(a(5, 0)), std::abs(a(5, 1))});
  const double r = (mu_scale > 0.0 && eps_scale > 0.0) ? std::sqrt(mu_scale / eps_scale) : 1.0;
  d << 1.0, 1.0, 1.0, r, r, r;
  const Matrix6c b = d.asDiagonal() * a * d.cwiseInverse().asDiagonal();
  Eigen::ComplexEigenSolver<Matrix6c> solver(b, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NonConvergence, "eigenvalue iteration failed");
  return solver.eigenvalues().real().maxCoeff();
}

double det_residual(const Matrix6c& a, std::complex<double> lambda) {
  const Matrix6c m = a - lambda * Matrix6c::Identity();
  const double scale = std::max(1.0, a.norm() + std::abs(lambda));
  return std::abs(m.determinant()) / std::pow(scale, 6);
}

}  // namespace cfm
