#include "cfm/fdtd.hpp"

#include <cmath>
#include <string>

#include "cfm/diagnostics.hpp"

namespace cfm {

double corrected_sample(double value, Side node_side, Side target_side, const double* correction) {
  if (node_side == target_side) return value;
  if (correction == nullptr) throw Error(ErrorCode::MissingCorrection, "cross-interface sample without a correction");
  return node_side == Side::Minus ? value + *correction : value - *correction;
}

double corrected_sample(const FieldSet& fields, const SideMasks& masks, const CorrectionTable* table, int stage,
                        Family family, int storage, Side target_side) {
  const double value = fields.array(family)(storage);
  const Side side = masks.side(family, storage);
  if (side == target_side || table == nullptr) return value;
  const int slot = masks.correction_slot(family, storage);
  if (slot < 0 || slot >= static_cast<int>(table->stages.size()))
    throw Error(ErrorCode::MissingCorrection, std::string("no correction for ") + family_name(family) + " node " +
                                                  std::to_string(storage));
  return corrected_sample(value, side, target_side, &table->stages[slot][stage]);
}

double spatial_deriv(const FieldSet& fields, const SideMasks& masks, const CorrectionTable* table, int stage,
                     Family sampled, Axis axis, HalfIndex centre, Side centre_side, int order) {
  const Stencil& st = staggered_stencil(order);
  const GridSpec& spec = fields.spec;
  double sum = 0.0;
  for (int k = 0; k < st.size; ++k) {
    const int hx = wrap_half(centre.x + (axis == Axis::X ? st.offsets[k] : 0), 2 * spec.nx);
    const int hy = wrap_half(centre.y + (axis == Axis::Y ? st.offsets[k] : 0), 2 * spec.ny);
    const int storage = hx / 2 + spec.nx * (hy / 2);
    sum += st.weights[k] * corrected_sample(fields, masks, table, stage, sampled, storage, centre_side);
  }
  return sum / (axis == Axis::X ? spec.dx() : spec.dy());
}

FieldSet rhs_G(const FieldSet& fields, double t, const SideMasks& masks, const CorrectionTable* table, int stage,
               const SchemeConfig& cfg, const SourceFn& source) {
  const GridSpec& spec = fields.spec;
  const Physics& ph = cfg.physics;
  FieldSet g(spec, t);
  const int n = spec.nx * spec.ny;
  auto coords = [&](HalfIndex hi) {
    return Point2(spec.x_left + 0.5 * hi.x * spec.dx(), spec.y_bottom + 0.5 * hi.y * spec.dy());
  };
  auto src = [&](Side side, const Point2& p) { return source ? source(side, p.x(), p.y(), t) : SourceValues{}; };

  for (int k = 0; k < n; ++k) {
    {
      const NodeId node = node_from_storage(spec, Family::Hx, k);
      const HalfIndex hi = half_index(Family::Hx, node.i, node.j);
      const Side side = masks.side(Family::Hx, k);
      const double dy_ez = spatial_deriv(fields, masks, table, stage, Family::Ez, Axis::Y, hi, side, cfg.order);
      g.hx(k) = (src(side, coords(hi)).f1x - dy_ez) / ph.mu;
    }
    {
      const NodeId node = node_from_storage(spec, Family::Hy, k);
      const HalfIndex hi = half_index(Family::Hy, node.i, node.j);
      const Side side = masks.side(Family::Hy, k);
      const double dx_ez = spatial_deriv(fields, masks, table, stage, Family::Ez, Axis::X, hi, side, cfg.order);
      g.hy(k) = (src(side, coords(hi)).f1y + dx_ez) / ph.mu;
    }
    {
      const NodeId node = node_from_storage(spec, Family::Ez, k);
      const HalfIndex hi = half_index(Family::Ez, node.i, node.j);
      const Side side = masks.side(Family::Ez, k);
      const double dx_hy = spatial_deriv(fields, masks, table, stage, Family::Hy, Axis::X, hi, side, cfg.order);
      const double dy_hx = spatial_deriv(fields, masks, table, stage, Family::Hx, Axis::Y, hi, side, cfg.order);
      g.ez(k) = (-ph.sigma * fields.ez(k) + src(side, coords(hi)).f2 + dx_hy - dy_hx) / ph.eps;
    }
  }
  return g;
}

FieldSet rk4_step(const FieldSet& fields, double t_n, double dt, const SideMasks& masks, const CorrectionTable* table,
                  const SchemeConfig& cfg, const SourceFn& source) {
  auto axpy = [](const FieldSet& u, double a, const FieldSet& k) {
    FieldSet out = u;
    out.hx += a * k.hx;
    out.hy += a * k.hy;
    out.ez += a * k.ez;
    return out;
  };
  const FieldSet k1 = rhs_G(fields, t_n, masks, table, 0, cfg, source);
  const FieldSet k2 = rhs_G(axpy(fields, 0.5 * dt, k1), t_n + 0.5 * dt, masks, table, 1, cfg, source);
  const FieldSet k3 = rhs_G(axpy(fields, 0.5 * dt, k2), t_n + 0.5 * dt, masks, table, 2, cfg, source);
  const FieldSet k4 = rhs_G(axpy(fields, dt, k3), t_n + dt, masks, table, 3, cfg, source);
  FieldSet out = fields;
  out.hx += dt / 6.0 * (k1.hx + 2.0 * k2.hx + 2.0 * k3.hx + k4.hx);
  out.hy += dt / 6.0 * (k1.hy + 2.0 * k2.hy + 2.0 * k3.hy + k4.hy);
  out.ez += dt / 6.0 * (k1.ez + 2.0 * k2.ez + 2.0 * k3.ez + k4.ez);
  out.t = t_n + dt;
  return out;
}

FieldSet sample_exact(const Problem& problem, const GridSpec& spec, double t) {
  FieldSet f(spec, t);
  for (Family fam : {Family::Hx, Family::Hy, Family::Ez}) {
    auto& a = f.array(fam);
    for (int k = 0; k < spec.nx * spec.ny; ++k) a(k) = problem.exact_at(node_coords(spec, node_from_storage(spec, fam, k)), t)[fam];
  }
  return f;
}

Simulation::Simulation(const Problem& problem, const GridSpec& spec, const SchemeConfig& cfg,
                       const RunOptions& options)
    : problem_(problem), spec_(spec), cfg_(cfg), dt_(cfg.dt(spec)), fields_(sample_exact(problem, spec, 0.0)) {
  if (!(dt_ > 0.0)) throw Error(ErrorCode::Config, "time step must be positive");
  masks_ = classify_nodes(spec, problem.level_set, cfg.order, ClassifyOptions{options.divergence_corrections});
  if (!cfg.corrections) return;
  data_ = correction_data(problem_);
  const PatchBuilder builder(spec, cfg.order, cfg.physics, cfg.degree);
  patches_.reserve(masks_.corrected.size());
  for (const NodeId& node : masks_.corrected)
    patches_.push_back(builder.build(node, node_coords(spec, node), problem.level_set));
  refresh_corrections(0.0);
}

void Simulation::refresh_corrections(double t) {
  if (!cfg_.corrections) return;
  table_.polys.resize(patches_.size());
  table_.stages.resize(patches_.size());
  for (std::size_t p = 0; p < patches_.size(); ++p) {
    const Patch& patch = patches_[p];
    table_.polys[p] = solve_corrections(patch, assemble_rhs(patch, data_, t), t);
    table_.stages[p] = staged_corrections(table_.polys[p], patch.owner.family, patch.owner_point, dt_);
  }
}

void Simulation::step() {
  const double t_n = steps_ * dt_;
  fields_ = rk4_step(fields_, t_n, dt_, masks_, cfg_.corrections ? &table_ : nullptr, cfg_, problem_.source);
  ++steps_;
  fields_.t = steps_ * dt_;
  refresh_corrections(fields_.t);
}

int step_count(double final_time, double dt) {
  if (final_time < 0.0) throw Error(ErrorCode::Config, "final time must be nonnegative");
  const double n = std::round(final_time / dt);
  if (std::abs(n * dt - final_time) > 1e-12 * std::max(1.0, final_time))
    throw Error(ErrorCode::Config, "final time is not a whole number of time steps");
  return static_cast<int>(n);
}

RunResult run(const Problem& problem, const GridSpec& spec, const SchemeConfig& cfg, const RunOptions& options) {
  Simulation sim(problem, spec, cfg, options);
  const int n = step_count(options.final_time, sim.dt());
  RunResult result;
  result.dt = sim.dt();

  std::vector<int> corners;
  Eigen::ArrayXXd div0;
  if (options.track_divergence) {
    corners = single_sided_corners(sim.masks(), cfg.order);
    div0 = discrete_div(sim.fields(), cfg.order);
  }
  for (int s = 0; s < n; ++s) {
    sim.step();
    if (!options.track_divergence) continue;
    const Eigen::ArrayXXd div = discrete_div(sim.fields(), cfg.order);
    double drift = 0.0;
    for (int c : corners) drift = std::max(drift, std::abs(div(c) - div0(c)));
    result.divergence_drift.push_back(drift);
  }
  result.fields = sim.fields();
  result.masks = sim.masks();
  result.table = sim.table();
  result.steps = sim.steps();
  return result;
}

}  // namespace cfm
