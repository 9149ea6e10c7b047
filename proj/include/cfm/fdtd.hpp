#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "cfm/cfm.hpp"
#include "cfm/problems.hpp"
#include "cfm/staggered_grid.hpp"

namespace cfm {

struct SchemeConfig {
  int order = 4;
  double cfl = 0.5;  // dt = cfl * h
  Physics physics;
  int degree = 3;
  bool corrections = true;

  double dt(const GridSpec& spec) const { return cfl * spec.h(); }
};

/// One correction polynomial and its four RK4 stage values per corrected node,
/// aligned with SideMasks::corrected.
struct CorrectionTable {
  std::vector<CorrectionPoly> polys;
  std::vector<std::array<double, 4>> stages;

  bool empty() const { return stages.empty(); }
};

/// A+ = A- + D, so a Minus value read for a Plus stencil gains D and vice versa.
double corrected_sample(double value, Side node_side, Side target_side, const double* correction);

/// Stored value of `family` at storage index `storage` as seen from `target_side`,
/// using stage `stage` (0..3) of the table. Throws MissingCorrection when needed and absent.
double corrected_sample(const FieldSet& fields, const SideMasks& masks, const CorrectionTable* table, int stage,
                        Family family, int storage, Side target_side);

/// Staggered derivative of `sampled` along `axis` at the half-index `centre`.
double spatial_deriv(const FieldSet& fields, const SideMasks& masks, const CorrectionTable* table, int stage,
                     Family sampled, Axis axis, HalfIndex centre, Side centre_side, int order);

using SourceFn = std::function<SourceValues(Side, double x, double y, double t)>;

/// G(t, U) for the TM_z system. Sources use each node's own side; an empty SourceFn means zero sources.
FieldSet rhs_G(const FieldSet& fields, double t, const SideMasks& masks, const CorrectionTable* table, int stage,
               const SchemeConfig& cfg, const SourceFn& source);

/// Classic RK4; stage s reads stage s of the correction table.
FieldSet rk4_step(const FieldSet& fields, double t_n, double dt, const SideMasks& masks, const CorrectionTable* table,
                  const SchemeConfig& cfg, const SourceFn& source);

/// Fields sampled from the exact solution of each node's own side.
FieldSet sample_exact(const Problem& problem, const GridSpec& spec, double t);

struct RunOptions {
  double final_time = 0.5;
  /// Record the per-step max drift of the uncorrected divergence at corners whose stencil stays on one side.
  bool track_divergence = false;
  /// Also correct H nodes that the divergence stencil reads across the interface.
  bool divergence_corrections = true;
};

struct RunResult {
  FieldSet fields;
  SideMasks masks;
  CorrectionTable table;  // refreshed at the final time
  int steps = 0;
  double dt = 0.0;
  std::vector<double> divergence_drift;  // one entry per step
};

/// Owns the grid state, the patches and the correction table of one simulation.
class Simulation {
 public:
  Simulation(const Problem& problem, const GridSpec& spec, const SchemeConfig& cfg, const RunOptions& options = {});

  /// Solves every patch with data anchored at time t and fills the stage values.
  void refresh_corrections(double t);
  void step();

  const FieldSet& fields() const { return fields_; }
  const SideMasks& masks() const { return masks_; }
  const CorrectionTable& table() const { return table_; }
  const std::vector<Patch>& patches() const { return patches_; }
  double time() const { return fields_.t; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }

 private:
  Problem problem_;
  GridSpec spec_;
  SchemeConfig cfg_;
  double dt_;
  int steps_ = 0;
  FieldSet fields_;
  SideMasks masks_;
  std::vector<Patch> patches_;
  CorrectionData data_;
  CorrectionTable table_;
};

/// Steps count N with N * dt = T; throws Config when T is not a whole number of steps.
int step_count(double final_time, double dt);

RunResult run(const Problem& problem, const GridSpec& spec, const SchemeConfig& cfg, const RunOptions& options = {});

}  // namespace cfm
