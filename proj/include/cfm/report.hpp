#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cfm/config.hpp"
#include "cfm/diagnostics.hpp"
#include "cfm/staggered_grid.hpp"

namespace cfm {

using SnapshotSink = std::function<void(int cells, const FieldSet& fields)>;

/// One simulation on the unit square with `cells` cells per direction, measured at the final time.
/// Solver errors propagate.
ConvergenceRecord run_case(const RunConfig& cfg, int cells, const SnapshotSink& on_snapshot = {});

/// One record per h. A solver failure marks its row and the sweep continues.
ConvergenceReport run_convergence(const RunConfig& cfg, std::ostream* log = nullptr,
                                  const SnapshotSink& on_snapshot = {});

/// Header, one row per record and a trailing `#` block with the fitted orders.
void write_csv(const ConvergenceReport& report, std::ostream& out);
void write_csv(const ConvergenceReport& report, const std::string& path);

struct SnapshotHeader {
  std::string problem;
  int order = 4;
  double h = 0.0;
  double t = 0.0;
};

struct SnapshotRow {
  Family family;
  int i;
  int j;
  double x;
  double y;
  double value;
};

struct Snapshot {
  SnapshotHeader header;
  std::vector<SnapshotRow> rows;
};

/// Plain-text table of every node, values with 17 significant digits.
void write_snapshot(const FieldSet& fields, const SnapshotHeader& header, const std::string& path);
Snapshot read_snapshot(const std::string& path);

}  // namespace cfm
