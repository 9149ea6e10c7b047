#include "cfm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cfm/fdtd.hpp"
#include "cfm/problems.hpp"

namespace cfm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConvergenceRecord run_case(const RunConfig& cfg, int cells, const SnapshotSink& on_snapshot) {
  Problem problem = make_problem(cfg.problem);
  problem.physics = cfg.physics;
  const GridSpec spec = GridSpec::unit_square(cells);
  SchemeConfig scheme;
  scheme.order = cfg.order;
  scheme.cfl = cfg.cfl;
  scheme.physics = cfg.physics;
  scheme.degree = cfg.degree;
  scheme.corrections = cfg.corrections;
  const bool corrected_div = cfg.corrections && cfg.divergence_corrections;

  const double dt = scheme.dt(spec);
  const int steps = step_count(cfg.final_time, dt);
  std::set<int> snapshot_steps;
  for (double t : cfg.snapshot_times) {
    const int s = step_count(t, dt);
    if (s > steps) throw Error(ErrorCode::Config, "snapshot time beyond the final time");
    snapshot_steps.insert(s);
  }

  Simulation sim(problem, spec, scheme, RunOptions{cfg.final_time, false, corrected_div});
  if (on_snapshot && snapshot_steps.count(0)) on_snapshot(cells, sim.fields());
  for (int s = 1; s <= steps; ++s) {
    sim.step();
    if (on_snapshot && snapshot_steps.count(s)) on_snapshot(cells, sim.fields());
  }

  ConvergenceRecord r;
  r.h = spec.h();
  r.dt = dt;
  r.fields = error_norms(sim.fields(), problem, sim.time());
  const Eigen::ArrayXXd div = corrected_div ? discrete_div(sim.fields(), cfg.order, &sim.masks(), &sim.table(), 0)
                                            : discrete_div(sim.fields(), cfg.order);
  r.divergence = array_norms(div, spec);
  return r;
}

ConvergenceReport run_convergence(const RunConfig& cfg, std::ostream* log, const SnapshotSink& on_snapshot) {
  ConvergenceReport report;
  for (int cells : cfg.cells) {
    ConvergenceRecord r;
    try {
      r = run_case(cfg, cells, on_snapshot);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config || e.code() == ErrorCode::UnknownProblem) throw;
      r.h = 1.0 / cells;
      r.dt = cfg.cfl * r.h;
      r.failed = true;
      r.error = e.what();
    }
    if (log) {
      *log << "h = 1/" << cells;
      if (r.failed)
        *log << "  FAILED: " << r.error << "\n";
      else
        *log << "  L1(Ez) = " << num(r.fields[2].l1) << "  L1(divH) = " << num(r.divergence.l1) << "\n";
    }
    report.records.push_back(r);
  }
  return report;
}

void write_csv(const ConvergenceReport& report, std::ostream& out) {
  const auto cols = ConvergenceReport::columns();
  out << "h,dt";
  for (const auto& c : cols) out << "," << c;
  out << "\n";
  std::vector<double> hs;
  std::vector<std::vector<double>> errs(cols.size());
  for (const auto& r : report.records) {
    out << num(r.h) << "," << num(r.dt);
    const auto v = ConvergenceReport::values(r);
    for (double x : v) out << "," << (r.failed ? std::string("nan") : num(x));
    out << "\n";
    if (r.failed) continue;
    hs.push_back(r.h);
    for (std::size_t c = 0; c < cols.size(); ++c) errs[c].push_back(v[c]);
  }
  out << "# orders: least-squares slope of log(error) vs log(h), then pairwise\n";
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out << "# " << cols[c];
    try {
      out << "," << num(convergence_order(hs, errs[c]));
      for (double p : pairwise_orders(hs, errs[c])) out << "," << num(p);
    } catch (const Error&) {
      out << ",nan";
    }
    out << "\n";
  }
  for (const auto& r : report.records)
    if (r.failed) out << "# failed h=" << num(r.h) << ": " << r.error << "\n";
}

void write_csv(const ConvergenceReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  write_csv(report, out);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

void write_snapshot(const FieldSet& fields, const SnapshotHeader& header, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  const GridSpec& spec = fields.spec;
  out << "# h " << num(header.h) << "\n";
  out << "# t " << num(header.t) << "\n";
  out << "# problem " << header.problem << "\n";
  out << "# scheme " << header.order << "\n";
  out << "# family i j x y value\n";
  for (Family f : {Family::Hx, Family::Hy, Family::Ez}) {
    const auto& a = fields.array(f);
    for (int k = 0; k < spec.nx * spec.ny; ++k) {
      const NodeId n = node_from_storage(spec, f, k);
      const Point2 p = node_coords(spec, n);
      out << family_name(f) << " " << n.i << " " << n.j << " " << num(p.x()) << " " << num(p.y()) << " " << num(a(k))
          << "\n";
    }
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  Snapshot s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "h") ls >> s.header.h;
      else if (key == "t") ls >> s.header.t;
      else if (key == "problem") ls >> s.header.problem;
      else if (key == "scheme") ls >> s.header.order;
      continue;
    }
    std::string fam, xs, ys, vs;
    SnapshotRow row{};
    ls >> fam >> row.i >> row.j >> xs >> ys >> vs;
    if (!ls) throw Error(ErrorCode::Io, "malformed snapshot row in '" + path + "'");
    row.family = fam == "Hx" ? Family::Hx : (fam == "Hy" ? Family::Hy : Family::Ez);
    row.x = std::strtod(xs.c_str(), nullptr);
    row.y = std::strtod(ys.c_str(), nullptr);
    row.value = std::strtod(vs.c_str(), nullptr);
    s.rows.push_back(row);
  }
  return s;
}

}  // namespace cfm
