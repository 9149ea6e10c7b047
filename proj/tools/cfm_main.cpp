// Command-line runner: run / sweep / check.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cfm/config.hpp"
#include "cfm/diagnostics.hpp"
#include "cfm/poly_basis.hpp"
#include "cfm/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

int exit_code_for(const cfm::Error& e) {
  return e.code() == cfm::ErrorCode::Config || e.code() == cfm::ErrorCode::UnknownProblem ? kExitConfig
                                                                                           : kExitSolver;
}

cfm::RunConfig prepare(const std::string& path) {
  cfm::RunConfig cfg = cfm::load_config(path);
  cfm::apply_environment(cfg);
  cfm::make_problem(cfg.problem);  // reject unknown ids before any work
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw cfm::Error(cfm::ErrorCode::Config, "cannot create output directory '" + cfg.output_dir + "'");
  return cfg;
}

cfm::SnapshotSink snapshot_writer(const cfm::RunConfig& cfg) {
  return [cfg](int cells, const cfm::FieldSet& f) {
    char name[128];
    std::snprintf(name, sizeof name, "%s_n%d_t%.6f.txt", cfg.stem().c_str(), cells, f.t);
    const fs::path path = fs::path(cfg.output_dir) / name;
    cfm::write_snapshot(f, {cfg.problem, cfg.order, 1.0 / cells, f.t}, path.string());
    std::cout << "snapshot " << path.string() << "\n";
  };
}

int finish(const cfm::ConvergenceReport& report, const cfm::RunConfig& cfg) {
  const fs::path csv = fs::path(cfg.output_dir) / (cfg.stem() + ".csv");
  cfm::write_csv(report, csv.string());
  cfm::write_csv(report, std::cout);
  std::cout << "wrote " << csv.string() << "\n";
  for (const auto& r : report.records)
    if (r.failed) return kExitSolver;
  return 0;
}

int cmd_run(const std::string& path) {
  cfm::RunConfig cfg = prepare(path);
  cfg.cells.resize(1);
  return finish(cfm::run_convergence(cfg, &std::cout, snapshot_writer(cfg)), cfg);
}

int cmd_sweep(const std::string& path) {
  const cfm::RunConfig cfg = prepare(path);
  return finish(cfm::run_convergence(cfg, &std::cout, snapshot_writer(cfg)), cfg);
}

int cmd_check() {
  bool ok = true;
  for (int k = 0; k <= cfm::kMaxBasisDegree; ++k) {
    const cfm::DivFreeBasis b(k);
    const bool size_ok = b.size() == (k + 1) * (k + 4) / 2;
    double div = 0.0;
    std::mt19937_64 rng(7 + k);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int s = 0; s < 100; ++s) {
      const double xi = u(rng), eta = u(rng);
      const auto dx = b.eval(xi, eta, {1, 0, 0});
      const auto dy = b.eval(xi, eta, {0, 1, 0});
      div = std::max(div, (dx.col(0) + dy.col(1)).cwiseAbs().maxCoeff());
    }
    const bool pass = size_ok && div <= 1e-13;
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " divergence-free basis k=" << k << " size " << b.size()
              << " max|div| " << div << "\n";
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> kd(-10.0, 10.0), pd(0.1, 10.0), sd(0.0, 10.0);
  double worst = -1e300;
  for (int s = 0; s < 1000; ++s) {
    const Eigen::Vector3d k(kd(rng), kd(rng), kd(rng));
    worst = std::max(worst, cfm::growth_check(cfm::symbol_matrix(k, pd(rng), pd(rng), sd(rng))));
  }
  const bool growth_ok = worst <= 1e-10;
  ok = ok && growth_ok;
  std::cout << (growth_ok ? "PASS" : "FAIL") << " no-growth over 1000 symbols, max Re(lambda) " << worst << "\n";
  return ok ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correction function method solver for 2-D TM_z Maxwell interface problems"};
  app.require_subcommand(1);
  std::string run_path, sweep_path;
  auto* run = app.add_subcommand("run", "Single simulation at the first h of the config");
  run->add_option("--config", run_path, "key = value config file")->required();
  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over the h list of the config");
  sweep->add_option("--config", sweep_path, "key = value config file")->required();
  auto* check = app.add_subcommand("check", "Eigenvalue no-growth and basis dimension self-tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_path);
    if (*sweep) return cmd_sweep(sweep_path);
    if (*check) return cmd_check();
  } catch (const cfm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
