#include "cfm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cfm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    throw std::invalid_argument("expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& v) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

// "1/20" or a decimal spacing whose inverse is an integer.
int to_cells(const std::string& v) {
  const auto slash = v.find('/');
  if (slash != std::string::npos) {
    if (trim(v.substr(0, slash)) != "1") throw std::invalid_argument("spacing must be written 1/N, got '" + v + "'");
    return to_int(trim(v.substr(slash + 1)));
  }
  const double h = to_double(v);
  if (!(h > 0.0)) throw std::invalid_argument("spacing must be positive");
  const double n = std::round(1.0 / h);
  if (std::abs(n * h - 1.0) > 1e-9) throw std::invalid_argument("1/h must be an integer, got h = " + v);
  return static_cast<int>(n);
}

void validate(const RunConfig& c) {
  if (c.order != 2 && c.order != 4) throw std::invalid_argument("order must be 2 or 4");
  if (c.degree < 0 || c.degree > 6) throw std::invalid_argument("degree must lie in 0..6");
  if (c.cells.empty()) throw std::invalid_argument("h list is empty");
  for (int n : c.cells)
    if (n < 4) throw std::invalid_argument("each h must be at most 1/4");
  if (!(c.cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  if (c.final_time < 0.0) throw std::invalid_argument("final time must be nonnegative");
  if (!(c.physics.mu > 0.0) || !(c.physics.eps > 0.0) || c.physics.sigma < 0.0)
    throw std::invalid_argument("need mu > 0, eps > 0, sigma >= 0");
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"problem", [&](const std::string& v) { c.problem = v; }},
      {"name", [&](const std::string& v) { c.name = v; }},
      {"order", [&](const std::string& v) { c.order = to_int(v); }},
      {"degree", [&](const std::string& v) { c.degree = to_int(v); }},
      {"h",
       [&](const std::string& v) {
         c.cells.clear();
         for (const auto& item : split_list(v)) c.cells.push_back(to_cells(item));
       }},
      {"cfl", [&](const std::string& v) { c.cfl = to_double(v); }},
      {"final_time", [&](const std::string& v) { c.final_time = to_double(v); }},
      {"output_dir", [&](const std::string& v) { c.output_dir = v; }},
      {"snapshot_times",
       [&](const std::string& v) {
         c.snapshot_times.clear();
         for (const auto& item : split_list(v)) c.snapshot_times.push_back(to_double(item));
       }},
      {"corrections", [&](const std::string& v) { c.corrections = to_bool(v); }},
      {"divergence_corrections", [&](const std::string& v) { c.divergence_corrections = to_bool(v); }},
      {"mu", [&](const std::string& v) { c.physics.mu = to_double(v); }},
      {"eps", [&](const std::string& v) { c.physics.eps = to_double(v); }},
      {"sigma", [&](const std::string& v) { c.physics.sigma = to_double(v); }},
  };

  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Config, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorCode::Config, where + ": unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorCode::Config, where + ": " + key + ": " + e.what());
    }
  }
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::Config, source + ": " + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void apply_environment(RunConfig& cfg) {
  const char* dir = std::getenv(kOutputDirEnv);
  if (dir != nullptr && *dir != '\0') cfg.output_dir = dir;
}

}  // namespace cfm
