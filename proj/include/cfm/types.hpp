#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cfm {

using Point2 = Eigen::Vector2d;

/// Subdomain label. The level set is nonnegative on Plus.
enum class Side { Plus, Minus };

inline Side opposite(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }

/// The three staggered unknowns of the TM_z system.
enum class Family { Hx = 0, Hy = 1, Ez = 2 };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Hx: return "Hx";
    case Family::Hy: return "Hy";
    case Family::Ez: return "Ez";
  }
  return "?";
}

enum class Axis { X, Y };

/// Constant material coefficients.
struct Physics {
  double mu = 1.0;
  double eps = 1.0;
  double sigma = 1.0;
};

enum class ErrorCode {
  NonConvergence,
  DegenerateGradient,
  EmptyIntersection,
  IndexOutOfRange,
  UnsupportedDegree,
  UnsupportedDerivative,
  SingularNormalMatrix,
  OutsidePatch,
  MissingCorrection,
  UnknownProblem,
  DegenerateData,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cfm
