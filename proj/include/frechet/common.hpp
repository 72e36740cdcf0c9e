#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace frechet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

// Error taxonomy. Everything derives from Error so callers can catch the
// library as a whole; the concrete types mirror the failure modes the API
// documents (bad inputs vs numeric degeneracies vs resource caps).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidPoint : Error { using Error::Error; };
struct InvalidTangent : Error { using Error::Error; };
struct CutLocusError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct UnsupportedManifold : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct DegenerateModel : Error { using Error::Error; };
struct SingularCorrection : Error { using Error::Error; };
struct InvalidCovariance : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

namespace tol {
// Shared numerical tolerances; every guard in the library routes through
// these constants so tests can reference the exact values.
inline constexpr double kPointCheck = 1e-12;
inline constexpr double kTangentCheck = 1e-12;
inline constexpr double kCutLocusGuard = 1e-8;   // on dist / injectivity_radius
inline constexpr double kCurvatureSeries = 1e-4; // switch to series below this radius
inline constexpr double kConditionNumberCap = 1e8;
inline constexpr double kPsdRepair = 1e-10;      // eigenvalues in [-kPsdRepair, 0) clip to 0
}  // namespace tol

inline bool is_finite(const Vec& v) { return v.allFinite(); }

// Round-trippable decimal form: 17 significant digits reproduce any double.
inline std::string format_sig17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace frechet
