#pragma once

// Shared value types, error classes and the unit convention.
//
// Everything inside the library works in natural units hbar = c = eps0 = mu0 = 1.
// Lengths are in an arbitrary program unit L, frequencies in 1/L, potentials in
// hbar*c/L, pressures in hbar*c/L^4 and polarizabilities are polarizability
// volumes alpha' = alpha / (4 pi eps0) carrying units L^3. Conversion to SI
// happens only at the CLI boundary via Units.

#include <Eigen/Dense>

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dispersia {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

/// Invalid input: bad scene, negative frequency, coincident points, ...
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance. Carries the best
/// estimate and its error bound so callers can decide what to do with it.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Value together with the quadrature's error estimate.
struct Measured {
  double value = 0.0;
  double error_estimate = 0.0;
};

enum class Regime {
  Retarded,        // long distance: every response frozen at its xi = 0 value
  Nonretarded,     // quasi-static kernels
  FullDispersive,  // no approximation
};

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

struct Units {
  static constexpr double kHbar = 1.054571817e-34;       // J s
  static constexpr double kSpeedOfLight = 299792458.0;  // m / s

  /// Metres per program length unit, if the scene specifies one.
  std::optional<double> length_unit_si;

  /// hbar*c/L expressed in joules.
  double energy_si(double value) const;
  /// hbar*c/L^2 in newtons.
  double force_si(double value) const;
  /// hbar*c/L^4 in pascals.
  double pressure_si(double value) const;
};

}  // namespace dispersia
