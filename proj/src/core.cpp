#include "dispersia/core.hpp"

#include <cmath>

namespace dispersia {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Retarded:
      return "retarded";
    case Regime::Nonretarded:
      return "nonretarded";
    case Regime::FullDispersive:
      return "dispersive";
  }
  return "unknown";
}

Regime parse_regime(std::string_view name) {
  if (name == "retarded") return Regime::Retarded;
  if (name == "nonretarded") return Regime::Nonretarded;
  if (name == "dispersive" || name == "full") return Regime::FullDispersive;
  throw DomainError("unknown regime '" + std::string(name) + "'");
}

namespace {

double unit_length(const std::optional<double>& length) {
  if (!length || !(*length > 0.0) || !std::isfinite(*length))
    throw DomainError("SI conversion requires a positive length_unit_si");
  return *length;
}

}  // namespace

double Units::energy_si(double value) const {
  return value * kHbar * kSpeedOfLight / unit_length(length_unit_si);
}

double Units::force_si(double value) const {
  const double l = unit_length(length_unit_si);
  return value * kHbar * kSpeedOfLight / (l * l);
}

double Units::pressure_si(double value) const {
  const double l = unit_length(length_unit_si);
  return value * kHbar * kSpeedOfLight / (l * l * l * l);
}

}  // namespace dispersia
