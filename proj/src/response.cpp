#include "dispersia/response.hpp"

#include <cmath>
#include <limits>

namespace dispersia {

namespace {

void check_frequency(double xi) {
  if (!std::isfinite(xi) || xi < 0.0)
    throw DomainError("imaginary frequency must be finite and non-negative");
}

void check_static_value(double value, ResponseRole role) {
  if (!std::isfinite(value)) throw DomainError("response value must be finite");
  if (role == ResponseRole::Electric && value < 1.0)
    throw DomainError("passive permittivity requires epsilon(0) >= 1");
  if (role == ResponseRole::Magnetic && value <= 0.0)
    throw DomainError("permeability must be positive");
}

}  // namespace

MaterialResponse MaterialResponse::vacuum(ResponseRole role) {
  return MaterialResponse(Model::Static, role, 1.0, 0.0);
}

MaterialResponse MaterialResponse::constant(double value, ResponseRole role) {
  check_static_value(value, role);
  return MaterialResponse(Model::Static, role, value, 0.0);
}

MaterialResponse MaterialResponse::single_resonance(double static_value, double resonance_frequency,
                                                    ResponseRole role) {
  check_static_value(static_value, role);
  if (!(resonance_frequency > 0.0) || !std::isfinite(resonance_frequency))
    throw DomainError("resonance frequency must be positive");
  return MaterialResponse(Model::SingleResonance, role, static_value, resonance_frequency);
}

MaterialResponse MaterialResponse::perfect_conductor() {
  return MaterialResponse(Model::PerfectConductor, ResponseRole::Electric,
                          std::numeric_limits<double>::infinity(), 0.0);
}

double MaterialResponse::at(double xi) const {
  check_frequency(xi);
  switch (model_) {
    case Model::Static:
      return static_value_;
    case Model::SingleResonance: {
      const double w = xi / resonance_frequency_;
      return 1.0 + (static_value_ - 1.0) / (1.0 + w * w);
    }
    case Model::PerfectConductor:
      return std::numeric_limits<double>::infinity();
  }
  return static_value_;
}

bool MaterialResponse::is_vacuum() const noexcept {
  return model_ != Model::PerfectConductor && static_value_ == 1.0;
}

double MaterialResponse::susceptibility(double xi) const { return at(xi) - 1.0; }

double MaterialResponse::inverse_susceptibility(double xi) const { return 1.0 / at(xi) - 1.0; }

Polarizability Polarizability::constant(double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw DomainError("polarizability volume must be positive");
  return Polarizability(volume, 0.0);
}

Polarizability Polarizability::single_resonance(double volume, double resonance_frequency) {
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw DomainError("polarizability volume must be positive");
  if (!(resonance_frequency > 0.0) || !std::isfinite(resonance_frequency))
    throw DomainError("atomic resonance frequency must be positive");
  return Polarizability(volume, resonance_frequency);
}

double Polarizability::at(double xi) const {
  check_frequency(xi);
  if (!is_dispersive()) return volume_;
  const double w = xi / resonance_frequency_;
  return volume_ / (1.0 + w * w);
}

double evaluate_response(const MaterialResponse& response, double xi) { return response.at(xi); }

double evaluate_response(const Polarizability& polarizability, double xi) {
  return polarizability.at(xi);
}

}  // namespace dispersia
