#pragma once

// Material and atomic response functions evaluated on the imaginary frequency
// axis omega = i*xi, where every model here is real and positive.

#include "dispersia/core.hpp"

namespace dispersia {

enum class ResponseRole { Electric, Magnetic };

/// epsilon(i xi) or mu(i xi) of a homogeneous body.
class MaterialResponse {
 public:
  enum class Model { Static, SingleResonance, PerfectConductor };

  /// epsilon = 1 or mu = 1.
  MaterialResponse() = default;

  static MaterialResponse vacuum(ResponseRole role = ResponseRole::Electric);
  static MaterialResponse constant(double value, ResponseRole role = ResponseRole::Electric);
  /// value(i xi) = 1 + (static_value - 1) / (1 + xi^2 / omega_r^2)
  static MaterialResponse single_resonance(double static_value, double resonance_frequency,
                                           ResponseRole role = ResponseRole::Electric);
  /// epsilon -> infinity. Only meaningful for the electric role.
  static MaterialResponse perfect_conductor();

  /// Response at i*xi. A perfect conductor reports +infinity; the Green-tensor
  /// code maps it onto reflection coefficients of magnitude one.
  double at(double xi) const;

  Model model() const noexcept { return model_; }
  ResponseRole role() const noexcept { return role_; }
  double static_value() const noexcept { return static_value_; }
  double resonance_frequency() const noexcept { return resonance_frequency_; }

  bool is_perfect() const noexcept { return model_ == Model::PerfectConductor; }
  bool is_dispersive() const noexcept { return model_ == Model::SingleResonance; }
  /// True when the response equals one at every frequency.
  bool is_vacuum() const noexcept;

  /// chi = epsilon - 1
  double susceptibility(double xi) const;
  /// zeta = 1/mu - 1
  double inverse_susceptibility(double xi) const;

  bool operator==(const MaterialResponse&) const = default;

 private:
  MaterialResponse(Model model, ResponseRole role, double static_value, double resonance)
      : model_(model), role_(role), static_value_(static_value), resonance_frequency_(resonance) {}

  Model model_ = Model::Static;
  ResponseRole role_ = ResponseRole::Electric;
  double static_value_ = 1.0;
  double resonance_frequency_ = 0.0;
};

/// Ground-state atomic polarizability volume alpha'(i xi).
class Polarizability {
 public:
  static Polarizability constant(double volume);
  /// alpha'(i xi) = volume / (1 + xi^2 / omega0^2)
  static Polarizability single_resonance(double volume, double resonance_frequency);

  double at(double xi) const;

  double static_volume() const noexcept { return volume_; }
  double resonance_frequency() const noexcept { return resonance_frequency_; }
  bool is_dispersive() const noexcept { return resonance_frequency_ > 0.0; }

  bool operator==(const Polarizability&) const = default;

 private:
  Polarizability(double volume, double resonance) : volume_(volume), resonance_frequency_(resonance) {}

  double volume_ = 1.0;
  double resonance_frequency_ = 0.0;  // 0 marks the static model
};

double evaluate_response(const MaterialResponse& response, double xi);
double evaluate_response(const Polarizability& polarizability, double xi);

}  // namespace dispersia
