#pragma once

#include "dispersia/core.hpp"
#include "dispersia/response.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace dispersia {

/// Perfectly conducting plate with surface z = 0, occupying z < 0.
struct PerfectPlate {
  bool operator==(const PerfectPlate&) const = default;
};

/// Homogeneous magnetoelectric half space occupying z < 0.
struct HalfSpace {
  MaterialResponse epsilon;
  MaterialResponse mu = MaterialResponse::vacuum(ResponseRole::Magnetic);
  bool operator==(const HalfSpace&) const = default;
};

/// Slab of the given thickness occupying -thickness < z < 0.
struct Slab {
  double thickness = 1.0;
  MaterialResponse epsilon;
  MaterialResponse mu = MaterialResponse::vacuum(ResponseRole::Magnetic);
  bool operator==(const Slab&) const = default;
};

/// Perfectly conducting sphere. A neutral isolated sphere carries no monopole
/// response; the grounded variant does.
struct ConductingSphere {
  double radius = 1.0;
  Vec3 centre = Vec3::Zero();
  bool neutral = true;
  bool operator==(const ConductingSphere&) const = default;
};

using Body = std::variant<PerfectPlate, HalfSpace, Slab, ConductingSphere>;

struct Atom {
  Vec3 position = Vec3::Zero();
  Polarizability polarizability = Polarizability::constant(1.0);
  bool operator==(const Atom&) const = default;
};

bool is_planar(const Body& body);
/// Distance from a point outside the body to its surface.
double distance_to_surface(const Body& body, const Vec3& point);
bool is_outside(const Body& body, const Vec3& point);
/// Every resonance frequency appearing in the body's response models.
std::vector<double> resonance_frequencies(const Body& body);

/// Immutable description of one body (or none) and its atoms.
class Scene {
 public:
  Scene() = default;

  /// Validates geometry, materials and atom placement; throws DomainError.
  static Scene create(std::optional<Body> body, std::vector<Atom> atoms,
                      std::optional<double> length_unit_si = std::nullopt);

  const std::optional<Body>& body() const noexcept { return body_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t index) const;
  std::optional<double> length_unit_si() const noexcept { return length_unit_si_; }

  Scene with_atoms(std::vector<Atom> atoms) const;

  bool operator==(const Scene&) const = default;

 private:
  std::optional<Body> body_;
  std::vector<Atom> atoms_;
  std::optional<double> length_unit_si_;
};

}  // namespace dispersia
