#include "dispersia/scene.hpp"

#include <cmath>

namespace dispersia {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_media(const MaterialResponse& epsilon, const MaterialResponse& mu) {
  if (epsilon.role() != ResponseRole::Electric)
    throw DomainError("body permittivity must use the electric role");
  if (mu.is_perfect() || mu.role() != ResponseRole::Magnetic)
    throw DomainError("body permeability must be a finite magnetic response");
}

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

bool is_planar(const Body& body) { return !std::holds_alternative<ConductingSphere>(body); }

double distance_to_surface(const Body& body, const Vec3& point) {
  return std::visit(overloaded{
                        [&](const ConductingSphere& s) { return (point - s.centre).norm() - s.radius; },
                        [&](const auto&) { return point.z(); },
                    },
                    body);
}

bool is_outside(const Body& body, const Vec3& point) { return distance_to_surface(body, point) > 0.0; }

std::vector<double> resonance_frequencies(const Body& body) {
  std::vector<double> out;
  auto add = [&](const MaterialResponse& m) {
    if (m.is_dispersive()) out.push_back(m.resonance_frequency());
  };
  std::visit(overloaded{
                 [&](const HalfSpace& h) {
                   add(h.epsilon);
                   add(h.mu);
                 },
                 [&](const Slab& s) {
                   add(s.epsilon);
                   add(s.mu);
                 },
                 [](const auto&) {},
             },
             body);
  return out;
}

Scene Scene::create(std::optional<Body> body, std::vector<Atom> atoms, std::optional<double> length_unit_si) {
  if (length_unit_si && (!(*length_unit_si > 0.0) || !std::isfinite(*length_unit_si)))
    throw DomainError("length_unit_si must be a positive number");

  if (body) {
    std::visit(overloaded{
                   [](const PerfectPlate&) {},
                   [](const HalfSpace& h) { check_media(h.epsilon, h.mu); },
                   [](const Slab& s) {
                     if (!(s.thickness > 0.0) || !std::isfinite(s.thickness))
                       throw DomainError("slab thickness must be positive");
                     check_media(s.epsilon, s.mu);
                   },
                   [](const ConductingSphere& s) {
                     if (!(s.radius > 0.0) || !std::isfinite(s.radius))
                       throw DomainError("sphere radius must be positive");
                     if (!finite(s.centre)) throw DomainError("sphere centre must be finite");
                   },
               },
               *body);
  }

  for (const Atom& atom : atoms) {
    if (!finite(atom.position)) throw DomainError("atom position must be finite");
    if (body && !is_outside(*body, atom.position))
      throw DomainError("atom lies on or inside the body");
  }

  Scene scene;
  scene.body_ = std::move(body);
  scene.atoms_ = std::move(atoms);
  scene.length_unit_si_ = length_unit_si;
  return scene;
}

const Atom& Scene::atom(std::size_t index) const {
  if (index >= atoms_.size())
    throw DomainError("scene has " + std::to_string(atoms_.size()) + " atom(s), requested index " +
                      std::to_string(index));
  return atoms_[index];
}

Scene Scene::with_atoms(std::vector<Atom> atoms) const {
  return create(body_, std::move(atoms), length_unit_si_);
}

}  // namespace dispersia
