#include "dispersia/scene_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <variant>

namespace dispersia {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_object(const json& doc, const std::string& what) {
  if (!doc.is_object()) throw DomainError(what + " must be a JSON object");
}

void allow_keys(const json& doc, std::initializer_list<std::string_view> keys, const std::string& what) {
  for (const auto& item : doc.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known) throw DomainError("unknown key '" + item.key() + "' in " + what);
  }
}

double number(const json& doc, const char* key, const std::string& what) {
  if (!doc.contains(key)) throw DomainError(what + " is missing \"" + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_number()) throw DomainError(what + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::string text(const json& doc, const char* key, const std::string& what) {
  if (!doc.contains(key)) throw DomainError(what + " is missing \"" + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_string()) throw DomainError(what + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

Vec3 vector3(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) throw DomainError(what + " must be an array of three numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) throw DomainError(what + " must contain numbers");
    out[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
  return out;
}

MaterialResponse optional_material(const json& body, const char* key, ResponseRole role) {
  if (!body.contains(key)) return MaterialResponse::vacuum(role);
  return material_from_json(body.at(key), role);
}

Body body_from_json(const json& doc) {
  require_object(doc, "body");
  const std::string type = text(doc, "type", "body");
  if (type == "perfect_plate") {
    allow_keys(doc, {"type"}, "perfect_plate body");
    return PerfectPlate{};
  }
  if (type == "half_space") {
    allow_keys(doc, {"type", "epsilon", "mu"}, "half_space body");
    return HalfSpace{optional_material(doc, "epsilon", ResponseRole::Electric),
                     optional_material(doc, "mu", ResponseRole::Magnetic)};
  }
  if (type == "slab") {
    allow_keys(doc, {"type", "epsilon", "mu", "d"}, "slab body");
    return Slab{number(doc, "d", "slab body"), optional_material(doc, "epsilon", ResponseRole::Electric),
                optional_material(doc, "mu", ResponseRole::Magnetic)};
  }
  if (type == "sphere") {
    allow_keys(doc, {"type", "radius", "center", "neutral"}, "sphere body");
    ConductingSphere s;
    s.radius = number(doc, "radius", "sphere body");
    if (doc.contains("center")) s.centre = vector3(doc.at("center"), "sphere center");
    if (doc.contains("neutral")) {
      if (!doc.at("neutral").is_boolean()) throw DomainError("sphere \"neutral\" must be true or false");
      s.neutral = doc.at("neutral").get<bool>();
    }
    return s;
  }
  throw DomainError("unknown body type '" + type + "'");
}

Atom atom_from_json(const json& doc) {
  require_object(doc, "atom");
  allow_keys(doc, {"position", "alpha"}, "atom");
  if (!doc.contains("position")) throw DomainError("atom is missing \"position\"");
  if (!doc.contains("alpha")) throw DomainError("atom is missing \"alpha\"");
  return {vector3(doc.at("position"), "atom position"), polarizability_from_json(doc.at("alpha"))};
}

ordered_json vector_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

}  // namespace

MaterialResponse material_from_json(const json& doc, ResponseRole role) {
  require_object(doc, "material");
  const std::string model = text(doc, "model", "material");
  if (model == "perfect") {
    allow_keys(doc, {"model"}, "perfect material");
    if (role != ResponseRole::Electric) throw DomainError("only epsilon may be a perfect conductor");
    return MaterialResponse::perfect_conductor();
  }
  if (model == "static") {
    allow_keys(doc, {"model", "value"}, "static material");
    return MaterialResponse::constant(number(doc, "value", "static material"), role);
  }
  if (model == "resonance") {
    allow_keys(doc, {"model", "value", "omega"}, "resonance material");
    return MaterialResponse::single_resonance(number(doc, "value", "resonance material"),
                                              number(doc, "omega", "resonance material"), role);
  }
  throw DomainError("unknown material model '" + model + "'");
}

Polarizability polarizability_from_json(const json& doc) {
  require_object(doc, "alpha");
  const std::string model = text(doc, "model", "alpha");
  if (model == "static") {
    allow_keys(doc, {"model", "value"}, "static alpha");
    return Polarizability::constant(number(doc, "value", "alpha"));
  }
  if (model == "resonance") {
    allow_keys(doc, {"model", "value", "omega"}, "resonance alpha");
    return Polarizability::single_resonance(number(doc, "value", "alpha"), number(doc, "omega", "alpha"));
  }
  throw DomainError("unknown polarizability model '" + model + "'");
}

Scene scene_from_json(const json& doc) {
  require_object(doc, "scene");
  allow_keys(doc, {"bodies", "atoms", "length_unit_si"}, "scene");
  std::optional<Body> body;
  if (doc.contains("bodies")) {
    const json& bodies = doc.at("bodies");
    if (!bodies.is_array()) throw DomainError("\"bodies\" must be an array");
    if (bodies.size() > 1) throw DomainError("a scene holds at most one body");
    if (bodies.size() == 1) body = body_from_json(bodies[0]);
  }
  std::vector<Atom> atoms;
  if (doc.contains("atoms")) {
    const json& list = doc.at("atoms");
    if (!list.is_array()) throw DomainError("\"atoms\" must be an array");
    for (const json& a : list) atoms.push_back(atom_from_json(a));
  }
  std::optional<double> unit;
  if (doc.contains("length_unit_si")) unit = number(doc, "length_unit_si", "scene");
  return Scene::create(std::move(body), std::move(atoms), unit);
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open scene file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("scene file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return scene_from_json(doc);
}

ordered_json material_to_json(const MaterialResponse& m) {
  ordered_json out;
  switch (m.model()) {
    case MaterialResponse::Model::PerfectConductor:
      out["model"] = "perfect";
      break;
    case MaterialResponse::Model::Static:
      out["model"] = "static";
      out["value"] = m.static_value();
      break;
    case MaterialResponse::Model::SingleResonance:
      out["model"] = "resonance";
      out["value"] = m.static_value();
      out["omega"] = m.resonance_frequency();
      break;
  }
  return out;
}

ordered_json scene_to_json(const Scene& scene) {
  ordered_json out;
  out["bodies"] = ordered_json::array();
  if (scene.body()) {
    ordered_json b = std::visit(overloaded{
                                    [](const PerfectPlate&) { return ordered_json{{"type", "perfect_plate"}}; },
                                    [](const HalfSpace& h) {
                                      return ordered_json{{"type", "half_space"},
                                                          {"epsilon", material_to_json(h.epsilon)},
                                                          {"mu", material_to_json(h.mu)}};
                                    },
                                    [](const Slab& s) {
                                      return ordered_json{{"type", "slab"},
                                                          {"epsilon", material_to_json(s.epsilon)},
                                                          {"mu", material_to_json(s.mu)},
                                                          {"d", s.thickness}};
                                    },
                                    [](const ConductingSphere& s) {
                                      return ordered_json{{"type", "sphere"},
                                                          {"radius", s.radius},
                                                          {"center", vector_json(s.centre)},
                                                          {"neutral", s.neutral}};
                                    },
                                },
                                *scene.body());
    out["bodies"].push_back(std::move(b));
  }
  out["atoms"] = ordered_json::array();
  for (const Atom& a : scene.atoms()) {
    ordered_json alpha;
    if (a.polarizability.is_dispersive()) {
      alpha = {{"model", "resonance"},
               {"value", a.polarizability.static_volume()},
               {"omega", a.polarizability.resonance_frequency()}};
    } else {
      alpha = {{"model", "static"}, {"value", a.polarizability.static_volume()}};
    }
    out["atoms"].push_back({{"position", vector_json(a.position)}, {"alpha", alpha}});
  }
  if (scene.length_unit_si()) out["length_unit_si"] = *scene.length_unit_si();
  return out;
}

}  // namespace dispersia
