#pragma once

// Scene files:
//   {"bodies": [{"type": "perfect_plate" | "half_space" | "slab" | "sphere",
//                "epsilon": {"model": "static" | "resonance" | "perfect", "value": v, "omega": w},
//                "mu": {...}, "d": thickness, "radius": R, "center": [x, y, z], "neutral": true}],
//    "atoms": [{"position": [x, y, z], "alpha": {"model": "static" | "resonance", "value": v, "omega": w}}],
//    "length_unit_si": metres_per_unit}
// At most one body. Unknown keys are rejected so typos do not pass silently.

#include "dispersia/scene.hpp"

#include "json.hpp"

#include <filesystem>

namespace dispersia {

Scene scene_from_json(const nlohmann::json& doc);
Scene load_scene(const std::filesystem::path& path);

MaterialResponse material_from_json(const nlohmann::json& doc, ResponseRole role);
Polarizability polarizability_from_json(const nlohmann::json& doc);

nlohmann::ordered_json material_to_json(const MaterialResponse& m);
nlohmann::ordered_json scene_to_json(const Scene& scene);

}  // namespace dispersia
