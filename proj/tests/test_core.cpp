#include "dispersia/core.hpp"
#include "dispersia/response.hpp"
#include "dispersia/scene.hpp"
#include "dispersia/scene_json.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace dispersia;

TEST_CASE("response examples") {
  CHECK(evaluate_response(MaterialResponse::constant(11.7), 3.2) == 11.7);
  CHECK(evaluate_response(Polarizability::single_resonance(1.0, 1.0), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(evaluate_response(MaterialResponse::single_resonance(5.0, 2.0), 0.0) == 5.0);
  CHECK(evaluate_response(MaterialResponse::single_resonance(5.0, 2.0), 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(evaluate_response(Polarizability::constant(2.5), 100.0) == 2.5);
}

TEST_CASE("perfect conductor reports infinity") {
  const double v = MaterialResponse::perfect_conductor().at(1.0);
  CHECK(std::isinf(v));
  CHECK(v > 0.0);
}

TEST_CASE("bad frequencies are rejected") {
  const auto eps = MaterialResponse::single_resonance(3.0, 1.0);
  CHECK_THROWS_AS(eps.at(-1e-3), DomainError);
  CHECK_THROWS_AS(eps.at(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(eps.at(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(Polarizability::constant(1.0).at(-1.0), DomainError);
}

TEST_CASE("bad model parameters are rejected") {
  CHECK_THROWS_AS(MaterialResponse::constant(0.5, ResponseRole::Electric), DomainError);
  CHECK_THROWS_AS(MaterialResponse::constant(0.0, ResponseRole::Magnetic), DomainError);
  CHECK_NOTHROW(MaterialResponse::constant(0.5, ResponseRole::Magnetic));
  CHECK_THROWS_AS(MaterialResponse::single_resonance(3.0, 0.0), DomainError);
  CHECK_THROWS_AS(Polarizability::constant(-1.0), DomainError);
  CHECK_THROWS_AS(Polarizability::single_resonance(1.0, -2.0), DomainError);
}

TEST_CASE("responses are nonincreasing in xi") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  const MaterialResponse models[] = {MaterialResponse::constant(4.0), MaterialResponse::single_resonance(5.0, 1.0),
                                     MaterialResponse::single_resonance(1.5, 30.0),
                                     MaterialResponse::single_resonance(3.0, 0.2, ResponseRole::Magnetic)};
  const Polarizability atoms[] = {Polarizability::constant(1.0), Polarizability::single_resonance(2.0, 0.7)};
  for (int k = 0; k < 500; ++k) {
    double x1 = u(rng);
    double x2 = u(rng);
    if (x1 > x2) std::swap(x1, x2);
    for (const auto& m : models) {
      CHECK(m.at(x1) >= m.at(x2));
      CHECK(m.susceptibility(x1) >= 0.0);
    }
    for (const auto& a : atoms) {
      CHECK(a.at(x1) >= a.at(x2));
      CHECK(a.at(x2) > 0.0);
    }
  }
}

TEST_CASE("zeta has the sign opposite to mu - 1") {
  for (double mu : {0.3, 0.9, 1.0, 2.0, 7.0}) {
    const auto m = MaterialResponse::constant(mu, ResponseRole::Magnetic);
    const double zeta = m.inverse_susceptibility(0.4);
    CHECK(zeta == doctest::Approx(1.0 / mu - 1.0));
    CHECK(zeta * (mu - 1.0) <= 0.0);
  }
}

TEST_CASE("vacuum detection") {
  CHECK(MaterialResponse::vacuum().is_vacuum());
  CHECK(MaterialResponse::constant(1.0).is_vacuum());
  CHECK(MaterialResponse::single_resonance(1.0, 3.0).is_vacuum());
  CHECK_FALSE(MaterialResponse::constant(1.1).is_vacuum());
  CHECK_FALSE(MaterialResponse::perfect_conductor().is_vacuum());
}

TEST_CASE("regime names round trip") {
  for (Regime r : {Regime::Retarded, Regime::Nonretarded, Regime::FullDispersive}) CHECK(parse_regime(to_string(r)) == r);
  CHECK_THROWS_AS(parse_regime("quantum"), DomainError);
}

TEST_CASE("SI conversion") {
  Units units{1e-9};
  const double hbar_c = Units::kHbar * Units::kSpeedOfLight;
  CHECK(units.energy_si(2.0) == doctest::Approx(2.0 * hbar_c / 1e-9));
  CHECK(units.force_si(1.0) == doctest::Approx(hbar_c / 1e-18));
  CHECK(units.pressure_si(1.0) == doctest::Approx(hbar_c / 1e-36));
  CHECK_THROWS_AS(Units{}.energy_si(1.0), DomainError);
}

TEST_CASE("scenes reject atoms inside or on bodies") {
  const Atom on_surface{Vec3(0, 0, 0)};
  const Atom below{Vec3(1, 2, -0.5)};
  const Atom above{Vec3(0, 0, 0.1)};
  CHECK_THROWS_AS(Scene::create(PerfectPlate{}, {on_surface}), DomainError);
  CHECK_THROWS_AS(Scene::create(HalfSpace{MaterialResponse::constant(2.0)}, {below}), DomainError);
  CHECK_NOTHROW(Scene::create(HalfSpace{MaterialResponse::constant(2.0)}, {above}));
  CHECK_THROWS_AS(Scene::create(Slab{0.0, MaterialResponse::constant(2.0)}, {above}), DomainError);
  CHECK_THROWS_AS(Scene::create(Slab{1.0, MaterialResponse::constant(2.0)}, {below}), DomainError);

  ConductingSphere sphere{1.0, Vec3(0, 0, -2)};
  CHECK_THROWS_AS(Scene::create(sphere, {Atom{Vec3(0, 0, -1.5)}}), DomainError);
  CHECK_THROWS_AS(Scene::create(sphere, {Atom{Vec3(0, 0, -1.0)}}), DomainError);
  CHECK_NOTHROW(Scene::create(sphere, {Atom{Vec3(0, 0, -0.9)}}));
  CHECK_THROWS_AS(Scene::create(ConductingSphere{-1.0}, {}), DomainError);
}

TEST_CASE("scene validation of materials and units") {
  CHECK_THROWS_AS(Scene::create(HalfSpace{MaterialResponse::constant(2.0, ResponseRole::Magnetic)}, {}), DomainError);
  CHECK_THROWS_AS(Scene::create(std::nullopt, {}, -1.0), DomainError);
  CHECK_THROWS_AS(Scene::create(std::nullopt, {Atom{Vec3(0, 0, std::nan(""))}}), DomainError);
}

TEST_CASE("distance to surface") {
  CHECK(distance_to_surface(PerfectPlate{}, Vec3(3, 4, 2.5)) == 2.5);
  CHECK(distance_to_surface(ConductingSphere{1.0, Vec3(0, 0, -2)}, Vec3(0, 0, 1)) == doctest::Approx(2.0));
  CHECK(is_planar(Slab{}));
  CHECK_FALSE(is_planar(ConductingSphere{}));
}

TEST_CASE("scene JSON parsing") {
  const auto doc = nlohmann::json::parse(R"({
    "bodies": [{"type": "half_space", "epsilon": {"model": "resonance", "value": 5, "omega": 1},
                "mu": {"model": "static", "value": 2}}],
    "atoms": [{"position": [0, 0, 1], "alpha": {"model": "resonance", "value": 1, "omega": 1.5}}],
    "length_unit_si": 1e-9})");
  const Scene scene = scene_from_json(doc);
  REQUIRE(scene.body().has_value());
  const auto& h = std::get<HalfSpace>(*scene.body());
  CHECK(h.epsilon == MaterialResponse::single_resonance(5.0, 1.0));
  CHECK(h.mu == MaterialResponse::constant(2.0, ResponseRole::Magnetic));
  CHECK(scene.atom(0).polarizability == Polarizability::single_resonance(1.0, 1.5));
  CHECK(*scene.length_unit_si() == 1e-9);

  // the writer's output reads back to the same scene
  CHECK(scene_from_json(nlohmann::json::parse(scene_to_json(scene).dump())) == scene);
}

TEST_CASE("scene JSON rejects malformed input") {
  auto bad = [](const char* text) { return scene_from_json(nlohmann::json::parse(text)); };
  CHECK_THROWS_AS(bad(R"({"bodies": [], "atom": []})"), DomainError);
  CHECK_THROWS_AS(bad(R"({"bodies": [{"type": "perfect_plate"}, {"type": "perfect_plate"}]})"), DomainError);
  CHECK_THROWS_AS(bad(R"({"bodies": [{"type": "cylinder"}]})"), DomainError);
  CHECK_THROWS_AS(bad(R"({"atoms": [{"position": [0, 0], "alpha": {"model": "static", "value": 1}}]})"), DomainError);
  CHECK_THROWS_AS(bad(R"({"atoms": [{"position": [0, 0, 1], "alpha": {"model": "static"}}]})"), DomainError);
  CHECK_THROWS_AS(bad(R"({"bodies": [{"type": "half_space", "mu": {"model": "perfect"}}]})"), DomainError);
  CHECK_THROWS_AS(bad(R"({"bodies": [{"type": "sphere", "radius": 1, "neutral": "yes"}]})"), DomainError);
  CHECK_THROWS_AS(bad(R"([1, 2])"), DomainError);
}
