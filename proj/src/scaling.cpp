#include "dispersia/scaling.hpp"

#include "dispersia/greens.hpp"
#include "dispersia/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>

namespace dispersia {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Body scale_body(const Body& body, double a) {
  return std::visit(overloaded{
                        [&](const Slab& s) -> Body {
                          Slab out = s;
                          out.thickness *= a;
                          return out;
                        },
                        [&](const ConductingSphere& s) -> Body {
                          ConductingSphere out = s;
                          out.radius *= a;
                          out.centre *= a;
                          return out;
                        },
                        [](const auto& b) -> Body { return b; },
                    },
                    body);
}

bool is_magnetic_only(const MaterialResponse& epsilon, const MaterialResponse& mu) {
  return epsilon.is_vacuum() && !mu.is_vacuum();
}

// Evaluates one index range [0, n) with `work`, in parallel or in order. The
// first failing index (lowest, not first in time) is rethrown so errors are
// reproducible.
template <class Work>
void for_each_index(std::size_t n, bool parallel, Work&& work) {
  std::vector<std::exception_ptr> errors(n);
  if (parallel) {
    const int threads = thread_count();
    const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long k = 0; k < count; ++k) {
      try {
        work(static_cast<std::size_t>(k));
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      try {
        work(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ScalingTarget scale_target(const ScalingTarget& target, double a) {
  return std::visit(overloaded{
                        [&](const Scene& s) -> ScalingTarget { return scale_scene(s, a); },
                        [&](const PressureSetup& p) -> ScalingTarget {
                          PressureSetup out = p;
                          out.gap *= a;
                          return out;
                        },
                    },
                    target);
}

const Scene& scene_of(const ScalingTarget& target, Quantity quantity) {
  const Scene* s = std::get_if<Scene>(&target);
  if (s == nullptr)
    throw DomainError("quantity '" + std::string(to_string(quantity)) + "' needs a scene, not a pressure setup");
  return *s;
}

double evaluate(Quantity quantity, const ScalingTarget& target, Regime regime, const QuadratureConfig& config) {
  if (quantity == Quantity::Pressure) {
    const PressureSetup* p = std::get_if<PressureSetup>(&target);
    if (p == nullptr) throw DomainError("the pressure needs a pressure setup (gap and two media)");
    return lifshitz_pressure(p->gap, p->first, p->second, regime, config).value;
  }
  const Scene& scene = scene_of(target, quantity);
  switch (quantity) {
    case Quantity::Cp:
      return cp_potential(scene.atom(0), scene, regime, config).value;
    case Quantity::CpForce:
      return cp_force(scene.atom(0), scene, regime, config).norm();
    case Quantity::VdwU0:
      return vdw_potential(scene.atom(0), scene.atom(1), scene, regime, config).free_space;
    case Quantity::VdwU1:
      return vdw_potential(scene.atom(0), scene.atom(1), scene, regime, config).body_induced;
    case Quantity::Pressure:
      break;
  }
  return 0.0;
}

// Characteristic distances of the target, used for the window check.
std::vector<double> lengths_of(Quantity quantity, const ScalingTarget& target) {
  if (const auto* p = std::get_if<PressureSetup>(&target)) return {p->gap};
  const Scene& scene = std::get<Scene>(target);
  std::vector<double> out;
  const std::size_t n = (quantity == Quantity::VdwU0 || quantity == Quantity::VdwU1) ? 2 : 1;
  for (std::size_t i = 0; i < n && i < scene.atoms().size(); ++i)
    if (scene.body() && quantity != Quantity::VdwU0)
      out.push_back(distance_to_surface(*scene.body(), scene.atoms()[i].position));
  if (n == 2 && scene.atoms().size() >= 2)
    out.push_back((scene.atoms()[0].position - scene.atoms()[1].position).norm());
  return out;
}

std::optional<double> target_frequency(const ScalingTarget& target) {
  if (const auto* s = std::get_if<Scene>(&target)) return reference_frequency(*s);
  const auto& p = std::get<PressureSetup>(target);
  double w = std::numeric_limits<double>::infinity();
  for (const PlanarMedium* m : {&p.first, &p.second})
    for (const MaterialResponse* r : {&m->epsilon, &m->mu})
      if (r->is_dispersive()) w = std::min(w, r->resonance_frequency());
  if (!std::isfinite(w)) return std::nullopt;
  return w;
}

ScalingReport make_report(Quantity quantity, const ScalingTarget& target, Regime regime,
                          std::span<const double> factors, const std::vector<double>& values) {
  ScalingReport report;
  report.quantity = quantity;
  report.regime = regime;
  report.column = classify(target, regime);
  report.label = std::string(to_string(quantity)) + "/" + std::string(to_string(report.column));
  report.expected = expected_exponent(quantity, report.column);

  std::vector<PowerLawSample> samples;
  for (std::size_t i = 0; i < factors.size(); ++i) samples.push_back({factors[i], values[i]});
  report.fit = fit_power_law(samples);
  report.fitted = report.fit.exponent;
  report.delta = report.fitted - report.expected;
  report.max_log_residual = report.fit.max_log_residual;

  if (regime == Regime::FullDispersive) {
    if (const auto w = target_frequency(target)) {
      const double lo = 1e-3 / *w, hi = 1e-2 / *w;
      bool outside = false;
      for (double a : factors)
        for (double l : lengths_of(quantity, target))
          if (a * l < lo * (1.0 - 1e-12) || a * l > hi * (1.0 + 1e-12)) outside = true;
      if (outside) report.warnings.push_back("scaled distances leave the window [1e-3, 1e-2] / omega_ref");
    }
  }
  if (report.max_log_residual > 1e-2) report.warnings.push_back("power law fits poorly (log residual > 1e-2)");
  return report;
}

}  // namespace

Scene scale_scene(const Scene& scene, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("scale factor must be positive and finite");
  std::optional<Body> body;
  if (scene.body()) body = scale_body(*scene.body(), a);
  std::vector<Atom> atoms = scene.atoms();
  for (Atom& atom : atoms) atom.position *= a;
  return Scene::create(std::move(body), std::move(atoms), scene.length_unit_si());
}

std::string_view to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::Cp:
      return "cp";
    case Quantity::CpForce:
      return "cp_force";
    case Quantity::VdwU0:
      return "vdw_U0";
    case Quantity::VdwU1:
      return "vdw_U1";
    case Quantity::Pressure:
      return "pressure";
  }
  return "?";
}

Quantity parse_quantity(std::string_view name) {
  for (Quantity q : {Quantity::Cp, Quantity::CpForce, Quantity::VdwU0, Quantity::VdwU1, Quantity::Pressure})
    if (to_string(q) == name) return q;
  throw DomainError("unknown quantity '" + std::string(name) + "'");
}

std::string_view to_string(ScalingColumn column) {
  switch (column) {
    case ScalingColumn::LongDistance:
      return "long";
    case ScalingColumn::ShortElectric:
      return "short-electric";
    case ScalingColumn::ShortMagnetic:
      return "short-magnetic";
  }
  return "?";
}

double expected_exponent(Quantity quantity, ScalingColumn column) {
  const int c = static_cast<int>(column);
  switch (quantity) {
    case Quantity::Cp:
      return std::array{-4.0, -3.0, -1.0}[c];
    case Quantity::CpForce:
      return std::array{-5.0, -4.0, -2.0}[c];
    case Quantity::VdwU0:
      return std::array{-7.0, -6.0, -6.0}[c];
    case Quantity::VdwU1:
      return std::array{-7.0, -6.0, -4.0}[c];
    case Quantity::Pressure:
      return std::array{-4.0, -3.0, -3.0}[c];
  }
  return 0.0;
}

ScalingColumn classify(const ScalingTarget& target, Regime regime) {
  if (regime == Regime::Retarded) return ScalingColumn::LongDistance;
  const bool magnetic = std::visit(
      overloaded{
          [](const Scene& s) {
            if (!s.body()) return false;
            return std::visit(overloaded{
                                  [](const HalfSpace& h) { return is_magnetic_only(h.epsilon, h.mu); },
                                  [](const Slab& b) { return is_magnetic_only(b.epsilon, b.mu); },
                                  [](const auto&) { return false; },
                              },
                              *s.body());
          },
          [](const PressureSetup& p) {
            return is_magnetic_only(p.first.epsilon, p.first.mu) && is_magnetic_only(p.second.epsilon, p.second.mu);
          },
      },
      target);
  return magnetic ? ScalingColumn::ShortMagnetic : ScalingColumn::ShortElectric;
}

ScalingReport measure_exponent(Quantity quantity, const ScalingTarget& target, Regime regime,
                               std::span<const double> scale_factors, const QuadratureConfig& config) {
  std::vector<double> values;
  for (double a : scale_factors) values.push_back(evaluate(quantity, scale_target(target, a), regime, config));
  return make_report(quantity, target, regime, scale_factors, values);
}

std::vector<ScalingCell> scaling_table_cells() {
  using R = MaterialResponse;
  const R vac_mu = R::vacuum(ResponseRole::Magnetic);

  // Long distance: static magnetoelectric medium, static atoms.
  const HalfSpace long_body{R::constant(4.0), R::constant(2.0, ResponseRole::Magnetic)};
  const Polarizability static_atom = Polarizability::constant(1.0);
  const Scene long_scene = Scene::create(long_body, {{Vec3(0, 0, 1), static_atom}, {Vec3(1, 0, 1), static_atom}});
  const PressureSetup long_plates{1.0, {long_body.epsilon, long_body.mu}, {long_body.epsilon, long_body.mu}};

  // Short distance, electric: quasi-static kernels are exact power laws.
  const Polarizability resonant_atom = Polarizability::single_resonance(1.0, 1.5);
  const HalfSpace electric_body{R::single_resonance(5.0, 1.0), vac_mu};
  const Scene electric_scene =
      Scene::create(electric_body, {{Vec3(0, 0, 1), resonant_atom}, {Vec3(1, 0, 1), resonant_atom}});
  const PressureSetup electric_plates{1.0, {electric_body.epsilon, vac_mu}, {electric_body.epsilon, vac_mu}};

  // Short distance, magnetic: the full engine inside the window 1e-3..1e-2 / omega.
  const double z0 = 1e-3;
  const HalfSpace magnetic_body{R::vacuum(), R::single_resonance(3.0, 1.0, ResponseRole::Magnetic)};
  const Scene magnetic_scene =
      Scene::create(magnetic_body, {{Vec3(0, 0, z0), resonant_atom}, {Vec3(z0, 0, z0), resonant_atom}});
  const PressureSetup magnetic_plates{z0, {R::vacuum(), magnetic_body.mu}, {R::vacuum(), magnetic_body.mu}};

  std::vector<ScalingCell> cells;
  auto column = [&](ScalingColumn c, Regime regime, const Scene& scene, const PressureSetup& plates, double tol) {
    for (Quantity q : {Quantity::Cp, Quantity::VdwU0, Quantity::VdwU1})
      cells.push_back({q, c, regime, scene, tol});
    cells.push_back({Quantity::Pressure, c, regime, plates, tol});
  };
  column(ScalingColumn::LongDistance, Regime::Retarded, long_scene, long_plates, 1e-3);
  column(ScalingColumn::ShortElectric, Regime::Nonretarded, electric_scene, electric_plates, 1e-3);
  column(ScalingColumn::ShortMagnetic, Regime::FullDispersive, magnetic_scene, magnetic_plates, 2e-2);
  return cells;
}

namespace {

std::vector<ScalingReport> run_table(const QuadratureConfig& config, bool parallel) {
  const auto cells = scaling_table_cells();
  const std::size_t per_cell = kDefaultScaleFactors.size();
  std::vector<double> values(cells.size() * per_cell);
  for_each_index(values.size(), parallel, [&](std::size_t k) {
    const ScalingCell& cell = cells[k / per_cell];
    const double a = kDefaultScaleFactors[k % per_cell];
    values[k] = evaluate(cell.quantity, scale_target(cell.target, a), cell.regime, config);
  });
  std::vector<ScalingReport> reports;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::vector<double> v(values.begin() + static_cast<std::ptrdiff_t>(c * per_cell),
                                values.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_cell));
    reports.push_back(make_report(cells[c].quantity, cells[c].target, cells[c].regime, kDefaultScaleFactors, v));
  }
  return reports;
}

}  // namespace

std::vector<ScalingReport> verify_scaling_table(const QuadratureConfig& config) { return run_table(config, true); }

std::vector<ScalingReport> verify_scaling_table_serial(const QuadratureConfig& config) {
  return run_table(config, false);
}

// ------------------------------------------------------------ scale functions

std::string_view to_string(ScaleFamily family) { return family == ScaleFamily::Plate ? "plate" : "sphere"; }

ScaleFamily parse_family(std::string_view name) {
  if (name == "plate") return ScaleFamily::Plate;
  if (name == "sphere") return ScaleFamily::Sphere;
  throw DomainError("unknown scale-function family '" + std::string(name) + "' (expected plate or sphere)");
}

namespace {

void check_options(const ScaleFunctionOptions& options) {
  if (!(options.reference_distance > 0.0) || !std::isfinite(options.reference_distance))
    throw DomainError("reference distance must be positive");
  if (!(options.plate_epsilon >= 1.0) || !std::isfinite(options.plate_epsilon))
    throw DomainError("plate permittivity must be finite and >= 1");
}

Atom plate_atom(const ScaleFunctionOptions& options) {
  return {Vec3(0.0, 0.0, options.reference_distance), Polarizability::constant(1.0)};
}

double plate_reference(const QuadratureConfig& config, const ScaleFunctionOptions& options) {
  const Scene half = Scene::create(HalfSpace{MaterialResponse::constant(options.plate_epsilon)}, {});
  return cp_potential(plate_atom(options), half, Regime::Retarded, config).value;
}

double plate_value(double x, double reference, const QuadratureConfig& config, const ScaleFunctionOptions& options) {
  const Scene slab = Scene::create(
      Slab{x * options.reference_distance, MaterialResponse::constant(options.plate_epsilon)}, {});
  return cp_potential(plate_atom(options), slab, Regime::Retarded, config).value / reference;
}

double sphere_value(double x, const ScaleFunctionOptions& options) {
  // Ratio of the sphere kernel to the conducting-plate kernel pi / z^3 at the
  // same surface distance; the frequency integral over alpha' cancels.
  const double z = options.reference_distance;
  const double radius = x * z;
  const double k = sphere_nonretarded_kernel(z + radius, radius, options.sphere_neutral).kernel;
  return k * z * z * z / kPi;
}

void check_grid(std::span<const double> xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !std::isfinite(xs[i])) throw DomainError("scale-function grid must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("scale-function grid must be ascending");
  }
}

ScaleFunctionCurve curve(ScaleFamily family, std::span<const double> xs, const QuadratureConfig& config,
                         const ScaleFunctionOptions& options, bool parallel) {
  check_options(options);
  check_grid(xs);
  const double reference = family == ScaleFamily::Plate ? plate_reference(config, options) : 1.0;
  ScaleFunctionCurve out{family, std::vector<ScaleFunctionSample>(xs.size())};
  for_each_index(xs.size(), parallel, [&](std::size_t i) {
    const double f = family == ScaleFamily::Plate ? plate_value(xs[i], reference, config, options)
                                                  : sphere_value(xs[i], options);
    out.samples[i] = {xs[i], f};
  });
  return out;
}

}  // namespace

double scale_function_value(ScaleFamily family, double x, const QuadratureConfig& config,
                            const ScaleFunctionOptions& options) {
  check_options(options);
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("x must be positive");
  if (family == ScaleFamily::Sphere) return sphere_value(x, options);
  return plate_value(x, plate_reference(config, options), config, options);
}

ScaleFunctionCurve scale_function(ScaleFamily family, std::span<const double> x_grid, const QuadratureConfig& config,
                                  const ScaleFunctionOptions& options) {
  return curve(family, x_grid, config, options, true);
}

ScaleFunctionCurve scale_function_serial(ScaleFamily family, std::span<const double> x_grid,
                                         const QuadratureConfig& config, const ScaleFunctionOptions& options) {
  return curve(family, x_grid, config, options, false);
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi) || points < 2)
    throw DomainError("log spacing needs 0 < lo < hi and at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linear_spaced(double lo, double hi, int points) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi) || points < 2)
    throw DomainError("linear spacing needs lo < hi and at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  out.back() = hi;
  return out;
}

double loglog_slope(const ScaleFunctionCurve& curve, double lo, double hi) {
  std::vector<PowerLawSample> samples;
  for (const auto& s : curve.samples)
    if (s.x >= lo * (1.0 - 1e-12) && s.x <= hi * (1.0 + 1e-12)) samples.push_back({s.x, s.f});
  return fit_power_law(samples).exponent;
}

// ------------------------------------------------------------ enhancement map

void MapGrid::validate() const {
  if (nx < 2 || nz < 1) throw DomainError("map grid needs nx >= 2 and nz >= 1");
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw DomainError("map grid needs x_min < x_max");
  if (!(z_max > 0.0) || !std::isfinite(z_max)) throw DomainError("map grid needs z_max > 0");
  if (!(exclusion >= 0.0) || !std::isfinite(exclusion)) throw DomainError("exclusion radius must be >= 0");
}

double enhancement_ratio(const Vec3& atom_a, const Vec3& atom_b, const QuadratureConfig& config) {
  static const Scene plate = Scene::create(PerfectPlate{}, {});
  const Polarizability unit = Polarizability::constant(1.0);
  const VdwResult r = vdw_potential({atom_a, unit}, {atom_b, unit}, plate, Regime::Retarded, config);
  return r.total / r.free_space;
}

namespace {

EnhancementMap build_map(double z_b, const MapGrid& grid, const QuadratureConfig& config, bool parallel) {
  if (!(z_b > 0.0) || !std::isfinite(z_b)) throw DomainError("z_B must be positive");
  grid.validate();
  config.validate();
  EnhancementMap map;
  map.z_b = z_b;
  map.grid = grid;
  for (int i = 0; i < grid.nx; ++i)
    map.x.push_back(z_b * (grid.x_min + (grid.x_max - grid.x_min) * i / (grid.nx - 1)));
  for (int j = 0; j < grid.nz; ++j) map.z.push_back(z_b * (grid.z_max * (j + 1) / grid.nz));

  const Vec3 atom_b(0.0, 0.0, z_b);
  const std::size_t nx = map.x.size();
  map.ratio.assign(nx * map.z.size(), std::numeric_limits<double>::quiet_NaN());
  for_each_index(map.ratio.size(), parallel, [&](std::size_t k) {
    const Vec3 atom_a(map.x[k % nx], 0.0, map.z[k / nx]);
    if ((atom_a - atom_b).norm() < grid.exclusion * z_b) return;
    map.ratio[k] = enhancement_ratio(atom_a, atom_b, config);
  });
  return map;
}

}  // namespace

EnhancementMap enhancement_map(double z_b, const MapGrid& grid, const QuadratureConfig& config) {
  return build_map(z_b, grid, config, true);
}

EnhancementMap enhancement_map_serial(double z_b, const MapGrid& grid, const QuadratureConfig& config) {
  return build_map(z_b, grid, config, false);
}

TransverseProfile transverse_profile(const EnhancementMap& map, double z) {
  if (map.z.empty()) throw DomainError("empty map");
  std::size_t best = 0;
  for (std::size_t j = 1; j < map.z.size(); ++j)
    if (std::abs(map.z[j] - z) < std::abs(map.z[best] - z)) best = j;
  TransverseProfile p;
  p.z = map.z[best];
  for (std::size_t i = 0; i < map.x.size(); ++i) {
    const double r = map.ratio[best * map.x.size() + i];
    if (std::isnan(r)) continue;
    p.x.push_back(map.x[i]);
    p.ratio.push_back(r);
  }
  return p;
}

ProfileExtremes profile_extremes(const TransverseProfile& profile, bool positive_side) {
  std::vector<std::pair<double, double>> side;  // (distance, ratio)
  for (std::size_t i = 0; i < profile.x.size(); ++i) {
    const double x = profile.x[i];
    if (positive_side ? x > 0.0 : x < 0.0) side.emplace_back(std::abs(x), profile.ratio[i]);
  }
  if (side.empty()) throw DomainError("profile has no points on the requested side");
  std::sort(side.begin(), side.end());

  ProfileExtremes e{side[0].second, side[0].first, side[0].second, side[0].first, side[0].first, {}};
  double deviation = std::abs(side[0].second - 1.0);
  for (std::size_t i = 0; i < side.size(); ++i) {
    const auto [d, r] = side[i];
    if (r > e.max_ratio) e.max_ratio = r, e.argmax_distance = d;
    if (r < e.min_ratio) e.min_ratio = r, e.argmin_distance = d;
    if (std::abs(r - 1.0) > deviation) deviation = std::abs(r - 1.0), e.strongest_deviation_distance = d;
    if (i > 0) {
      const auto [d0, r0] = side[i - 1];
      if ((r0 - 1.0) * (r - 1.0) < 0.0) e.unit_crossings.push_back(d0 + (d - d0) * (1.0 - r0) / (r - r0));
    }
  }
  return e;
}

}  // namespace dispersia
