#pragma once

// Scale transformations and everything built on them: the power-law exponent
// harness, scale functions f(x) of a plate and a sphere, and the two-atom
// enhancement map next to a conducting plate.
//
// Grid and harness sweeps run on OpenMP threads (see thread_count()); each
// has a *_serial twin that evaluates the same points in order and must give
// identical numbers.

#include "dispersia/core.hpp"
#include "dispersia/potentials.hpp"
#include "dispersia/quadrature.hpp"
#include "dispersia/scene.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dispersia {

/// Multiplies every length of the scene (atom positions, slab thickness,
/// sphere radius and centre) by a. Response functions are unchanged.
Scene scale_scene(const Scene& scene, double a);

// ------------------------------------------------------------ exponent harness

enum class Quantity { Cp, CpForce, VdwU0, VdwU1, Pressure };

std::string_view to_string(Quantity quantity);
Quantity parse_quantity(std::string_view name);

/// Which asymptotic law applies: long distance, or short distance next to an
/// electric or a purely magnetic body.
enum class ScalingColumn { LongDistance, ShortElectric, ShortMagnetic };

std::string_view to_string(ScalingColumn column);

double expected_exponent(Quantity quantity, ScalingColumn column);

struct PressureSetup {
  double gap = 1.0;
  PlanarMedium first;
  PlanarMedium second;
};

using ScalingTarget = std::variant<Scene, PressureSetup>;

inline constexpr std::array<double, 6> kDefaultScaleFactors{1.0, 1.5, 2.0, 3.0, 4.5, 8.0};

/// Column implied by the regime and the materials: retarded is long distance;
/// otherwise a body with mu != 1 and epsilon = 1 is magnetic, anything else electric.
ScalingColumn classify(const ScalingTarget& target, Regime regime);

struct ScalingReport {
  std::string label;
  Quantity quantity = Quantity::Cp;
  ScalingColumn column = ScalingColumn::LongDistance;
  Regime regime = Regime::Retarded;
  double fitted = 0.0;
  double expected = 0.0;
  double delta = 0.0;
  double max_log_residual = 0.0;
  PowerLawFit fit;
  std::vector<std::string> warnings;
};

/// Evaluates the quantity on the target scaled by each a and fits a power law.
/// Atom 0 is used for cp / cp_force, atoms 0 and 1 for the vdW parts; the force
/// is measured through its magnitude.
ScalingReport measure_exponent(Quantity quantity, const ScalingTarget& target, Regime regime,
                               std::span<const double> scale_factors = kDefaultScaleFactors,
                               const QuadratureConfig& config = {});

struct ScalingCell {
  Quantity quantity;
  ScalingColumn column;
  Regime regime;
  ScalingTarget target;
  double tolerance;
};

/// The twelve cells (cp, vdW U0, vdW U1, pressure) x (long, short electric,
/// short magnetic) with their reference scenes and tolerances.
std::vector<ScalingCell> scaling_table_cells();

std::vector<ScalingReport> verify_scaling_table(const QuadratureConfig& config = {});
std::vector<ScalingReport> verify_scaling_table_serial(const QuadratureConfig& config = {});

/// Exponent of the total force between two plates of side proportional to a:
/// the pressure exponent plus the area's 2.
inline double total_force_exponent(const ScalingReport& pressure) { return pressure.fitted + 2.0; }

// ------------------------------------------------------------ scale functions

enum class ScaleFamily { Plate, Sphere };

std::string_view to_string(ScaleFamily family);
ScaleFamily parse_family(std::string_view name);

struct ScaleFunctionOptions {
  double plate_epsilon = 11.7;       // static permittivity of the plate
  double reference_distance = 1.0;   // z_A
  bool sphere_neutral = true;
};

struct ScaleFunctionSample {
  double x;
  double f;
};

struct ScaleFunctionCurve {
  ScaleFamily family = ScaleFamily::Plate;
  std::vector<ScaleFunctionSample> samples;
};

/// Plate: x = d / z_A, f = U_slab / U_halfspace, retarded, static atom.
/// Sphere: x = R / z_A with z_A measured from the sphere surface,
/// f = U_sphere / U_conducting-plate, nonretarded. Both tend to 1 as x grows.
double scale_function_value(ScaleFamily family, double x, const QuadratureConfig& config = {},
                            const ScaleFunctionOptions& options = {});

ScaleFunctionCurve scale_function(ScaleFamily family, std::span<const double> x_grid,
                                  const QuadratureConfig& config = {}, const ScaleFunctionOptions& options = {});
ScaleFunctionCurve scale_function_serial(ScaleFamily family, std::span<const double> x_grid,
                                         const QuadratureConfig& config = {},
                                         const ScaleFunctionOptions& options = {});

std::vector<double> log_spaced(double lo, double hi, int points);
std::vector<double> linear_spaced(double lo, double hi, int points);

/// Least-squares log-log slope of the curve over samples with lo <= x <= hi.
double loglog_slope(const ScaleFunctionCurve& curve, double lo, double hi);

// ------------------------------------------------------------ enhancement map

/// Grid of atom-A positions in units of z_B: x from x_min to x_max (nx points),
/// z = z_max * (j + 1) / nz for j < nz. Points closer than `exclusion` to atom B
/// are left out.
struct MapGrid {
  double x_min = -4.0;
  double x_max = 4.0;
  int nx = 161;
  double z_max = 4.0;
  int nz = 80;
  double exclusion = 0.15;

  void validate() const;
};

struct EnhancementMap {
  double z_b = 1.0;
  MapGrid grid;
  std::vector<double> x;      // absolute coordinates, size nx
  std::vector<double> z;      // absolute coordinates, size nz
  std::vector<double> ratio;  // U / U0 at (x[i], z[j]) stored at j * nx + i; NaN when excluded

  double at(int i, int j) const { return ratio[static_cast<std::size_t>(j) * x.size() + static_cast<std::size_t>(i)]; }
};

/// U / U0 for two static atoms next to a perfectly conducting plate (retarded).
double enhancement_ratio(const Vec3& atom_a, const Vec3& atom_b, const QuadratureConfig& config = {});

/// Atom B sits at (0, 0, z_b).
EnhancementMap enhancement_map(double z_b, const MapGrid& grid = {}, const QuadratureConfig& config = {});
EnhancementMap enhancement_map_serial(double z_b, const MapGrid& grid = {}, const QuadratureConfig& config = {});

struct TransverseProfile {
  double z = 0.0;
  std::vector<double> x;
  std::vector<double> ratio;
};

/// The map row whose height is closest to z, excluded points dropped.
TransverseProfile transverse_profile(const EnhancementMap& map, double z);

/// Extremes of one side (x > 0 or x < 0) of a profile, distances measured
/// from atom B's transverse position.
struct ProfileExtremes {
  double max_ratio;
  double argmax_distance;
  double min_ratio;
  double argmin_distance;
  double strongest_deviation_distance;  // arg-max of |ratio - 1|
  std::vector<double> unit_crossings;   // distances where ratio - 1 changes sign
};

ProfileExtremes profile_extremes(const TransverseProfile& profile, bool positive_side);

}  // namespace dispersia
