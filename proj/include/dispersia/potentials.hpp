#pragma once

// Dispersion observables built on the Green tensors: Casimir-Polder potential
// and force, the two-atom van der Waals potential, the planar Casimir pressure
// and the small-distance coefficients of a half space.
//
// Conventions (natural units, polarizability volumes alpha'):
//   U_CP  = 2 int dxi alpha'(xi) Tr[xi^2 G1(r, r)]
//   U_vdW = -8 pi int dxi alpha'_A alpha'_B Tr[(xi^2 G)(xi^2 G)^T]
// Regime::Retarded freezes every response at xi = 0 and therefore only
// accepts static (or perfectly conducting) models. Regime::Nonretarded uses
// quasi-static kernels, whose frequency integrals converge only for
// dispersive atoms.

#include "dispersia/core.hpp"
#include "dispersia/quadrature.hpp"
#include "dispersia/response.hpp"
#include "dispersia/scene.hpp"

#include <optional>
#include <span>

namespace dispersia {

Measured cp_potential(const Atom& atom, const Scene& scene, Regime regime, const QuadratureConfig& config = {});

/// F = -grad U by central differences. The default step is 1e-5 times the
/// atom's distance to the surface (or to the origin in an empty scene).
Vec3 cp_force(const Atom& atom, const Scene& scene, Regime regime, const QuadratureConfig& config = {},
              std::optional<double> step = std::nullopt);

struct VdwResult {
  double total = 0.0;
  double free_space = 0.0;    // U0, the G0 G0 term
  double body_induced = 0.0;  // U1, mixed and G1 G1 terms
  double error_estimate = 0.0;
};

VdwResult vdw_potential(const Atom& a, const Atom& b, const Scene& scene, Regime regime,
                        const QuadratureConfig& config = {});

struct PlanarMedium {
  MaterialResponse epsilon;
  MaterialResponse mu = MaterialResponse::vacuum(ResponseRole::Magnetic);

  static PlanarMedium perfect_conductor() { return {MaterialResponse::perfect_conductor()}; }
};

/// Force per unit area between two half spaces across a vacuum gap.
/// Negative values mean attraction.
Measured lifshitz_pressure(double gap, const PlanarMedium& first, const PlanarMedium& second, Regime regime,
                           const QuadratureConfig& config = {});

/// Small-distance form U(z) = -C3/z^3 + (C1 + C1_electric)/z + O(z^0) of the
/// exact half-space potential. C1 collects the magnetic (mu - 1) terms and
/// vanishes for mu = 1; C1_electric is the leading retardation correction of a
/// dielectric, which has the same 1/z form.
struct NonretardedCoefficients {
  double c3 = 0.0;
  double c1 = 0.0;
  double c1_electric = 0.0;
  double error_estimate = 0.0;

  double total_c1() const { return c1 + c1_electric; }
};

NonretardedCoefficients nonretarded_halfspace_coefficients(const Atom& atom, const MaterialResponse& epsilon,
                                                           const MaterialResponse& mu,
                                                           const QuadratureConfig& config = {});

struct HalfspaceFormFit {
  double c3 = 0.0;
  double c1 = 0.0;
  double max_relative_residual = 0.0;
};

/// Least-squares fit of samples (z, U) to -c3/z^3 + c1/z, weighted by 1/|U|.
HalfspaceFormFit fit_halfspace_form(std::span<const PowerLawSample> samples);

/// Smallest resonance frequency among the atoms and the body, if any.
std::optional<double> reference_frequency(const Scene& scene);

}  // namespace dispersia
