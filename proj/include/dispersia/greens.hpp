#pragma once

// Electromagnetic Green tensors at imaginary frequency i*xi (c = 1).
//
// Two families of entry points live here:
//  * the physical tensors G(r, r', i xi) named after the geometry
//    (g0_retarded, g1_halfspace, ...), used by tests and tools;
//  * the xi^2-weighted evaluators (bulk_xi2, scattering_xi2) that the
//    potentials consume. xi^2 G stays finite as xi -> 0 in every regime,
//    which is what the frequency integrals need.
//
// Planar scattering tensors are Sommerfeld integrals over the transverse
// wave number q with kappa = sqrt(q^2 + xi^2) and
// kappa_1 = sqrt(q^2 + eps mu xi^2). The reflection convention gives a
// perfect conductor r_p = +1, r_s = -1.

#include "dispersia/core.hpp"
#include "dispersia/quadrature.hpp"
#include "dispersia/response.hpp"
#include "dispersia/scene.hpp"

namespace dispersia {

enum class GreenKind { Full, Bulk, Scattering, CurlLeft, CurlRight, CurlCurl };

struct GreenTensorValue {
  Mat3 components = Mat3::Zero();
  GreenKind kind = GreenKind::Full;
};

/// r - r' with its length and direction. Throws on coincident points.
struct SeparationGeometry {
  Vec3 rho;
  double distance;
  Vec3 direction;

  static SeparationGeometry between(const Vec3& r, const Vec3& r_prime);
};

// ---------------------------------------------------------------- free space

/// Bulk tensor without the contact (delta) term; r != r', xi > 0.
GreenTensorValue g0_retarded(const Vec3& r, const Vec3& r_prime, double xi);

/// Quasi-static kernel -(I - 3 e e) / (4 pi rho^3). The physical tensor is
/// (c^2 / omega^2) times this kernel, i.e. -kernel / xi^2 on the imaginary axis.
GreenTensorValue g0_nonretarded(const Vec3& r, const Vec3& r_prime);

/// curl G0 = -G0 x curl' = -(e x I) / (4 pi rho^2) in the quasi-static limit.
GreenTensorValue curl_g0_nonretarded(const Vec3& r, const Vec3& r_prime);

/// Antisymmetric matrix of v x (.)
Mat3 cross_product_matrix(const Vec3& v);

// --------------------------------------------------------- planar interfaces

struct FresnelCoefficients {
  double s = 0.0;
  double p = 0.0;
};

/// Vacuum / half-space reflection at transverse wave number q. epsilon may be
/// +infinity (perfect conductor).
FresnelCoefficients fresnel_halfspace(double q, double xi, double epsilon, double mu);

/// Multiple-reflection slab coefficient r (1 - e^{-2x}) / (1 - r^2 e^{-2x}), x = kappa_1 d.
double slab_reflection(double single_interface, double kappa1_thickness);

FresnelCoefficients fresnel_slab(double q, double xi, double thickness, double epsilon, double mu);

/// Image-method scattering tensor of a perfectly conducting plate at z = 0.
GreenTensorValue g1_perfect_plate(const Vec3& r, const Vec3& r_prime, double xi);

GreenTensorValue g1_halfspace(const Vec3& r, const Vec3& r_prime, double xi, const MaterialResponse& epsilon,
                              const MaterialResponse& mu, const QuadratureConfig& config = {});

GreenTensorValue g1_slab(const Vec3& r, const Vec3& r_prime, double xi, double thickness,
                         const MaterialResponse& epsilon, const MaterialResponse& mu,
                         const QuadratureConfig& config = {});

/// Quasi-static magnetic (s-polarised, mu-linear) scattering tensor of a half
/// space, for the given static reflection strengths. Independent of xi.
Mat3 halfspace_magnetostatic_kernel(const Vec3& r, const Vec3& r_prime, double s_strength, double p_strength);

/// Electrostatic image kernel of a perfectly conducting plate: xi^2 G1 in the
/// quasi-static limit.
Mat3 plate_electrostatic_kernel(const Vec3& r, const Vec3& r_prime);

// -------------------------------------------------------------------- sphere

struct SphereMultipoleResult {
  double kernel;
  int l_max;
};

/// Quasi-static kernel K(z, R) of a perfectly conducting sphere, with z the
/// atom's distance from the centre. The nonretarded potential is
/// U = -(1 / 4 pi^2) * integral dxi alpha'(i xi) K(z, R). The multipole sum is
/// extended until the last block changes it by less than 1e-10 relative.
SphereMultipoleResult sphere_nonretarded_kernel(double z, double radius, bool neutral = true,
                                                int l_max_cap = 5000);

/// Coincident-point xi^2 G1 of the sphere in the quasi-static limit.
Mat3 sphere_electrostatic_tensor(const Vec3& r, const ConductingSphere& sphere, int l_max_cap = 5000);

// --------------------------------------------------- engine-facing evaluators

/// xi^2 G0(r, r') in the given regime.
Mat3 bulk_xi2(const Vec3& r, const Vec3& r_prime, double xi, Regime regime);

/// xi^2 G1(r, r') of the body in the given regime. Coincident points are allowed.
Mat3 scattering_xi2(const Body& body, const Vec3& r, const Vec3& r_prime, double xi, Regime regime,
                    const QuadratureConfig& config = {});

}  // namespace dispersia
