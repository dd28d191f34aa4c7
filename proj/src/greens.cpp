#include "dispersia/greens.hpp"

#include <array>
#include <cmath>
#include <string>
#include <variant>

namespace dispersia {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Reflection of positions through the plane z = 0 and the image-dipole matrix
// that makes tangential E vanish on the surface of a perfect conductor.
const Mat3 kMirror = Vec3(1.0, 1.0, -1.0).asDiagonal();
const Mat3 kImageDipole = Vec3(-1.0, -1.0, 1.0).asDiagonal();

void check_xi(double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("Green tensor requires xi > 0");
}

void check_above_plane(const Vec3& r, const Vec3& r_prime) {
  if (!(r.z() > 0.0) || !(r_prime.z() > 0.0))
    throw DomainError("planar scattering tensor requires both points above the surface z = 0");
}

Mat3 retarded_xi2(const SeparationGeometry& g, double xi) {
  const double u = xi * g.distance;
  const double pre = std::exp(-u) / (4.0 * kPi * g.distance * g.distance * g.distance);
  const Mat3 ee = g.direction * g.direction.transpose();
  return pre * ((1.0 + u + u * u) * Mat3::Identity() - (3.0 + 3.0 * u + u * u) * ee);
}

Mat3 quasistatic_xi2(const SeparationGeometry& g) {
  const Mat3 ee = g.direction * g.direction.transpose();
  return (Mat3::Identity() - 3.0 * ee) / (4.0 * kPi * g.distance * g.distance * g.distance);
}

// Geometry of a Sommerfeld integral: total height h = z + z', transverse
// separation R and the azimuth of r - r'.
struct PlanarPair {
  double height;
  double transverse;
  double cos_phi;
  double sin_phi;

  static PlanarPair of(const Vec3& r, const Vec3& r_prime) {
    const double dx = r.x() - r_prime.x();
    const double dy = r.y() - r_prime.y();
    PlanarPair p{r.z() + r_prime.z(), std::hypot(dx, dy), 1.0, 0.0};
    if (p.transverse > 0.0) {
      p.cos_phi = dx / p.transverse;
      p.sin_phi = dy / p.transverse;
    }
    return p;
  }

  // Components are accumulated in the frame where r - r' points along +x:
  // {xx, yy, zz, zx, xz}. Rotating back gives the lab tensor.
  Mat3 to_lab(const std::array<double, 5>& c) const {
    Mat3 frame = Mat3::Zero();
    frame(0, 0) = c[0];
    frame(1, 1) = c[1];
    frame(2, 2) = c[2];
    frame(2, 0) = c[3];
    frame(0, 2) = c[4];
    Mat3 rot = Mat3::Identity();
    rot(0, 0) = cos_phi;
    rot(0, 1) = -sin_phi;
    rot(1, 0) = sin_phi;
    rot(1, 1) = cos_phi;
    return rot * frame * rot.transpose();
  }
};

struct Bessel012 {
  double j0, j1, j2;
};

Bessel012 bessel012(double x) {
  if (x == 0.0) return {1.0, 0.0, 0.0};
  const double j0 = std::cyl_bessel_j(0.0, x);
  const double j1 = std::cyl_bessel_j(1.0, x);
  return {j0, j1, 2.0 * j1 / x - j0};
}

// xi^2 G1 of a planar scatterer with reflection coefficients refl(q) -> {s, p}.
template <class Reflection>
Mat3 sommerfeld_xi2(const PlanarPair& pair, double xi, Reflection&& refl, const QuadratureConfig& config) {
  const double xi2 = xi * xi;
  auto integrand = [&](double q) {
    std::array<double, 5> v{};
    const double kappa = std::hypot(q, xi);
    const double decay = std::exp(-kappa * pair.height);
    if (decay == 0.0) return v;
    const FresnelCoefficients r = refl(q);
    const Bessel012 j = bessel012(q * pair.transverse);
    const double pre = (q / kappa) * decay / (8.0 * kPi);
    const double k2 = kappa * kappa;
    v[0] = pre * (xi2 * r.s * (j.j0 + j.j2) - r.p * k2 * (j.j0 - j.j2));
    v[1] = pre * (xi2 * r.s * (j.j0 - j.j2) - r.p * k2 * (j.j0 + j.j2));
    v[2] = pre * (-2.0 * r.p * q * q * j.j0);
    v[3] = pre * (2.0 * r.p * q * kappa * j.j1);
    v[4] = -v[3];
    return v;
  };
  // Reflection coefficients change on q ~ xi, the exponential on q ~ 1/h.
  const auto result = integrate_two_scale_n<5>(integrand, config, xi, 1.0 / pair.height);
  return pair.to_lab(result.value);
}

// Quasi-static electric scattering of a planar body with q-dependent
// electrostatic reflection r_p(q): xi^2 G1 = -(1/8pi) int dq q^2 r_p(q) e^{-qh} [...].
template <class Reflection>
Mat3 electrostatic_sommerfeld_xi2(const PlanarPair& pair, Reflection&& rp, const QuadratureConfig& config) {
  auto integrand = [&](double q) {
    std::array<double, 5> v{};
    const double decay = std::exp(-q * pair.height);
    if (decay == 0.0) return v;
    const Bessel012 j = bessel012(q * pair.transverse);
    const double pre = -rp(q) * q * q * decay / (8.0 * kPi);
    v[0] = pre * (j.j0 - j.j2);
    v[1] = pre * (j.j0 + j.j2);
    v[2] = pre * 2.0 * j.j0;
    v[3] = -pre * 2.0 * j.j1;
    v[4] = -v[3];
    return v;
  };
  const auto result = integrate_semi_infinite_n<5>(integrand, config, 1.0 / pair.height);
  return pair.to_lab(result.value);
}

double electrostatic_reflection(const MaterialResponse& epsilon, double xi) {
  if (epsilon.is_perfect()) return 1.0;
  const double e = epsilon.at(xi);
  return (e - 1.0) / (e + 1.0);
}

QuadratureConfig inner_config(const QuadratureConfig& config) {
  QuadratureConfig c = config.scaled(1e-2);
  c.abs_tol = std::max(c.abs_tol, 1e-300);
  c.max_refinement_levels = std::max(config.max_refinement_levels, 16);
  return c;
}

Mat3 halfspace_xi2(const HalfSpace& body, const Vec3& r, const Vec3& r_prime, double xi, Regime regime,
                   const QuadratureConfig& config) {
  if (body.epsilon.is_vacuum() && body.mu.is_vacuum()) return Mat3::Zero();
  const double f = regime == Regime::Retarded ? 0.0 : xi;
  if (regime == Regime::Nonretarded) {
    Mat3 out = Mat3::Zero();
    if (!body.epsilon.is_vacuum()) out += electrostatic_reflection(body.epsilon, xi) * plate_electrostatic_kernel(r, r_prime);
    if (!body.mu.is_vacuum() && !body.epsilon.is_perfect()) {
      const double eps = body.epsilon.at(xi);
      const double mu = body.mu.at(xi);
      const double s = (mu - 1.0) / (mu + 1.0);
      const double p = eps * eps * (mu - 1.0) / ((eps + 1.0) * (eps + 1.0));
      out += xi * xi * halfspace_magnetostatic_kernel(r, r_prime, s, p);
    }
    return out;
  }
  const double eps = body.epsilon.at(f);
  const double mu = body.mu.at(f);
  return sommerfeld_xi2(
      PlanarPair::of(r, r_prime), xi, [&](double q) { return fresnel_halfspace(q, xi, eps, mu); },
      inner_config(config));
}

Mat3 slab_xi2(const Slab& body, const Vec3& r, const Vec3& r_prime, double xi, Regime regime,
              const QuadratureConfig& config) {
  if (body.epsilon.is_vacuum() && body.mu.is_vacuum()) return Mat3::Zero();
  if (regime == Regime::Nonretarded) {
    if (!body.mu.is_vacuum())
      throw DomainError("the quasi-static slab kernel supports non-magnetic slabs only");
    const double r0 = electrostatic_reflection(body.epsilon, xi);
    return electrostatic_sommerfeld_xi2(
        PlanarPair::of(r, r_prime), [&](double q) { return slab_reflection(r0, q * body.thickness); },
        inner_config(config));
  }
  const double f = regime == Regime::Retarded ? 0.0 : xi;
  const double eps = body.epsilon.at(f);
  const double mu = body.mu.at(f);
  return sommerfeld_xi2(
      PlanarPair::of(r, r_prime), xi,
      [&](double q) { return fresnel_slab(q, xi, body.thickness, eps, mu); }, inner_config(config));
}

}  // namespace

SeparationGeometry SeparationGeometry::between(const Vec3& r, const Vec3& r_prime) {
  SeparationGeometry g;
  g.rho = r - r_prime;
  g.distance = g.rho.norm();
  if (!(g.distance > 0.0) || !std::isfinite(g.distance))
    throw DomainError("bulk Green tensor is singular at coincident points");
  g.direction = g.rho / g.distance;
  return g;
}

GreenTensorValue g0_retarded(const Vec3& r, const Vec3& r_prime, double xi) {
  check_xi(xi);
  const auto g = SeparationGeometry::between(r, r_prime);
  return {retarded_xi2(g, xi) / (xi * xi), GreenKind::Bulk};
}

GreenTensorValue g0_nonretarded(const Vec3& r, const Vec3& r_prime) {
  const auto g = SeparationGeometry::between(r, r_prime);
  return {-quasistatic_xi2(g), GreenKind::Bulk};
}

Mat3 cross_product_matrix(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

GreenTensorValue curl_g0_nonretarded(const Vec3& r, const Vec3& r_prime) {
  const auto g = SeparationGeometry::between(r, r_prime);
  return {-cross_product_matrix(g.direction) / (4.0 * kPi * g.distance * g.distance), GreenKind::CurlLeft};
}

FresnelCoefficients fresnel_halfspace(double q, double xi, double epsilon, double mu) {
  if (std::isinf(epsilon)) return {-1.0, 1.0};
  const double kappa = std::hypot(q, xi);
  const double kappa1 = std::sqrt(q * q + epsilon * mu * xi * xi);
  // kappa - kappa1 written without the cancellation that ruins weakly
  // reflecting media at q >> xi.
  const double split = (1.0 - epsilon * mu) * xi * xi / (kappa + kappa1);
  return {((mu - 1.0) * kappa + split) / (mu * kappa + kappa1),
          ((epsilon - 1.0) * kappa + split) / (epsilon * kappa + kappa1)};
}

double slab_reflection(double single_interface, double kappa1_thickness) {
  if (std::abs(single_interface) == 1.0) return single_interface;
  const double e = std::exp(-2.0 * kappa1_thickness);
  return single_interface * (1.0 - e) / (1.0 - single_interface * single_interface * e);
}

FresnelCoefficients fresnel_slab(double q, double xi, double thickness, double epsilon, double mu) {
  const FresnelCoefficients r = fresnel_halfspace(q, xi, epsilon, mu);
  if (std::isinf(epsilon)) return r;
  const double kappa1 = std::sqrt(q * q + epsilon * mu * xi * xi);
  return {slab_reflection(r.s, kappa1 * thickness), slab_reflection(r.p, kappa1 * thickness)};
}

Mat3 plate_electrostatic_kernel(const Vec3& r, const Vec3& r_prime) {
  const auto g = SeparationGeometry::between(r, kMirror * r_prime);
  return quasistatic_xi2(g) * kImageDipole;
}

Mat3 halfspace_magnetostatic_kernel(const Vec3& r, const Vec3& r_prime, double s_strength, double p_strength) {
  const PlanarPair pair = PlanarPair::of(r, r_prime);
  // L_n = int_0^inf e^{-q h} J_n(q R) dq = (R / (rho + h))^n / rho
  const double rho = std::hypot(pair.height, pair.transverse);
  const double t = pair.transverse / (rho + pair.height);
  const double l0 = 1.0 / rho;
  const double l1 = t / rho;
  const double l2 = t * t / rho;
  const double pre = 1.0 / (8.0 * kPi);
  std::array<double, 5> c{};
  c[0] = pre * (s_strength * (l0 + l2) + p_strength * (l0 - l2));
  c[1] = pre * (s_strength * (l0 - l2) + p_strength * (l0 + l2));
  c[2] = pre * p_strength * 2.0 * l0;
  c[3] = -pre * p_strength * 2.0 * l1;
  c[4] = -c[3];
  return pair.to_lab(c);
}

GreenTensorValue g1_perfect_plate(const Vec3& r, const Vec3& r_prime, double xi) {
  check_xi(xi);
  check_above_plane(r, r_prime);
  return {scattering_xi2(PerfectPlate{}, r, r_prime, xi, Regime::Retarded) / (xi * xi), GreenKind::Scattering};
}

GreenTensorValue g1_halfspace(const Vec3& r, const Vec3& r_prime, double xi, const MaterialResponse& epsilon,
                              const MaterialResponse& mu, const QuadratureConfig& config) {
  check_xi(xi);
  check_above_plane(r, r_prime);
  const Mat3 m = halfspace_xi2(HalfSpace{epsilon, mu}, r, r_prime, xi, Regime::FullDispersive, config);
  return {m / (xi * xi), GreenKind::Scattering};
}

GreenTensorValue g1_slab(const Vec3& r, const Vec3& r_prime, double xi, double thickness,
                         const MaterialResponse& epsilon, const MaterialResponse& mu, const QuadratureConfig& config) {
  check_xi(xi);
  check_above_plane(r, r_prime);
  if (!(thickness > 0.0)) throw DomainError("slab thickness must be positive");
  const Mat3 m = slab_xi2(Slab{thickness, epsilon, mu}, r, r_prime, xi, Regime::FullDispersive, config);
  return {m / (xi * xi), GreenKind::Scattering};
}

namespace {

// Partial sums of sum_l c_l y^l over l >= l_start, doubled in length until the
// last block is below 1e-10 of the total.
template <class Coefficients>
std::pair<std::array<double, 2>, int> multipole_sums(double y, int l_start, int cap, Coefficients&& coeff) {
  std::array<double, 2> total{};
  double power = std::pow(y, l_start);
  int l = l_start;
  int block_end = l_start + 16;
  while (true) {
    std::array<double, 2> block{};
    for (; l < block_end; ++l) {
      const auto c = coeff(l);
      block[0] += c[0] * power;
      block[1] += c[1] * power;
      power *= y;
    }
    total[0] += block[0];
    total[1] += block[1];
    const double change = std::abs(block[0]) + std::abs(block[1]);
    const double size = std::abs(total[0]) + std::abs(total[1]);
    if (change <= 1e-10 * size) return {total, l - 1};
    if (block_end >= cap)
      throw NonConvergenceError("sphere multipole sum not converged at l_max = " + std::to_string(cap), size, change);
    block_end = std::min(cap, 2 * block_end);
  }
}

}  // namespace

SphereMultipoleResult sphere_nonretarded_kernel(double z, double radius, bool neutral, int l_max_cap) {
  if (!(radius > 0.0) || !(z > radius)) throw DomainError("sphere kernel requires z > R > 0");
  const double y = (radius / z) * (radius / z);
  const auto [sums, l_max] = multipole_sums(y, neutral ? 1 : 0, l_max_cap, [](int l) {
    const double ld = l;
    return std::array<double, 2>{(ld + 1.0) * (2.0 * ld + 1.0), 0.0};
  });
  const double z2 = z * z;
  return {2.0 * kPi * radius / (z2 * z2) * sums[0], l_max};
}

Mat3 sphere_electrostatic_tensor(const Vec3& r, const ConductingSphere& sphere, int l_max_cap) {
  const Vec3 offset = r - sphere.centre;
  const double dist = offset.norm();
  if (!(dist > sphere.radius)) throw DomainError("point must lie outside the sphere");
  const Vec3 n = offset / dist;
  const double y = (sphere.radius / dist) * (sphere.radius / dist);
  const auto [sums, l_max] = multipole_sums(y, sphere.neutral ? 1 : 0, l_max_cap, [](int l) {
    const double ld = l;
    return std::array<double, 2>{(ld + 1.0) * (ld + 1.0), 0.5 * ld * (ld + 1.0)};
  });
  (void)l_max;
  const double d2 = dist * dist;
  const double pre = -sphere.radius / (4.0 * kPi * d2 * d2);
  const Mat3 nn = n * n.transpose();
  return pre * (sums[0] * nn + sums[1] * (Mat3::Identity() - nn));
}

Mat3 bulk_xi2(const Vec3& r, const Vec3& r_prime, double xi, Regime regime) {
  const auto g = SeparationGeometry::between(r, r_prime);
  if (regime == Regime::Nonretarded) return quasistatic_xi2(g);
  return retarded_xi2(g, xi);
}

Mat3 scattering_xi2(const Body& body, const Vec3& r, const Vec3& r_prime, double xi, Regime regime,
                    const QuadratureConfig& config) {
  return std::visit(
      overloaded{
          [&](const PerfectPlate&) -> Mat3 {
            if (regime == Regime::Nonretarded) return plate_electrostatic_kernel(r, r_prime);
            const auto g = SeparationGeometry::between(r, kMirror * r_prime);
            return retarded_xi2(g, xi) * kImageDipole;
          },
          [&](const HalfSpace& h) -> Mat3 { return halfspace_xi2(h, r, r_prime, xi, regime, config); },
          [&](const Slab& s) -> Mat3 { return slab_xi2(s, r, r_prime, xi, regime, config); },
          [&](const ConductingSphere& s) -> Mat3 {
            if (regime != Regime::Nonretarded)
              throw DomainError("the conducting sphere is available in the nonretarded regime only");
            if ((r - r_prime).norm() != 0.0)
              throw DomainError("the sphere kernel is implemented for coincident points only");
            return sphere_electrostatic_tensor(r, s);
          },
      },
      body);
}

}  // namespace dispersia
