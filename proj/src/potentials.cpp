#include "dispersia/potentials.hpp"

#include "dispersia/greens.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <variant>

namespace dispersia {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_material_for_regime(const MaterialResponse& m, Regime regime) {
  if (regime == Regime::Retarded && m.is_dispersive())
    throw DomainError("the retarded regime requires static or perfectly conducting media");
  if (regime == Regime::Nonretarded && m.role() == ResponseRole::Magnetic && !m.is_vacuum() && !m.is_dispersive())
    throw DomainError("the nonretarded regime requires a dispersive permeability; a static mu makes the "
                      "frequency integral diverge");
}

void check_body_for_regime(const Body& body, Regime regime) {
  std::visit(overloaded{
                 [&](const HalfSpace& h) {
                   check_material_for_regime(h.epsilon, regime);
                   check_material_for_regime(h.mu, regime);
                 },
                 [&](const Slab& s) {
                   check_material_for_regime(s.epsilon, regime);
                   check_material_for_regime(s.mu, regime);
                 },
                 [&](const ConductingSphere&) {
                   if (regime != Regime::Nonretarded)
                     throw DomainError("the conducting sphere is available in the nonretarded regime only");
                 },
                 [](const PerfectPlate&) {},
             },
             body);
}

void check_atom_for_regime(const Atom& atom, Regime regime) {
  if (regime == Regime::Retarded && atom.polarizability.is_dispersive())
    throw DomainError("the retarded regime requires a static polarizability");
  if (regime == Regime::Nonretarded && !atom.polarizability.is_dispersive())
    throw DomainError("the nonretarded regime requires a dispersive (single-resonance) polarizability");
}

double polarizability_at(const Atom& atom, double xi, Regime regime) {
  return atom.polarizability.at(regime == Regime::Retarded ? 0.0 : xi);
}

double min_frequency(std::initializer_list<const Atom*> atoms, const std::optional<Body>& body) {
  double w = std::numeric_limits<double>::infinity();
  for (const Atom* a : atoms)
    if (a->polarizability.is_dispersive()) w = std::min(w, a->polarizability.resonance_frequency());
  if (body)
    for (double r : resonance_frequencies(*body)) w = std::min(w, r);
  return w;
}

// Mapping scale of the frequency integral: the retarded kernels decay on
// 1/(2 length), the quasi-static ones on the smallest resonance.
double frequency_scale(Regime regime, double length, double omega) {
  const double retarded = 1.0 / (2.0 * length);
  switch (regime) {
    case Regime::Retarded:
      return retarded;
    case Regime::Nonretarded:
      return omega;
    case Regime::FullDispersive:
      return std::isfinite(omega) ? std::sqrt(omega * retarded) : retarded;
  }
  return retarded;
}

bool has_frequency_independent_kernel(const Body& body, Regime regime) {
  return regime == Regime::Nonretarded &&
         (std::holds_alternative<PerfectPlate>(body) || std::holds_alternative<ConductingSphere>(body));
}

void check_medium(const PlanarMedium& m) {
  if (m.epsilon.role() != ResponseRole::Electric) throw DomainError("medium permittivity must use the electric role");
  if (m.mu.is_perfect() || m.mu.role() != ResponseRole::Magnetic)
    throw DomainError("medium permeability must be a finite magnetic response");
}

double static_reflection(const MaterialResponse& m, double xi) {
  const double v = m.at(xi);
  return (v - 1.0) / (v + 1.0);
}

// True when the product of the two media's quasi-static reflections in one
// channel stays finite as xi -> infinity, making the frequency integral diverge.
bool channel_diverges(const MaterialResponse& a, const MaterialResponse& b) {
  return !a.is_vacuum() && !b.is_vacuum() && !a.is_dispersive() && !b.is_dispersive();
}

}  // namespace

std::optional<double> reference_frequency(const Scene& scene) {
  double w = std::numeric_limits<double>::infinity();
  for (const Atom& a : scene.atoms())
    if (a.polarizability.is_dispersive()) w = std::min(w, a.polarizability.resonance_frequency());
  if (scene.body())
    for (double r : resonance_frequencies(*scene.body())) w = std::min(w, r);
  if (!std::isfinite(w)) return std::nullopt;
  return w;
}

Measured cp_potential(const Atom& atom, const Scene& scene, Regime regime, const QuadratureConfig& config) {
  config.validate();
  if (!atom.position.allFinite()) throw DomainError("atom position must be finite");
  if (!scene.body()) return {0.0, 0.0};
  const Body& body = *scene.body();
  if (!is_outside(body, atom.position)) throw DomainError("atom lies on or inside the body");
  check_body_for_regime(body, regime);
  check_atom_for_regime(atom, regime);

  const Vec3& r = atom.position;
  const double omega = min_frequency({&atom}, scene.body());

  if (has_frequency_independent_kernel(body, regime)) {
    const double trace = scattering_xi2(body, r, r, 1.0, regime, config).trace();
    const Measured weight = integrate_semi_infinite(
        [&](double xi) { return atom.polarizability.at(xi); }, config, omega);
    return {2.0 * trace * weight.value, 2.0 * std::abs(trace) * weight.error_estimate};
  }

  auto integrand = [&](double xi) {
    return 2.0 * polarizability_at(atom, xi, regime) * scattering_xi2(body, r, r, xi, regime, config).trace();
  };
  return integrate_semi_infinite(integrand, config,
                                 frequency_scale(regime, distance_to_surface(body, r), omega));
}

Vec3 cp_force(const Atom& atom, const Scene& scene, Regime regime, const QuadratureConfig& config,
              std::optional<double> step) {
  double h;
  if (step) {
    h = *step;
  } else {
    const double d = scene.body() ? distance_to_surface(*scene.body(), atom.position) : atom.position.norm();
    h = 1e-5 * (d > 0.0 ? d : 1.0);
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("finite-difference step must be positive");
  auto potential = [&](const Vec3& p) {
    Atom moved = atom;
    moved.position = p;
    return cp_potential(moved, scene, regime, config).value;
  };
  return -gradient_fd(potential, atom.position, h);
}

VdwResult vdw_potential(const Atom& a, const Atom& b, const Scene& scene, Regime regime,
                        const QuadratureConfig& config) {
  config.validate();
  const auto separation = SeparationGeometry::between(a.position, b.position);
  check_atom_for_regime(a, regime);
  check_atom_for_regime(b, regime);
  const Body* body = scene.body() ? &*scene.body() : nullptr;
  if (body) {
    if (!is_outside(*body, a.position) || !is_outside(*body, b.position))
      throw DomainError("atom lies on or inside the body");
    check_body_for_regime(*body, regime);
  }

  // U0 and U1 are integrated separately: U1 can be many orders of magnitude
  // below U0 and would otherwise only be resolved relative to U0.
  auto weight = [&](double xi) {
    return -8.0 * kPi * polarizability_at(a, xi, regime) * polarizability_at(b, xi, regime);
  };
  auto free_part = [&](double xi) { return weight(xi) * bulk_xi2(a.position, b.position, xi, regime).squaredNorm(); };
  auto body_part = [&](double xi) {
    const Mat3 k0 = bulk_xi2(a.position, b.position, xi, regime);
    const Mat3 k1 = scattering_xi2(*body, a.position, b.position, xi, regime, config);
    return weight(xi) * (2.0 * k0.cwiseProduct(k1).sum() + k1.squaredNorm());
  };
  const double omega = min_frequency({&a, &b}, scene.body());
  const double scale = frequency_scale(regime, separation.distance, omega);
  const Measured u0 = integrate_semi_infinite(free_part, config, scale);
  const Measured u1 = body ? integrate_semi_infinite(body_part, config, scale) : Measured{};
  VdwResult out;
  out.free_space = u0.value;
  out.body_induced = u1.value;
  out.error_estimate = u0.error_estimate + u1.error_estimate;
  out.total = out.free_space + out.body_induced;
  return out;
}

Measured lifshitz_pressure(double gap, const PlanarMedium& first, const PlanarMedium& second, Regime regime,
                           const QuadratureConfig& config) {
  config.validate();
  if (!(gap > 0.0) || !std::isfinite(gap)) throw DomainError("gap must be positive");
  check_medium(first);
  check_medium(second);
  for (const PlanarMedium* m : {&first, &second}) {
    if (regime == Regime::Retarded && (m->epsilon.is_dispersive() || m->mu.is_dispersive()))
      throw DomainError("the retarded regime requires static or perfectly conducting media");
    if (regime == Regime::Nonretarded && m->epsilon.is_perfect())
      throw DomainError("a perfect conductor has no quasi-static pressure limit");
  }
  if (regime == Regime::Nonretarded &&
      (channel_diverges(first.epsilon, second.epsilon) || channel_diverges(first.mu, second.mu)))
    throw DomainError("the nonretarded pressure needs dispersive media; static responses make the frequency "
                      "integral diverge");

  const QuadratureConfig inner = config.scaled(1e-2);
  auto at_frequency = [&](double xi) {
    const double f = regime == Regime::Retarded ? 0.0 : xi;
    const double e1 = first.epsilon.at(f), m1 = first.mu.at(f);
    const double e2 = second.epsilon.at(f), m2 = second.mu.at(f);
    double rp0 = 0.0, rs0 = 0.0;
    if (regime == Regime::Nonretarded) {
      rp0 = static_reflection(first.epsilon, xi) * static_reflection(second.epsilon, xi);
      rs0 = static_reflection(first.mu, xi) * static_reflection(second.mu, xi);
    }
    auto mode_sum = [&](double q) {
      double kappa, rp, rs;
      if (regime == Regime::Nonretarded) {
        kappa = q;
        rp = rp0;
        rs = rs0;
      } else {
        kappa = std::hypot(q, xi);
        const FresnelCoefficients a = fresnel_halfspace(q, xi, e1, m1);
        const FresnelCoefficients b = fresnel_halfspace(q, xi, e2, m2);
        rp = a.p * b.p;
        rs = a.s * b.s;
      }
      const double x = 2.0 * kappa * gap;
      auto channel = [&](double prod) {
        if (prod == 1.0) return 1.0 / std::expm1(x);
        const double e = std::exp(-x);
        return prod * e / (1.0 - prod * e);
      };
      return q * kappa * (channel(rp) + channel(rs));
    };
    auto wrapped = [&](double q) { return std::array<double, 1>{mode_sum(q)}; };
    if (regime == Regime::Nonretarded) return integrate_semi_infinite(mode_sum, inner, 1.0 / (2.0 * gap)).value;
    return integrate_two_scale_n<1>(wrapped, inner, xi, 1.0 / (2.0 * gap)).value[0];
  };

  double omega = std::numeric_limits<double>::infinity();
  for (const PlanarMedium* m : {&first, &second})
    for (const MaterialResponse* r : {&m->epsilon, &m->mu})
      if (r->is_dispersive()) omega = std::min(omega, r->resonance_frequency());
  const Measured outer = integrate_semi_infinite(at_frequency, config, frequency_scale(regime, gap, omega));
  const double pre = -1.0 / (2.0 * kPi * kPi);
  return {pre * outer.value, std::abs(pre) * outer.error_estimate};
}

NonretardedCoefficients nonretarded_halfspace_coefficients(const Atom& atom, const MaterialResponse& epsilon,
                                                           const MaterialResponse& mu,
                                                           const QuadratureConfig& config) {
  config.validate();
  if (!atom.polarizability.is_dispersive())
    throw DomainError("the half-space coefficients need a dispersive polarizability");
  check_medium(PlanarMedium{epsilon, mu});
  const double w0 = atom.polarizability.resonance_frequency();
  const double pre = 1.0 / (4.0 * kPi);

  NonretardedCoefficients out;
  if (epsilon.is_perfect()) {
    const Measured m = integrate_semi_infinite([&](double xi) { return atom.polarizability.at(xi); }, config, w0);
    out.c3 = pre * m.value;
    out.error_estimate = pre * m.error_estimate;
    return out;
  }
  if (!epsilon.is_vacuum() && !epsilon.is_dispersive())
    throw DomainError("the 1/z coefficient diverges for a static permittivity; use a dispersive model");
  if (!mu.is_vacuum() && !mu.is_dispersive())
    throw DomainError("the 1/z coefficient diverges for a static permeability; use a dispersive model");

  double omega = w0;
  for (const MaterialResponse* m : {&epsilon, &mu})
    if (m->is_dispersive()) omega = std::min(omega, m->resonance_frequency());

  auto integrand = [&](double xi) {
    const double a = atom.polarizability.at(xi);
    const double e = epsilon.at(xi);
    const double m = mu.at(xi);
    const double ep1 = e + 1.0;
    const double xi2 = xi * xi;
    return std::array<double, 3>{
        a * (e - 1.0) / ep1,
        a * xi2 * ((m - 1.0) / (m + 1.0) + 2.0 * e * e * (m - 1.0) / (ep1 * ep1)),
        a * xi2 * (e - 1.0) * (3.0 * e + 1.0) / (ep1 * ep1),
    };
  };
  const auto r = integrate_semi_infinite_n<3>(integrand, config, omega);
  out.c3 = pre * r.value[0];
  out.c1 = pre * r.value[1];
  out.c1_electric = pre * r.value[2];
  out.error_estimate = pre * r.error;
  return out;
}

HalfspaceFormFit fit_halfspace_form(std::span<const PowerLawSample> samples) {
  if (samples.size() < 2) throw DomainError("the two-term fit needs at least two samples");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (!(s.a > 0.0) || s.value == 0.0 || !std::isfinite(s.value))
      throw DomainError("two-term fit requires positive distances and nonzero finite values");
    const double w = 1.0 / std::abs(s.value);
    a(i, 0) = -w / (s.a * s.a * s.a);
    a(i, 1) = w / s.a;
    b(i) = s.value * w;
  }
  // Column scaling keeps the normal problem well conditioned when the two
  // terms differ by orders of magnitude.
  const Eigen::Vector2d norms(a.col(0).norm(), a.col(1).norm());
  if (!(norms(0) > 0.0) || !(norms(1) > 0.0)) throw DomainError("degenerate two-term fit");
  const Eigen::MatrixXd scaled = a * norms.cwiseInverse().asDiagonal();
  const Eigen::Vector2d x = scaled.colPivHouseholderQr().solve(b).cwiseQuotient(norms);
  HalfspaceFormFit fit{x(0), x(1), 0.0};
  for (const auto& s : samples) {
    const double model = -fit.c3 / (s.a * s.a * s.a) + fit.c1 / s.a;
    fit.max_relative_residual = std::max(fit.max_relative_residual, std::abs(model - s.value) / std::abs(s.value));
  }
  return fit;
}

}  // namespace dispersia
