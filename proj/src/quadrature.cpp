#include "dispersia/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace dispersia {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (max_refinement_levels < 4) throw DomainError("max_refinement_levels must be at least 4");
}

QuadratureConfig QuadratureConfig::scaled(double factor) const {
  QuadratureConfig c = *this;
  c.rel_tol *= factor;
  c.abs_tol *= factor;
  return c;
}

namespace detail {

const KronrodRule& kronrod21() {
  static const KronrodRule rule = [] {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    KronrodRule r{};
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    for (std::size_t i = 0; i < r.abscissa.size(); ++i) {
      r.abscissa[i] = x[i];
      r.kronrod[i] = wk[i];
      // Ten-point Gauss nodes sit at the odd Kronrod indices.
      r.gauss[i] = (i % 2 == 1) ? wg[i / 2] : 0.0;
    }
    return r;
  }();
  return rule;
}

}  // namespace detail

PowerLawFit fit_power_law(std::span<const PowerLawSample> samples) {
  if (samples.size() < 3) throw DomainError("power-law fit needs at least three samples");
  const double sign = samples.front().value > 0.0 ? 1.0 : -1.0;
  for (const auto& s : samples) {
    if (!(s.a > 0.0) || !std::isfinite(s.a)) throw DomainError("scale factors must be positive");
    if (s.value == 0.0 || !std::isfinite(s.value)) throw DomainError("power-law values must be finite and nonzero");
    if ((s.value > 0.0 ? 1.0 : -1.0) != sign) throw DomainError("power-law values must share one sign");
  }

  const double n = static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& s : samples) {
    mx += std::log(s.a);
    my += std::log(std::abs(s.value));
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = std::log(s.a) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(s.value)) - my);
  }
  if (!(sxx > 0.0)) throw DomainError("power-law fit needs distinct scale factors");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.amplitude = sign * std::exp(intercept);
  for (const auto& s : samples) {
    const double r = std::log(std::abs(s.value)) - (intercept + fit.exponent * std::log(s.a));
    fit.max_log_residual = std::max(fit.max_log_residual, std::abs(r));
  }
  fit.sample_points.assign(samples.begin(), samples.end());
  return fit;
}

Vec3 gradient_fd(const std::function<double(const Vec3&)>& f, const Vec3& r, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("finite-difference step must be positive");
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 plus = r, minus = r;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

}  // namespace dispersia
