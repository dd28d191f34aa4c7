#pragma once

// Deterministic adaptive quadrature on finite and semi-infinite intervals,
// power-law fitting and finite-difference gradients.
//
// The integrator is a global adaptive Gauss-Kronrod (G10/K21) scheme: the
// segment with the largest error estimate is bisected until the summed
// error meets max(rel_tol * |I|, abs_tol). Segment selection breaks ties by
// position, so identical inputs always give bit-identical outputs.
// Semi-infinite integrals use x = scale * t / (1 - t) on t in (0, 1).

#include "dispersia/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dispersia {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_refinement_levels = 12;

  /// Throws DomainError when a field is out of range.
  void validate() const;
  /// Copy with both tolerances multiplied by factor.
  QuadratureConfig scaled(double factor) const;
};

template <std::size_t N>
struct VectorEstimate {
  std::array<double, N> value{};
  double error = 0.0;
};

namespace detail {

struct KronrodRule {
  std::array<double, 11> abscissa;  // non-negative nodes, abscissa[0] = 0
  std::array<double, 11> kronrod;
  std::array<double, 11> gauss;     // Gauss weight for odd indices, zero elsewhere
};

const KronrodRule& kronrod21();

template <std::size_t N>
struct Segment {
  double a;
  double b;
  int level;
  std::array<double, N> value;
  double error;
  double mass;  // largest integral of |f_c| over the segment
};

template <std::size_t N>
double max_norm(const std::array<double, N>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N, class F>
Segment<N> apply_rule(F& f, double a, double b, int level) {
  const KronrodRule& rule = kronrod21();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, N> k{};
  std::array<double, N> g{};
  std::array<double, N> m{};
  {
    const std::array<double, N> fc = f(centre);
    for (std::size_t c = 0; c < N; ++c) {
      k[c] = fc[c] * rule.kronrod[0];
      m[c] = std::abs(fc[c]) * rule.kronrod[0];
    }
  }
  for (std::size_t i = 1; i < rule.abscissa.size(); ++i) {
    const double dx = half * rule.abscissa[i];
    const std::array<double, N> fp = f(centre + dx);
    const std::array<double, N> fm = f(centre - dx);
    for (std::size_t c = 0; c < N; ++c) {
      const double s = fp[c] + fm[c];
      k[c] += s * rule.kronrod[i];
      g[c] += s * rule.gauss[i];
      m[c] += (std::abs(fp[c]) + std::abs(fm[c])) * rule.kronrod[i];
    }
  }
  Segment<N> seg{a, b, level, {}, 0.0, std::abs(half) * max_norm(m)};
  double err = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    seg.value[c] = k[c] * half;
    err = std::max(err, std::abs((k[c] - g[c]) * half));
  }
  seg.error = err;
  return seg;
}

template <std::size_t N, class F>
VectorEstimate<N> adaptive(F& f, double a, double b, const QuadratureConfig& config) {
  std::vector<Segment<N>> segments;
  segments.push_back(apply_rule<N>(f, a, b, 0));

  auto totals = [&](std::array<double, N>& sum, double& err, double& mass) {
    sum.fill(0.0);
    err = 0.0;
    mass = 0.0;
    for (const auto& s : segments) {
      for (std::size_t c = 0; c < N; ++c) sum[c] += s.value[c];
      err += s.error;
      mass += s.mass;
    }
  };

  std::array<double, N> sum{};
  double err = 0.0;
  double mass = 0.0;
  totals(sum, err, mass);
  while (true) {
    for (double v : sum)
      if (!std::isfinite(v))
        throw NonConvergenceError("integrand produced a non-finite value", v, err);
    // Cancellation between integrand values limits the attainable accuracy to
    // a few ulps of the integral of |f|; asking for more only burns levels.
    const double roundoff = 1e3 * std::numeric_limits<double>::epsilon() * mass;
    const double target = std::max({config.rel_tol * max_norm(sum), config.abs_tol, roundoff});
    if (err <= target) return {sum, err};

    std::size_t worst = segments.size();
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (segments[i].level >= config.max_refinement_levels) continue;
      if (worst == segments.size() || segments[i].error > segments[worst].error) worst = i;
    }
    if (worst == segments.size())
      throw NonConvergenceError("quadrature did not converge within " +
                                    std::to_string(config.max_refinement_levels) + " refinement levels",
                                max_norm(sum), err);

    const Segment<N> parent = segments[worst];
    const double mid = 0.5 * (parent.a + parent.b);
    segments[worst] = apply_rule<N>(f, parent.a, mid, parent.level + 1);
    segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                    apply_rule<N>(f, mid, parent.b, parent.level + 1));
    totals(sum, err, mass);
  }
}

}  // namespace detail

/// Integrates a vector-valued f over [a, b]. The error is a max-norm bound.
template <std::size_t N, class F>
VectorEstimate<N> integrate_interval_n(F&& f, double a, double b, const QuadratureConfig& config = {}) {
  config.validate();
  if (!(b > a)) throw DomainError("integration interval must satisfy a < b");
  return detail::adaptive<N>(f, a, b, config);
}

/// Integrates a vector-valued f over [0, infinity). `scale` should be the
/// inverse of the dominant length scale of the integrand.
template <std::size_t N, class F>
VectorEstimate<N> integrate_semi_infinite_n(F&& f, const QuadratureConfig& config = {}, double scale = 1.0) {
  config.validate();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("integration scale must be positive");
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = scale * t / one_minus;
    std::array<double, N> v{};
    if (!std::isfinite(x)) return v;
    v = f(x);
    const double jac = scale / (one_minus * one_minus);
    for (double& c : v) c *= jac;
    return v;
  };
  return detail::adaptive<N>(mapped, 0.0, 1.0, config);
}

/// Integrates over [0, infinity) an integrand with structure on two scales:
/// near x ~ inner and out to x ~ outer, inner < outer. The range is split at
/// both scales and the middle piece is integrated in log x, so the adaptive
/// bisection never has to resolve a feature many decades below the mapping
/// scale. Falls back to a single mapped integral when the scales are close.
template <std::size_t N, class F>
VectorEstimate<N> integrate_two_scale_n(F&& f, const QuadratureConfig& config, double inner, double outer) {
  if (!(outer > 0.0) || !std::isfinite(outer)) throw DomainError("integration scale must be positive");
  if (!(inner > 0.0) || inner * 4.0 > outer) return integrate_semi_infinite_n<N>(f, config, outer);
  VectorEstimate<N> total = integrate_interval_n<N>(f, 0.0, inner, config);
  auto log_piece = [&](double s) {
    const double x = std::exp(s);
    std::array<double, N> v = f(x);
    for (double& c : v) c *= x;
    return v;
  };
  const auto middle = integrate_interval_n<N>(log_piece, std::log(inner), std::log(outer), config);
  auto tail_piece = [&](double x) { return f(outer + x); };
  const auto tail = integrate_semi_infinite_n<N>(tail_piece, config, outer);
  for (std::size_t c = 0; c < N; ++c) total.value[c] += middle.value[c] + tail.value[c];
  total.error += middle.error + tail.error;
  return total;
}

template <class F>
Measured integrate_interval(F&& f, double a, double b, const QuadratureConfig& config = {}) {
  auto wrapped = [&](double x) { return std::array<double, 1>{f(x)}; };
  const auto r = integrate_interval_n<1>(wrapped, a, b, config);
  return {r.value[0], r.error};
}

/// Integrates f over [0, infinity); f must be integrable at 0 and decay at
/// least like x^-2.
template <class F>
Measured integrate_semi_infinite(F&& f, const QuadratureConfig& config = {}, double scale = 1.0) {
  auto wrapped = [&](double x) { return std::array<double, 1>{f(x)}; };
  const auto r = integrate_semi_infinite_n<1>(wrapped, config, scale);
  return {r.value[0], r.error};
}

struct PowerLawSample {
  double a;
  double value;
};

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;  // signed: value ~ amplitude * a^exponent
  double max_log_residual = 0.0;
  std::vector<PowerLawSample> sample_points;
};

/// Least-squares line through (ln a, ln |value|).
PowerLawFit fit_power_law(std::span<const PowerLawSample> samples);

/// Central-difference gradient, O(h^2).
Vec3 gradient_fd(const std::function<double(const Vec3&)>& f, const Vec3& r, double h);

}  // namespace dispersia
