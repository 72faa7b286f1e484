#pragma once

// First-order tail predictions for P(M > r) in the three regimes, and the constants
// they need.

#include "gwmax/errors.hpp"
#include "gwmax/joint_law.hpp"
#include "gwmax/numeric.hpp"
#include "gwmax/spectral.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace gwmax {

namespace detail {

// Lanczos approximation, g = 7, nine terms; about 1e-15 relative on [1, 2].
inline double lanczos_gamma(double z) {
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
  };
  constexpr double kG = 7.0;
  z -= 1.0;
  double series = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) series += kCoef[i] / (z + static_cast<double>(i));
  double t = z + kG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

}  // namespace detail

/// Gamma(z) for z in (0, 1], through Gamma(z+1)/z.
inline double gamma_unit(double z) {
  if (!(z > 0.0 && z <= 1.0)) throw DomainError("gamma_unit: z must lie in (0,1]");
  return detail::lanczos_gamma(z + 1.0) / z;
}

/// Gamma(-alpha) for alpha in (1,2), as Gamma(2-alpha) / (alpha (alpha-1)).
inline double gamma_neg(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("gamma_neg: alpha must lie strictly inside (1,2)");
  return gamma_unit(2.0 - alpha) / (alpha * (alpha - 1.0));
}

/// sqrt(2 P(mark > r) / sigma^2)
inline double finite_variance_tail(const JointLaw& joint, double r) {
  double var = joint.offspring().variance();
  if (!std::isfinite(var)) throw DomainError("finite_variance_tail: offspring variance is infinite");
  if (!(var > 0.0)) throw DomainError("finite_variance_tail: offspring variance is 0 (the tree is a single ray)");
  return std::sqrt(2.0 / var * joint.mark_tail(r));
}

/// Root C > 0 of c1 alpha Gamma(-alpha) x^alpha - mass * mu_integral(spec, x).
/// `mass` scales the limit measure; the root depends only on the ratio c1 / mass.
inline double c_alpha_mu(const SpectralMeasure& spec, double c1, double mass = 1.0) {
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw ConfigError("c_alpha_mu: c1 must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("c_alpha_mu: mass must be positive");
  if (!spec.has_joint_mass())
    throw ConfigError("c_alpha_mu: spectral measure needs an atom with both coordinates positive");
  const double alpha = spec.alpha();
  const double k = c1 * alpha * gamma_neg(alpha);
  auto phi = [&](double x) { return k * std::pow(x, alpha) - mass * mu_integral(spec, x); };
  double lo = 1e-6;
  double hi = 1.0;
  if (phi(lo) >= 0.0) throw NumericalError("c_alpha_mu: root lies below 1e-6");
  while (phi(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("c_alpha_mu: no sign change below 1e6");
  }
  while (hi - lo > 1e-12 * hi) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double c_alpha_mu(const SpectralMeasure& spec) { return c_alpha_mu(spec, c_constants(spec).c1); }

/// sqrt(gamma(0) / C2)
inline double boundary2_constant(double gamma0, double c2) {
  if (!(gamma0 > 0.0)) throw DomainError("boundary2_constant: gamma(0) must be positive");
  if (!(c2 > 0.0)) throw DomainError("boundary2_constant: C2 must be positive");
  return std::sqrt(gamma0 / c2);
}

inline double boundary2_constant(const JointLaw& joint, double c2) { return boundary2_constant(joint.gamma(0.0), c2); }

struct C2Estimate {
  double value;
  double error;       // spread between head and tail extrapolations
  std::size_t points;
};

/// Limit of D(s) / (s^2 log(1/s)), D the pgf deficit, along s = 10^{-j} for j = 4..10 in
/// steps of `step`, extrapolated linearly in 1/log(1/s).
inline C2Estimate estimate_C2(const OffspringLaw& law, double step = 1.0) {
  auto ti = law.tail_index();
  if (!ti || ti->alpha != 2.0) throw DomainError("estimate_C2: offspring law must have tail index exactly 2");
  if (!(step > 0.0 && step <= 1.0)) throw DomainError("estimate_C2: step must lie in (0,1]");
  std::vector<double> u, y;  // u = 1/log(1/s)
  for (double j = 4.0; j <= 10.0 + 1e-9; j += step) {
    double s = std::pow(10.0, -j);
    double log_inv = j * std::log(10.0);
    u.push_back(1.0 / log_inv);
    y.push_back(law.deficit(s) / (s * s * log_inv));
  }
  auto intercept = [&](std::size_t from, std::size_t to) {
    double n = static_cast<double>(to - from);
    double su = 0, sy = 0, suu = 0, suy = 0;
    for (std::size_t i = from; i < to; ++i) {
      su += u[i];
      sy += y[i];
      suu += u[i] * u[i];
      suy += u[i] * y[i];
    }
    double slope = (n * suy - su * sy) / (n * suu - su * su);
    return (sy - slope * su) / n;
  };
  const std::size_t n = u.size();
  const std::size_t half = (n + 1) / 2;
  double value = intercept(0, n);
  double spread = std::abs(intercept(0, half) - intercept(n - half, n));
  if (!(value > 0.0) || spread > 0.2 * value)
    throw NumericalError("estimate_C2: extrapolation did not settle (value " + std::to_string(value) + ", spread " +
                         std::to_string(spread) + ")");
  return {value, spread, n};
}

enum class Regime { finite_variance, stable, boundary2 };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::finite_variance:
      return "finite_variance";
    case Regime::stable:
      return "stable";
    case Regime::boundary2:
      return "boundary2";
  }
  return "?";
}

struct AsymptoticPrediction {
  Regime regime = Regime::finite_variance;
  double constant = 0.0;  // sqrt(2/sigma^2), C_{alpha,mu} or sqrt(gamma(0)/C2)
  double sigma2 = 0.0;
  double alpha = 0.0;
  double gamma0 = 0.0;
  double c2 = 0.0;
  std::function<double(double)> tail;  // r -> predicted P(M > r)
};

inline AsymptoticPrediction predict(const JointLaw& joint) {
  double var = joint.offspring().variance();
  if (std::isfinite(var)) {
    if (!(var > 0.0)) throw ConfigError("predict: offspring variance is 0 (the tree is a single ray)");
    AsymptoticPrediction p;
    p.regime = Regime::finite_variance;
    p.constant = std::sqrt(2.0 / var);
    p.sigma2 = var;
    p.tail = [joint, k = p.constant](double r) { return k * std::sqrt(joint.mark_tail(r)); };
    return p;
  }
  auto alpha = joint.tail_alpha();
  if (!alpha) throw ConfigError("predict: infinite offspring variance with no joint tail structure");
  if (*alpha > 1.0 && *alpha < 2.0) {
    auto spec = joint.spectral_measure();
    double c = c_alpha_mu(*spec);
    AsymptoticPrediction p;
    p.regime = Regime::stable;
    p.constant = c;
    p.alpha = *alpha;
    p.tail = [c](double r) { return c / r; };
    return p;
  }
  if (*alpha == 2.0) {
    auto est = estimate_C2(joint.offspring());
    double g0 = joint.gamma(0.0);
    double k = boundary2_constant(g0, est.value);
    AsymptoticPrediction p;
    p.regime = Regime::boundary2;
    p.constant = k;
    p.alpha = 2.0;
    p.gamma0 = g0;
    p.c2 = est.value;
    p.tail = [k](double r) {
      if (!(r > 1.0)) throw DomainError("predict: the boundary prediction needs r > 1");
      return k / (r * std::sqrt(std::log(r)));
    };
    return p;
  }
  throw ConfigError("predict: tail index " + std::to_string(*alpha) + " is outside the supported range (1,2]");
}

}  // namespace gwmax
