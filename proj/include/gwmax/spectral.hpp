#pragma once

// Finite atomic spectral measures for bivariate regular variation on R^2_+ under the
// max-norm. The limit measure restricted to {||y|| > 1} is the law of U * theta with
// P(U > u) = u^{-alpha} (u >= 1) and theta drawn from the atoms, so every set functional
// reduces to one-dimensional Pareto integrals.

#include "gwmax/errors.hpp"
#include "gwmax/numeric.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace gwmax {

struct SpectralAtom {
  double theta1;  // mark coordinate
  double theta2;  // offspring coordinate
  double weight;
};

class SpectralMeasure {
 public:
  SpectralMeasure(double alpha, std::vector<SpectralAtom> atoms) : alpha_(alpha), atoms_(std::move(atoms)) {
    if (!(alpha_ > 1.0 && alpha_ < 2.0)) throw ConfigError("spectral: alpha must lie in (1,2)");
    if (atoms_.empty()) throw ConfigError("spectral: at least one atom is required");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const auto& a = atoms_[i];
      auto where = "spectral: atom " + std::to_string(i);
      if (!(a.theta1 >= 0.0 && a.theta2 >= 0.0) || !std::isfinite(a.theta1) || !std::isfinite(a.theta2))
        throw ConfigError(where + ": theta coordinates must be finite and non-negative");
      if (std::abs(std::max(a.theta1, a.theta2) - 1.0) > 1e-12)
        throw ConfigError(where + ": theta must have max-norm 1");
      if (!(a.weight > 0.0) || !std::isfinite(a.weight)) throw ConfigError(where + ": weight must be positive");
      total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("spectral: weights must sum to 1");
  }

  double alpha() const { return alpha_; }
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }

  /// mu({y1 > 0, y2 > 1}) > 0, needed for the stable-regime root to exist.
  bool has_joint_mass() const {
    for (const auto& a : atoms_)
      if (a.theta1 > 0.0 && a.theta2 > 0.0) return true;
    return false;
  }

 private:
  double alpha_;
  std::vector<SpectralAtom> atoms_;
};

struct TailRatios {
  double c1;  // mu({y2 > 1}) = lim P(nu > x) / P(||X|| > x)
  double c2;  // mu({y1 > 1}) = lim P(mark > x) / P(||X|| > x)
};

inline TailRatios c_constants(const SpectralMeasure& spec) {
  TailRatios out{0.0, 0.0};
  for (const auto& a : spec.atoms()) {
    out.c1 += a.weight * std::pow(a.theta2, spec.alpha());
    out.c2 += a.weight * std::pow(a.theta1, spec.alpha());
  }
  return out;
}

/// int e^{-x y2} 1{y1 > 1} mu(dy) = sum_i w_i int_{u >= 1/theta_i1} alpha u^{-alpha-1} e^{-x theta_i2 u} du.
inline double mu_integral(const SpectralMeasure& spec, double x) {
  if (!(x >= 0.0)) throw DomainError("mu_integral: x must be >= 0");
  const double alpha = spec.alpha();
  double total = 0.0;
  for (const auto& a : spec.atoms()) {
    if (a.theta1 == 0.0) continue;
    double mass = std::pow(a.theta1, alpha);
    double rate = x * a.theta2 / a.theta1;
    if (rate == 0.0) {
      total += a.weight * mass;
      continue;
    }
    // u = t / theta1: alpha u^{-alpha-1} du = theta1^alpha alpha t^{-alpha-1} dt, t >= 1.
    double integral = numeric::integrate_to_infinity(
        [&](double t) { return alpha * std::pow(t, -alpha - 1.0) * std::exp(-rate * t); }, 1.0);
    total += a.weight * mass * integral;
  }
  return total;
}

/// gamma(b) = mu({y1 >= 1, y2 >= b}) = sum_i w_i min(theta_i1, theta_i2 / b)^alpha.
inline double gamma_from_spectral(const SpectralMeasure& spec, double b) {
  if (!(b >= 0.0)) throw DomainError("gamma_from_spectral: b must be >= 0");
  double total = 0.0;
  for (const auto& a : spec.atoms()) {
    double reach = b == 0.0 ? a.theta1 : std::min(a.theta1, a.theta2 / b);
    total += a.weight * std::pow(reach, spec.alpha());
  }
  return total;
}

}  // namespace gwmax
