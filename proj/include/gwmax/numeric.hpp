#pragma once

// Numerical building blocks shared by the offspring, joint-law and asymptotic code:
// power sums, Euler-Maclaurin tails of smooth summands, semi-infinite quadrature,
// and the cancellation-free binomial deficit (1-x)^t - 1 + t x.

#include <boost/math/quadrature/exp_sinh.hpp>

#include <array>
#include <cmath>
#include <limits>

namespace gwmax::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

// B_{2j} / (2j)!, j = 1..6
inline constexpr std::array<double, 6> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
};

inline constexpr double kEulerMaclaurinStart = 16.0;

// Euler-Maclaurin primitive of t^{-s}: P(t) = int^t u^{-s} du - t^{-s}/2 + sum_j B_2j/(2j)! d^{2j-1}/dt^{2j-1} t^{-s}.
// sum_{k=n}^{m} k^{-s} = P(m) + m^{-s} - P(n).
inline double power_primitive(double s, double t) {
  double integral = (s == 1.0) ? std::log(t) : std::pow(t, 1.0 - s) / (1.0 - s);
  double f = std::pow(t, -s);
  double total = integral - 0.5 * f;
  // d^m/dt^m t^{-s} = (-1)^m (s)_m t^{-s-m}; odd m gives a minus sign.
  double rising = s;  // (s)_1
  double tpow = f / t;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    total += kBernoulliOverFactorial[j] * (-rising * tpow);
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    tpow /= t * t;
  }
  return total;
}

}  // namespace detail

/// Sum of k^{-s} over integers k in [first, last]; last may be +inf when s > 1.
/// Returns +inf for a divergent infinite sum.
inline double power_sum(double s, double first, double last = kInf) {
  if (last < first) return 0.0;
  if (std::isinf(last) && s <= 1.0) return kInf;
  double total = 0.0;
  double k = first;
  if (last - first < 64.0) {
    for (; k <= last; k += 1.0) total += std::pow(k, -s);
    return total;
  }
  for (; k < detail::kEulerMaclaurinStart; k += 1.0) total += std::pow(k, -s);
  double upper = std::isinf(last) ? 0.0 : detail::power_primitive(s, last) + std::pow(last, -s);
  return total + upper - detail::power_primitive(s, k);
}

/// Riemann zeta for real s > 1.
inline double riemann_zeta(double s) { return power_sum(s, 1.0); }

/// (1-x)^t for x in [0,1], t >= 0, with 0^0 = 1.
inline double pow_one_minus(double x, double t) {
  if (t == 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return std::exp(t * std::log1p(-x));
}

/// psi(t, x) = (1-x)^t - 1 + t x, evaluated without cancellation. Non-negative for t >= 1.
inline double binomial_deficit(double t, double x) {
  if (t == 0.0 || x == 0.0) return 0.0;
  if (t * x < 0.1) {
    // sum_{j>=2} C(t, j) (-x)^j
    double term = 0.5 * t * (t - 1.0) * x * x;
    double sum = term;
    for (int j = 2; j < 60 && term != 0.0; ++j) {
      term *= (t - j) / (j + 1.0) * (-x);
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  if (x >= 1.0) return t - 1.0;
  return std::expm1(t * std::log1p(-x)) + t * x;
}

/// Integral of f over [a, inf) for a > 0, through t = a e^v and exp-sinh quadrature in v.
/// f must return finite values; non-finite samples far in the tail are treated as zero.
template <class F>
double integrate_to_infinity(F&& f, double a, double tolerance = 1e-14) {
  static thread_local boost::math::quadrature::exp_sinh<double> integrator;
  auto mapped = [&](double v) {
    double t = a * std::exp(v);
    if (!std::isfinite(t)) return 0.0;
    double value = f(t) * t;
    return std::isfinite(value) ? value : 0.0;
  };
  double error = 0.0;
  double l1 = 0.0;
  return integrator.integrate(mapped, tolerance, &error, &l1);
}

/// Euler-Maclaurin tail sum_{k>=n} h(k) for a smooth, slowly varying summand, given
/// integral = int_n^inf h. Derivatives are taken by central differences with unit step,
/// so n should be in the thousands.
template <class H>
double euler_maclaurin_tail(H&& h, double n, double integral) {
  double hm2 = h(n - 2.0), hm1 = h(n - 1.0), h0 = h(n), hp1 = h(n + 1.0), hp2 = h(n + 2.0);
  double d1 = (-hp2 + 8.0 * hp1 - 8.0 * hm1 + hm2) / 12.0;
  double d3 = (hp2 - 2.0 * hp1 + 2.0 * hm1 - hm2) / 2.0;
  return integral + 0.5 * h0 - d1 / 12.0 + d3 / 720.0;
}

/// Sum of h(k) over integers k >= first, for h smooth with at most power-law growth of
/// its relative derivatives. Sums explicitly up to `switch_at`, then applies Euler-Maclaurin.
/// `geometric_rate` > 0 is -log of the per-step decay factor of an exponential weight; if it
/// is large enough the sum is truncated once terms are negligible instead.
template <class H>
double smooth_series_tail(H&& h, double first, double geometric_rate = 0.0,
                          double switch_at = 4096.0) {
  double total = 0.0;
  double k = first;
  if (geometric_rate >= 1e-3) {
    // Terms decay at least geometrically once past any polynomial prefactor peak.
    double bound_factor = 1.0 / -std::expm1(-geometric_rate);
    for (;; k += 1.0) {
      double term = h(k);
      total += term;
      if (k >= first + 8.0 && term * bound_factor <= 1e-18 * total) return total;
      if (term == 0.0 && k > first + 8.0) return total;
    }
  }
  for (; k < switch_at; k += 1.0) total += h(k);
  double integral = integrate_to_infinity(h, k);
  return total + euler_maclaurin_tail(h, k, integral);
}

}  // namespace gwmax::numeric
