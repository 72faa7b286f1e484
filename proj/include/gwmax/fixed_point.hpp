#pragma once

// x_r = P(M > r) as the root of g_r(x) = [f(1-x) - (1-x)] - E[(1-x)^nu; mark > r] on [0,1].
// g_r is non-decreasing with g_r(0) = -P(mark > r) and g_r(1) = P(nu = 0, mark <= r) >= 0.

#include "gwmax/errors.hpp"
#include "gwmax/joint_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gwmax {

inline constexpr double kDefaultTolerance = 1e-14;

inline double g_eval(const JointLaw& joint, double r, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("g_eval: x must lie in [0,1]");
  return joint.offspring().deficit(x) - joint.truncated_pgf(x, r);
}

struct TailPoint {
  double r;
  double x;
  double residual;  // |g_r(x)|
  int iterations;
};

/// Bisection to absolute width `tol`; roots below 1e-8 are refined further to relative width 1e-12.
inline TailPoint solve_xr(const JointLaw& joint, double r, double tol = kDefaultTolerance) {
  if (!(tol > 0.0)) throw DomainError("solve_xr: tol must be positive");
  double p = joint.mark_tail(r);
  if (p == 0.0) return {r, 0.0, 0.0, 0};
  double lo = 0.0, hi = 1.0;
  double g_lo = -p;
  double g_hi = g_eval(joint, r, 1.0);
  // g(1) >= 0 exactly; a rounding-level negative value means the root sits at 1
  if (g_hi < 0.0 && g_hi > -std::max(tol, 1e-13)) return {r, 1.0, -g_hi, 0};
  if (g_hi < 0.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "solve_xr: no bracket at r=" << r << " (g(0)=" << g_lo << ", g(1)=" << g_hi << ")";
    throw NumericalError(msg.str());
  }
  int iterations = 0;
  auto step = [&] {
    double mid = 0.5 * (lo + hi);
    double g = g_eval(joint, r, mid);
    if (g < 0.0) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
      g_hi = g;
    }
    ++iterations;
  };
  while (hi - lo > tol && iterations < 200) step();
  while (hi < 1e-8 && hi - lo > 1e-12 * hi && iterations < 400) step();
  if (std::abs(g_lo) <= std::abs(g_hi)) return {r, lo, std::abs(g_lo), iterations};
  return {r, hi, std::abs(g_hi), iterations};
}

struct TailCurve {
  std::vector<TailPoint> entries;
};

/// Solves every grid point; `workers` > 1 splits the grid into contiguous chunks.
inline TailCurve solve_curve(const JointLaw& joint, const std::vector<double>& grid, double tol = kDefaultTolerance,
                             unsigned workers = 1) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("solve_curve: grid must be strictly increasing");
  TailCurve curve;
  curve.entries.resize(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());
  auto run = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      try {
        curve.entries[i] = solve_xr(joint, grid[i], tol);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1))));
  if (workers == 1) {
    run(0, grid.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (grid.size() + workers - 1) / workers;
    for (std::size_t from = 0; from < grid.size(); from += chunk)
      pool.emplace_back(run, from, std::min(grid.size(), from + chunk));
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!failures[i]) continue;
    std::string prefix = "grid point " + std::to_string(i) + ": ";
    try {
      std::rethrow_exception(failures[i]);
    } catch (const NumericalError& e) {
      throw NumericalError(prefix + e.what());
    } catch (const DomainError& e) {
      throw DomainError(prefix + e.what());
    }
  }
  for (std::size_t i = 1; i < curve.entries.size(); ++i) {
    const auto& a = curve.entries[i - 1];
    const auto& b = curve.entries[i];
    if (b.x > a.x + 2.0 * tol + 1e-12 * a.x)
      throw NumericalError("solve_curve: x_r increases between grid points " + std::to_string(i - 1) + " and " +
                           std::to_string(i));
  }
  return curve;
}

enum class ScalingKind { finite_variance, stable, boundary2 };

/// Rescaling of the argument of g_r: sqrt(P(mark > r)), 1/r or 1/(r sqrt(log r)).
struct ScalingScheme {
  ScalingKind kind;

  double scale(const JointLaw& joint, double r) const {
    switch (kind) {
      case ScalingKind::finite_variance:
        return std::sqrt(joint.mark_tail(r));
      case ScalingKind::stable:
        if (!(r > 0.0)) throw DomainError("scale: r must be positive");
        return 1.0 / r;
      case ScalingKind::boundary2:
        if (!(r > 1.0)) throw DomainError("scale: r must exceed 1");
        return 1.0 / (r * std::sqrt(std::log(r)));
    }
    return 0.0;
  }
};

/// g_r(x * scale(r)); its root is x_r / scale(r).
inline double phi_r(const JointLaw& joint, const ScalingScheme& scheme, double r, double x) {
  if (!(x >= 0.0)) throw DomainError("phi_r: x must be >= 0");
  double y = x * scheme.scale(joint, r);
  if (y > 1.0) throw DomainError("phi_r: x * scale(r) exceeds 1");
  return g_eval(joint, r, y);
}

}  // namespace gwmax
