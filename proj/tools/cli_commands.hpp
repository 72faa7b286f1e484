#pragma once

// The four gwmax subcommands. Each returns its full CSV text; nothing is written until
// every row has been computed.

#include "cli_config.hpp"

#include "gwmax/asymptotics.hpp"
#include "gwmax/fixed_point.hpp"
#include "gwmax/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace gwmax::cli {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

inline std::string cmd_solve(const RunConfig& cfg) {
  auto curve = solve_curve(*cfg.joint, cfg.grid, cfg.tol, cfg.threads);
  std::string out = "r,x_r,residual,iterations\n";
  for (const auto& p : curve.entries)
    out += fmt(p.r) + "," + fmt(p.x) + "," + fmt(p.residual) + "," + std::to_string(p.iterations) + "\n";
  return out;
}

inline std::vector<McEstimate> run_mc(const RunConfig& cfg) {
  if (!cfg.mc) throw ConfigError("mc: section is required for this command");
  const auto& mc = *cfg.mc;
  if (!mc.seed) throw ConfigError("mc.seed: missing (set it in the config or pass --seed)");
  if (mc.mode == McMode::coupled)
    return estimate_tail_grid(*cfg.joint, cfg.grid, mc.n_trees, mc.node_cap, *mc.seed, cfg.threads);
  std::vector<McEstimate> rows;
  for (double r : cfg.grid) rows.push_back(estimate_tail(*cfg.joint, r, mc.n_trees, mc.node_cap, *mc.seed, cfg.threads));
  return rows;
}

inline std::string cmd_mc(const RunConfig& cfg) {
  auto rows = run_mc(cfg);
  std::string out = "r,p_hat,stderr,p_low,p_high,censored_frac,n_trees,seed\n";
  for (const auto& e : rows)
    out += fmt(e.r) + "," + fmt(e.p_hat) + "," + fmt(e.std_error) + "," + fmt(e.p_low) + "," + fmt(e.p_high) + "," +
           fmt(e.censored_frac) + "," + fmt(e.n_trees) + "," + fmt(e.seed) + "\n";
  out += "# workers," + std::to_string(cfg.threads) + "\n";
  return out;
}

inline std::vector<double> predicted_tails(const AsymptoticPrediction& pred, const std::vector<double>& grid) {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r = grid[i];
    if (pred.regime == Regime::stable && !(r > 0.0))
      throw ConfigError("grid[" + std::to_string(i) + "]: the stable prediction needs r > 0");
    if (pred.regime == Regime::boundary2 && !(r > 1.0))
      throw ConfigError("grid[" + std::to_string(i) + "]: the boundary prediction needs r > 1");
    out.push_back(pred.tail(r));
  }
  return out;
}

inline std::string cmd_asym(const RunConfig& cfg) {
  auto pred = predict(*cfg.joint);
  auto tails = predicted_tails(pred, cfg.grid);
  std::string out = "r,predicted_tail,regime,constant\n";
  for (std::size_t i = 0; i < cfg.grid.size(); ++i)
    out += fmt(cfg.grid[i]) + "," + fmt(tails[i]) + "," + regime_name(pred.regime) + "," + fmt(pred.constant) + "\n";
  return out;
}

/// Least-squares slope of |ratio - 1| against log r.
inline double trend_slope(const std::vector<double>& r, const std::vector<double>& ratio) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(ratio[i])) continue;
    double x = std::log(r[i]), y = std::abs(ratio[i] - 1.0);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) return std::nan("");
  return (n * sxy - sx * sy) / den;
}

inline std::string cmd_compare(const RunConfig& cfg) {
  auto pred = predict(*cfg.joint);
  auto tails = predicted_tails(pred, cfg.grid);
  auto curve = solve_curve(*cfg.joint, cfg.grid, cfg.tol, cfg.threads);
  std::vector<McEstimate> mc;
  if (cfg.mc) mc = run_mc(cfg);
  std::vector<double> x_ratio, p_ratio;
  std::string out = "r,x_r,predicted,x_r/predicted";
  if (cfg.mc) out += ",p_hat,stderr,p_hat/predicted";
  out += "\n";
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    double x = curve.entries[i].x;
    x_ratio.push_back(x / tails[i]);
    out += fmt(cfg.grid[i]) + "," + fmt(x) + "," + fmt(tails[i]) + "," + fmt(x_ratio.back());
    if (cfg.mc) {
      p_ratio.push_back(mc[i].p_hat / tails[i]);
      out += "," + fmt(mc[i].p_hat) + "," + fmt(mc[i].std_error) + "," + fmt(p_ratio.back());
    }
    out += "\n";
  }
  auto last = [](const std::vector<double>& v) { return v.empty() ? std::nan("") : v.back(); };
  out += "# final_ratio," + fmt(last(x_ratio));
  if (cfg.mc) out += "," + fmt(last(p_ratio));
  out += "\n# trend_slope," + fmt(trend_slope(cfg.grid, x_ratio));
  if (cfg.mc) out += "," + fmt(trend_slope(cfg.grid, p_ratio));
  out += "\n";
  return out;
}

inline std::string run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "mc" && !cfg.mc) throw ConfigError("mc: section is required for this command");
  if ((command == "mc" || command == "compare") && cfg.mc && !cfg.mc->seed)
    throw ConfigError("mc.seed: missing (set it in the config or pass --seed)");
  if (command == "solve") return cmd_solve(cfg);
  if (command == "mc") return cmd_mc(cfg);
  if (command == "asym") return cmd_asym(cfg);
  if (command == "compare") return cmd_compare(cfg);
  throw ConfigError("unknown command '" + command + "' (solve, mc, asym, compare)");
}

}  // namespace gwmax::cli
