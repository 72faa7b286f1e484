#pragma once

// Monte Carlo for P(M > r) over critical Galton-Watson trees with a mark at every node,
// the root included. A tree is explored breadth-agnostically with a single pending-node
// counter, so memory stays constant however large the tree.

#include "gwmax/joint_law.hpp"
#include "gwmax/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace gwmax {

enum class TreeOutcome { exceeds, below, censored };

struct TreeRun {
  TreeOutcome outcome;
  std::uint64_t nodes;  // nodes processed
};

namespace detail {
// Pending counts beyond this are equivalent for every node cap we accept.
inline constexpr std::uint64_t kPendingSaturation = std::uint64_t{1} << 62;

inline void add_pending(std::uint64_t& pending, std::int64_t children) {
  auto c = static_cast<std::uint64_t>(children);
  pending = c >= kPendingSaturation - pending ? kPendingSaturation : pending + c;
}
}  // namespace detail

/// Stops at the first mark above r.
template <class Rng>
TreeRun simulate_tree_indicator(const JointLaw& joint, double r, std::uint64_t node_cap, Rng& rng) {
  std::uint64_t pending = 1, nodes = 0;
  while (pending > 0) {
    if (nodes >= node_cap) return {TreeOutcome::censored, nodes};
    Draw d = joint.sample(rng);
    ++nodes;
    --pending;
    if (d.mark > r) return {TreeOutcome::exceeds, nodes};
    detail::add_pending(pending, d.offspring);
  }
  return {TreeOutcome::below, nodes};
}

struct TreeMax {
  double max_mark;  // over processed nodes
  bool censored;
  std::uint64_t nodes;
};

/// Explores the whole tree (up to the cap) and records the largest mark.
template <class Rng>
TreeMax simulate_tree_max(const JointLaw& joint, std::uint64_t node_cap, Rng& rng) {
  std::uint64_t pending = 1, nodes = 0;
  double best = -numeric::kInf;
  while (pending > 0) {
    if (nodes >= node_cap) return {best, true, nodes};
    Draw d = joint.sample(rng);
    ++nodes;
    --pending;
    best = std::max(best, d.mark);
    detail::add_pending(pending, d.offspring);
  }
  return {best, false, nodes};
}

struct McEstimate {
  double r = 0.0;
  std::uint64_t n_trees = 0;
  std::uint64_t exceeds = 0;
  std::uint64_t censored = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
  double p_low = 0.0;
  double p_high = 0.0;
  double censored_frac = 0.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

inline McEstimate make_estimate(double r, std::uint64_t n, std::uint64_t exceeds, std::uint64_t censored,
                                std::uint64_t seed, unsigned workers) {
  McEstimate e;
  e.r = r;
  e.n_trees = n;
  e.exceeds = exceeds;
  e.censored = censored;
  double dn = static_cast<double>(n);
  e.p_hat = static_cast<double>(exceeds) / dn;
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / dn);
  e.p_low = e.p_hat;
  e.p_high = static_cast<double>(exceeds + censored) / dn;
  e.censored_frac = static_cast<double>(censored) / dn;
  e.seed = seed;
  e.workers = workers;
  return e;
}

namespace detail {
// Runs body(first, last, slot) over contiguous chunks of [0, n).
template <class Body>
void fan_out(std::uint64_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(std::uint64_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> pool;
  std::uint64_t chunk = (n + workers - 1) / workers;
  unsigned slot = 0;
  for (std::uint64_t from = 0; from < n; from += chunk, ++slot)
    pool.emplace_back(body, from, std::min(n, from + chunk), slot);
  for (auto& t : pool) t.join();
}
}  // namespace detail

/// Tree i uses stream make_stream(seed, i), so every r sees the same forest.
inline McEstimate estimate_tail(const JointLaw& joint, double r, std::uint64_t n_trees, std::uint64_t node_cap,
                                std::uint64_t seed, unsigned workers = 1) {
  if (n_trees == 0) throw DomainError("estimate_tail: n_trees must be >= 1");
  if (node_cap == 0) throw DomainError("estimate_tail: node_cap must be >= 1");
  workers = std::max(1u, workers);
  std::vector<std::uint64_t> exceeds(workers, 0), censored(workers, 0);
  detail::fan_out(n_trees, workers, [&](std::uint64_t from, std::uint64_t to, unsigned slot) {
    std::uint64_t e = 0, c = 0;
    for (std::uint64_t i = from; i < to; ++i) {
      auto rng = make_stream(seed, i);
      auto run = simulate_tree_indicator(joint, r, node_cap, rng);
      e += run.outcome == TreeOutcome::exceeds;
      c += run.outcome == TreeOutcome::censored;
    }
    exceeds[slot] = e;
    censored[slot] = c;
  });
  std::uint64_t e = 0, c = 0;
  for (unsigned w = 0; w < workers; ++w) {
    e += exceeds[w];
    c += censored[w];
  }
  return make_estimate(r, n_trees, e, c, seed, workers);
}

/// One forest, full exploration, every threshold of `grid` classified from the tree maxima.
inline std::vector<McEstimate> estimate_tail_grid(const JointLaw& joint, const std::vector<double>& grid,
                                                  std::uint64_t n_trees, std::uint64_t node_cap, std::uint64_t seed,
                                                  unsigned workers = 1) {
  if (n_trees == 0) throw DomainError("estimate_tail_grid: n_trees must be >= 1");
  if (node_cap == 0) throw DomainError("estimate_tail_grid: node_cap must be >= 1");
  workers = std::max(1u, workers);
  const std::size_t m = grid.size();
  std::vector<std::vector<std::uint64_t>> exceeds(workers, std::vector<std::uint64_t>(m, 0));
  std::vector<std::vector<std::uint64_t>> censored(workers, std::vector<std::uint64_t>(m, 0));
  detail::fan_out(n_trees, workers, [&](std::uint64_t from, std::uint64_t to, unsigned slot) {
    auto& e = exceeds[slot];
    auto& c = censored[slot];
    for (std::uint64_t i = from; i < to; ++i) {
      auto rng = make_stream(seed, i);
      auto tree = simulate_tree_max(joint, node_cap, rng);
      for (std::size_t j = 0; j < m; ++j) {
        if (tree.max_mark > grid[j])
          ++e[j];
        else if (tree.censored)
          ++c[j];
      }
    }
  });
  std::vector<McEstimate> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::uint64_t e = 0, c = 0;
    for (unsigned w = 0; w < workers; ++w) {
      e += exceeds[w][j];
      c += censored[w][j];
    }
    out.push_back(make_estimate(grid[j], n_trees, e, c, seed, workers));
  }
  return out;
}

}  // namespace gwmax
