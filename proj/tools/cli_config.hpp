#pragma once

// YAML run configuration for the gwmax tool. See README.md for the grammar.

#include "gwmax/errors.hpp"
#include "gwmax/joint_law.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gwmax::cli {

enum class McMode { per_threshold, coupled };

struct McSettings {
  std::uint64_t n_trees = 1'000'000;
  std::uint64_t node_cap = 10'000'000;
  std::optional<std::uint64_t> seed;
  McMode mode = McMode::per_threshold;
};

struct RunConfig {
  std::optional<JointLaw> joint;
  std::vector<double> grid;
  double tol = 1e-14;
  std::optional<McSettings> mc;
  std::optional<std::string> output;
  unsigned threads = 1;
};

namespace detail {

// A YAML node together with its dotted path, for error messages.
struct Node {
  YAML::Node node;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path + ": " + what); }

  bool has(const std::string& key) const { return node[key].IsDefined() && !node[key].IsNull(); }

  Node at(const std::string& key) const {
    Node child{node[key], path.empty() ? key : path + "." + key};
    if (!has(key)) child.fail("missing required key");
    return child;
  }

  std::optional<Node> maybe(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return Node{node[key], path.empty() ? key : path + "." + key};
  }

  Node item(std::size_t i) const { return Node{node[i], path + "[" + std::to_string(i) + "]"}; }

  void expect_map() const {
    if (!node.IsMap()) fail("expected a mapping");
  }

  void expect_sequence() const {
    if (!node.IsSequence()) fail("expected a list");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    expect_map();
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node) {
      auto key = kv.first.as<std::string>();
      if (allowed.count(key)) continue;
      std::string list;
      for (const auto& k : allowed) list += (list.empty() ? "" : ", ") + k;
      Node{kv.second, path.empty() ? key : path + "." + key}.fail("unknown key (expected one of: " + list + ")");
    }
  }

  double real() const {
    if (!node.IsScalar()) fail("expected a number");
    try {
      double v = node.as<double>();
      if (!std::isfinite(v)) fail("expected a finite number");
      return v;
    } catch (const YAML::Exception&) {
      fail("expected a number, got '" + node.Scalar() + "'");
    }
  }

  std::uint64_t count() const {
    if (!node.IsScalar()) fail("expected a non-negative integer");
    double v = real();
    if (v < 0.0 || v != std::floor(v) || v > 9.0e18) fail("expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }

  std::string text() const {
    if (!node.IsScalar()) fail("expected a string");
    return node.Scalar();
  }
};

inline OffspringPtr parse_offspring(const Node& n) {
  n.expect_map();
  if (n.has("name")) {
    n.allow_only({"name", "alpha", "k_max"});
    auto name = n.at("name").text();
    if (name == "geometric" || name == "poisson") {
      if (n.has("alpha") || n.has("k_max")) n.fail(name + " takes no parameters");
      return std::make_shared<const OffspringLaw>(name == "geometric" ? geometric_critical() : poisson_critical());
    }
    if (name == "zipf") {
      double alpha = n.at("alpha").real();
      std::int64_t k_max = 1'000'000;
      if (auto k = n.maybe("k_max")) {
        auto v = k->count();
        if (v < 1 || v > 100'000'000) k->fail("must lie in [1, 1e8]");
        k_max = static_cast<std::int64_t>(v);
      }
      try {
        return std::make_shared<const OffspringLaw>(zipf_critical(alpha, k_max));
      } catch (const ConfigError& e) {
        n.at("alpha").fail(e.what());
      }
    }
    n.at("name").fail("unknown offspring law '" + name + "' (geometric, poisson, zipf)");
  }
  n.allow_only({"pmf", "tail"});
  auto table = n.at("pmf");
  table.expect_sequence();
  std::optional<PowerTailRule> rule;
  if (auto t = n.maybe("tail")) {
    t->allow_only({"type", "alpha", "c", "from_k"});
    auto type = t->at("type").text();
    double alpha = t->at("alpha").real();
    double c = t->at("c").real();
    auto from = t->at("from_k").count();
    if (!(alpha > 1.0)) t->at("alpha").fail("must exceed 1");
    if (!(c > 0.0)) t->at("c").fail("must be positive");
    if (from < 1 || from > 100'000'000) t->at("from_k").fail("must lie in [1, 1e8]");
    if (type == "power")
      rule = PowerTailRule{TailForm::zeta, alpha, c * alpha, static_cast<std::int64_t>(from)};
    else if (type == "pareto")
      rule = PowerTailRule{TailForm::lattice, alpha, c, static_cast<std::int64_t>(from)};
    else
      t->at("type").fail("unknown tail type '" + type + "' (power, pareto)");
  }
  std::vector<double> pmf;
  for (std::size_t i = 0; i < table.node.size(); ++i) {
    auto entry = table.item(i);
    entry.expect_sequence();
    if (entry.node.size() != 2) entry.fail("expected [k, p]");
    auto k = entry.item(0).count();
    double p = entry.item(1).real();
    if (rule && k >= static_cast<std::uint64_t>(rule->from_k)) entry.fail("k must be below tail.from_k");
    if (k > 100'000'000) entry.fail("k is too large for a table");
    if (pmf.size() <= k) pmf.resize(k + 1, 0.0);
    pmf[k] += p;
  }
  if (rule) pmf.resize(static_cast<std::size_t>(rule->from_k), 0.0);
  try {
    return std::make_shared<const OffspringLaw>(OffspringLaw::from_table(std::move(pmf), rule));
  } catch (const ConfigError& e) {
    n.fail(e.what());
  }
}

inline MarkLaw parse_mark(const Node& n) {
  n.expect_map();
  auto type = n.at("type").text();
  if (type == "constant") {
    n.allow_only({"type", "value"});
    double value = n.at("value").real();
    if (value < 0.0) n.at("value").fail("must be >= 0");
    return MarkLaw::constant(value);
  }
  if (type == "pareto") {
    n.allow_only({"type", "alpha", "scale"});
    double alpha = n.at("alpha").real();
    double scale = n.has("scale") ? n.at("scale").real() : 1.0;
    if (!(alpha > 0.0)) n.at("alpha").fail("must be positive");
    if (!(scale > 0.0)) n.at("scale").fail("must be positive");
    return MarkLaw::pareto(alpha, scale);
  }
  n.at("type").fail("unknown mark type '" + type + "' (constant, pareto)");
}

inline JointLaw parse_joint(const Node& n) {
  n.expect_map();
  auto kind = n.at("kind").text();
  if (kind == "diagonal") {
    n.allow_only({"kind", "offspring"});
    return JointLaw::diagonal(parse_offspring(n.at("offspring")));
  }
  if (kind == "independent") {
    n.allow_only({"kind", "offspring", "mark"});
    return JointLaw::independent(parse_offspring(n.at("offspring")), parse_mark(n.at("mark")));
  }
  if (kind == "coupled") {
    n.allow_only({"kind", "offspring", "multipliers"});
    auto list = n.at("multipliers");
    list.expect_sequence();
    std::vector<Multiplier> ms;
    for (std::size_t i = 0; i < list.node.size(); ++i) {
      auto m = list.item(i);
      m.allow_only({"b", "p"});
      ms.push_back({m.at("b").real(), m.at("p").real()});
    }
    auto offspring = parse_offspring(n.at("offspring"));
    try {
      return JointLaw::coupled(std::move(offspring), std::move(ms));
    } catch (const ConfigError& e) {
      list.fail(e.what());
    }
  }
  if (kind == "spectral") {
    if (n.has("offspring")) n.at("offspring").fail("spectral joints build their own offspring law; remove this key");
    n.allow_only({"kind", "alpha", "atoms", "tail_weight", "radius"});
    double alpha = n.at("alpha").real();
    auto list = n.at("atoms");
    list.expect_sequence();
    std::vector<SpectralAtom> atoms;
    for (std::size_t i = 0; i < list.node.size(); ++i) {
      auto a = list.item(i);
      a.allow_only({"theta", "w"});
      auto theta = a.at("theta");
      theta.expect_sequence();
      if (theta.node.size() != 2) theta.fail("expected [mark, offspring] coordinates");
      atoms.push_back({theta.item(0).real(), theta.item(1).real(), a.at("w").real()});
    }
    double q = n.has("tail_weight") ? n.at("tail_weight").real() : 0.25;
    double radius = n.has("radius") ? n.at("radius").real() : 1.0;
    try {
      return JointLaw::spectral(SpectralMeasure(alpha, std::move(atoms)), q, radius);
    } catch (const ConfigError& e) {
      n.fail(e.what());
    }
  }
  n.at("kind").fail("unknown joint kind '" + kind + "' (diagonal, independent, coupled, spectral)");
}

inline std::vector<double> parse_grid(const Node& n) {
  n.expect_map();
  std::vector<double> grid;
  if (n.has("values")) {
    n.allow_only({"values"});
    auto list = n.at("values");
    list.expect_sequence();
    for (std::size_t i = 0; i < list.node.size(); ++i) {
      double r = list.item(i).real();
      if (r < 0.0) list.item(i).fail("thresholds must be >= 0");
      grid.push_back(r);
    }
  } else {
    n.allow_only({"start", "stop", "points", "spacing"});
    auto spacing = n.has("spacing") ? n.at("spacing").text() : std::string("linear");
    double start = n.at("start").real();
    double stop = n.at("stop").real();
    if (spacing == "dyadic") {
      if (n.has("points")) n.at("points").fail("dyadic grids are set by start and stop only");
      if (!(start > 0.0)) n.at("start").fail("must be positive");
      for (double r = start; r <= stop * (1.0 + 1e-12); r *= 2.0) grid.push_back(r);
    } else if (spacing == "linear" || spacing == "log") {
      auto points = n.at("points").count();
      if (points > 10'000'000) n.at("points").fail("too many points");
      if (spacing == "log" && !(start > 0.0)) n.at("start").fail("must be positive for log spacing");
      if (start < 0.0) n.at("start").fail("must be >= 0");
      if (points > 1 && !(stop > start)) n.at("stop").fail("must exceed start");
      for (std::uint64_t i = 0; i < points; ++i) {
        double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        grid.push_back(spacing == "linear" ? start + t * (stop - start)
                                           : std::pow(10.0, std::log10(start) + t * (std::log10(stop) - std::log10(start))));
      }
      if (points > 0) grid.front() = start;
      if (points > 1) grid.back() = stop;
    } else {
      n.at("spacing").fail("unknown spacing '" + spacing + "' (linear, dyadic, log)");
    }
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) n.fail("grid must be strictly increasing");
  return grid;
}

inline McSettings parse_mc(const Node& n) {
  n.allow_only({"n_trees", "node_cap", "seed", "mode"});
  McSettings mc;
  if (auto v = n.maybe("n_trees")) {
    mc.n_trees = v->count();
    if (mc.n_trees == 0) v->fail("must be >= 1");
  }
  if (auto v = n.maybe("node_cap")) {
    mc.node_cap = v->count();
    if (mc.node_cap == 0 || mc.node_cap > (std::uint64_t{1} << 61)) v->fail("must lie in [1, 2^61]");
  }
  if (auto v = n.maybe("seed")) mc.seed = v->count();
  if (auto v = n.maybe("mode")) {
    auto mode = v->text();
    if (mode == "per_threshold")
      mc.mode = McMode::per_threshold;
    else if (mode == "coupled")
      mc.mode = McMode::coupled;
    else
      v->fail("unknown mode '" + mode + "' (per_threshold, coupled)");
  }
  return mc;
}

}  // namespace detail

inline RunConfig parse_config(const YAML::Node& root) {
  detail::Node n{root, ""};
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
  n.allow_only({"joint", "grid", "solve", "mc", "output", "threads"});
  RunConfig cfg;
  cfg.joint = detail::parse_joint(n.at("joint"));
  if (auto g = n.maybe("grid")) cfg.grid = detail::parse_grid(*g);
  if (auto s = n.maybe("solve")) {
    s->allow_only({"tol"});
    if (auto t = s->maybe("tol")) {
      cfg.tol = t->real();
      if (!(cfg.tol > 0.0 && cfg.tol < 1e-2)) t->fail("must lie in (0, 1e-2)");
    }
  }
  if (auto m = n.maybe("mc")) cfg.mc = detail::parse_mc(*m);
  if (auto o = n.maybe("output")) cfg.output = o->text();
  if (auto t = n.maybe("threads")) {
    auto v = t->count();
    if (v < 1 || v > 1024) t->fail("must lie in [1, 1024]");
    cfg.threads = static_cast<unsigned>(v);
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot read config file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ConfigError("config syntax: " + std::string(e.what()));
  }
  return parse_config(root);
}

}  // namespace gwmax::cli
