#pragma once

// Joint laws of (mark, offspring) = (nu~, nu) in R_+ x N.
//
//   diagonal     nu~ = nu
//   independent  nu~ drawn from a mark law independent of nu
//   coupled      nu~ = nu * B, B discrete and independent of nu
//   spectral     polar construction realizing an atomic spectral measure:
//                with probability q, R = r0 * Pareto(alpha), atom i with weight w_i,
//                (nu~, nu) = (R theta_i1, floor(R theta_i2)); otherwise a bulk with
//                nu~ = 0 and nu in {0, 2} whose mean restores E[nu] = 1.
//
// Every kind evaluates E[(1-x)^nu; nu~ > r] from its exact structure.

#include "gwmax/errors.hpp"
#include "gwmax/offspring.hpp"
#include "gwmax/rng.hpp"
#include "gwmax/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gwmax {

struct MarkLaw {
  enum class Kind { constant, pareto };
  Kind kind = Kind::constant;
  double value = 0.0;  // constant
  double alpha = 2.0;  // pareto: P(mark > t) = (scale / t)^alpha, t >= scale
  double scale = 1.0;

  static MarkLaw constant(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("mark: constant value must be finite and >= 0");
    return MarkLaw{Kind::constant, v, 2.0, 1.0};
  }
  static MarkLaw pareto(double alpha, double scale) {
    if (!(alpha > 0.0) || !(scale > 0.0)) throw ConfigError("mark: pareto needs alpha > 0 and scale > 0");
    return MarkLaw{Kind::pareto, 0.0, alpha, scale};
  }

  double tail(double r) const {
    if (kind == Kind::constant) return value > r ? 1.0 : 0.0;
    return r < scale ? 1.0 : std::pow(scale / r, alpha);
  }

  template <class Rng>
  double sample(Rng& rng) const {
    if (kind == Kind::constant) return value;
    return scale * std::pow(uniform_open_closed(rng), -1.0 / alpha);
  }
};

struct Multiplier {
  double b;  // value of B
  double p;  // P(B = b)
};

enum class JointKind { diagonal, independent, coupled, spectral };

struct Draw {
  double mark;
  std::int64_t offspring;
};

class JointLaw {
 public:
  static JointLaw diagonal(OffspringPtr offspring) {
    require(offspring);
    return JointLaw(JointKind::diagonal, std::move(offspring));
  }

  static JointLaw independent(OffspringPtr offspring, MarkLaw mark) {
    require(offspring);
    JointLaw j(JointKind::independent, std::move(offspring));
    j.mark_ = mark;
    return j;
  }

  static JointLaw coupled(OffspringPtr offspring, std::vector<Multiplier> multipliers) {
    require(offspring);
    if (multipliers.empty()) throw ConfigError("coupled: at least one multiplier is required");
    double total = 0.0;
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
      const auto& m = multipliers[i];
      if (!(m.b >= 0.0) || !std::isfinite(m.b) || !(m.p > 0.0))
        throw ConfigError("coupled: multiplier " + std::to_string(i) + " needs b >= 0 and p > 0");
      total += m.p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("coupled: multiplier probabilities must sum to 1");
    JointLaw j(JointKind::coupled, std::move(offspring));
    j.multipliers_ = std::move(multipliers);
    return j;
  }

  /// Polar construction for `spec` with tail probability `tail_weight` and radius scale `radius`.
  static JointLaw spectral(SpectralMeasure spec, double tail_weight = 0.25, double radius = 1.0) {
    if (!(tail_weight > 0.0 && tail_weight < 1.0)) throw ConfigError("spectral: tail_weight must lie in (0,1)");
    if (!(radius >= 1.0) || !std::isfinite(radius)) throw ConfigError("spectral: radius must be >= 1");
    const double alpha = spec.alpha();
    const double q = tail_weight;
    auto polar_survival = [&](double theta2, double k) {  // P(floor(R theta2) >= k), k >= 1
      if (theta2 == 0.0) return 0.0;
      return std::min(1.0, std::pow(radius * theta2 / k, alpha));
    };
    double polar_mean = 0.0;
    for (const auto& a : spec.atoms()) {
      if (a.theta2 == 0.0) continue;
      double full = std::floor(radius * a.theta2);
      polar_mean += a.weight * (full + std::pow(radius * a.theta2, alpha) * numeric::power_sum(alpha, full + 1.0));
    }
    double bulk_mean = (1.0 - q * polar_mean) / (1.0 - q);
    if (!(bulk_mean >= 0.0 && bulk_mean <= 2.0))
      throw ConfigError("spectral: tail_weight/radius leave no bulk law on {0,2} with E[nu] = 1 (bulk mean " +
                        std::to_string(bulk_mean) + ")");
    // P(nu >= k) for the mixture.
    auto survival = [&](double k) {
      if (k <= 0.0) return 1.0;
      double s = (1.0 - q) * (k <= 2.0 ? bulk_mean / 2.0 : 0.0);
      for (const auto& a : spec.atoms()) s += q * a.weight * polar_survival(a.theta2, k);
      return s;
    };
    std::int64_t first_tail = std::max<std::int64_t>(3, static_cast<std::int64_t>(std::ceil(radius)));
    std::vector<double> pmf(static_cast<std::size_t>(first_tail));
    for (std::int64_t k = 0; k < first_tail; ++k)
      pmf[static_cast<std::size_t>(k)] = survival(static_cast<double>(k)) - survival(static_cast<double>(k + 1));
    auto ratios = c_constants(spec);
    std::optional<PowerTailRule> rule;
    if (ratios.c1 > 0.0) rule = PowerTailRule{TailForm::lattice, alpha, q * std::pow(radius, alpha) * ratios.c1, first_tail};
    auto offspring = std::make_shared<const OffspringLaw>(OffspringLaw::from_table(std::move(pmf), rule));
    JointLaw j(JointKind::spectral, std::move(offspring));
    j.spectral_ = std::move(spec);
    j.tail_weight_ = q;
    j.radius_ = radius;
    j.bulk_mean_ = bulk_mean;
    return j;
  }

  JointKind kind() const { return kind_; }
  const OffspringLaw& offspring() const { return *offspring_; }
  const OffspringPtr& offspring_ptr() const { return offspring_; }
  const std::optional<MarkLaw>& mark_law() const { return mark_; }
  const std::vector<Multiplier>& multipliers() const { return multipliers_; }

  /// P(nu~ > r)
  double mark_tail(double r) const {
    check_r(r);
    switch (kind_) {
      case JointKind::diagonal:
        return offspring_->tail(r);
      case JointKind::independent:
        return mark_->tail(r);
      case JointKind::coupled: {
        double total = 0.0;
        for (const auto& m : multipliers_)
          if (m.b > 0.0) total += m.p * offspring_->tail(r / m.b);
        return total;
      }
      case JointKind::spectral: {
        double total = 0.0;
        for (const auto& a : spectral_->atoms())
          if (a.theta1 > 0.0) total += a.weight * radial_survival(r / a.theta1);
        return tail_weight_ * total;
      }
    }
    return 0.0;
  }

  /// E[(1-x)^nu; nu~ > r]
  double truncated_pgf(double x, double r) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("truncated_pgf: x must lie in [0,1]");
    check_r(r);
    switch (kind_) {
      case JointKind::diagonal:
        return offspring_->partial_pgf_above(x, r);
      case JointKind::independent: {
        double p = mark_->tail(r);
        return p == 0.0 ? 0.0 : p * offspring_->pgf_at_complement(x);
      }
      case JointKind::coupled: {
        double total = 0.0;
        for (const auto& m : multipliers_)
          if (m.b > 0.0) total += m.p * offspring_->partial_pgf_above(x, r / m.b);
        return total;
      }
      case JointKind::spectral:
        return spectral_sum(r, [&](double k0, double first_mass, double theta2) {
          double log_s = std::log1p(-x);
          double head = first_mass * (k0 == 0.0 ? 1.0 : std::exp(k0 * log_s));
          if (theta2 == 0.0) return head;
          PowerTailRule lattice{TailForm::lattice, spectral_->alpha(), 1.0, 1};
          return head + std::pow(radius_ * theta2, spectral_->alpha()) * lattice.pgf_at_log(log_s, k0 + 1.0);
        });
    }
    return 0.0;
  }

  /// E[nu; nu~ > r]
  double truncated_mean(double r) const {
    check_r(r);
    switch (kind_) {
      case JointKind::diagonal:
        return offspring_->truncated_moment(1, r, MomentSide::above);
      case JointKind::independent:
        return mark_->tail(r);
      case JointKind::coupled: {
        double total = 0.0;
        for (const auto& m : multipliers_)
          if (m.b > 0.0) total += m.p * offspring_->truncated_moment(1, r / m.b, MomentSide::above);
        return total;
      }
      case JointKind::spectral:
        return spectral_sum(r, [&](double k0, double first_mass, double theta2) {
          double head = k0 * first_mass;
          if (theta2 == 0.0) return head;
          PowerTailRule lattice{TailForm::lattice, spectral_->alpha(), 1.0, 1};
          return head + std::pow(radius_ * theta2, spectral_->alpha()) * lattice.moment_range(1, k0 + 1.0);
        });
    }
    return 0.0;
  }

  /// V(r) = P(max(nu~, nu) > r)
  double norm_tail(double r) const {
    check_r(r);
    switch (kind_) {
      case JointKind::diagonal:
        return offspring_->tail(r);
      case JointKind::independent:
        return 1.0 - (1.0 - mark_->tail(r)) * (1.0 - offspring_->tail(r));
      case JointKind::coupled: {
        double total = 0.0;
        for (const auto& m : multipliers_) total += m.p * offspring_->tail(r / std::max(m.b, 1.0));
        return total;
      }
      case JointKind::spectral: {
        double total = 0.0;
        for (const auto& a : spectral_->atoms()) {
          double via_mark = a.theta1 > 0.0 ? r / a.theta1 : numeric::kInf;
          double via_offspring = a.theta2 > 0.0 ? (std::floor(r) + 1.0) / a.theta2 : numeric::kInf;
          total += a.weight * radial_survival(std::min(via_mark, via_offspring));
        }
        double bulk = r < 2.0 ? bulk_mean_ / 2.0 : 0.0;
        return tail_weight_ * total + (1.0 - tail_weight_) * bulk;
      }
    }
    return 0.0;
  }

  /// Common tail index of the joint law, when it has a power tail.
  std::optional<double> tail_alpha() const {
    if (kind_ == JointKind::spectral) return spectral_->alpha();
    if (kind_ == JointKind::independent) return std::nullopt;
    auto ti = offspring_->tail_index();
    if (!ti) return std::nullopt;
    return ti->alpha;
  }

  /// Limit spectral measure of (nu~, nu) under the max-norm, for tail index in (1,2).
  std::optional<SpectralMeasure> spectral_measure() const {
    auto alpha = tail_alpha();
    if (!alpha || !(*alpha > 1.0 && *alpha < 2.0)) return std::nullopt;
    switch (kind_) {
      case JointKind::diagonal:
        return SpectralMeasure(*alpha, {{1.0, 1.0, 1.0}});
      case JointKind::coupled: {
        std::vector<SpectralAtom> atoms;
        double total = 0.0;
        for (const auto& m : multipliers_) {
          double norm = std::max(m.b, 1.0);
          double w = m.p * std::pow(norm, *alpha);
          atoms.push_back({m.b / norm, 1.0 / norm, w});
          total += w;
        }
        for (auto& a : atoms) a.weight /= total;
        return SpectralMeasure(*alpha, std::move(atoms));
      }
      case JointKind::spectral:
        return spectral_;
      case JointKind::independent:
        break;
    }
    return std::nullopt;
  }

  /// lim r^alpha V(r)
  double norm_tail_constant() const {
    auto alpha = require_alpha("norm_tail_constant");
    switch (kind_) {
      case JointKind::diagonal:
        return offspring_->tail_index()->c;
      case JointKind::coupled: {
        double total = 0.0;
        for (const auto& m : multipliers_) total += m.p * std::pow(std::max(m.b, 1.0), alpha);
        return offspring_->tail_index()->c * total;
      }
      case JointKind::spectral:
        return tail_weight_ * std::pow(radius_, alpha);
      case JointKind::independent:
        break;
    }
    throw ConfigError("norm_tail_constant: independent marks carry no joint tail profile");
  }

  /// gamma(b) = lim r^alpha P(nu~ >= r, nu >= b r)
  double gamma(double b) const {
    if (!(b >= 0.0)) throw DomainError("gamma: b must be >= 0");
    auto alpha = require_alpha("gamma");
    switch (kind_) {
      case JointKind::diagonal: {
        double c = offspring_->tail_index()->c;
        return b <= 1.0 ? c : c * std::pow(b, -alpha);
      }
      case JointKind::coupled: {
        double total = 0.0;
        for (const auto& m : multipliers_) {
          double reach = b == 0.0 ? m.b : std::min(m.b, 1.0 / b);
          total += m.p * std::pow(reach, alpha);
        }
        return offspring_->tail_index()->c * total;
      }
      case JointKind::spectral:
        return norm_tail_constant() * gamma_from_spectral(*spectral_, b);
      case JointKind::independent:
        break;
    }
    throw ConfigError("gamma: independent marks carry no joint tail profile");
  }

  template <class Rng>
  Draw sample(Rng& rng) const {
    switch (kind_) {
      case JointKind::diagonal: {
        auto k = offspring_->sample(rng);
        return {static_cast<double>(k), k};
      }
      case JointKind::independent: {
        double mark = mark_->sample(rng);
        return {mark, offspring_->sample(rng)};
      }
      case JointKind::coupled: {
        auto k = offspring_->sample(rng);
        double u = uniform_open_closed(rng);
        std::size_t i = 0;
        while (i + 1 < multipliers_.size() && u > multipliers_[i].p) u -= multipliers_[i++].p;
        return {static_cast<double>(k) * multipliers_[i].b, k};
      }
      case JointKind::spectral: {
        double u = uniform_open_closed(rng);
        if (u > tail_weight_) {
          bool two = uniform_open_closed(rng) <= bulk_mean_ / 2.0;
          return {0.0, two ? 2 : 0};
        }
        const auto& atoms = spectral_->atoms();
        double v = uniform_open_closed(rng);
        std::size_t i = 0;
        while (i + 1 < atoms.size() && v > atoms[i].weight) v -= atoms[i++].weight;
        double radius = radius_ * std::pow(uniform_open_closed(rng), -1.0 / spectral_->alpha());
        double k = std::floor(std::min(radius * atoms[i].theta2, 4.0e18));
        return {radius * atoms[i].theta1, static_cast<std::int64_t>(k)};
      }
    }
    return {0.0, 0};
  }

  double tail_weight() const { return tail_weight_; }
  double radius() const { return radius_; }
  double bulk_mean() const { return bulk_mean_; }

 private:
  JointLaw(JointKind kind, OffspringPtr offspring) : kind_(kind), offspring_(std::move(offspring)) {}

  static void require(const OffspringPtr& p) {
    if (!p) throw ConfigError("joint law: offspring law is missing");
  }

  static void check_r(double r) {
    if (!(r >= 0.0)) throw DomainError("joint law: r must be >= 0");
  }

  double require_alpha(const char* what) const {
    auto alpha = tail_alpha();
    if (!alpha) throw ConfigError(std::string(what) + ": joint law has no power tail");
    return *alpha;
  }

  // P(R > t) for R = r0 * Pareto(alpha)
  double radial_survival(double t) const {
    if (t <= radius_) return 1.0;
    return std::pow(radius_ / t, spectral_->alpha());
  }

  // q * sum_i w_i * term_i over atoms with theta1 > 0, where on {R theta1 > r} the offspring
  // floor(R theta2) first takes value k0 with probability first_mass and then follows the
  // lattice law (r0 theta2)^alpha (k^{-alpha} - (k+1)^{-alpha}) for k > k0.
  template <class Term>
  double spectral_sum(double r, Term&& term) const {
    double total = 0.0;
    for (const auto& a : spectral_->atoms()) {
      if (a.theta1 == 0.0) continue;
      double start = std::max(radius_, r / a.theta1);
      double entry = radial_survival(start);
      if (entry == 0.0) continue;
      if (a.theta2 == 0.0) {
        total += a.weight * term(0.0, entry, 0.0);
        continue;
      }
      double k0 = std::floor(start * a.theta2);
      double first_mass = entry - radial_survival((k0 + 1.0) / a.theta2);
      total += a.weight * term(k0, first_mass, a.theta2);
    }
    return tail_weight_ * total;
  }

  JointKind kind_;
  OffspringPtr offspring_;
  std::optional<MarkLaw> mark_;
  std::vector<Multiplier> multipliers_;
  std::optional<SpectralMeasure> spectral_;
  double tail_weight_ = 0.0;
  double radius_ = 1.0;
  double bulk_mean_ = 0.0;
};

}  // namespace gwmax
