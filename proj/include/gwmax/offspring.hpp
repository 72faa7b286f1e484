#pragma once

// Critical offspring laws on the non-negative integers.
//
// A law is a dense probability table p_0..p_{K-1} plus an optional power-tail rule that
// gives p_k in closed form for every k >= K. Every generating-function quantity near s = 1
// is computed through the deficit f(1-x) - (1-x) = sum_k p_k [(1-x)^k - 1 + k x], whose
// summands are all non-negative when the mean is one.

#include "gwmax/errors.hpp"
#include "gwmax/numeric.hpp"
#include "gwmax/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gwmax {

enum class TailForm {
  zeta,     // p_k = coef * k^{-alpha-1}
  lattice,  // P(nu >= k) = coef * k^{-alpha}
};

struct TailIndex {
  double alpha;
  double c;  // P(nu > n) ~ c n^{-alpha}
};

/// Closed-form pmf for k >= from_k.
struct PowerTailRule {
  TailForm form = TailForm::zeta;
  double alpha = 2.0;
  double coef = 0.0;
  std::int64_t from_k = 1;

  double pmf(double k) const {
    if (form == TailForm::zeta) return coef * std::pow(k, -alpha - 1.0);
    // coef (k^{-a} - (k+1)^{-a}) = -coef k^{-a} expm1(-a log1p(1/k))
    return -coef * std::pow(k, -alpha) * std::expm1(-alpha * std::log1p(1.0 / k));
  }

  double tail_constant() const { return form == TailForm::zeta ? coef / alpha : coef; }

  /// P(nu >= k), for k >= from_k.
  double survival_at(double k) const {
    if (form == TailForm::zeta) return coef * numeric::power_sum(alpha + 1.0, k);
    return coef * std::pow(k, -alpha);
  }

  /// sum_{j=first}^{last} j^power p_j for power in {0,1,2}; last may be +inf.
  double moment_range(int power, double first, double last = numeric::kInf) const {
    if (last < first) return 0.0;
    if (form == TailForm::zeta) return coef * numeric::power_sum(alpha + 1.0 - power, first, last);
    // Summation by parts with A_j = j^{-alpha}:
    //   sum j^p (A_j - A_{j+1}) = first^p A_first - last^p A_{last+1} + sum_{first<j<=last} (j^p - (j-1)^p) A_j
    auto a_at = [&](double j) { return std::isinf(j) ? 0.0 : std::pow(j, -alpha); };
    auto boundary = [&](double j) { return std::isinf(j) ? 0.0 : std::pow(j, power) * a_at(j + 1.0); };
    double head = std::pow(first, power) * a_at(first) - boundary(last);
    if (power == 0) return coef * head;
    if (power == 1) return coef * (head + numeric::power_sum(alpha, first + 1.0, last));
    return coef * (head + 2.0 * numeric::power_sum(alpha - 1.0, first + 1.0, last) -
                   numeric::power_sum(alpha, first + 1.0, last));
  }

  /// sum_{j>=k} p_j s^j, with the weight given as log_s = log(s) <= 0.
  double pgf_at_log(double log_s, double k) const {
    if (log_s == 0.0) return survival_at(k);
    if (std::isinf(log_s)) return 0.0;
    return numeric::smooth_series_tail([&](double j) { return pmf(j) * std::exp(j * log_s); }, k, -log_s);
  }

  /// sum_{j>=k} p_j [(1-x)^j - 1 + j x]
  double deficit_at(double x, double k) const {
    if (x == 0.0) return 0.0;
    if (alpha <= 1.0) return numeric::kInf;
    return numeric::smooth_series_tail([&](double j) { return pmf(j) * numeric::binomial_deficit(j, x); }, k);
  }

  /// Exact draw from the law conditioned on nu >= from_k.
  template <class Rng>
  std::int64_t sample(Rng& rng) const {
    constexpr double kCap = 4.0e18;
    double base = static_cast<double>(from_k);
    auto pareto_lattice = [&] {
      double v = base * std::pow(uniform_open_closed(rng), -1.0 / alpha);
      return std::floor(std::min(v, kCap));
    };
    if (form == TailForm::lattice) return static_cast<std::int64_t>(pareto_lattice());
    // Rejection from the lattice-Pareto proposal: p_j / q_j <= (1 + 1/from_k)^{alpha+1} / alpha.
    double bound = std::pow(1.0 + 1.0 / base, alpha + 1.0);
    for (;;) {
      double j = pareto_lattice();
      if (j >= kCap) return static_cast<std::int64_t>(j);
      double q = -std::pow(j, -alpha) * std::expm1(-alpha * std::log1p(1.0 / j));
      double ratio = std::pow(j, -alpha - 1.0) / (alpha * q) / bound;
      if (uniform_open_closed(rng) <= ratio) return static_cast<std::int64_t>(j);
    }
  }
};

enum class MomentSide { above, below };

class OffspringLaw {
 public:
  /// Validates and builds a law. pmf[k] = p_k for k < pmf.size(); the tail rule, when
  /// present, must start at from_k == pmf.size().
  static OffspringLaw from_table(std::vector<double> pmf, std::optional<PowerTailRule> tail = std::nullopt) {
    if (pmf.empty()) throw ConfigError("offspring: empty pmf table");
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      if (!(pmf[k] >= 0.0) || !std::isfinite(pmf[k]))
        throw ConfigError("offspring: p_" + std::to_string(k) + " is negative or not finite");
    }
    if (tail) {
      if (tail->from_k != static_cast<std::int64_t>(pmf.size()))
        throw ConfigError("offspring: tail rule from_k must equal the table length");
      if (!(tail->alpha > 0.0) || !(tail->coef > 0.0))
        throw ConfigError("offspring: tail rule needs alpha > 0 and a positive constant");
      if (tail->from_k < 1) throw ConfigError("offspring: tail rule from_k must be >= 1");
    }
    OffspringLaw law;
    law.table_ = std::move(pmf);
    law.tail_ = tail;
    law.build_suffixes();
    double mass = law.table_mass_ + law.tail_mass_;
    if (std::abs(mass - 1.0) > 1e-12)
      throw ConfigError("offspring: total mass " + std::to_string(mass) + " differs from 1");
    if (!(std::abs(law.mean_ - 1.0) <= 1e-10))
      throw ConfigError("offspring: mean " + std::to_string(law.mean_) + " is not 1 (law is not critical)");
    return law;
  }

  double pmf(std::int64_t k) const {
    if (k < 0) return 0.0;
    if (k < table_size()) return table_[static_cast<std::size_t>(k)];
    return tail_ ? tail_->pmf(static_cast<double>(k)) : 0.0;
  }

  std::int64_t table_size() const { return static_cast<std::int64_t>(table_.size()); }
  const std::optional<PowerTailRule>& tail_rule() const { return tail_; }

  double mean() const { return mean_; }
  /// Var(nu); +inf for power tails with alpha <= 2.
  double variance() const { return second_moment_ - 1.0; }

  std::optional<TailIndex> tail_index() const {
    if (!tail_) return std::nullopt;
    return TailIndex{tail_->alpha, tail_->tail_constant()};
  }

  /// f(s) = E[s^nu]
  double pgf(double s) const {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("pgf: s must lie in [0,1]");
    return partial_pgf_from(std::log(s), 0);
  }

  /// f(1-x), with the weight formed as log1p(-x) so that tiny x keeps full precision.
  double pgf_at_complement(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("pgf: x must lie in [0,1]");
    return partial_pgf_from(std::log1p(-x), 0);
  }

  /// f(1-x) - (1-x), summed term-wise as sum_k p_k [(1-x)^k - 1 + k x].
  double deficit(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("pgf_deficit: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    double total = 0.0;
    double psi = 0.0;  // psi_k = (1-x)^k - 1 + k x, psi_{k+1} = (1-x) psi_k + k x^2
    const double keep = 1.0 - x;
    const double x2 = x * x;
    const std::size_t n = table_.size();
    for (std::size_t k = 0; k < n; ++k) {
      if ((k & 63u) == 0) psi = numeric::binomial_deficit(static_cast<double>(k), x);
      total += table_[k] * psi;
      psi = keep * psi + static_cast<double>(k) * x2;
    }
    if (tail_) total += tail_->deficit_at(x, static_cast<double>(tail_->from_k));
    return total;
  }

  /// b(s) = 1/(1-f(s)) - 1/(1-s), through the deficit.
  double b(double s) const {
    if (!(s >= 0.0 && s < 1.0)) throw DomainError("b: s must lie in [0,1)");
    double x = 1.0 - s;
    double d = deficit(x);
    return d / ((x - d) * x);
  }

  /// P(nu > n); negative n is clamped to 0.
  double tail(double n) const {
    if (std::isnan(n)) throw DomainError("tail: n is NaN");
    n = std::max(n, 0.0);
    double k = std::floor(n);
    if (k < static_cast<double>(table_size())) return survival_[static_cast<std::size_t>(k)];
    return tail_ ? tail_->survival_at(k + 1.0) : 0.0;
  }

  /// E[nu^power; nu > r] or E[nu^power; nu <= r] for power in {1,2}. The sides sum to
  /// the full moment; E[nu^2; nu > r] is +inf for infinite-variance laws.
  double truncated_moment(int power, double r, MomentSide side) const {
    if (power != 1 && power != 2) throw DomainError("truncated_moment: power must be 1 or 2");
    if (std::isnan(r) || r < 0.0) throw DomainError("truncated_moment: r must be >= 0");
    double k = std::floor(r);
    const auto& above_table = power == 1 ? moment1_above_ : moment2_above_;
    double full = power == 1 ? mean_ : second_moment_;
    double above;
    if (k < static_cast<double>(table_size())) {
      above = above_table[static_cast<std::size_t>(k)];
    } else {
      above = tail_ ? tail_->moment_range(power, k + 1.0) : 0.0;
    }
    if (side == MomentSide::above) return above;
    if (std::isfinite(full)) return full - above;
    // Infinite second moment: sum the lower part directly.
    double below = 0.0;
    std::size_t upto = static_cast<std::size_t>(std::min(k, static_cast<double>(table_size() - 1)));
    for (std::size_t j = 0; j <= upto; ++j) below += static_cast<double>(j * j) * table_[j];
    if (tail_ && k >= static_cast<double>(tail_->from_k))
      below += tail_->moment_range(power, static_cast<double>(tail_->from_k), k);
    return below;
  }

  /// E[(1-x)^nu; nu > r]
  double partial_pgf_above(double x, double r) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("partial_pgf_above: x must lie in [0,1]");
    if (std::isnan(r)) throw DomainError("partial_pgf_above: r is NaN");
    double log_s = std::log1p(-x);
    if (r < 0.0) return partial_pgf_from(log_s, 0);
    double k = std::floor(r) + 1.0;
    if (k >= 4.0e18) return tail_ ? tail_->pgf_at_log(log_s, k) : 0.0;
    return partial_pgf_from(log_s, static_cast<std::int64_t>(k));
  }

  /// Inverse-transform draw: sequential scan of the survival table (expected cost E[nu]+1 = 2),
  /// then an exact draw from the tail rule.
  template <class Rng>
  std::int64_t sample(Rng& rng) const {
    double v = uniform_open_closed(rng);
    const std::size_t n = survival_.size();
    std::size_t k = 0;
    while (k < n && v <= survival_[k]) ++k;
    if (k < n) return static_cast<std::int64_t>(k);
    if (!tail_) return static_cast<std::int64_t>(n - 1);
    return tail_->sample(rng);
  }

 private:
  OffspringLaw() = default;

  void build_suffixes() {
    const std::size_t n = table_.size();
    double tail_from = tail_ ? static_cast<double>(tail_->from_k) : 0.0;
    tail_mass_ = tail_ ? tail_->survival_at(tail_from) : 0.0;
    double tail_m1 = tail_ ? tail_->moment_range(1, tail_from) : 0.0;
    double tail_m2 = tail_ ? (tail_->alpha > 2.0 ? tail_->moment_range(2, tail_from) : numeric::kInf) : 0.0;
    survival_.assign(n, 0.0);
    moment1_above_.assign(n, 0.0);
    moment2_above_.assign(n, 0.0);
    double s = tail_mass_, m1 = tail_m1, m2 = tail_m2;
    for (std::size_t k = n; k-- > 0;) {
      survival_[k] = s;
      moment1_above_[k] = m1;
      moment2_above_[k] = m2;
      double kk = static_cast<double>(k);
      s += table_[k];
      m1 += kk * table_[k];
      m2 += kk * kk * table_[k];
    }
    table_mass_ = s - tail_mass_;
    mean_ = m1;
    second_moment_ = m2;
  }

  double partial_pgf_from(double log_s, std::int64_t first) const {
    double total = 0.0;
    const std::int64_t n = table_size();
    if (first < n) {
      if (std::isinf(log_s)) return first == 0 ? table_[0] : 0.0;
      const double s = std::exp(log_s);
      double power = 0.0;
      for (std::int64_t k = first; k < n; ++k) {
        if (((k - first) & 63) == 0) {
          power = std::exp(static_cast<double>(k) * log_s);
          if (power * survival_before(k) <= 1e-18 * total || power == 0.0) return total;
        }
        total += table_[static_cast<std::size_t>(k)] * power;
        power *= s;
      }
    }
    if (tail_) {
      double from = static_cast<double>(std::max<std::int64_t>(first, tail_->from_k));
      total += tail_->pgf_at_log(log_s, from);
    }
    return total;
  }

  // P(nu >= k)
  double survival_before(std::int64_t k) const {
    return k == 0 ? 1.0 : survival_[static_cast<std::size_t>(k - 1)];
  }

  std::vector<double> table_;
  std::optional<PowerTailRule> tail_;
  std::vector<double> survival_;        // P(nu > k)
  std::vector<double> moment1_above_;   // E[nu; nu > k]
  std::vector<double> moment2_above_;   // E[nu^2; nu > k]
  double table_mass_ = 0.0;
  double tail_mass_ = 0.0;
  double mean_ = 0.0;
  double second_moment_ = 0.0;
};

using OffspringPtr = std::shared_ptr<const OffspringLaw>;

/// p_k = 2^{-(k+1)}: mean 1, variance 2, f(s) = 1/(2-s). The table stops where p_k underflows.
inline OffspringLaw geometric_critical() {
  std::vector<double> pmf;
  for (int k = 0;; ++k) {
    double p = std::ldexp(1.0, -(k + 1));
    if (p == 0.0) break;
    pmf.push_back(p);
  }
  return OffspringLaw::from_table(std::move(pmf));
}

/// Poisson(1): p_k = e^{-1}/k!, mean 1, variance 1.
inline OffspringLaw poisson_critical() {
  std::vector<double> pmf;
  for (int k = 0;; ++k) {
    double p = std::exp(-1.0 - std::lgamma(k + 1.0));
    if (p == 0.0) break;
    pmf.push_back(p);
  }
  return OffspringLaw::from_table(std::move(pmf));
}

/// p_k = A k^{-alpha-1} for k >= 1 with A = 1/zeta(alpha) (unit mean) and
/// p_0 = 1 - zeta(alpha+1)/zeta(alpha) (unit mass). P(nu > n) ~ (A/alpha) n^{-alpha}.
inline OffspringLaw zipf_critical(double alpha, std::int64_t k_max = 1'000'000) {
  if (!(alpha > 1.0))
    throw ConfigError("zipf_critical: alpha must exceed 1 for a critical law with finite mean");
  if (k_max < 1) throw ConfigError("zipf_critical: k_max must be >= 1");
  double a = 1.0 / numeric::riemann_zeta(alpha);
  std::vector<double> pmf(static_cast<std::size_t>(k_max) + 1);
  pmf[0] = 1.0 - numeric::riemann_zeta(alpha + 1.0) * a;
  for (std::int64_t k = 1; k <= k_max; ++k) pmf[static_cast<std::size_t>(k)] = a * std::pow(static_cast<double>(k), -alpha - 1.0);
  PowerTailRule rule{TailForm::zeta, alpha, a, k_max + 1};
  return OffspringLaw::from_table(std::move(pmf), rule);
}

}  // namespace gwmax
