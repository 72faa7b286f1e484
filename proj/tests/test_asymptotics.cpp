#include "gwmax/asymptotics.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace gwmax;
using boost::multiprecision::cpp_bin_float_50;

namespace {

// mpmath root finder on quadrature (tests/oracles/frozen_values.py)
constexpr double kC15Diagonal = 0.29202061388969440595;
constexpr double kC15TwoAtom = 0.2040539388071988607;
constexpr double kC12Diagonal = 0.16340763979385633457;
constexpr double kGammaNeg15 = 2.3632718012073547031;

OffspringPtr zipf(double alpha) { return std::make_shared<const OffspringLaw>(zipf_critical(alpha)); }

// P(nu >= k) = c k^{-2} for k >= 2, with p_0, p_1 completing a critical law.
OffspringLaw lattice_two(double c) {
  PowerTailRule rule{TailForm::lattice, 2.0, c, 2};
  double p1 = 1.0 - rule.moment_range(1, 2.0);
  return OffspringLaw::from_table({1.0 - p1 - c / 4.0, p1}, rule);
}

}  // namespace

TEST(GammaNeg, HalfInteger) {
  EXPECT_NEAR(gamma_neg(1.5), 4.0 * std::sqrt(M_PI) / 3.0, 1e-14);
  EXPECT_NEAR(gamma_neg(1.5), kGammaNeg15, 1e-14);
  EXPECT_NEAR(1.5 * gamma_neg(1.5), 2.0 * std::sqrt(M_PI), 1e-12);
}

TEST(GammaNeg, AgainstMultiprecision) {
  for (double a = 1.01; a < 2.0; a += 0.0173) {
    double ref = static_cast<double>(boost::multiprecision::tgamma(-cpp_bin_float_50(a)));
    EXPECT_NEAR(gamma_neg(a) / ref, 1.0, 1e-13) << a;
  }
}

TEST(GammaNeg, PoleAndDomain) {
  EXPECT_GT(gamma_neg(1.0 + 1e-6), 1e5);
  EXPECT_THROW(gamma_neg(1.0), DomainError);
  EXPECT_THROW(gamma_neg(2.0), DomainError);
}

TEST(GammaNeg, RecurrenceConsistency) {
  for (double a : {1.1, 1.37, 1.5, 1.9}) {
    double gamma_one_minus = gamma_unit(2.0 - a) / (1.0 - a);  // Gamma(1-a)
    EXPECT_NEAR(gamma_neg(a) * (-a) / gamma_one_minus, 1.0, 1e-12) << a;
  }
}

TEST(FiniteVarianceTail, Geometric) {
  auto j = JointLaw::diagonal(std::make_shared<const OffspringLaw>(geometric_critical()));
  for (int n : {0, 5, 17, 40}) EXPECT_NEAR(finite_variance_tail(j, n) / std::pow(2.0, -(n + 1) / 2.0), 1.0, 1e-14);
  double prev = 1.0;
  for (double r = 0.0; r < 100.0; r += 0.7) {
    double v = finite_variance_tail(j, r);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(FiniteVarianceTail, ZeroAndPoisson) {
  auto poi = std::make_shared<const OffspringLaw>(poisson_critical());
  auto bounded = JointLaw::independent(poi, MarkLaw::constant(2.0));
  EXPECT_EQ(finite_variance_tail(bounded, 5.0), 0.0);
  auto pareto = JointLaw::independent(poi, MarkLaw::pareto(3.0, 1.0));
  EXPECT_NEAR(finite_variance_tail(pareto, 10.0), std::sqrt(2.0 * 1e-3), 1e-15);
}

TEST(FiniteVarianceTail, DegenerateAndInfinite) {
  auto ray = JointLaw::diagonal(std::make_shared<const OffspringLaw>(OffspringLaw::from_table({0.0, 1.0})));
  EXPECT_THROW(finite_variance_tail(ray, 1.0), DomainError);
  EXPECT_THROW(finite_variance_tail(JointLaw::diagonal(zipf(1.5)), 1.0), DomainError);
}

TEST(CAlphaMu, DiagonalOracles) {
  EXPECT_NEAR(c_alpha_mu(SpectralMeasure(1.5, {{1, 1, 1}}), 1.0) / kC15Diagonal, 1.0, 1e-11);
  EXPECT_NEAR(c_alpha_mu(SpectralMeasure(1.2, {{1, 1, 1}}), 1.0) / kC12Diagonal, 1.0, 1e-11);
}

TEST(CAlphaMu, ScalingInvariance) {
  SpectralMeasure s(1.5, {{1, 1, 1}});
  double base = c_alpha_mu(s, 1.0, 1.0);
  for (double lambda : {0.5, 2.0, 10.0}) EXPECT_NEAR(c_alpha_mu(s, lambda, lambda) / base, 1.0, 1e-10);
}

TEST(CAlphaMu, TwoAtomMeasure) {
  SpectralMeasure two(1.5, {{1, 1, 0.5}, {0, 1, 0.5}});
  SpectralMeasure diag(1.5, {{1, 1, 1}});
  double c = c_alpha_mu(two);
  EXPECT_NEAR(c / kC15TwoAtom, 1.0, 1e-11);
  // The axis atom adds to c1 but not to the integral: same root as the diagonal atom with c1 doubled.
  EXPECT_NEAR(c / c_alpha_mu(diag, 2.0), 1.0, 1e-11);
  EXPECT_LT(c, c_alpha_mu(diag, 1.0));
  EXPECT_LT(c, c_alpha_mu(diag, 0.5));
}

TEST(CAlphaMu, RootIncreasesAsC1Shrinks) {
  SpectralMeasure diag(1.5, {{1, 1, 1}});
  double prev = 0.0;
  for (double c1 : {4.0, 2.0, 1.0, 0.5, 0.25}) {
    double c = c_alpha_mu(diag, c1);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(CAlphaMu, LimitFunctionShape) {
  SpectralMeasure s(1.5, {{1, 0.5, 0.6}, {0.4, 1, 0.4}});
  double c1 = c_constants(s).c1, c2 = c_constants(s).c2;
  auto phi = [&](double x) { return c1 * 1.5 * gamma_neg(1.5) * std::pow(x, 1.5) - mu_integral(s, x); };
  EXPECT_NEAR(phi(0.0), -c2, 1e-15);
  double prev = phi(0.0);
  for (double x = 0.01; x < 100.0; x *= 1.5) {
    EXPECT_GT(phi(x), prev);
    prev = phi(x);
  }
  EXPECT_NEAR(phi(c_alpha_mu(s)), 0.0, 1e-11);
}

TEST(CAlphaMu, Errors) {
  SpectralMeasure diag(1.5, {{1, 1, 1}});
  EXPECT_THROW(c_alpha_mu(diag, 0.0), ConfigError);
  EXPECT_THROW(c_alpha_mu(diag, -1.0), ConfigError);
  EXPECT_THROW(c_alpha_mu(SpectralMeasure(1.5, {{1, 0, 0.5}, {0, 1, 0.5}})), ConfigError);
}

TEST(Boundary2Constant, Examples) {
  EXPECT_DOUBLE_EQ(boundary2_constant(0.3, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(boundary2_constant(1.2, 0.3), 2.0);
  EXPECT_THROW(boundary2_constant(0.0, 0.3), DomainError);
  EXPECT_THROW(boundary2_constant(0.3, 0.0), DomainError);
}

TEST(EstimateC2, RefinementSelfConsistency) {
  auto law = zipf_critical(2.0);
  auto coarse = estimate_C2(law);
  auto fine = estimate_C2(law, 0.1);
  EXPECT_EQ(coarse.points, 7u);
  EXPECT_EQ(fine.points, 61u);
  EXPECT_NEAR(coarse.value / fine.value, 1.0, 0.1);
  RecordProperty("C2_over_tail_constant", std::to_string(coarse.value / law.tail_index()->c));
}

TEST(EstimateC2, LinearInTailConstant) {
  auto one = estimate_C2(lattice_two(0.1));
  auto two = estimate_C2(lattice_two(0.2));
  EXPECT_NEAR(two.value, 2.0 * one.value, two.error + 2.0 * one.error + 1e-9);
}

TEST(EstimateC2, RejectsOtherTails) {
  EXPECT_THROW(estimate_C2(geometric_critical()), DomainError);
  EXPECT_THROW(estimate_C2(zipf_critical(2.5)), DomainError);
  EXPECT_THROW(estimate_C2(zipf_critical(1.5)), DomainError);
}

TEST(Predict, Geometric) {
  auto j = JointLaw::diagonal(std::make_shared<const OffspringLaw>(geometric_critical()));
  auto p = predict(j);
  EXPECT_EQ(p.regime, Regime::finite_variance);
  EXPECT_NEAR(p.constant, 1.0, 1e-13);
  for (int r : {1, 10, 30}) EXPECT_NEAR(p.tail(r) / std::pow(2.0, -(r + 1) / 2.0), 1.0, 1e-13);
}

TEST(Predict, StableDiagonal) {
  auto j = JointLaw::diagonal(zipf(1.5));
  auto p = predict(j);
  EXPECT_EQ(p.regime, Regime::stable);
  EXPECT_NEAR(p.constant / kC15Diagonal, 1.0, 1e-11);
  EXPECT_NEAR(p.tail(1000.0), p.constant / 1000.0, 1e-18);
}

TEST(Predict, SpectralUsesItsMeasure) {
  SpectralMeasure s(1.5, {{1, 0.5, 0.6}, {0.4, 1, 0.4}});
  auto p = predict(JointLaw::spectral(s));
  EXPECT_EQ(p.regime, Regime::stable);
  EXPECT_DOUBLE_EQ(p.constant, c_alpha_mu(s));
}

TEST(Predict, BoundaryCoupled) {
  auto j = JointLaw::coupled(zipf(2.0), {{0.5, 0.5}, {2.0, 0.5}});
  auto p = predict(j);
  EXPECT_EQ(p.regime, Regime::boundary2);
  EXPECT_DOUBLE_EQ(p.gamma0, j.gamma(0.0));
  EXPECT_NEAR(p.constant, std::sqrt(p.gamma0 / p.c2), 1e-15);
  double r = 1e4;
  EXPECT_NEAR(p.tail(r), p.constant / (r * std::sqrt(std::log(r))), 1e-20);
  double prev = p.tail(2.0);
  for (double x = 4.0; x < 1e8; x *= 3.0) {
    EXPECT_LT(p.tail(x), prev);
    prev = p.tail(x);
  }
}

TEST(Predict, FiniteVarianceHeavyLaw) {
  EXPECT_EQ(predict(JointLaw::diagonal(zipf(2.5))).regime, Regime::finite_variance);
}

TEST(Predict, MissingStructure) {
  EXPECT_THROW(predict(JointLaw::independent(zipf(1.5), MarkLaw::pareto(1.5, 1.0))), ConfigError);
  auto ray = JointLaw::diagonal(std::make_shared<const OffspringLaw>(OffspringLaw::from_table({0.0, 1.0})));
  EXPECT_THROW(predict(ray), ConfigError);
}
