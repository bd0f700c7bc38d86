#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "ecd/error.hpp"
#include "ecd/infodyn.hpp"
#include "support/random_models.hpp"

using namespace ecd;

namespace {

/// Independent evaluation of sum_ij p_ij log(p_i / p_ij).
double conditional_form(const EmpiricalModel& m) {
  double d = 0.0;
  for (const auto& e : m.joint()) d += e.p * std::log(m.marginal()[e.from] / e.p);
  return d;
}

}  // namespace

TEST(ShannonEntropy, Basics) {
  EXPECT_EQ(shannon_entropy(std::vector{1.0, 0.0}), 0.0);
  EXPECT_NEAR(shannon_entropy(ProbabilityVector::uniform(8)), std::log(8.0), 1e-15);
  EXPECT_NEAR(shannon_entropy(std::vector{0.75, 0.25}), -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)), 1e-15);
}

TEST(ProbabilityVector, Validation) {
  EXPECT_THROW(ProbabilityVector({0.5, 0.6}), Error);
  EXPECT_THROW(ProbabilityVector({1.5, -0.5}), Error);
  EXPECT_THROW(ProbabilityVector({}), Error);
  EXPECT_NO_THROW(ProbabilityVector({0.5, 0.5}));
}

TEST(MutualEntropy, ZeroForIndependentAndEntropyForIdentity) {
  const std::vector<double> p = {0.2, 0.8};
  std::vector<JointEntry> indep;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) indep.push_back({i, j, p[i] * p[j]});
  }
  EXPECT_NEAR(mutual_entropy(indep, p, p), 0.0, 1e-15);
  const std::vector<JointEntry> diag = {{0, 0, 0.2}, {1, 1, 0.8}};
  EXPECT_NEAR(mutual_entropy(diag, p, p), shannon_entropy(p), 1e-15);
  EXPECT_THROW(mutual_entropy(diag, p, std::vector{0.5, 0.5}), Error);
}

TEST(Ecd, TwoFormsAgreeOnRandomModels) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    const auto model = testing_support::random_model(rng, n);
    const auto r = ecd_from_model(model);
    EXPECT_NEAR(conditional_form(model), r.marginal_entropy_out - r.mutual, 1e-10);
    EXPECT_NEAR(r.value, std::max(conditional_form(model), 0.0), 1e-10);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, r.marginal_entropy_out + 1e-12);
  }
}

TEST(Ecd, DeterministicDynamicsHasZeroDegree) {
  const auto model = empirical_model_from_symbols(std::vector<std::size_t>{0, 1, 2, 0, 1, 2, 0}, 3);
  const auto r = ecd_from_model(model);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(classify(r), Classification::Stable);
}

TEST(Ecd, CoinFlipChannelHasLogTwo) {
  const auto ch = Channel::from_dense({{0.5, 0.5}, {0.5, 0.5}});
  const auto r = entropic_chaos_degree(ProbabilityVector({0.3, 0.7}), ch);
  EXPECT_NEAR(r.value, std::log(2.0), 1e-15);
  EXPECT_EQ(classify(r), Classification::Chaotic);
  EXPECT_NEAR(from_nats(r.value, LogBase::Two), 1.0, 1e-15);
}

TEST(Ecd, RejectsRowInconsistentModel) {
  const EmpiricalModel m(2, {0.9, 0.1}, {{0, 0, 0.5}, {1, 1, 0.5}}, 0);
  EXPECT_THROW(ecd_from_model(m), Error);
}

TEST(Classify, EpsilonIsStrict) {
  EcdResult r;
  r.value = 1e-6;
  EXPECT_EQ(classify(r, 1e-6), Classification::Stable);
  r.value = 1.1e-6;
  EXPECT_EQ(classify(r, 1e-6), Classification::Chaotic);
  EXPECT_EQ(to_string(Classification::Chaotic), "chaotic");
  EXPECT_EQ(to_string(Classification::Stable), "stable");
}

TEST(Axioms, HoldOnRandomPairs) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const ProbabilityVector p(testing_support::random_distribution(rng, n, true));
    const auto ch = testing_support::random_channel(rng, n);
    const auto report = axiom_suite(p, ch, rng());
    for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " violation " << c.violation;
    EXPECT_TRUE(report.all_passed());
  }
}

TEST(Axioms, ReportNamesEveryCheck) {
  const auto report = axiom_suite(ProbabilityVector::uniform(3), Channel::identity(3));
  for (const char* name : {"positivity", "relabeling", "additivity", "bounded", "identity"}) {
    EXPECT_NO_THROW(report.find(name)) << name;
  }
  EXPECT_THROW(report.find("nonexistent"), Error);
}

TEST(TensorProduct, EntropyIsAdditive) {
  std::mt19937_64 rng(77);
  const ProbabilityVector p(testing_support::random_distribution(rng, 7));
  const ProbabilityVector q(testing_support::random_distribution(rng, 5));
  const auto pq = tensor_product(p, q);
  EXPECT_EQ(pq.size(), 35u);
  EXPECT_NEAR(shannon_entropy(pq), shannon_entropy(p) + shannon_entropy(q), 1e-12);
}
