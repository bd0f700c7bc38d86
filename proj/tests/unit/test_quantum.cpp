#include <cmath>
#include <complex>
#include <random>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "ecd/error.hpp"
#include "ecd/observation.hpp"
#include "ecd/quantum.hpp"
#include "oracles/frozen.hpp"

using namespace ecd;
using namespace ecd::quantum;

namespace {

using cd = std::complex<double>;

/// Full-rank random state A A^H / tr, generically nondegenerate.
DensityMatrix random_state(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = {g(rng), g(rng)};
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

Matrix random_unitary(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(d, d);
}

double h(double s) { return -s * std::log(s) - (1 - s) * std::log(1 - s); }

}  // namespace

TEST(DensityMatrix, Validation) {
  Matrix bad(2, 2);
  bad << 0.5, 0, 0, 0.6;
  EXPECT_THROW(DensityMatrix{bad}, Error);
  bad << 1.2, 0, 0, -0.2;
  EXPECT_THROW(DensityMatrix{bad}, Error);
  EXPECT_THROW(DensityMatrix::maximally_mixed(33), Error);
  Matrix tiny(2, 2);
  tiny << 1.0 + 1e-13, 0, 0, -1e-13;
  const DensityMatrix ok(tiny);
  EXPECT_EQ(ok.eigenvalues()(0), 0.0);
}

TEST(VonNeumann, Examples) {
  Vector psi(3);
  psi << cd(0.6, 0), cd(0, 0.8), 0;
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::pure(psi)), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(4)), std::log(4.0), 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::diagonal({0.75, 0.25})), h(0.25), 1e-12);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random_state(rng, 5);
    const double s = von_neumann_entropy(rho);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, std::log(5.0) + 1e-12);
  }
}

TEST(Schatten, DiagonalState) {
  const auto dec = schatten_decompose(DensityMatrix::diagonal({0.3, 0.7}));
  ASSERT_EQ(dec.weights.size(), 2u);
  EXPECT_NEAR(dec.weights[0], 0.7, 1e-14);
  EXPECT_NEAR(dec.weights[1], 0.3, 1e-14);
  EXPECT_NEAR(std::abs(dec.vectors(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(dec.vectors(0, 1)), 1.0, 1e-14);
  EXPECT_FALSE(dec.degenerate());
}

TEST(Schatten, MaximallyMixedQubitIsFlaggedWithCanonicalAxes) {
  const auto dec = schatten_decompose(DensityMatrix::maximally_mixed(2));
  EXPECT_TRUE(dec.degenerate());
  ASSERT_EQ(dec.degenerate_groups.size(), 1u);
  EXPECT_EQ(dec.degenerate_groups[0], (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_NEAR((dec.vectors - Matrix::Identity(2, 2)).norm(), 0.0, 1e-14);
}

TEST(Schatten, ReconstructionAndProjectorProperties) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random_state(rng, 3);
    const auto dec = schatten_decompose(rho);
    EXPECT_LT((dec.reconstruct() - rho.matrix()).norm(), 1e-10);
    for (std::size_t j = 1; j < dec.weights.size(); ++j) EXPECT_GE(dec.weights[j - 1], dec.weights[j]);
    for (std::size_t j = 0; j < dec.weights.size(); ++j) {
      const Matrix e = dec.projector(j);
      EXPECT_LT((e * e - e).norm(), 1e-10);
      EXPECT_NEAR(e.trace().real(), 1.0, 1e-12);
      for (std::size_t k = j + 1; k < dec.weights.size(); ++k) EXPECT_LT((e * dec.projector(k)).norm(), 1e-10);
    }
  }
}

TEST(Channel, TracePreservation) {
  Matrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(0.6);
  k1 << 0, std::sqrt(0.4), 0, 0;
  const QuantumChannel damping({k0, k1});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto out = damping.apply(random_state(rng, 2));
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-10);
  }
  Matrix not_tp(2, 2);
  not_tp << 1, 0, 0, 0.5;
  EXPECT_THROW(QuantumChannel({not_tp}), Error);
  EXPECT_THROW(QuantumChannel::depolarizing(2, 1.5), Error);
}

TEST(QuantumEcd, IdentityChannelIsZero) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 2 + t % 7;
    const auto r = quantum_ecd(random_state(rng, d), QuantumChannel::identity(d));
    EXPECT_NEAR(r.value, 0.0, 1e-10) << d;
  }
}

TEST(QuantumEcd, FullyDepolarizingQubitIsLogTwo) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    EXPECT_NEAR(quantum_ecd(random_state(rng, 2), QuantumChannel::fully_depolarizing(2)).value, std::log(2.0), 1e-10);
  }
  EXPECT_NEAR(quantum_ecd(DensityMatrix::maximally_mixed(2), QuantumChannel::fully_depolarizing(2)).value,
              std::log(2.0), 1e-10);
}

TEST(QuantumEcd, UnitaryChannelsAreZero) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 4;
    const auto channel = QuantumChannel::unitary(random_unitary(rng, d));
    EXPECT_LE(quantum_ecd(random_state(rng, d), channel).value, 1e-10);
    EXPECT_LE(quantum_ecd(DensityMatrix::maximally_mixed(d), channel).value, 1e-10);
  }
}

TEST(QuantumEcd, DepolarizedPureQubitMatchesOracle) {
  Vector zero(2);
  zero << 1, 0;
  for (std::size_t k = 0; k < oracle::kDepolarizedPureQubit.size(); ++k) {
    const double p = 0.1 * static_cast<double>(k + 1);
    const auto r = quantum_ecd(DensityMatrix::pure(zero), QuantumChannel::depolarizing(2, p));
    EXPECT_NEAR(r.value, oracle::kDepolarizedPureQubit[k], 1e-9) << p;
  }
  Vector tilted(2);
  tilted << std::cos(0.4), std::polar(std::sin(0.4), 1.1);
  EXPECT_NEAR(quantum_ecd(DensityMatrix::pure(tilted), QuantumChannel::depolarizing(2, 0.3)).value,
              oracle::kDepolarizedTiltedP03, 1e-9);
}

TEST(QuantumEcd, SearchNeverExceedsCanonical) {
  // Amplitude damping is basis dependent, so the degenerate search matters.
  Matrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(0.5);
  k1 << 0, std::sqrt(0.5), 0, 0;
  const QuantumChannel damping({k0, k1});
  const auto r = quantum_ecd(DensityMatrix::maximally_mixed(2), damping, 64, 7);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.trials, 64u);
  EXPECT_LE(r.value, r.canonical_value);
  EXPECT_EQ(r.value, quantum_ecd(DensityMatrix::maximally_mixed(2), damping, 64, 7).value);
  const auto nondeg = quantum_ecd(DensityMatrix::diagonal({0.6, 0.4}), damping);
  EXPECT_FALSE(nondeg.degenerate);
  EXPECT_EQ(nondeg.value, nondeg.canonical_value);
}

TEST(QuantumEcd, DimensionMismatch) {
  try {
    quantum_ecd(DensityMatrix::maximally_mixed(3), QuantumChannel::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Pvm, ExpectationExamples) {
  std::mt19937_64 rng(8);
  const auto q = random_state(rng, 2);
  const auto diag = pvm_expectation(q, PVM::computational(2));
  EXPECT_NEAR(std::abs(diag.matrix()(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(diag.matrix()(0, 0).real(), q.matrix()(0, 0).real(), 1e-15);
  EXPECT_LT((pvm_expectation(q, PVM::identity(2)).matrix() - q.matrix()).norm(), 1e-15);

  const auto r3 = random_state(rng, 3);
  const auto d3 = pvm_expectation(r3, PVM::computational(3));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      EXPECT_NEAR(std::abs(d3.matrix()(i, j) - (i == j ? r3.matrix()(i, i) : cd(0))), 0.0, 1e-14);
  EXPECT_THROW(pvm_expectation(r3, PVM::computational(2)), Error);
}

TEST(Pvm, IdempotentAndEntropyNonDecreasing) {
  std::mt19937_64 rng(9);
  Matrix p0 = Matrix::Zero(4, 4), p1 = Matrix::Zero(4, 4);
  p0(0, 0) = p0(1, 1) = 1;
  p1(2, 2) = p1(3, 3) = 1;
  const PVM blocks({p0, p1});
  for (int t = 0; t < 20; ++t) {
    const auto rho = random_state(rng, 4);
    for (const PVM* pvm : {&blocks}) {
      const auto once = pvm_expectation(rho, *pvm);
      const auto twice = pvm_expectation(once, *pvm);
      EXPECT_LT((once.matrix() - twice.matrix()).norm(), 1e-12);
      EXPECT_GE(von_neumann_entropy(once), von_neumann_entropy(rho) - 1e-10);
    }
    const auto comp = pvm_expectation(rho, PVM::computational(4));
    EXPECT_GE(von_neumann_entropy(comp), von_neumann_entropy(rho) - 1e-10);
  }
  Matrix overlapping = Matrix::Identity(2, 2);
  EXPECT_THROW(PVM({overlapping, overlapping}), Error);
}

TEST(ObservableOrbit, IdentityObservableIsConstantOne) {
  std::mt19937_64 rng(10);
  const auto xs = observable_orbit(random_state(rng, 3), QuantumChannel::depolarizing(3, 0.2), Matrix::Identity(3, 3), 50);
  for (double x : xs) EXPECT_NEAR(x, 1.0, 1e-12);
  const auto orbit = observable_orbit_as_orbit(random_state(rng, 3), QuantumChannel::identity(3), Matrix::Identity(3, 3), 50);
  EXPECT_NEAR(ecd_of_orbit(orbit, ObservationSpec::partition({10}, true)).value, 0.0, 1e-12);
}

TEST(ObservableOrbit, UnitaryRotationGivesCosineSequence) {
  const double phi = 0.3;
  Matrix ry(2, 2);
  ry << std::cos(phi / 2), -std::sin(phi / 2), std::sin(phi / 2), std::cos(phi / 2);
  Vector zero(2);
  zero << 1, 0;
  const auto xs = observable_orbit(DensityMatrix::pure(zero), QuantumChannel::unitary(ry), pauli_z(), 40);
  for (std::size_t k = 0; k < xs.size(); ++k) EXPECT_NEAR(xs[k], std::cos(static_cast<double>(k) * phi), 1e-10) << k;
}

TEST(ObservableOrbit, FullyDepolarizingIsConstantAfterOneStep) {
  Matrix x(2, 2);
  x << 2.0, cd(0.5, 0.1), cd(0.5, -0.1), -0.5;
  Vector zero(2);
  zero << 1, 0;
  const auto orbit = observable_orbit_as_orbit(DensityMatrix::pure(zero), QuantumChannel::fully_depolarizing(2), x, 30);
  for (std::size_t k = 1; k < orbit.length(); ++k) EXPECT_NEAR(orbit.coordinate(k, 0), 0.75, 1e-12);
  // The single transient point lands in its own cell, so D stays 0.
  EXPECT_NEAR(ecd_of_orbit(orbit, ObservationSpec::partition({10}, true)).value, 0.0, 1e-12);
  EXPECT_THROW(observable_orbit(DensityMatrix::pure(zero), QuantumChannel::identity(2), x, 1), Error);
}
