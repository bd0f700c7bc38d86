#pragma once

// Finite-dimensional quantum states, Kraus channels, projection-valued
// measures and the quantum entropic chaos degree over Schatten
// decompositions.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ecd/dynamics.hpp"

namespace ecd::quantum {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxDimension = 32;
inline constexpr std::size_t kDefaultSearchTrials = 64;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Hermitian, positive semidefinite, unit-trace d x d matrix (d <= 32).
/// The stored matrix is the symmetrization (A + A^H)/2 of the input;
/// eigenvalues down to -1e-12 are clipped to 0.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& matrix);

  static DensityMatrix pure(const Vector& state);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix diagonal(const std::vector<double>& weights);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  /// Clipped eigenvalues, ascending.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

 private:
  Matrix matrix_;
  Eigen::VectorXd eigenvalues_;
};

/// Orthogonal projectors with P_k P_j = delta_kj P_k and sum P_k = I (1e-10).
class PVM {
 public:
  explicit PVM(std::vector<Matrix> projectors);

  static PVM computational(std::size_t dim);
  static PVM identity(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(projectors_.front().rows()); }
  const std::vector<Matrix>& projectors() const noexcept { return projectors_; }

 private:
  std::vector<Matrix> projectors_;
};

/// Completely positive trace-preserving map rho -> sum K_i rho K_i^H,
/// with sum K_i^H K_i = I checked to 1e-10.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Matrix> kraus);

  static QuantumChannel identity(std::size_t dim);
  static QuantumChannel unitary(const Matrix& u);
  /// rho -> (1 - p) rho + p tr(rho) I / d, 0 <= p <= 1.
  static QuantumChannel depolarizing(std::size_t dim, double p);
  static QuantumChannel fully_depolarizing(std::size_t dim) { return depolarizing(dim, 1.0); }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(kraus_.front().rows()); }
  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }

  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Applies the Kraus sum to any square matrix of matching size.
  Matrix apply(const Matrix& m) const;

  /// The channel followed by the PVM decoherence rho -> sum P_k rho P_k.
  QuantumChannel then_decohere(const PVM& pvm) const;

 private:
  std::vector<Matrix> kraus_;
};

/// rho = sum_k lambda_k v_k v_k^H with weights descending.
struct SchattenDecomposition {
  std::vector<double> weights;
  /// Column k is the unit vector v_k.
  Matrix vectors;
  /// [begin, end) index ranges of eigenvalue clusters of size > 1.
  std::vector<std::pair<std::size_t, std::size_t>> degenerate_groups;

  bool degenerate() const noexcept { return !degenerate_groups.empty(); }
  Matrix projector(std::size_t k) const;
  Matrix reconstruct() const;
};

/// von Neumann entropy from clipped eigenvalues, 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);
/// Same computation for a Hermitian matrix (symmetrized first).
double von_neumann_entropy(const Matrix& hermitian);

/// Eigendecomposition into rank-1 projectors. Inside each eigenvalue cluster
/// (gaps <= degeneracy_tol) the basis is fixed by Gram-Schmidt of the
/// coordinate vectors projected onto the eigenspace, in coordinate order,
/// and every vector's phase is normalized so its first non-negligible
/// component is real positive.
SchattenDecomposition schatten_decompose(const DensityMatrix& rho, double degeneracy_tol = 1e-10);

struct QuantumEcdResult {
  /// Minimum of sum_k lambda_k S(L* E_k) over the decompositions examined.
  double value = 0.0;
  /// The same sum for the canonical decomposition.
  double canonical_value = 0.0;
  bool degenerate = false;
  /// Random decompositions examined beyond the canonical one.
  std::size_t trials = 0;
};

/// Exact for nondegenerate spectra. On degenerate spectra, additionally
/// draws `search_trials` Haar-random bases inside every degenerate cluster
/// of positive weight (seeded) and keeps the smallest value.
QuantumEcdResult quantum_ecd(const DensityMatrix& rho, const QuantumChannel& channel,
                             std::size_t search_trials = kDefaultSearchTrials,
                             std::uint64_t seed = kDefaultSeed);

/// sum_k P_k rho P_k.
DensityMatrix pvm_expectation(const DensityMatrix& rho, const PVM& pvm);

/// x_k = tr(rho_k X) with rho_{k+1} = L*(rho_k), k = 0..length-1.
std::vector<double> observable_orbit(const DensityMatrix& rho0, const QuantumChannel& channel,
                                     const Matrix& observable, std::size_t length);

/// The observable sequence packaged as a one-dimensional orbit (skip 0).
Orbit observable_orbit_as_orbit(const DensityMatrix& rho0, const QuantumChannel& channel,
                                const Matrix& observable, std::size_t length);

/// Pauli matrices, handy for qubit channels and observables.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

}  // namespace ecd::quantum
