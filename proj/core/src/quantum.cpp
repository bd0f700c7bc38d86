#include "ecd/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "ecd/error.hpp"

namespace ecd::quantum {

namespace {

using cplx = std::complex<double>;

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kClipTol = 1e-12;
constexpr double kOperatorTol = 1e-10;

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be a nonempty square matrix");
  }
  if (static_cast<std::size_t>(m.rows()) > kMaxDimension) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " dimension " + std::to_string(m.rows()) + " exceeds " +
                    std::to_string(kMaxDimension));
  }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double entropy_of_eigenvalues(const Eigen::VectorXd& w) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w[k] > 0.0) s -= w[k] * std::log(w[k]);
  }
  return s;
}

/// Phase convention: first component with modulus > 1e-12 becomes real positive.
void normalize_phase(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
  }
}

Matrix haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) z(r, c) = cplx(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mod = std::abs(r(k, k));
    if (mod > 0.0) q.col(k) *= r(k, k) / mod;
  }
  return q;
}

double decomposition_value(const std::vector<double>& weights, const Matrix& vectors,
                           const QuantumChannel& channel) {
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0)) continue;
    const Vector v = vectors.col(static_cast<Eigen::Index>(k));
    total += weights[k] * von_neumann_entropy(channel.apply(Matrix(v * v.adjoint())));
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(const Matrix& matrix) {
  require_square(matrix, "density matrix");
  if (max_abs(matrix - matrix.adjoint()) > kHermitianTol) {
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  }
  matrix_ = hermitian_part(matrix);
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw Error(ErrorCode::InvalidState, "density matrix trace is " + std::to_string(trace));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  eigenvalues_ = solver.eigenvalues();
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    if (eigenvalues_[k] < -kClipTol) {
      throw Error(ErrorCode::InvalidState, "density matrix has eigenvalue " + std::to_string(eigenvalues_[k]));
    }
    eigenvalues_[k] = std::max(eigenvalues_[k], 0.0);
  }
}

DensityMatrix DensityMatrix::pure(const Vector& state) {
  const double norm = state.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidState, "zero state vector");
  const Vector v = state / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& weights) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t k = 0; k < weights.size(); ++k) w[static_cast<Eigen::Index>(k)] = weights[k];
  return DensityMatrix(Matrix(w.cast<cplx>().asDiagonal()));
}

// ---------------------------------------------------------------- PVM

PVM::PVM(std::vector<Matrix> projectors) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw Error(ErrorCode::InvalidChannel, "PVM has no projectors");
  const Eigen::Index d = projectors_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& p : projectors_) {
    require_square(p, "projector");
    if (p.rows() != d) throw Error(ErrorCode::DimensionMismatch, "PVM projectors have mixed sizes");
    sum += p;
  }
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    for (std::size_t j = 0; j < projectors_.size(); ++j) {
      const Matrix prod = projectors_[k] * projectors_[j];
      const double err = k == j ? max_abs(prod - projectors_[k]) : max_abs(prod);
      if (err > kOperatorTol || (k == j && max_abs(projectors_[k] - projectors_[k].adjoint()) > kOperatorTol)) {
        throw Error(ErrorCode::InvalidChannel, "PVM elements are not mutually orthogonal projectors");
      }
    }
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > kOperatorTol) {
    throw Error(ErrorCode::InvalidChannel, "PVM projectors do not sum to the identity");
  }
}

PVM PVM::computational(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<Matrix> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    Matrix p = Matrix::Zero(n, n);
    p(k, k) = 1.0;
    out.push_back(std::move(p));
  }
  return PVM(std::move(out));
}

PVM PVM::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return PVM({Matrix::Identity(n, n)});
}

// ---------------------------------------------------------------- QuantumChannel

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error(ErrorCode::InvalidChannel, "channel has no Kraus operators");
  const Eigen::Index d = kraus_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : kraus_) {
    require_square(k, "Kraus operator");
    if (k.rows() != d) throw Error(ErrorCode::DimensionMismatch, "Kraus operators have mixed sizes");
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > kOperatorTol) {
    throw Error(ErrorCode::InvalidChannel, "Kraus operators are not trace preserving");
  }
}

QuantumChannel QuantumChannel::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return QuantumChannel({Matrix::Identity(n, n)});
}

QuantumChannel QuantumChannel::unitary(const Matrix& u) { return QuantumChannel({u}); }

QuantumChannel QuantumChannel::depolarizing(std::size_t dim, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "depolarizing strength outside [0,1]");
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<Matrix> kraus;
  if (p < 1.0) kraus.push_back(Matrix::Identity(n, n) * std::sqrt(1.0 - p));
  if (p > 0.0) {
    // sqrt(p/d) |i><j| over all (i, j) realizes rho -> p tr(rho) I/d.
    const double scale = std::sqrt(p / static_cast<double>(dim));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        Matrix k = Matrix::Zero(n, n);
        k(i, j) = scale;
        kraus.push_back(std::move(k));
      }
    }
  }
  return QuantumChannel(std::move(kraus));
}

Matrix QuantumChannel::apply(const Matrix& m) const {
  if (m.rows() != kraus_.front().rows() || m.cols() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension does not match the channel");
  }
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (const auto& k : kraus_) out.noalias() += k * m * k.adjoint();
  return out;
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(hermitian_part(apply(rho.matrix())));
}

QuantumChannel QuantumChannel::then_decohere(const PVM& pvm) const {
  if (pvm.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "PVM dimension does not match the channel");
  std::vector<Matrix> composed;
  for (const auto& p : pvm.projectors()) {
    for (const auto& k : kraus_) composed.push_back(p * k);
  }
  return QuantumChannel(std::move(composed));
}

// ---------------------------------------------------------------- decomposition

Matrix SchattenDecomposition::projector(std::size_t k) const {
  const Vector v = vectors.col(static_cast<Eigen::Index>(k));
  return v * v.adjoint();
}

Matrix SchattenDecomposition::reconstruct() const {
  Matrix out = Matrix::Zero(vectors.rows(), vectors.rows());
  for (std::size_t k = 0; k < weights.size(); ++k) out += weights[k] * projector(k);
  return out;
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of_eigenvalues(rho.eigenvalues()); }

double von_neumann_entropy(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return entropy_of_eigenvalues(solver.eigenvalues().cwiseMax(0.0));
}

SchattenDecomposition schatten_decompose(const DensityMatrix& rho, double degeneracy_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
  const Eigen::Index d = rho.matrix().rows();
  // Eigen sorts ascending; walk backwards for descending weights.
  std::vector<double> weights(static_cast<std::size_t>(d));
  Matrix raw(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    weights[static_cast<std::size_t>(k)] = std::max(solver.eigenvalues()[d - 1 - k], 0.0);
    raw.col(k) = solver.eigenvectors().col(d - 1 - k);
  }

  SchattenDecomposition out;
  out.weights = weights;
  out.vectors = Matrix(d, d);
  for (std::size_t begin = 0; begin < weights.size();) {
    std::size_t end = begin + 1;
    while (end < weights.size() && weights[end - 1] - weights[end] <= degeneracy_tol) ++end;
    const auto b = static_cast<Eigen::Index>(begin);
    const auto g = static_cast<Eigen::Index>(end - begin);
    if (g == 1) {
      Vector v = raw.col(b);
      normalize_phase(v);
      out.vectors.col(b) = v;
    } else {
      out.degenerate_groups.emplace_back(begin, end);
      const Matrix span = raw.middleCols(b, g);
      const Matrix proj = span * span.adjoint();
      Eigen::Index filled = 0;
      for (Eigen::Index axis = 0; axis < d && filled < g; ++axis) {
        Vector v = proj.col(axis);
        for (Eigen::Index prev = 0; prev < filled; ++prev) {
          const Vector u = out.vectors.col(b + prev);
          v -= u * u.dot(v);
        }
        const double norm = v.norm();
        if (norm < 1e-8) continue;
        v /= norm;
        normalize_phase(v);
        out.vectors.col(b + filled) = v;
        ++filled;
      }
    }
    begin = end;
  }
  return out;
}

QuantumEcdResult quantum_ecd(const DensityMatrix& rho, const QuantumChannel& channel,
                             std::size_t search_trials, std::uint64_t seed) {
  if (rho.dim() != channel.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension " + std::to_string(rho.dim()) +
                                                  " vs channel dimension " + std::to_string(channel.dim()));
  }
  const SchattenDecomposition dec = schatten_decompose(rho);
  QuantumEcdResult result;
  result.canonical_value = decomposition_value(dec.weights, dec.vectors, channel);
  result.value = result.canonical_value;
  result.degenerate = dec.degenerate();

  std::vector<std::pair<std::size_t, std::size_t>> weighted_groups;
  for (const auto& grp : dec.degenerate_groups) {
    if (dec.weights[grp.first] > 0.0) weighted_groups.push_back(grp);
  }
  if (weighted_groups.empty()) return result;

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < search_trials; ++t) {
    Matrix vectors = dec.vectors;
    for (const auto& [begin, end] : weighted_groups) {
      const auto b = static_cast<Eigen::Index>(begin);
      const auto g = static_cast<Eigen::Index>(end - begin);
      vectors.middleCols(b, g) = dec.vectors.middleCols(b, g) * haar_unitary(g, rng);
    }
    result.value = std::min(result.value, decomposition_value(dec.weights, vectors, channel));
    ++result.trials;
  }
  return result;
}

DensityMatrix pvm_expectation(const DensityMatrix& rho, const PVM& pvm) {
  if (pvm.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "PVM dimension does not match the state");
  Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& p : pvm.projectors()) out.noalias() += p * rho.matrix() * p;
  return DensityMatrix(hermitian_part(out));
}

std::vector<double> observable_orbit(const DensityMatrix& rho0, const QuantumChannel& channel,
                                     const Matrix& observable, std::size_t length) {
  if (length < 2) throw Error(ErrorCode::ParamOutOfRange, "observable orbit needs length >= 2");
  if (observable.rows() != observable.cols() || static_cast<std::size_t>(observable.rows()) != rho0.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "observable dimension does not match the state");
  }
  if (max_abs(observable - observable.adjoint()) > kOperatorTol) {
    throw Error(ErrorCode::InvalidState, "observable is not Hermitian");
  }
  if (channel.dim() != rho0.dim()) throw Error(ErrorCode::DimensionMismatch, "channel dimension does not match the state");
  std::vector<double> xs;
  xs.reserve(length);
  Matrix rho = rho0.matrix();
  for (std::size_t k = 0; k < length; ++k) {
    const cplx value = (rho * observable).trace();
    if (std::abs(value.imag()) > kOperatorTol) {
      throw Error(ErrorCode::InvalidState, "expectation value has a non-negligible imaginary part");
    }
    xs.push_back(value.real());
    rho = hermitian_part(channel.apply(rho));
  }
  return xs;
}

Orbit observable_orbit_as_orbit(const DensityMatrix& rho0, const QuantumChannel& channel,
                                const Matrix& observable, std::size_t length) {
  return Orbit(1, observable_orbit(rho0, channel, observable, length), 0);
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace ecd::quantum
