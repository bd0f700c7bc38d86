#pragma once

// Lyapunov exponents of maps with known Jacobians, used to cross-check the
// chaos degree.

#include <cstddef>
#include <span>
#include <vector>

#include "ecd/dynamics.hpp"

namespace ecd {

struct LyapunovOptions {
  /// Number of partial estimates recorded, evenly spaced over the run.
  std::size_t history_samples = 10;
  /// Steps between QR re-orthonormalizations (multi-dimensional only).
  std::size_t reorthonormalize_every = 1;
  /// Maximum gap between the last two history samples for `converged`.
  double convergence_tol = 1e-3;
  bool check_domain = true;
};

struct LyapunovResult {
  /// Largest exponent; may be -inf.
  double top_exponent = 0.0;
  /// Non-increasing; empty for the 1D estimator.
  std::vector<double> spectrum;
  std::size_t n_used = 0;
  /// (iteration count, partial top-exponent estimate) pairs.
  std::vector<std::pair<std::size_t, double>> convergence_history;
  bool converged = false;
  /// A zero derivative or rank-deficient Jacobian was met.
  bool singular = false;
};

/// (1/n) sum_{k<n} log|f'(x_k)| over x_skip, ..., x_{skip+n-1}. A zero
/// derivative makes the estimate -inf.
LyapunovResult lyapunov_1d(const MapSystem& system, std::span<const double> x0, std::size_t skip,
                           std::size_t n, const LyapunovOptions& options = {});

/// Full spectrum from the Jacobian product J_n = Df(x_{n-1}) ... Df(x_0),
/// accumulated through periodic QR factorization so that J_n is never
/// formed. Equal to the log singular-value growth rates of J_n.
LyapunovResult lyapunov_md(const MapSystem& system, std::span<const double> x0, std::size_t skip,
                           std::size_t n, const LyapunovOptions& options = {});

/// Dispatches on the map dimension.
LyapunovResult lyapunov(const MapSystem& system, std::span<const double> x0, std::size_t skip,
                        std::size_t n, const LyapunovOptions& options = {});

struct EcdLyapunovSample {
  double param = 0.0;
  double ecd = 0.0;
  double lambda = 0.0;
};

struct AgreementStats {
  /// Share of samples where (ecd > eps) == (lambda > 0).
  double fraction = 0.0;
  std::size_t agreeing = 0;
  std::size_t total = 0;
  std::vector<EcdLyapunovSample> disagreements;
};

/// Throws EmptyInput for an empty grid.
AgreementStats ecd_lyapunov_agreement(std::span<const EcdLyapunovSample> samples, double eps = 1e-3);

}  // namespace ecd
