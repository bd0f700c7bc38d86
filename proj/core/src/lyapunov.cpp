#include "ecd/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/QR>

#include "ecd/error.hpp"

namespace ecd {

namespace {

void require_jacobian(const MapSystem& system, std::size_t n) {
  if (!system.has_jacobian()) {
    throw Error(ErrorCode::InvalidState, "map '" + system.name() + "' has no analytic Jacobian");
  }
  if (n == 0) throw Error(ErrorCode::ParamOutOfRange, "Lyapunov estimate needs n >= 1");
}

Orbit post_transient(const MapSystem& system, std::span<const double> x0, std::size_t skip, std::size_t n,
                     const LyapunovOptions& options) {
  return iterate_map(system, x0, skip, std::max<std::size_t>(n, 2), IterateOptions{options.check_domain});
}

/// Iteration counts at which partial estimates are recorded; always ends at n.
std::vector<std::size_t> sample_points(std::size_t n, std::size_t samples) {
  std::vector<std::size_t> points;
  samples = std::max<std::size_t>(samples, 1);
  for (std::size_t s = 1; s <= samples; ++s) {
    const std::size_t k = n * s / samples;
    if (k > 0 && (points.empty() || points.back() != k)) points.push_back(k);
  }
  return points;
}

bool same_estimate(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol;
}

void finish(LyapunovResult& r, const LyapunovOptions& options) {
  const auto& h = r.convergence_history;
  r.converged = h.size() >= 2 ? same_estimate(h[h.size() - 1].second, h[h.size() - 2].second, options.convergence_tol)
                              : !h.empty();
}

}  // namespace

LyapunovResult lyapunov_1d(const MapSystem& system, std::span<const double> x0, std::size_t skip,
                           std::size_t n, const LyapunovOptions& options) {
  require_jacobian(system, n);
  if (system.dimension() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "lyapunov_1d needs a one-dimensional map");
  }
  const Orbit orbit = post_transient(system, x0, skip, n, options);
  LyapunovResult r;
  r.n_used = n;
  const auto marks = sample_points(n, options.history_samples);
  std::size_t next_mark = 0;
  // Kahan sum; a -inf term absorbs everything after it.
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::abs(system.jacobian(orbit.point(k))(0, 0));
    if (d == 0.0) r.singular = true;
    const double term = std::log(d);
    if (std::isinf(term) || std::isinf(sum)) {
      sum += term;
    } else {
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    if (next_mark < marks.size() && k + 1 == marks[next_mark]) {
      r.convergence_history.emplace_back(k + 1, sum / static_cast<double>(k + 1));
      ++next_mark;
    }
  }
  r.top_exponent = sum / static_cast<double>(n);
  finish(r, options);
  return r;
}

LyapunovResult lyapunov_md(const MapSystem& system, std::span<const double> x0, std::size_t skip,
                           std::size_t n, const LyapunovOptions& options) {
  require_jacobian(system, n);
  const std::size_t m = system.dimension();
  const std::size_t period = std::max<std::size_t>(options.reorthonormalize_every, 1);
  const Orbit orbit = post_transient(system, x0, skip, n, options);

  LyapunovResult r;
  r.n_used = n;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> sums(m, 0.0);
  const auto marks = sample_points(n, options.history_samples);
  std::size_t next_mark = 0;
  std::size_t pending = 0;

  auto reorthonormalize = [&] {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    const Eigen::MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXd qq = qr.householderQ();
    // Fix signs so diag(R) >= 0; log|R_kk| is unaffected.
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) {
      const double rkk = rr(k, k);
      if (rkk == 0.0) r.singular = true;
      sums[static_cast<std::size_t>(k)] += std::log(std::abs(rkk));
      if (rkk < 0.0) qq.col(k) = -qq.col(k);
    }
    q = std::move(qq);
    pending = 0;
  };

  for (std::size_t k = 0; k < n; ++k) {
    q = system.jacobian(orbit.point(k)) * q;
    ++pending;
    const bool at_mark = next_mark < marks.size() && k + 1 == marks[next_mark];
    if (pending >= period || at_mark || k + 1 == n) reorthonormalize();
    if (at_mark) {
      const double top = *std::max_element(sums.begin(), sums.end());
      r.convergence_history.emplace_back(k + 1, top / static_cast<double>(k + 1));
      ++next_mark;
    }
  }

  r.spectrum.resize(m);
  for (std::size_t k = 0; k < m; ++k) r.spectrum[k] = sums[k] / static_cast<double>(n);
  std::sort(r.spectrum.begin(), r.spectrum.end(), std::greater<>());
  r.top_exponent = r.spectrum.front();
  finish(r, options);
  return r;
}

LyapunovResult lyapunov(const MapSystem& system, std::span<const double> x0, std::size_t skip, std::size_t n,
                        const LyapunovOptions& options) {
  return system.dimension() == 1 ? lyapunov_1d(system, x0, skip, n, options)
                                 : lyapunov_md(system, x0, skip, n, options);
}

AgreementStats ecd_lyapunov_agreement(std::span<const EcdLyapunovSample> samples, double eps) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "agreement needs at least one (D, lambda) sample");
  AgreementStats stats;
  stats.total = samples.size();
  for (const auto& s : samples) {
    if ((s.ecd > eps) == (s.lambda > 0.0)) {
      ++stats.agreeing;
    } else {
      stats.disagreements.push_back(s);
    }
  }
  stats.fraction = static_cast<double>(stats.agreeing) / static_cast<double>(stats.total);
  return stats;
}

}  // namespace ecd
