#pragma once

// Rotation-number arithmetic for the circle map: continued fractions,
// the closed-form chaos degree of an l-cell partition, and the decay of
// that value along the convergent denominators.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ecd/error.hpp"

namespace ecd::circle {

/// Reduced fraction b / c.
struct Convergent {
  std::uint64_t b = 0;
  std::uint64_t c = 1;

  double value() const noexcept { return static_cast<double>(b) / static_cast<double>(c); }
  bool operator==(const Convergent&) const = default;
};

/// [0; a_1, a_2, ...] with convergents b_j / c_j for j >= 1, so that the
/// denominators are strictly increasing (the trivial 0/1 is omitted).
struct ContinuedFraction {
  double v = 0.0;
  std::vector<std::uint64_t> coefficients;  // a_0 = 0 first
  std::vector<Convergent> convergents;
  /// The expansion ended because some |c_j v - b_j| <= 2 eps v c_j, i.e.
  /// b_j / c_j reproduces v up to rounding; v is then treated as rational.
  bool terminated = false;
};

/// Thrown when the next convergent would have c_j^2 > 1 / (16 eps v), the
/// inverse resolution of v. Carries everything computed before that point.
class PrecisionExhaustedError : public Error {
 public:
  PrecisionExhaustedError(ContinuedFraction partial, const std::string& detail);
  const ContinuedFraction& partial() const noexcept { return partial_; }

 private:
  ContinuedFraction partial_;
};

inline constexpr std::size_t kDefaultDepth = 64;

/// Gauss-map expansion of v in (0, 1). Each remainder is evaluated as the
/// ratio of the fused residuals q v - p of the last two convergents, which
/// keeps it accurate to a few ulps until precision runs out. A trailing
/// coefficient 1 is folded into its predecessor.
ContinuedFraction continued_fraction(double v, std::size_t depth = kDefaultDepth);

/// -s log s - (1 - s) log(1 - s), with h(0) = h(1) = 0. Requires s in [0, 1].
double binary_entropy(double s);

/// l v - floor(l v) with the rounding error of the product recovered by an
/// fma. Products within 4 l ulp of an integer give exactly 0.
double fractional_part(std::uint64_t l, double v);

/// Exact chaos degree of the rotation by 2 pi v under the l-cell
/// equi-partition: h(fractional_part(l, v)). Requires l >= 1.
double theoretical_dp(double v, std::uint64_t l);

struct DecayOptions {
  /// Number of convergent rows.
  std::size_t convergents = 7;
  /// Smallest denominator c_j admitted as a row.
  std::uint64_t min_denominator = 2;
  std::size_t length = 1'000'000;
  double theta0 = 0.5;
  std::size_t depth = kDefaultDepth;
  /// 0 = hardware concurrency.
  std::size_t workers = 0;
};

struct DecayRow {
  std::size_t j = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  double d_empirical = 0.0;
  double d_theoretical = 0.0;
  /// log c_j / c_j.
  double bound = 0.0;
};

struct DecayTable {
  std::vector<DecayRow> rows;
  /// v was found rational; rows holds the single exact denominator.
  bool rational = false;
  /// Fewer rows than requested because precision ran out.
  bool truncated = false;
  std::string warning;
};

/// For each admitted convergent c_j: the empirical chaos degree of an orbit
/// of `length` points under the c_j-cell partition of [0, 2 pi], the closed
/// form theoretical_dp(v, c_j), and log c_j / c_j.
DecayTable convergent_decay(double v, const DecayOptions& options = {});

}  // namespace ecd::circle
