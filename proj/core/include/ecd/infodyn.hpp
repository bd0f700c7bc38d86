#pragma once

// Shannon entropy, mutual entropy, the entropic chaos degree in its two
// equivalent forms, chaos classification and the complexity-axiom checks.
//
// All quantities are in nats. Joint distributions follow the partition
// module's convention: entry (i, j) is the probability of cell i at time n
// and cell j at time n+1, so the mutual entropy reads
//   I(p; L*) = sum_ij p_ij log(p_ij / (p_i q_j)),  q = L* p.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecd/partition.hpp"

namespace ecd {

/// Nonnegative entries summing to 1 within 1e-12.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> entries);

  static ProbabilityVector uniform(std::size_t n);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<double>& entries() const noexcept { return entries_; }
  operator std::span<const double>() const noexcept { return entries_; }

 private:
  std::vector<double> entries_;
};

/// -sum p_k log p_k with 0 log 0 = 0. No validation; see ProbabilityVector.
double shannon_entropy(std::span<const double> p) noexcept;

/// p (x) q flattened row-major (index i * q.size() + j).
ProbabilityVector tensor_product(const ProbabilityVector& p, const ProbabilityVector& q);

/// Throws MarginalMismatch when the joint's row or column sums differ from
/// the given marginals by more than 1e-9.
double mutual_entropy(std::span<const JointEntry> joint, std::span<const double> marginal_in,
                      std::span<const double> marginal_out);

struct EcdResult {
  /// D = sum_ij p_ij log(p_i / p_ij), the conditional-entropy form.
  double value = 0.0;
  /// S(L* p).
  double marginal_entropy_out = 0.0;
  /// I(p; L*).
  double mutual = 0.0;
  std::size_t sample_size = 0;
  /// Human-readable form of the observation that produced the model.
  std::string observation;
};

/// Computes both forms and throws InconsistentModel if they differ by more
/// than 1e-10 or the model is not row-consistent (1e-9).
EcdResult ecd_from_model(const EmpiricalModel& model);

/// D(p; L*) = S(L* p) - I(p; L*) for an explicit input distribution and channel.
EcdResult entropic_chaos_degree(const ProbabilityVector& p, const Channel& channel);

enum class Classification { Chaotic, Stable };

inline constexpr double kDefaultEpsilon = 1e-6;

/// Chaotic iff value > epsilon.
Classification classify(const EcdResult& result, double epsilon = kDefaultEpsilon);
std::string_view to_string(Classification c) noexcept;

enum class LogBase { Natural, Two };

/// Converts a value in nats into the requested base.
double from_nats(double nats, LogBase base) noexcept;

struct AxiomCheck {
  std::string name;
  bool passed = false;
  /// Largest observed violation (0 when the property holds exactly).
  double violation = 0.0;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool all_passed() const noexcept;
  const AxiomCheck& find(std::string_view name) const;
};

/// Evaluates the complexity axioms for C = Shannon entropy and T = mutual
/// entropy on one (p, channel) pair:
///   positivity      S(p) >= 0, I(p; L*) >= 0
///   relabeling      S, I, D invariant under a seeded random cell permutation (1e-12)
///   additivity      S(p (x) L*p) = S(p) + S(L*p) (1e-10)
///   bounded         0 <= I <= min(S(p), S(L*p))
///   identity        I(p; id) = S(p) and D(p; id) = 0 (1e-10)
AxiomReport axiom_suite(const ProbabilityVector& p, const Channel& channel, std::uint64_t seed = 0x5eed);

}  // namespace ecd
