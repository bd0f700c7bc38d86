#pragma once

// Equi-partitions, symbolization of orbits, and the empirical marginal /
// joint / channel estimated from consecutive orbit symbols.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecd/dynamics.hpp"

namespace ecd {

/// Cover of a finite box by prod(L_d) congruent half-open cells. Cell
/// indices are row-major with axis 0 most significant. The topmost cell on
/// every axis is closed so the box is covered exactly.
class EquiPartition {
 public:
  EquiPartition(Box box, std::vector<std::size_t> cells_per_axis);

  const Box& box() const noexcept { return box_; }
  const std::vector<std::size_t>& cells_per_axis() const noexcept { return cells_; }
  std::size_t dimension() const noexcept { return cells_.size(); }
  std::size_t total_cells() const noexcept { return total_; }

  /// Throws OutOfBoxError when x is outside the box.
  std::size_t cell_of(std::span<const double> x) const;
  /// Like cell_of but returns total_cells() instead of throwing.
  std::size_t cell_or_sentinel(std::span<const double> x) const noexcept;

  Box cell_box(std::size_t index) const;
  std::vector<std::size_t> unravel(std::size_t index) const;

  /// "L1xL2x..." form.
  std::string spec() const;

 private:
  Box box_;
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

EquiPartition make_equipartition(Box box, std::vector<std::size_t> cells_per_axis);

/// Parses "100" or "32x32". Throws ParseError (line 1) on malformed input.
std::vector<std::size_t> parse_partition_spec(std::string_view text);
std::string format_partition_spec(std::span<const std::size_t> cells_per_axis);

/// Symbol sequence of an orbit. Throws OutOfBoxError with the index of the
/// first point outside the partition box.
std::vector<std::size_t> symbolize(const Orbit& orbit, const EquiPartition& partition);

/// One nonzero joint (or transition) entry: from = cell at time n, to = cell
/// at time n+1.
struct JointEntry {
  std::size_t from;
  std::size_t to;
  double p;

  bool operator==(const JointEntry&) const = default;
};

/// Marginal p_i and sparse joint p_ij over a fixed cell set.
///
/// Construction validates nonnegativity, unit mass of marginal and joint
/// (1e-12) and index ranges; row-consistency sum_j p_ij = p_i is reported by
/// max_row_deviation() and enforced by the consumers that rely on it.
class EmpiricalModel {
 public:
  EmpiricalModel(std::size_t cells, std::vector<double> marginal, std::vector<JointEntry> joint,
                 std::size_t sample_size);

  std::size_t cells() const noexcept { return cells_; }
  const std::vector<double>& marginal() const noexcept { return marginal_; }
  /// Sorted by (from, to); every p > 0.
  const std::vector<JointEntry>& joint() const noexcept { return joint_; }
  std::span<const JointEntry> row(std::size_t from) const;
  /// Number of consecutive pairs the estimate was built from.
  std::size_t sample_size() const noexcept { return sample_size_; }

  /// Time-(n+1) marginal: column sums of the joint.
  std::vector<double> output_marginal() const;
  std::vector<std::size_t> support() const;
  double max_row_deviation() const;

 private:
  std::size_t cells_;
  std::vector<double> marginal_;
  std::vector<JointEntry> joint_;
  std::vector<std::size_t> row_offsets_;
  std::size_t sample_size_;
};

/// Builds the model from a symbol sequence s_0..s_n: the n pairs
/// (s_k, s_{k+1}) fill the joint and their first elements fill the marginal,
/// so row-consistency holds exactly.
EmpiricalModel empirical_model_from_symbols(std::span<const std::size_t> symbols, std::size_t cells);

EmpiricalModel empirical_model(const Orbit& orbit, const EquiPartition& partition);

/// Weighted sum of models over the same cell set, merged in the given order.
/// Weights must be nonnegative and sum to 1.
EmpiricalModel merge_models(std::span<const EmpiricalModel> models, std::span<const double> weights);

/// Weighted average of per-initial-point models; merged in ensemble order.
EmpiricalModel empirical_model_ensemble(const MapSystem& system, const InitialEnsemble& ensemble,
                                        const EquiPartition& partition, std::size_t skip,
                                        std::size_t length, IterateOptions options = {});

/// Row-stochastic transition matrix t_ij = p_ij / p_i on the support rows.
/// Applying it to an input distribution p gives (Lambda* p)_j = sum_i t_ij p_i.
class Channel {
 public:
  /// Rows must be sorted by (from, to); each present row must sum to 1.
  Channel(std::size_t cells, std::vector<JointEntry> transitions);

  static Channel identity(std::size_t cells);
  /// Dense row-stochastic matrix; zero rows are treated as absent.
  static Channel from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t cells() const noexcept { return cells_; }
  const std::vector<JointEntry>& transitions() const noexcept { return entries_; }
  std::span<const JointEntry> row(std::size_t from) const;
  bool has_row(std::size_t from) const { return !row(from).empty(); }

  std::vector<double> apply(std::span<const double> p) const;
  /// Joint p_ij = p_i t_ij for an input distribution p.
  std::vector<JointEntry> joint_for(std::span<const double> p) const;

  /// Every present row has a single nonzero entry.
  bool is_deterministic() const;

 private:
  std::size_t cells_;
  std::vector<JointEntry> entries_;
  std::vector<std::size_t> row_offsets_;
};

/// Throws InconsistentModel when some |sum_j p_ij - p_i| exceeds 1e-9.
Channel channel_from(const EmpiricalModel& model);

}  // namespace ecd
