#pragma once

// Observations applied to a dynamics before its chaos degree is measured.
//
// An ObservationSpec is a list of stages in application order: stages()[0]
// acts first, so a spec {s_1, ..., s_m} denotes O = O_m ... O_1.
//
// Classical pipelines accept any number of TimeScale / CoordinateProjection
// stages followed by exactly one Partition stage. Quantum pipelines accept
// any number of QuantumPVM stages followed by an optional QuantumSchatten
// marker (the Schatten-decomposition representation is always used).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecd/dynamics.hpp"
#include "ecd/infodyn.hpp"
#include "ecd/partition.hpp"
#include "ecd/quantum.hpp"

namespace ecd {

/// Keep every stride-th point of an already discrete orbit.
struct TimeScale {
  std::size_t stride = 1;
};

/// Symbolize by an equi-partition. Without an explicit box the map's domain
/// (projected onto the observed axes) is used; auto_box partitions the
/// bounding box of the observed points instead and disables the domain
/// check while iterating.
struct PartitionStage {
  std::vector<std::size_t> cells_per_axis;
  std::optional<Box> box;
  bool auto_box = false;
};

struct CoordinateProjection {
  std::vector<std::size_t> axes;
};

/// Decoherence rho -> sum P_k rho P_k applied to state and channel output.
struct QuantumPVM {
  std::shared_ptr<const quantum::PVM> pvm;
};

/// Marker for the Schatten-decomposition representation of a state.
struct QuantumSchatten {};

using ObservationStage =
    std::variant<TimeScale, PartitionStage, CoordinateProjection, QuantumPVM, QuantumSchatten>;

class ObservationSpec {
 public:
  ObservationSpec() = default;
  explicit ObservationSpec(std::vector<ObservationStage> stages) : stages_(std::move(stages)) {}

  /// A single partition stage with the same cell count on every axis
  /// (when cells_per_axis has one entry) or the listed per-axis counts.
  static ObservationSpec partition(std::vector<std::size_t> cells_per_axis, bool auto_box = false);

  /// New spec with `stage` applied after the existing ones.
  ObservationSpec then(ObservationStage stage) const;

  const std::vector<ObservationStage>& stages() const noexcept { return stages_; }
  const PartitionStage* partition_stage() const noexcept;

  /// Compact notation, outermost stage first, e.g. "P[100]*tau[2]".
  std::string describe() const;

 private:
  std::vector<ObservationStage> stages_;
};

/// Applies the classical stages to an already generated orbit. `domain` is
/// the box used when the partition stage has neither an explicit box nor
/// auto_box (nullptr means auto-box is required).
EcdResult ecd_of_orbit(const Orbit& orbit, const ObservationSpec& observation, const Box* domain = nullptr);

/// D^O for a map and initial ensemble: iterates, applies the observation,
/// builds the empirical model and evaluates the chaos degree. `length` is
/// the number of observed points per initial point (after time scaling).
EcdResult ecd_of_system(const MapSystem& system, const InitialEnsemble& ensemble,
                        const ObservationSpec& observation, std::size_t skip = kDefaultSkip,
                        std::size_t length = kDefaultLength);

struct TotalEcd {
  /// Minimum of D^O over the family.
  double value = 0.0;
  /// Index of the first family member attaining the minimum.
  std::size_t argmin = 0;
  std::vector<EcdResult> members;
};

/// Infimum of D^O over a finite observation family. Members are evaluated
/// on up to `workers` threads (0 = hardware concurrency) and reported in
/// family order.
TotalEcd total_ecd(const MapSystem& system, const InitialEnsemble& ensemble,
                   const std::vector<ObservationSpec>& family, std::size_t skip = kDefaultSkip,
                   std::size_t length = kDefaultLength, std::size_t workers = 0);

/// Partition-only family over the given cell counts (applied to every axis).
/// Appropriate when the dynamics is already a difference equation, which
/// leaves no time-scale or representation choice to make.
std::vector<ObservationSpec> partition_family(const std::vector<std::size_t>& cells, bool auto_box = false);

/// Quantum chaos degree under an observation made of QuantumPVM stages
/// (and an optional QuantumSchatten marker): state and channel output are
/// decohered by each PVM before the Schatten infimum is taken.
quantum::QuantumEcdResult quantum_ecd_observed(const quantum::DensityMatrix& rho,
                                               const quantum::QuantumChannel& channel,
                                               const ObservationSpec& observation,
                                               std::size_t search_trials = quantum::kDefaultSearchTrials,
                                               std::uint64_t seed = quantum::kDefaultSeed);

}  // namespace ecd
