#include "ecd/observation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ecd/error.hpp"
#include "ecd/parallel.hpp"

namespace ecd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Classical stages folded into a single stride, axis list and partition.
struct ClassicalPipeline {
  std::size_t stride = 1;
  std::optional<std::vector<std::size_t>> axes;
  PartitionStage partition;
};

ClassicalPipeline compile_classical(const ObservationSpec& spec, std::size_t dimension) {
  ClassicalPipeline out;
  bool have_partition = false;
  std::vector<std::size_t> axes(dimension);
  std::iota(axes.begin(), axes.end(), 0);
  for (const auto& stage : spec.stages()) {
    if (have_partition) {
      throw Error(ErrorCode::IncompatibleObservation, "no stage may follow the partition stage");
    }
    std::visit(overloaded{
                   [&](const TimeScale& t) {
                     if (t.stride == 0) throw Error(ErrorCode::IncompatibleObservation, "time-scale stride must be positive");
                     out.stride *= t.stride;
                   },
                   [&](const CoordinateProjection& p) {
                     if (p.axes.empty()) throw Error(ErrorCode::IncompatibleObservation, "empty coordinate projection");
                     std::vector<std::size_t> next;
                     for (std::size_t a : p.axes) {
                       if (a >= axes.size()) {
                         throw Error(ErrorCode::IncompatibleObservation,
                                     "projection axis " + std::to_string(a) + " exceeds observed dimension " +
                                         std::to_string(axes.size()));
                       }
                       next.push_back(axes[a]);
                     }
                     axes = std::move(next);
                     out.axes = axes;
                   },
                   [&](const PartitionStage& p) {
                     out.partition = p;
                     have_partition = true;
                   },
                   [&](const QuantumPVM&) {
                     throw Error(ErrorCode::IncompatibleObservation, "quantum PVM stage in a classical observation");
                   },
                   [&](const QuantumSchatten&) {
                     throw Error(ErrorCode::IncompatibleObservation, "Schatten stage in a classical observation");
                   },
               },
               stage);
  }
  if (!have_partition) {
    throw Error(ErrorCode::IncompatibleObservation, "observation has no partition stage");
  }
  auto& cells = out.partition.cells_per_axis;
  if (cells.size() == 1 && axes.size() > 1) cells.assign(axes.size(), cells.front());
  if (cells.size() != axes.size()) {
    throw Error(ErrorCode::IncompatiblePartition,
                "partition has " + std::to_string(cells.size()) + " axes, observed dimension is " +
                    std::to_string(axes.size()));
  }
  if (out.partition.box && out.partition.box->dimension() != axes.size()) {
    throw Error(ErrorCode::IncompatiblePartition, "explicit partition box has the wrong dimension");
  }
  return out;
}

Orbit observe(const Orbit& raw, const ClassicalPipeline& pipeline) {
  Orbit orbit = raw.subsample(pipeline.stride);
  if (pipeline.axes) orbit = orbit.project(*pipeline.axes);
  return orbit;
}

Box union_box(const std::vector<Orbit>& orbits) {
  Box box = orbits.front().bounding_box();
  for (std::size_t k = 1; k < orbits.size(); ++k) {
    const Box b = orbits[k].bounding_box();
    for (std::size_t d = 0; d < box.dimension(); ++d) {
      box.lower[d] = std::min(box.lower[d], b.lower[d]);
      box.upper[d] = std::max(box.upper[d], b.upper[d]);
    }
  }
  return box;
}

EcdResult evaluate(const std::vector<Orbit>& observed, std::span<const double> weights,
                   const ClassicalPipeline& pipeline, const Box* domain, const ObservationSpec& spec) {
  Box box;
  if (pipeline.partition.box) {
    box = *pipeline.partition.box;
  } else if (pipeline.partition.auto_box) {
    box = union_box(observed);
  } else if (domain) {
    box = pipeline.axes ? domain->project(*pipeline.axes) : *domain;
    if (!box.is_finite()) {
      throw Error(ErrorCode::IncompatiblePartition, "domain is unbounded; use an explicit box or auto-box");
    }
  } else {
    throw Error(ErrorCode::IncompatiblePartition, "no domain to partition; use an explicit box or auto-box");
  }
  const EquiPartition partition(std::move(box), pipeline.partition.cells_per_axis);
  std::vector<EmpiricalModel> models;
  models.reserve(observed.size());
  for (const auto& o : observed) models.push_back(empirical_model(o, partition));
  EcdResult result = ecd_from_model(merge_models(models, weights));
  result.observation = spec.describe();
  return result;
}

std::string describe_stage(const ObservationStage& stage) {
  return std::visit(overloaded{
                        [](const TimeScale& t) { return "tau[" + std::to_string(t.stride) + "]"; },
                        [](const PartitionStage& p) {
                          return "P[" + format_partition_spec(p.cells_per_axis) + (p.auto_box ? ",auto" : "") + "]";
                        },
                        [](const CoordinateProjection& p) {
                          std::string s = "R[";
                          for (std::size_t k = 0; k < p.axes.size(); ++k) {
                            s += (k ? "," : "") + std::to_string(p.axes[k]);
                          }
                          return s + "]";
                        },
                        [](const QuantumPVM& q) {
                          return "C[" + std::to_string(q.pvm ? q.pvm->projectors().size() : 0) + "]";
                        },
                        [](const QuantumSchatten&) { return std::string("S"); },
                    },
                    stage);
}

}  // namespace

ObservationSpec ObservationSpec::partition(std::vector<std::size_t> cells_per_axis, bool auto_box) {
  return ObservationSpec({PartitionStage{std::move(cells_per_axis), std::nullopt, auto_box}});
}

ObservationSpec ObservationSpec::then(ObservationStage stage) const {
  auto stages = stages_;
  stages.push_back(std::move(stage));
  return ObservationSpec(std::move(stages));
}

const PartitionStage* ObservationSpec::partition_stage() const noexcept {
  for (const auto& stage : stages_) {
    if (const auto* p = std::get_if<PartitionStage>(&stage)) return p;
  }
  return nullptr;
}

std::string ObservationSpec::describe() const {
  if (stages_.empty()) return "id";
  std::string out;
  for (std::size_t k = stages_.size(); k-- > 0;) {
    out += describe_stage(stages_[k]);
    if (k) out += '*';
  }
  return out;
}

EcdResult ecd_of_orbit(const Orbit& orbit, const ObservationSpec& observation, const Box* domain) {
  const ClassicalPipeline pipeline = compile_classical(observation, orbit.dimension());
  const std::vector<Orbit> observed{observe(orbit, pipeline)};
  const double weight = 1.0;
  return evaluate(observed, std::span<const double>(&weight, 1), pipeline, domain, observation);
}

EcdResult ecd_of_system(const MapSystem& system, const InitialEnsemble& ensemble,
                        const ObservationSpec& observation, std::size_t skip, std::size_t length) {
  if (ensemble.size() == 0) throw Error(ErrorCode::EmptyInput, "initial ensemble is empty");
  const ClassicalPipeline pipeline = compile_classical(observation, system.dimension());
  if (length < 2) throw Error(ErrorCode::ParamOutOfRange, "observed length must be at least 2");
  const std::size_t raw_length = (length - 1) * pipeline.stride + 1;
  const IterateOptions options{.check_domain = !pipeline.partition.auto_box};

  std::vector<Orbit> observed;
  observed.reserve(ensemble.size());
  for (std::size_t e = 0; e < ensemble.size(); ++e) {
    try {
      observed.push_back(observe(iterate_map(system, ensemble.points()[e], skip, raw_length, options), pipeline));
    } catch (const DomainEscapeError& err) {
      if (ensemble.size() == 1) throw;
      throw DomainEscapeError(err.step(), err.point(),
                              "ensemble point " + std::to_string(e) + " of " + system.name());
    }
  }
  return evaluate(observed, ensemble.weights(), pipeline, &system.domain(), observation);
}

TotalEcd total_ecd(const MapSystem& system, const InitialEnsemble& ensemble,
                   const std::vector<ObservationSpec>& family, std::size_t skip, std::size_t length,
                   std::size_t workers) {
  if (family.empty()) throw Error(ErrorCode::EmptyInput, "observation family is empty");
  TotalEcd total;
  total.members = parallel_map(family.size(), workers, [&](std::size_t k) {
    return ecd_of_system(system, ensemble, family[k], skip, length);
  });
  total.argmin = 0;
  total.value = total.members.front().value;
  for (std::size_t k = 1; k < total.members.size(); ++k) {
    if (total.members[k].value < total.value) {
      total.value = total.members[k].value;
      total.argmin = k;
    }
  }
  return total;
}

std::vector<ObservationSpec> partition_family(const std::vector<std::size_t>& cells, bool auto_box) {
  std::vector<ObservationSpec> family;
  family.reserve(cells.size());
  for (std::size_t c : cells) family.push_back(ObservationSpec::partition({c}, auto_box));
  return family;
}

quantum::QuantumEcdResult quantum_ecd_observed(const quantum::DensityMatrix& rho,
                                               const quantum::QuantumChannel& channel,
                                               const ObservationSpec& observation,
                                               std::size_t search_trials, std::uint64_t seed) {
  quantum::DensityMatrix state = rho;
  quantum::QuantumChannel dynamics = channel;
  bool schatten_seen = false;
  for (const auto& stage : observation.stages()) {
    if (schatten_seen) {
      throw Error(ErrorCode::IncompatibleObservation, "no stage may follow the Schatten representation");
    }
    if (const auto* c = std::get_if<QuantumPVM>(&stage)) {
      if (!c->pvm) throw Error(ErrorCode::IncompatibleObservation, "PVM stage without a PVM");
      state = quantum::pvm_expectation(state, *c->pvm);
      dynamics = dynamics.then_decohere(*c->pvm);
    } else if (std::holds_alternative<QuantumSchatten>(stage)) {
      schatten_seen = true;
    } else {
      throw Error(ErrorCode::IncompatibleObservation, "classical stage in a quantum observation");
    }
  }
  return quantum::quantum_ecd(state, dynamics, search_trials, seed);
}

}  // namespace ecd
