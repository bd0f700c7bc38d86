#include "ecd/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <ranges>
#include <utility>

#include "ecd/error.hpp"

namespace ecd {

namespace {

double neumaier_sum(auto&& values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

std::vector<std::size_t> build_row_offsets(std::size_t cells, const std::vector<JointEntry>& entries) {
  std::vector<std::size_t> offsets(cells + 1, 0);
  for (const auto& e : entries) ++offsets[e.from + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return offsets;
}

void check_sorted_unique(const std::vector<JointEntry>& entries, std::size_t cells, const char* what) {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.from >= cells || e.to >= cells) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::string(what) + " entry (" + std::to_string(e.from) + ", " +
                      std::to_string(e.to) + ") outside " + std::to_string(cells) + " cells");
    }
    if (!(e.p > 0.0) || !std::isfinite(e.p)) {
      throw Error(ErrorCode::InvalidDistribution, std::string(what) + " entries must be positive");
    }
    if (k > 0) {
      const auto& prev = entries[k - 1];
      if (std::pair(prev.from, prev.to) >= std::pair(e.from, e.to)) {
        throw Error(ErrorCode::InvalidDistribution,
                    std::string(what) + " entries must be sorted by (from, to) without duplicates");
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- EquiPartition

EquiPartition::EquiPartition(Box box, std::vector<std::size_t> cells_per_axis)
    : box_(std::move(box)), cells_(std::move(cells_per_axis)) {
  if (cells_.empty() || cells_.size() != box_.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "partition has " + std::to_string(cells_.size()) + " axes, box has " +
                    std::to_string(box_.dimension()));
  }
  if (!box_.is_finite()) {
    throw Error(ErrorCode::IncompatiblePartition, "cannot partition an unbounded box");
  }
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    if (cells_[d] == 0) throw Error(ErrorCode::EmptyAxis, "axis " + std::to_string(d) + " has 0 cells");
    if (!(box_.upper[d] > box_.lower[d])) {
      throw Error(ErrorCode::IncompatiblePartition, "axis " + std::to_string(d) + " has zero width");
    }
  }
  strides_.assign(cells_.size(), 1);
  for (std::size_t d = cells_.size(); d-- > 0;) {
    strides_[d] = total_;
    total_ *= cells_[d];
  }
}

std::size_t EquiPartition::cell_or_sentinel(std::span<const double> x) const noexcept {
  if (x.size() != cells_.size()) return total_;
  std::size_t index = 0;
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    const double lo = box_.lower[d];
    const double hi = box_.upper[d];
    if (!(x[d] >= lo && x[d] <= hi)) return total_;
    // Multiply before dividing: exact on dyadic boundaries such as k*pi/2.
    const double t = (x[d] - lo) * static_cast<double>(cells_[d]) / (hi - lo);
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= cells_[d]) i = cells_[d] - 1;
    index += i * strides_[d];
  }
  return index;
}

std::size_t EquiPartition::cell_of(std::span<const double> x) const {
  const std::size_t cell = cell_or_sentinel(x);
  if (cell == total_) throw OutOfBoxError(0, "lies outside the partition box");
  return cell;
}

std::vector<std::size_t> EquiPartition::unravel(std::size_t index) const {
  if (index >= total_) throw Error(ErrorCode::OutOfBox, "cell index out of range");
  std::vector<std::size_t> out(cells_.size());
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    out[d] = index / strides_[d];
    index %= strides_[d];
  }
  return out;
}

Box EquiPartition::cell_box(std::size_t index) const {
  const auto coords = unravel(index);
  Box cell;
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    const double w = box_.width(d) / static_cast<double>(cells_[d]);
    cell.lower.push_back(box_.lower[d] + static_cast<double>(coords[d]) * w);
    cell.upper.push_back(coords[d] + 1 == cells_[d] ? box_.upper[d]
                                                    : box_.lower[d] + static_cast<double>(coords[d] + 1) * w);
  }
  return cell;
}

std::string EquiPartition::spec() const { return format_partition_spec(cells_); }

EquiPartition make_equipartition(Box box, std::vector<std::size_t> cells_per_axis) {
  return EquiPartition(std::move(box), std::move(cells_per_axis));
}

std::vector<std::size_t> parse_partition_spec(std::string_view text) {
  std::vector<std::size_t> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = std::min(text.find('x', start), text.size());
    const std::string_view token = text.substr(start, end - start);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError(1, "bad partition spec '" + std::string(text) + "' (expected e.g. 100 or 32x32)");
    }
    if (value == 0) throw Error(ErrorCode::EmptyAxis, "partition spec '" + std::string(text) + "' has a zero axis");
    cells.push_back(value);
    if (end == text.size()) break;
    start = end + 1;
  }
  return cells;
}

std::string format_partition_spec(std::span<const std::size_t> cells_per_axis) {
  std::string out;
  for (std::size_t d = 0; d < cells_per_axis.size(); ++d) {
    if (d) out += 'x';
    out += std::to_string(cells_per_axis[d]);
  }
  return out;
}

std::vector<std::size_t> symbolize(const Orbit& orbit, const EquiPartition& partition) {
  if (orbit.dimension() != partition.dimension()) {
    throw Error(ErrorCode::IncompatiblePartition,
                "orbit dimension " + std::to_string(orbit.dimension()) + " vs partition dimension " +
                    std::to_string(partition.dimension()));
  }
  std::vector<std::size_t> symbols(orbit.length());
  for (std::size_t k = 0; k < orbit.length(); ++k) {
    symbols[k] = partition.cell_or_sentinel(orbit.point(k));
    if (symbols[k] == partition.total_cells()) throw OutOfBoxError(k, "lies outside the partition box");
  }
  return symbols;
}

// ---------------------------------------------------------------- EmpiricalModel

EmpiricalModel::EmpiricalModel(std::size_t cells, std::vector<double> marginal,
                               std::vector<JointEntry> joint, std::size_t sample_size)
    : cells_(cells), marginal_(std::move(marginal)), joint_(std::move(joint)), sample_size_(sample_size) {
  if (cells_ == 0) throw Error(ErrorCode::EmptyInput, "model has no cells");
  if (marginal_.size() != cells_) {
    throw Error(ErrorCode::DimensionMismatch, "marginal length differs from the cell count");
  }
  for (double p : marginal_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::InvalidDistribution, "marginal entries must be nonnegative");
    }
  }
  check_sorted_unique(joint_, cells_, "joint");
  if (std::abs(neumaier_sum(marginal_) - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidDistribution, "marginal does not sum to 1");
  }
  if (std::abs(neumaier_sum(joint_ | std::views::transform(&JointEntry::p)) - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidDistribution, "joint does not sum to 1");
  }
  row_offsets_ = build_row_offsets(cells_, joint_);
}

std::span<const JointEntry> EmpiricalModel::row(std::size_t from) const {
  if (from >= cells_) return {};
  return std::span<const JointEntry>(joint_).subspan(row_offsets_[from],
                                                      row_offsets_[from + 1] - row_offsets_[from]);
}

std::vector<double> EmpiricalModel::output_marginal() const {
  std::vector<double> out(cells_, 0.0);
  for (const auto& e : joint_) out[e.to] += e.p;
  return out;
}

std::vector<std::size_t> EmpiricalModel::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells_; ++i) {
    if (marginal_[i] > 0.0) out.push_back(i);
  }
  return out;
}

double EmpiricalModel::max_row_deviation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < cells_; ++i) {
    const auto r = row(i);
    const double sum = neumaier_sum(r | std::views::transform(&JointEntry::p));
    worst = std::max(worst, std::abs(sum - marginal_[i]));
  }
  return worst;
}

EmpiricalModel empirical_model_from_symbols(std::span<const std::size_t> symbols, std::size_t cells) {
  if (symbols.size() < 2) throw Error(ErrorCode::EmptyInput, "need at least two symbols");
  const std::size_t pairs = symbols.size() - 1;
  std::vector<std::size_t> first_counts(cells, 0);
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  keys.reserve(pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    if (symbols[k] >= cells || symbols[k + 1] >= cells) {
      throw OutOfBoxError(symbols[k] >= cells ? k : k + 1, "has a symbol outside the cell range");
    }
    ++first_counts[symbols[k]];
    keys.emplace_back(symbols[k], symbols[k + 1]);
  }
  std::sort(keys.begin(), keys.end());

  const auto n = static_cast<double>(pairs);
  std::vector<JointEntry> joint;
  for (std::size_t k = 0; k < keys.size();) {
    std::size_t run = k + 1;
    while (run < keys.size() && keys[run] == keys[k]) ++run;
    joint.push_back(JointEntry{keys[k].first, keys[k].second, static_cast<double>(run - k) / n});
    k = run;
  }
  std::vector<double> marginal(cells);
  for (std::size_t i = 0; i < cells; ++i) marginal[i] = static_cast<double>(first_counts[i]) / n;
  return EmpiricalModel(cells, std::move(marginal), std::move(joint), pairs);
}

EmpiricalModel empirical_model(const Orbit& orbit, const EquiPartition& partition) {
  if (orbit.length() < 2) throw Error(ErrorCode::EmptyInput, "orbit must have at least two points");
  const auto symbols = symbolize(orbit, partition);
  return empirical_model_from_symbols(symbols, partition.total_cells());
}

EmpiricalModel merge_models(std::span<const EmpiricalModel> models, std::span<const double> weights) {
  if (models.empty()) throw Error(ErrorCode::EmptyInput, "no models to merge");
  if (models.size() != weights.size()) throw Error(ErrorCode::DimensionMismatch, "one weight per model required");
  if (models.size() == 1) return models.front();
  const std::size_t cells = models.front().cells();
  std::vector<double> marginal(cells, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::size_t pairs = 0;
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (models[m].cells() != cells) throw Error(ErrorCode::DimensionMismatch, "models have different cell counts");
    const double w = weights[m];
    for (std::size_t i = 0; i < cells; ++i) marginal[i] += w * models[m].marginal()[i];
    for (const auto& entry : models[m].joint()) joint[{entry.from, entry.to}] += w * entry.p;
    pairs += models[m].sample_size();
  }
  std::vector<JointEntry> entries;
  entries.reserve(joint.size());
  for (const auto& [key, p] : joint) {
    if (p > 0.0) entries.push_back(JointEntry{key.first, key.second, p});
  }
  return EmpiricalModel(cells, std::move(marginal), std::move(entries), pairs);
}

EmpiricalModel empirical_model_ensemble(const MapSystem& system, const InitialEnsemble& ensemble,
                                        const EquiPartition& partition, std::size_t skip,
                                        std::size_t length, IterateOptions options) {
  if (ensemble.size() == 0) throw Error(ErrorCode::EmptyInput, "initial ensemble is empty");
  std::vector<EmpiricalModel> models;
  models.reserve(ensemble.size());
  for (std::size_t e = 0; e < ensemble.size(); ++e) {
    try {
      models.push_back(
          empirical_model(iterate_map(system, ensemble.points()[e], skip, length, options), partition));
    } catch (const DomainEscapeError& err) {
      throw DomainEscapeError(err.step(), err.point(),
                              "ensemble point " + std::to_string(e) + " of " + system.name());
    }
  }
  return merge_models(models, ensemble.weights());
}

// ---------------------------------------------------------------- Channel

Channel::Channel(std::size_t cells, std::vector<JointEntry> transitions)
    : cells_(cells), entries_(std::move(transitions)) {
  check_sorted_unique(entries_, cells_, "channel");
  row_offsets_ = build_row_offsets(cells_, entries_);
  for (std::size_t i = 0; i < cells_; ++i) {
    const auto r = row(i);
    if (r.empty()) continue;
    const double sum = neumaier_sum(r | std::views::transform(&JointEntry::p));
    if (std::abs(sum - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidChannel, "channel row " + std::to_string(i) + " sums to " +
                                                 std::to_string(sum));
    }
  }
}

Channel Channel::identity(std::size_t cells) {
  std::vector<JointEntry> entries;
  entries.reserve(cells);
  for (std::size_t i = 0; i < cells; ++i) entries.push_back(JointEntry{i, i, 1.0});
  return Channel(cells, std::move(entries));
}

Channel Channel::from_dense(const std::vector<std::vector<double>>& rows) {
  std::vector<JointEntry> entries;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw Error(ErrorCode::DimensionMismatch, "channel matrix is not square");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] < 0.0) throw Error(ErrorCode::InvalidChannel, "negative transition probability");
      if (rows[i][j] > 0.0) entries.push_back(JointEntry{i, j, rows[i][j]});
    }
  }
  return Channel(rows.size(), std::move(entries));
}

std::span<const JointEntry> Channel::row(std::size_t from) const {
  if (from >= cells_) return {};
  return std::span<const JointEntry>(entries_).subspan(row_offsets_[from],
                                                        row_offsets_[from + 1] - row_offsets_[from]);
}

std::vector<double> Channel::apply(std::span<const double> p) const {
  if (p.size() != cells_) throw Error(ErrorCode::DimensionMismatch, "distribution length differs from channel size");
  std::vector<double> out(cells_, 0.0);
  for (const auto& e : entries_) out[e.to] += e.p * p[e.from];
  return out;
}

std::vector<JointEntry> Channel::joint_for(std::span<const double> p) const {
  if (p.size() != cells_) throw Error(ErrorCode::DimensionMismatch, "distribution length differs from channel size");
  std::vector<JointEntry> out;
  for (const auto& e : entries_) {
    const double v = p[e.from] * e.p;
    if (v > 0.0) out.push_back(JointEntry{e.from, e.to, v});
  }
  for (std::size_t i = 0; i < cells_; ++i) {
    if (p[i] > 0.0 && !has_row(i)) {
      throw Error(ErrorCode::InconsistentModel,
                  "input mass on cell " + std::to_string(i) + " which has no channel row");
    }
  }
  return out;
}

bool Channel::is_deterministic() const {
  for (std::size_t i = 0; i < cells_; ++i) {
    if (row(i).size() > 1) return false;
  }
  return true;
}

Channel channel_from(const EmpiricalModel& model) {
  const double deviation = model.max_row_deviation();
  if (deviation > 1e-9) {
    throw Error(ErrorCode::InconsistentModel,
                "joint row sums deviate from the marginal by " + std::to_string(deviation));
  }
  std::vector<JointEntry> transitions;
  transitions.reserve(model.joint().size());
  for (std::size_t i = 0; i < model.cells(); ++i) {
    const auto r = model.row(i);
    if (r.empty()) continue;
    if (!(model.marginal()[i] > 0.0)) {
      throw Error(ErrorCode::InconsistentModel, "joint mass on cell " + std::to_string(i) +
                                                    " which has zero marginal");
    }
    // Normalize by the row's own sum so each row is stochastic to rounding.
    const double sum = neumaier_sum(r | std::views::transform(&JointEntry::p));
    for (const auto& e : r) transitions.push_back(JointEntry{e.from, e.to, e.p / sum});
  }
  return Channel(model.cells(), std::move(transitions));
}

}  // namespace ecd
