#include "ecd/infodyn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "ecd/error.hpp"

namespace ecd {

namespace {

constexpr double kMarginalTolerance = 1e-9;
constexpr double kFormTolerance = 1e-10;

std::vector<JointEntry> sorted(std::vector<JointEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const JointEntry& a, const JointEntry& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  return entries;
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidDistribution, "empty probability vector");
  double total = 0.0;
  for (double p : entries_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::InvalidDistribution, "probability entries must be nonnegative and finite");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidDistribution, "probabilities sum to " + std::to_string(total));
  }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidDistribution, "empty probability vector");
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double shannon_entropy(std::span<const double> p) noexcept {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

ProbabilityVector tensor_product(const ProbabilityVector& p, const ProbabilityVector& q) {
  std::vector<double> out;
  out.reserve(p.size() * q.size());
  for (double a : p.entries()) {
    for (double b : q.entries()) out.push_back(a * b);
  }
  return ProbabilityVector(std::move(out));
}

double mutual_entropy(std::span<const JointEntry> joint, std::span<const double> marginal_in,
                      std::span<const double> marginal_out) {
  std::vector<double> rows(marginal_in.size(), 0.0);
  std::vector<double> cols(marginal_out.size(), 0.0);
  for (const auto& e : joint) {
    if (e.from >= rows.size() || e.to >= cols.size()) {
      throw Error(ErrorCode::MarginalMismatch, "joint entry outside the marginal ranges");
    }
    rows[e.from] += e.p;
    cols[e.to] += e.p;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i] - marginal_in[i]) > kMarginalTolerance) {
      throw Error(ErrorCode::MarginalMismatch, "joint row " + std::to_string(i) + " sum differs from the input marginal");
    }
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (std::abs(cols[j] - marginal_out[j]) > kMarginalTolerance) {
      throw Error(ErrorCode::MarginalMismatch, "joint column " + std::to_string(j) + " sum differs from the output marginal");
    }
  }
  double info = 0.0;
  for (const auto& e : joint) {
    if (e.p > 0.0) info += e.p * std::log(e.p / (marginal_in[e.from] * marginal_out[e.to]));
  }
  return info;
}

EcdResult ecd_from_model(const EmpiricalModel& model) {
  const double deviation = model.max_row_deviation();
  if (deviation > kMarginalTolerance) {
    throw Error(ErrorCode::InconsistentModel,
                "joint row sums deviate from the marginal by " + std::to_string(deviation));
  }
  const auto& p = model.marginal();
  double conditional = 0.0;
  for (const auto& e : model.joint()) {
    // p_ij <= p_i for consistent models, so every term is >= 0.
    conditional += e.p * std::log(p[e.from] / e.p);
  }
  const std::vector<double> q = model.output_marginal();
  EcdResult result;
  result.marginal_entropy_out = shannon_entropy(q);
  result.mutual = mutual_entropy(model.joint(), p, q);
  result.sample_size = model.sample_size();
  const double difference_form = result.marginal_entropy_out - result.mutual;
  if (std::abs(conditional - difference_form) > kFormTolerance) {
    throw Error(ErrorCode::InconsistentModel,
                "conditional-entropy and S - I forms disagree by " +
                    std::to_string(std::abs(conditional - difference_form)));
  }
  result.value = std::max(conditional, 0.0);
  return result;
}

EcdResult entropic_chaos_degree(const ProbabilityVector& p, const Channel& channel) {
  if (p.size() != channel.cells()) {
    throw Error(ErrorCode::DimensionMismatch, "distribution and channel sizes differ");
  }
  EmpiricalModel model(p.size(), p.entries(), channel.joint_for(p), 0);
  return ecd_from_model(model);
}

Classification classify(const EcdResult& result, double epsilon) {
  return result.value > epsilon ? Classification::Chaotic : Classification::Stable;
}

std::string_view to_string(Classification c) noexcept {
  return c == Classification::Chaotic ? "chaotic" : "stable";
}

double from_nats(double nats, LogBase base) noexcept {
  return base == LogBase::Two ? nats / std::numbers::ln2 : nats;
}

bool AxiomReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::EmptyInput, "no axiom check named '" + std::string(name) + "'");
}

AxiomReport axiom_suite(const ProbabilityVector& p, const Channel& channel, std::uint64_t seed) {
  const std::size_t n = p.size();
  if (channel.cells() != n) throw Error(ErrorCode::DimensionMismatch, "distribution and channel sizes differ");

  const std::vector<JointEntry> joint = channel.joint_for(p);
  const std::vector<double> out = channel.apply(p);
  const double s_in = shannon_entropy(p);
  const double s_out = shannon_entropy(out);
  const double info = mutual_entropy(joint, p, out);
  const double degree = entropic_chaos_degree(p, channel).value;

  AxiomReport report;
  auto add = [&](std::string name, double violation, double tol) {
    report.checks.push_back(AxiomCheck{std::move(name), violation <= tol, violation});
  };

  add("positivity", std::max({0.0, -s_in, -info}), 1e-12);

  // Relabel every outcome by the same random permutation.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  std::vector<double> p_perm(n);
  for (std::size_t i = 0; i < n; ++i) p_perm[perm[i]] = p[i];
  std::vector<JointEntry> t_perm;
  for (const auto& e : channel.transitions()) t_perm.push_back(JointEntry{perm[e.from], perm[e.to], e.p});
  const Channel channel_perm(n, sorted(std::move(t_perm)));
  const ProbabilityVector pv_perm(std::move(p_perm));
  const std::vector<double> out_perm = channel_perm.apply(pv_perm);
  const double info_perm = mutual_entropy(channel_perm.joint_for(pv_perm), pv_perm, out_perm);
  const double degree_perm = entropic_chaos_degree(pv_perm, channel_perm).value;
  add("relabeling",
      std::max({std::abs(shannon_entropy(pv_perm) - s_in), std::abs(info_perm - info),
                std::abs(degree_perm - degree)}),
      1e-12);

  const ProbabilityVector pv_out(out);
  add("additivity", std::abs(shannon_entropy(tensor_product(p, pv_out)) - (s_in + s_out)), 1e-10);

  add("bounded", std::max({0.0, -info, info - std::min(s_in, s_out)}), 1e-10);

  const Channel id = Channel::identity(n);
  const double info_id = mutual_entropy(id.joint_for(p), p, p);
  const double degree_id = entropic_chaos_degree(p, id).value;
  add("identity", std::max(std::abs(info_id - s_in), std::abs(degree_id)), 1e-10);

  return report;
}

}  // namespace ecd
