#include "ecd/circlemap.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ecd/dynamics.hpp"
#include "ecd/observation.hpp"
#include "ecd/parallel.hpp"

namespace ecd::circle {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// c v - b, exact up to one rounding.
double residual(std::uint64_t c, std::uint64_t b, double v) {
  return std::fma(static_cast<double>(c), v, -static_cast<double>(b));
}

void fold_trailing_one(ContinuedFraction& cf) {
  auto& a = cf.coefficients;
  if (a.size() >= 3 && a.back() == 1) {
    a.pop_back();
    ++a.back();
    cf.convergents.erase(cf.convergents.end() - 2);
  }
}

}  // namespace

PrecisionExhaustedError::PrecisionExhaustedError(ContinuedFraction partial, const std::string& detail)
    : Error(ErrorCode::PrecisionExhausted, detail), partial_(std::move(partial)) {}

ContinuedFraction continued_fraction(double v, std::size_t depth) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "rotation number must lie in (0, 1)");
  }
  if (depth == 0) throw Error(ErrorCode::ParamOutOfRange, "continued-fraction depth must be >= 1");

  ContinuedFraction cf;
  cf.v = v;
  cf.coefficients.push_back(0);
  // Resolution of v is taken as 16 eps v, a few ulps; below it a residual
  // of an irrational cannot be told from rounding of a rational.
  const double limit = 1.0 / (16.0 * kEps * v);
  const double rational_tol = 2.0 * kEps * v;
  // (p_{j-1}, q_{j-1}) and (p_j, q_j), starting from 1/0 and 0/1.
  std::uint64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
  double r_prev = -1.0, r = v;
  while (cf.convergents.size() < depth) {
    const double x = std::abs(r / r_prev);
    const double inv = 1.0 / x;
    if (!std::isfinite(inv) || inv >= 0x1.0p63) {
      cf.terminated = true;
      break;
    }
    const double a_d = std::floor(inv);
    const double qd = a_d * static_cast<double>(q) + static_cast<double>(q_prev);
    if (qd * qd > limit) {
      throw PrecisionExhaustedError(cf, "next convergent denominator (about " + std::to_string(qd) +
                                            ") exceeds the resolution of v");
    }
    const auto a = static_cast<std::uint64_t>(a_d);
    const std::uint64_t p_next = a * p + p_prev;
    const std::uint64_t q_next = a * q + q_prev;
    cf.coefficients.push_back(a);
    cf.convergents.push_back({p_next, q_next});
    p_prev = p, q_prev = q, p = p_next, q = q_next;
    r_prev = r;
    r = residual(q, p, v);
    if (std::abs(r) <= rational_tol * qd) {
      cf.terminated = true;
      break;
    }
  }
  if (cf.terminated) fold_trailing_one(cf);
  return cf;
}

double binary_entropy(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "binary entropy needs s in [0, 1]");
  if (s == 0.0 || s == 1.0) return 0.0;
  return -s * std::log(s) - (1.0 - s) * std::log1p(-s);
}

double fractional_part(std::uint64_t l, double v) {
  const double ld = static_cast<double>(l);
  const double prod = ld * v;
  const double err = std::fma(ld, v, -prod);
  const double fl = std::floor(prod);
  double s = (prod - fl) + err;
  if (s < 0.0) s += 1.0;
  if (s >= 1.0) s -= 1.0;
  const double tol = 4.0 * kEps * ld;
  if (s <= tol || 1.0 - s <= tol) return 0.0;
  return s;
}

double theoretical_dp(double v, std::uint64_t l) {
  if (l == 0) throw Error(ErrorCode::ParamOutOfRange, "partition size l must be >= 1");
  return binary_entropy(fractional_part(l, v));
}

DecayTable convergent_decay(double v, const DecayOptions& options) {
  if (options.convergents == 0) throw Error(ErrorCode::ParamOutOfRange, "need at least one convergent");
  DecayTable table;
  ContinuedFraction cf;
  try {
    cf = continued_fraction(v, options.depth);
  } catch (const PrecisionExhaustedError& e) {
    cf = e.partial();
  }

  std::vector<std::pair<std::size_t, Convergent>> chosen;
  if (cf.terminated) {
    table.rational = true;
    table.warning = "v is rational to floating resolution; only its exact denominator is reported";
    chosen.emplace_back(cf.convergents.size(), cf.convergents.back());
  } else {
    for (std::size_t j = 0; j < cf.convergents.size() && chosen.size() < options.convergents; ++j) {
      if (cf.convergents[j].c >= options.min_denominator) chosen.emplace_back(j + 1, cf.convergents[j]);
    }
    if (chosen.size() < options.convergents) {
      table.truncated = true;
      table.warning = "precision exhausted after " + std::to_string(chosen.size()) + " of " +
                      std::to_string(options.convergents) + " convergents";
    }
  }

  const MapSystem system = builtin_map("circle", {v});
  const auto ensemble = InitialEnsemble::single({options.theta0});
  table.rows = parallel_map(chosen.size(), options.workers, [&](std::size_t k) {
    const auto& [j, conv] = chosen[k];
    DecayRow row;
    row.j = j;
    row.b = conv.b;
    row.c = conv.c;
    const auto obs = ObservationSpec::partition({static_cast<std::size_t>(conv.c)});
    row.d_empirical = ecd_of_system(system, ensemble, obs, 0, options.length).value;
    row.d_theoretical = theoretical_dp(v, conv.c);
    const double c = static_cast<double>(conv.c);
    row.bound = std::log(c) / c;
    return row;
  });
  return table;
}

}  // namespace ecd::circle
