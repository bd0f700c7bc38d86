#include "ecd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ecd/error.hpp"

namespace ecd {

// ---------------------------------------------------------------- Box

Box Box::unit(std::size_t dimension) {
  return Box{std::vector<double>(dimension, 0.0), std::vector<double>(dimension, 1.0)};
}

Box Box::unbounded(std::size_t dimension) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Box{std::vector<double>(dimension, -inf), std::vector<double>(dimension, inf)};
}

bool Box::contains(std::span<const double> x) const noexcept {
  if (x.size() != dimension()) return false;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (!(x[d] >= lower[d] && x[d] <= upper[d])) return false;
  }
  return true;
}

bool Box::is_finite() const noexcept {
  for (std::size_t d = 0; d < dimension(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d])) return false;
  }
  return true;
}

Box Box::project(std::span<const std::size_t> axes) const {
  Box out;
  for (std::size_t axis : axes) {
    if (axis >= dimension()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "projection axis " + std::to_string(axis) + " exceeds box dimension " +
                      std::to_string(dimension()));
    }
    out.lower.push_back(lower[axis]);
    out.upper.push_back(upper[axis]);
  }
  return out;
}

double AxisWrap::reduce(double value) const noexcept {
  double r = std::fmod(value - origin, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative value plus the period can round up to the period.
  if (r >= period) r = 0.0;
  return origin + r;
}

// ---------------------------------------------------------------- MapSystem

MapSystem::MapSystem(std::string name, Box domain, std::vector<double> params, StepFunction step,
                     JacobianFunction jacobian, std::vector<AxisWrap> wraps)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      params_(std::move(params)),
      step_(std::move(step)),
      jacobian_(std::move(jacobian)),
      wraps_(std::move(wraps)) {
  if (domain_.dimension() == 0 || domain_.upper.size() != domain_.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "map '" + name_ + "' has a malformed domain box");
  }
  if (!step_) throw Error(ErrorCode::DimensionMismatch, "map '" + name_ + "' has no step function");
  for (const auto& w : wraps_) {
    if (w.axis >= domain_.dimension() || !(w.period > 0.0)) {
      throw Error(ErrorCode::DimensionMismatch, "map '" + name_ + "' has an invalid wrap axis");
    }
  }
}

void MapSystem::step(std::span<const double> x, std::span<double> out) const {
  step_(x, out);
  for (const auto& w : wraps_) out[w.axis] = w.reduce(out[w.axis]);
}

Point MapSystem::step(std::span<const double> x) const {
  Point out(dimension());
  step(x, out);
  return out;
}

Eigen::MatrixXd MapSystem::jacobian(std::span<const double> x) const {
  if (!jacobian_) {
    throw Error(ErrorCode::DimensionMismatch, "map '" + name_ + "' has no analytic Jacobian");
  }
  return jacobian_(x);
}

double MapSystem::axis_difference(std::size_t axis, double a, double b) const noexcept {
  double diff = a - b;
  for (const auto& w : wraps_) {
    if (w.axis != axis) continue;
    diff = std::remainder(diff, w.period);
  }
  return diff;
}

// ---------------------------------------------------------------- Orbit

Orbit::Orbit(std::size_t dimension, std::vector<double> coordinates, std::size_t skip)
    : dimension_(dimension), data_(std::move(coordinates)), skip_(skip) {
  if (dimension_ == 0 || data_.size() % dimension_ != 0) {
    throw Error(ErrorCode::DimensionMismatch, "orbit coordinate count is not a multiple of the dimension");
  }
}

Orbit Orbit::subsample(std::size_t stride) const {
  if (stride == 0) throw Error(ErrorCode::ParamOutOfRange, "time-scale stride must be positive");
  if (stride == 1) return *this;
  std::vector<double> out;
  out.reserve((length() / stride + 1) * dimension_);
  for (std::size_t k = 0; k < length(); k += stride) {
    auto p = point(k);
    out.insert(out.end(), p.begin(), p.end());
  }
  return Orbit(dimension_, std::move(out), skip_);
}

Orbit Orbit::project(std::span<const std::size_t> axes) const {
  if (axes.empty()) throw Error(ErrorCode::DimensionMismatch, "empty coordinate projection");
  for (std::size_t a : axes) {
    if (a >= dimension_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "projection axis " + std::to_string(a) + " exceeds orbit dimension " +
                      std::to_string(dimension_));
    }
  }
  std::vector<double> out;
  out.reserve(length() * axes.size());
  for (std::size_t k = 0; k < length(); ++k) {
    for (std::size_t a : axes) out.push_back(coordinate(k, a));
  }
  return Orbit(axes.size(), std::move(out), skip_);
}

Box Orbit::bounding_box() const {
  if (length() == 0) throw Error(ErrorCode::EmptyInput, "bounding box of an empty orbit");
  Box box{std::vector<double>(point(0).begin(), point(0).end()),
          std::vector<double>(point(0).begin(), point(0).end())};
  for (std::size_t k = 1; k < length(); ++k) {
    for (std::size_t d = 0; d < dimension_; ++d) {
      box.lower[d] = std::min(box.lower[d], coordinate(k, d));
      box.upper[d] = std::max(box.upper[d], coordinate(k, d));
    }
  }
  for (std::size_t d = 0; d < dimension_; ++d) {
    if (!(box.upper[d] > box.lower[d])) {
      box.lower[d] -= 0.5;
      box.upper[d] += 0.5;
    }
  }
  return box;
}

// ---------------------------------------------------------------- InitialEnsemble

InitialEnsemble::InitialEnsemble(std::vector<Point> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {}

InitialEnsemble InitialEnsemble::single(Point x0) { return InitialEnsemble({std::move(x0)}, {1.0}); }

InitialEnsemble InitialEnsemble::weighted(std::vector<Point> points, std::vector<double> weights) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "initial ensemble is empty");
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble has " + std::to_string(points.size()) +
                                                  " points but " + std::to_string(weights.size()) +
                                                  " weights");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidDistribution, "negative ensemble weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidDistribution, "ensemble weights do not sum to 1");
  }
  for (const auto& p : points) {
    if (p.size() != points.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, "ensemble points have mixed dimensions");
    }
  }
  return InitialEnsemble(std::move(points), std::move(weights));
}

InitialEnsemble InitialEnsemble::uniform(const Box& box, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::EmptyInput, "initial ensemble is empty");
  if (!box.is_finite()) throw Error(ErrorCode::ParamOutOfRange, "uniform ensemble needs a finite box");
  std::mt19937_64 rng(seed);
  std::vector<Point> points(count, Point(box.dimension()));
  for (auto& p : points) {
    for (std::size_t d = 0; d < box.dimension(); ++d) {
      // Explicit 53-bit mantissa draw: std::uniform_real_distribution output is
      // implementation-defined, this is not.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      p[d] = box.lower[d] + u * box.width(d);
    }
  }
  return InitialEnsemble(std::move(points), std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

// ---------------------------------------------------------------- iteration

Orbit iterate_map(const MapSystem& system, std::span<const double> x0, std::size_t skip,
                  std::size_t length, IterateOptions options) {
  const std::size_t dim = system.dimension();
  if (x0.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "initial point has dimension " +
                                                  std::to_string(x0.size()) + ", map '" +
                                                  system.name() + "' has " + std::to_string(dim));
  }
  if (length < 2) throw Error(ErrorCode::ParamOutOfRange, "orbit length must be at least 2");

  auto check = [&](std::span<const double> x, std::size_t step) {
    const bool finite = std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
    if (!finite) {
      throw DomainEscapeError(step, Point(x.begin(), x.end()), "non-finite iterate");
    }
    if (options.check_domain && !system.domain().contains(x)) {
      throw DomainEscapeError(step, Point(x.begin(), x.end()), system.name());
    }
  };

  Point current(x0.begin(), x0.end());
  Point next(dim);
  check(current, 0);
  for (std::size_t k = 1; k <= skip; ++k) {
    system.step(current, next);
    check(next, k);
    current.swap(next);
  }

  std::vector<double> data;
  data.reserve(length * dim);
  data.insert(data.end(), current.begin(), current.end());
  for (std::size_t k = 1; k < length; ++k) {
    std::span<const double> prev(data.data() + (k - 1) * dim, dim);
    system.step(prev, next);
    check(next, skip + k);
    data.insert(data.end(), next.begin(), next.end());
  }
  return Orbit(dim, std::move(data), skip);
}

// ---------------------------------------------------------------- built-in maps

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::vector<MapInfo> kCatalog = {
    {"logistic", 1, {"a"}, {3.71}, {0.3}, "x -> a x (1 - x) on [0,1], 0 <= a <= 4"},
    {"circle", 1, {"v"}, {0.6180339887498949}, {0.5},
     "theta -> theta + 2 pi v (mod 2 pi) on [0,2pi), 0 < v < 1"},
    {"tent", 1, {"mu"}, {2.0}, {0.3}, "x -> mu min(x, 1 - x) on [0,1], 0 <= mu <= 2"},
    {"henon", 2, {"a", "b"}, {1.4, 0.3}, {0.1, 0.1},
     "(x,y) -> (1 - a x^2 + y, b x) on [-1.5,1.5]x[-0.5,0.5]"},
    {"baker", 2, {}, {}, {0.3, 0.7},
     "(x,y) -> (2x, y/2) for x < 1/2, (2x - 1, (y + 1)/2) otherwise, on [0,1]^2"},
    {"tinkerbell", 2, {"a", "b", "c", "d"}, {0.9, -0.6013, 2.0, 0.5}, {-0.72, -0.64},
     "(x,y) -> (x^2 - y^2 + a x + b y, 2 x y + c x + d y) on [-1.5,0.75]x[-1.75,0.75]"},
};

void require_range(std::string_view map, std::string_view param, double value, double lo, double hi,
                   bool open_lo = false, bool open_hi = false) {
  const bool ok = std::isfinite(value) && (open_lo ? value > lo : value >= lo) &&
                  (open_hi ? value < hi : value <= hi);
  if (!ok) {
    std::ostringstream msg;
    msg << map << " parameter " << param << " = " << value << " outside " << (open_lo ? "(" : "[")
        << lo << ", " << hi << (open_hi ? ")" : "]");
    throw Error(ErrorCode::ParamOutOfRange, msg.str());
  }
}

void require_finite(std::string_view map, std::string_view param, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::ParamOutOfRange,
                std::string(map) + " parameter " + std::string(param) + " is not finite");
  }
}

}  // namespace

const std::vector<MapInfo>& map_catalog() { return kCatalog; }

const MapInfo& map_info(std::string_view name) {
  for (const auto& info : kCatalog) {
    if (info.name == name) return info;
  }
  throw Error(ErrorCode::UnknownMap, "no built-in map named '" + std::string(name) + "'");
}

MapSystem builtin_map(std::string_view name, std::vector<double> params) {
  const MapInfo& info = map_info(name);
  if (params.empty()) params = info.default_params;
  if (params.size() != info.default_params.size()) {
    throw Error(ErrorCode::ParamOutOfRange, info.name + " expects " +
                                                std::to_string(info.default_params.size()) +
                                                " parameters, got " + std::to_string(params.size()));
  }

  if (name == "logistic") {
    const double a = params[0];
    require_range(name, "a", a, 0.0, 4.0);
    return MapSystem(
        info.name, Box::interval(0.0, 1.0), params,
        [a](std::span<const double> x, std::span<double> out) { out[0] = a * x[0] * (1.0 - x[0]); },
        [a](std::span<const double> x) {
          Eigen::MatrixXd j(1, 1);
          j(0, 0) = a * (1.0 - 2.0 * x[0]);
          return j;
        });
  }
  if (name == "circle") {
    const double v = params[0];
    require_range(name, "v", v, 0.0, 1.0, true, true);
    const double omega = kTwoPi * v;
    return MapSystem(
        info.name, Box::interval(0.0, kTwoPi), params,
        [omega](std::span<const double> x, std::span<double> out) { out[0] = x[0] + omega; },
        [](std::span<const double>) { return Eigen::MatrixXd::Identity(1, 1).eval(); },
        {AxisWrap{0, 0.0, kTwoPi}});
  }
  if (name == "tent") {
    const double mu = params[0];
    require_range(name, "mu", mu, 0.0, 2.0);
    return MapSystem(
        info.name, Box::interval(0.0, 1.0), params,
        [mu](std::span<const double> x, std::span<double> out) {
          out[0] = mu * std::min(x[0], 1.0 - x[0]);
        },
        [mu](std::span<const double> x) {
          Eigen::MatrixXd j(1, 1);
          j(0, 0) = x[0] < 0.5 ? mu : -mu;
          return j;
        });
  }
  if (name == "henon") {
    const double a = params[0];
    const double b = params[1];
    require_finite(name, "a", a);
    require_finite(name, "b", b);
    return MapSystem(
        info.name, Box{{-1.5, -0.5}, {1.5, 0.5}}, params,
        [a, b](std::span<const double> x, std::span<double> out) {
          out[0] = 1.0 - a * x[0] * x[0] + x[1];
          out[1] = b * x[0];
        },
        [a, b](std::span<const double> x) {
          Eigen::MatrixXd j(2, 2);
          j << -2.0 * a * x[0], 1.0, b, 0.0;
          return j;
        });
  }
  if (name == "baker") {
    return MapSystem(
        info.name, Box::unit(2), params,
        [](std::span<const double> x, std::span<double> out) {
          if (x[0] < 0.5) {
            out[0] = 2.0 * x[0];
            out[1] = 0.5 * x[1];
          } else {
            out[0] = 2.0 * x[0] - 1.0;
            out[1] = 0.5 * (x[1] + 1.0);
          }
        },
        [](std::span<const double>) {
          Eigen::MatrixXd j(2, 2);
          j << 2.0, 0.0, 0.0, 0.5;
          return j;
        });
  }
  // tinkerbell
  const double a = params[0], b = params[1], c = params[2], d = params[3];
  require_finite(name, "a", a);
  require_finite(name, "b", b);
  require_finite(name, "c", c);
  require_finite(name, "d", d);
  return MapSystem(
      info.name, Box{{-1.5, -1.75}, {0.75, 0.75}}, params,
      [a, b, c, d](std::span<const double> x, std::span<double> out) {
        out[0] = x[0] * x[0] - x[1] * x[1] + a * x[0] + b * x[1];
        out[1] = 2.0 * x[0] * x[1] + c * x[0] + d * x[1];
      },
      [a, b, c, d](std::span<const double> x) {
        Eigen::MatrixXd j(2, 2);
        j << 2.0 * x[0] + a, -2.0 * x[1] + b, 2.0 * x[1] + c, 2.0 * x[0] + d;
        return j;
      });
}

MapSystem linear_map(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "linear map needs a nonempty square matrix");
  }
  const auto n = static_cast<std::size_t>(matrix.rows());
  std::vector<double> params(matrix.data(), matrix.data() + matrix.size());
  return MapSystem(
      "linear", Box::unbounded(n), std::move(params),
      [matrix](std::span<const double> x, std::span<double> out) {
        Eigen::Map<const Eigen::VectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
        Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) = matrix * in;
      },
      [matrix](std::span<const double>) { return matrix; });
}

Eigen::MatrixXd finite_difference_jacobian(const MapSystem& system, std::span<const double> x,
                                           double h) {
  const std::size_t n = system.dimension();
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "point dimension mismatch");
  const Box& box = system.domain();
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Point plus(x.begin(), x.end());
  Point minus(x.begin(), x.end());
  for (std::size_t col = 0; col < n; ++col) {
    double hi = x[col] + h;
    double lo = x[col] - h;
    if (hi > box.upper[col]) hi = x[col];
    if (lo < box.lower[col]) lo = x[col];
    plus[col] = hi;
    minus[col] = lo;
    const Point fp = system.step(plus);
    const Point fm = system.step(minus);
    for (std::size_t row = 0; row < n; ++row) {
      jac(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          system.axis_difference(row, fp[row], fm[row]) / (hi - lo);
    }
    plus[col] = x[col];
    minus[col] = x[col];
  }
  return jac;
}

}  // namespace ecd
