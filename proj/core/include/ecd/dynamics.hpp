#pragma once

// Discrete-time maps on boxes in R^N, orbit generation and Jacobians.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace ecd {

inline constexpr std::size_t kDefaultSkip = 1000;
inline constexpr std::size_t kDefaultLength = 100000;

using Point = std::vector<double>;

/// Axis-aligned closed box [lower_1, upper_1] x ... x [lower_N, upper_N].
/// Infinite bounds are allowed (used for maps that are not self-maps of a
/// bounded set, e.g. linear test maps).
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box interval(double lo, double hi) { return Box{{lo}, {hi}}; }
  static Box unit(std::size_t dimension);
  static Box unbounded(std::size_t dimension);

  std::size_t dimension() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x) const noexcept;
  bool is_finite() const noexcept;
  double width(std::size_t axis) const { return upper[axis] - lower[axis]; }

  /// Sub-box restricted to the listed axes, in the listed order.
  Box project(std::span<const std::size_t> axes) const;

  bool operator==(const Box&) const = default;
};

/// Modular reduction of one coordinate into [origin, origin + period).
struct AxisWrap {
  std::size_t axis = 0;
  double origin = 0.0;
  double period = 0.0;

  double reduce(double value) const noexcept;
};

using StepFunction = std::function<void(std::span<const double> x, std::span<double> out)>;
using JacobianFunction = std::function<Eigen::MatrixXd(std::span<const double> x)>;

/// A parameterized self-map F of a box. Jacobian rows index output
/// components and columns index input components: J(r, c) = dF_r / dx_c.
class MapSystem {
 public:
  MapSystem(std::string name, Box domain, std::vector<double> params, StepFunction step,
            JacobianFunction jacobian = {}, std::vector<AxisWrap> wraps = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return domain_.dimension(); }
  const Box& domain() const noexcept { return domain_; }
  const std::vector<double>& params() const noexcept { return params_; }
  const std::vector<AxisWrap>& wraps() const noexcept { return wraps_; }
  bool has_jacobian() const noexcept { return static_cast<bool>(jacobian_); }

  /// One application of F, wrap included. `out` must not alias `x`.
  void step(std::span<const double> x, std::span<double> out) const;
  Point step(std::span<const double> x) const;

  /// Analytic Jacobian; throws if the map has none.
  Eigen::MatrixXd jacobian(std::span<const double> x) const;

  /// Wrap-aware difference a - b along an axis (reduced to half a period on
  /// wrapped axes), used by finite differencing.
  double axis_difference(std::size_t axis, double a, double b) const noexcept;

 private:
  std::string name_;
  Box domain_;
  std::vector<double> params_;
  StepFunction step_;
  JacobianFunction jacobian_;
  std::vector<AxisWrap> wraps_;
};

/// Finite orbit segment (x_m, ..., x_{m+n}) stored contiguously, row-major.
class Orbit {
 public:
  Orbit(std::size_t dimension, std::vector<double> coordinates, std::size_t skip = 0);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t length() const noexcept { return dimension_ ? data_.size() / dimension_ : 0; }
  std::size_t skip() const noexcept { return skip_; }

  std::span<const double> point(std::size_t k) const {
    return {data_.data() + k * dimension_, dimension_};
  }
  double coordinate(std::size_t k, std::size_t axis) const { return data_[k * dimension_ + axis]; }
  std::span<const double> coordinates() const noexcept { return data_; }

  /// Every stride-th point starting at index 0.
  Orbit subsample(std::size_t stride) const;
  /// Keeps only the listed axes, in the listed order.
  Orbit project(std::span<const std::size_t> axes) const;
  /// Smallest box holding every point; zero-width axes are widened by 0.5
  /// on each side so the box can still be partitioned.
  Box bounding_box() const;

  bool operator==(const Orbit&) const = default;

 private:
  std::size_t dimension_;
  std::vector<double> data_;
  std::size_t skip_;
};

/// Either a single initial point or a weighted finite sample standing in for
/// an initial measure.
class InitialEnsemble {
 public:
  static InitialEnsemble single(Point x0);
  static InitialEnsemble weighted(std::vector<Point> points, std::vector<double> weights);
  /// `count` points drawn uniformly from a finite box with equal weights.
  static InitialEnsemble uniform(const Box& box, std::size_t count, std::uint64_t seed);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  InitialEnsemble(std::vector<Point> points, std::vector<double> weights);

  std::vector<Point> points_;
  std::vector<double> weights_;
};

struct IterateOptions {
  /// When false, only non-finite iterates are rejected (auto-box mode).
  bool check_domain = true;
};

/// Returns (F^skip x0, ..., F^(skip+length-1) x0). Throws DomainEscapeError
/// when an iterate leaves the domain, naming the absolute step index.
Orbit iterate_map(const MapSystem& system, std::span<const double> x0, std::size_t skip,
                  std::size_t length, IterateOptions options = {});

/// Documented catalog entry for a built-in map.
struct MapInfo {
  std::string name;
  std::size_t dimension;
  std::vector<std::string> param_names;
  std::vector<double> default_params;
  Point default_x0;
  std::string description;
};

const std::vector<MapInfo>& map_catalog();
const MapInfo& map_info(std::string_view name);

/// Built-in maps: logistic, circle, tent, henon, baker, tinkerbell. An empty
/// parameter vector selects the catalog defaults.
MapSystem builtin_map(std::string_view name, std::vector<double> params = {});

/// x -> A x on an unbounded box (constant Jacobian A).
MapSystem linear_map(const Eigen::MatrixXd& matrix);

/// Central-difference Jacobian. Falls back to one-sided differences when a
/// probe would leave the domain.
Eigen::MatrixXd finite_difference_jacobian(const MapSystem& system, std::span<const double> x,
                                           double h = 1e-6);

}  // namespace ecd
