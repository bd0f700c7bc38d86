#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ecd/circlemap.hpp"
#include "ecd/error.hpp"
#include "ecd/io.hpp"
#include "ecd/lyapunov.hpp"
#include "ecd/observation.hpp"
#include "ecd/parallel.hpp"
#include "ecd/quantum.hpp"
#include "ecd/svg.hpp"

namespace ecd::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Output stream: the --out file when given, otherwise the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

LogBase log_base(const RunConfig& c) {
  if (c.log_base == "e") return LogBase::Natural;
  if (c.log_base == "2") return LogBase::Two;
  throw UsageError("--log-base must be 'e' or '2'");
}

const char* d_column(LogBase base) { return base == LogBase::Two ? "D_bits" : "D_nats"; }

bool json_output(const RunConfig& c) {
  if (c.format == "csv") return false;
  if (c.format == "json") return true;
  throw UsageError("--format must be 'csv' or 'json'");
}

/// Replaces separators so a message fits in one CSV field.
std::string csv_field(std::string text) {
  for (char& ch : text) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return text;
}

/// JSON has no infinities; non-finite values are written as strings.
nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

std::vector<std::size_t> cells_of(const RunConfig& c) {
  try {
    return parse_partition_spec(c.cells);
  } catch (const Error& e) {
    throw UsageError("invalid --cells '" + c.cells + "': " + e.what());
  }
}

const MapInfo& info_of(const RunConfig& c) {
  try {
    return map_info(c.map);
  } catch (const Error&) {
    throw UsageError("unknown map '" + c.map + "'");
  }
}

/// Catalog defaults overridden by the explicit parameters; `override_name`
/// (when non-empty) is set to `override_value`.
std::vector<double> params_of(const RunConfig& c, const std::string& override_name = {},
                              double override_value = 0.0) {
  const MapInfo& info = info_of(c);
  std::vector<double> params = info.default_params;
  auto index_of = [&](const std::string& name) {
    for (std::size_t k = 0; k < info.param_names.size(); ++k) {
      if (info.param_names[k] == name) return k;
    }
    throw UsageError("map '" + c.map + "' has no parameter '" + name + "'");
  };
  for (const auto& [name, value] : c.params) params[index_of(name)] = value;
  if (!override_name.empty()) params[index_of(override_name)] = override_value;
  return params;
}

std::string params_text(const MapInfo& info, const std::vector<double>& params) {
  std::string out;
  for (std::size_t k = 0; k < params.size(); ++k) {
    out += (k ? ";" : "") + info.param_names[k] + "=" + format_number(params[k]);
  }
  return out;
}

Point x0_of(const RunConfig& c) {
  const MapInfo& info = info_of(c);
  if (c.x0.empty()) return info.default_x0;
  if (c.x0.size() != info.dimension) {
    throw UsageError("--x0 has " + std::to_string(c.x0.size()) + " coordinates, map '" + c.map + "' needs " +
                     std::to_string(info.dimension));
  }
  return c.x0;
}

InitialEnsemble ensemble_of(const RunConfig& c, const MapSystem& system) {
  if (c.ensemble == 0) return InitialEnsemble::single(x0_of(c));
  return InitialEnsemble::uniform(system.domain(), c.ensemble, c.seed);
}

void require_length(const RunConfig& c) {
  if (c.n < 2) throw UsageError("--n must be at least 2");
}

std::string svg_path(const std::string& prefix, const std::string& suffix) {
  std::string base = prefix;
  if (base.size() > 4 && base.compare(base.size() - 4, 4, ".svg") == 0) base.resize(base.size() - 4);
  return base + suffix + ".svg";
}

// ------------------------------------------------------------------ ecd

int cmd_ecd(const RunConfig& c, std::ostream& out) {
  const LogBase base = log_base(c);
  const bool json = json_output(c);
  const auto cells = cells_of(c);
  io::EcdRecord record;
  record.cells = c.cells;
  record.base = base;
  if (!c.orbit_file.empty()) {
    const Orbit orbit = io::load_orbit_csv(c.orbit_file);
    record.map = "orbit";
    record.params = csv_field(c.orbit_file);
    record.n = orbit.length();
    if (!c.auto_box) {
      throw Error(ErrorCode::IncompatiblePartition, "an ingested orbit has no domain; pass --auto-box");
    }
    record.result = ecd_of_orbit(orbit, ObservationSpec::partition(cells, true));
  } else {
    require_length(c);
    const MapSystem system = builtin_map(c.map, params_of(c));
    record.map = c.map;
    record.params = params_text(info_of(c), system.params());
    record.skip = c.skip;
    record.n = c.n;
    record.result =
        ecd_of_system(system, ensemble_of(c, system), ObservationSpec::partition(cells, c.auto_box), c.skip, c.n);
  }
  record.classification = classify(record.result, c.epsilon);
  Sink sink(c.out, out);
  if (json) {
    *sink << io::ecd_json(record) << '\n';
  } else {
    *sink << io::ecd_csv_header(base) << '\n' << io::ecd_csv_row(record) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

std::vector<double> grid_of(const RunConfig& c) {
  if (!c.values.empty()) return c.values;
  if (!c.from || !c.to || !c.step) throw UsageError("sweep needs --values or all of --from, --to, --step");
  if (!(*c.step > 0.0) || !std::isfinite(*c.step)) throw UsageError("--step must be positive");
  if (!(*c.from <= *c.to)) throw UsageError("empty parameter range: --from exceeds --to");
  // Tolerance absorbs rounding of (to - from) / step at an exact endpoint.
  const double span = (*c.to - *c.from) / *c.step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = *c.from + static_cast<double>(k) * *c.step;
  return grid;
}

std::string swept_param(const RunConfig& c) {
  if (!c.param.empty()) return c.param;
  const MapInfo& info = info_of(c);
  if (info.param_names.empty()) throw UsageError("map '" + c.map + "' has no parameters to sweep");
  return info.param_names.front();
}

struct SweepRow {
  double param = 0.0;
  double d = kNaN;
  double lambda = kNaN;
  bool converged = false;
  std::string warning;
};

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const LogBase base = log_base(c);
  const bool json = json_output(c);
  const auto cells = cells_of(c);
  require_length(c);
  const std::string name = swept_param(c);
  const std::vector<double> grid = grid_of(c);
  params_of(c, name, grid.front());  // validates names before any work starts
  const Point x0 = x0_of(c);

  const auto rows = parallel_map(grid.size(), c.threads, [&](std::size_t k) {
    SweepRow row;
    row.param = grid[k];
    std::vector<std::string> warnings;
    try {
      const MapSystem system = builtin_map(c.map, params_of(c, name, grid[k]));
      try {
        row.d = from_nats(
            ecd_of_system(system, ensemble_of(c, system), ObservationSpec::partition(cells, c.auto_box), c.skip, c.n)
                .value,
            base);
      } catch (const Error& e) {
        warnings.push_back(std::string("ecd: ") + e.what());
      }
      if (system.has_jacobian()) {
        try {
          LyapunovOptions options;
          options.reorthonormalize_every = c.reorthonormalize;
          options.check_domain = !c.auto_box;
          const auto l = lyapunov(system, x0, c.skip, c.n, options);
          row.lambda = l.top_exponent;
          row.converged = l.converged;
        } catch (const Error& e) {
          warnings.push_back(std::string("lyapunov: ") + e.what());
        }
      } else {
        warnings.push_back("lyapunov: map has no Jacobian");
      }
    } catch (const Error& e) {
      warnings.push_back(e.what());
    }
    for (std::size_t w = 0; w < warnings.size(); ++w) row.warning += (w ? " | " : "") + warnings[w];
    row.warning = csv_field(row.warning);
    return row;
  });

  Sink sink(c.out, out);
  if (json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["param"] = r.param;
      j[d_column(base)] = json_number(r.d);
      j["lambda"] = json_number(r.lambda);
      j["converged"] = r.converged;
      j["warning"] = r.warning;
      arr.push_back(std::move(j));
    }
    *sink << arr.dump(2) << '\n';
  } else {
    *sink << "param," << d_column(base) << ",lambda,converged,warning\n";
    for (const auto& r : rows) {
      *sink << format_number(r.param) << ',' << format_number(r.d) << ',' << format_number(r.lambda) << ','
            << (r.converged ? 1 : 0) << ',' << r.warning << '\n';
    }
  }

  if (!c.svg.empty()) {
    svg::Series ds{"D", {}, {}, false, "#1f77b4"}, ls{"lambda", {}, {}, false, "#d62728"};
    for (const auto& r : rows) {
      ds.x.push_back(r.param);
      ds.y.push_back(r.d);
      ls.x.push_back(r.param);
      ls.y.push_back(r.lambda);
    }
    svg::write(svg_path(c.svg, "-ecd"), {ds},
               {"Chaos degree, " + c.map + " map", name, std::string("D (") + (base == LogBase::Two ? "bits" : "nats") + ")"});
    svg::write(svg_path(c.svg, "-lyapunov"), {svg::Series{"0", {grid.front(), grid.back()}, {0.0, 0.0}, false, "#999999"}, ls},
               {"Lyapunov exponent, " + c.map + " map", name, "lambda"});
  }
  return 0;
}

// --------------------------------------------------------- bifurcation

int cmd_bifurcation(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (info_of(c).dimension != 1) throw UsageError("bifurcation needs a one-dimensional map");
  if (c.keep < 1) throw UsageError("--keep must be at least 1");
  const std::string name = swept_param(c);
  const std::vector<double> grid = grid_of(c);
  params_of(c, name, grid.front());
  const Point x0 = x0_of(c);

  struct Column {
    std::vector<double> points;
    std::string warning;
  };
  const auto columns = parallel_map(grid.size(), c.threads, [&](std::size_t k) {
    Column col;
    try {
      const MapSystem system = builtin_map(c.map, params_of(c, name, grid[k]));
      const Orbit orbit = iterate_map(system, x0, c.skip, std::max<std::size_t>(c.keep, 2));
      for (std::size_t i = orbit.length() - c.keep; i < orbit.length(); ++i) col.points.push_back(orbit.coordinate(i, 0));
    } catch (const Error& e) {
      col.points.push_back(kNaN);
      col.warning = e.what();
    }
    return col;
  });

  Sink sink(c.out, out);
  const bool json = json_output(c);
  if (json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      nlohmann::ordered_json j;
      j["param"] = grid[k];
      nlohmann::ordered_json xs = nlohmann::ordered_json::array();
      for (double x : columns[k].points) xs.push_back(json_number(x));
      j["x"] = std::move(xs);
      arr.push_back(std::move(j));
    }
    *sink << arr.dump(2) << '\n';
  } else {
    *sink << "param,x\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (double x : columns[k].points) *sink << format_number(grid[k]) << ',' << format_number(x) << '\n';
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!columns[k].warning.empty()) err << "warning: " << name << '=' << format_number(grid[k]) << ": " << columns[k].warning << '\n';
  }

  if (!c.svg.empty()) {
    svg::Series s{"", {}, {}, true, "#000000"};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (double x : columns[k].points) {
        s.x.push_back(grid[k]);
        s.y.push_back(x);
      }
    }
    svg::write(svg_path(c.svg, ""), {s}, {"Bifurcation diagram, " + c.map + " map", name, "x"});
  }
  return 0;
}

// -------------------------------------------------------- circle-decay

int cmd_circle_decay(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RunConfig circle = c;
  circle.map = "circle";
  const double v = params_of(circle).front();
  if (!(v > 0.0 && v < 1.0)) throw UsageError("--v must lie in (0, 1)");
  if (c.convergents == 0) throw UsageError("--convergents must be at least 1");
  require_length(c);
  circle::DecayOptions options;
  options.convergents = c.convergents;
  options.min_denominator = c.min_denominator;
  options.length = c.n;
  options.theta0 = c.theta0;
  options.workers = c.threads;
  const auto table = circle::convergent_decay(v, options);
  if (!table.warning.empty()) err << "warning: " << table.warning << '\n';

  Sink sink(c.out, out);
  if (json_output(c)) {
    nlohmann::ordered_json j;
    j["v"] = v;
    j["rational"] = table.rational;
    j["truncated"] = table.truncated;
    j["warning"] = table.warning;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"j", r.j}, {"b_j", r.b}, {"c_j", r.c}, {"D_emp", r.d_empirical}, {"D_theo", r.d_theoretical}, {"bound", r.bound}});
    }
    j["rows"] = std::move(rows);
    *sink << j.dump(2) << '\n';
  } else {
    *sink << "j,c_j,D_emp,D_theo,bound\n";
    for (const auto& r : table.rows) {
      *sink << r.j << ',' << r.c << ',' << format_number(r.d_empirical) << ',' << format_number(r.d_theoretical)
            << ',' << format_number(r.bound) << '\n';
    }
  }

  if (!c.svg.empty()) {
    svg::Series emp{"D_emp", {}, {}, true, "#1f77b4"}, theo{"D_theo", {}, {}, false, "#ff7f0e"},
        bound{"log c / c", {}, {}, false, "#2ca02c"};
    for (const auto& r : table.rows) {
      const double x = static_cast<double>(r.c);
      emp.x.push_back(x);
      emp.y.push_back(r.d_empirical);
      theo.x.push_back(x);
      theo.y.push_back(r.d_theoretical);
      bound.x.push_back(x);
      bound.y.push_back(r.bound);
    }
    svg::PlotOptions opts{"Chaos degree along convergents, v = " + format_number(v), "c_j", "D (nats)"};
    opts.log_y = true;
    svg::write(svg_path(c.svg, ""), {bound, theo, emp}, opts);
  }
  return 0;
}

// ------------------------------------------------------------ lyapunov

int cmd_lyapunov(const RunConfig& c, std::ostream& out) {
  if (c.n < 1) throw UsageError("--n must be at least 1");
  const MapSystem system = builtin_map(c.map, params_of(c));
  LyapunovOptions options;
  options.reorthonormalize_every = c.reorthonormalize;
  options.check_domain = !c.auto_box;
  const auto r = lyapunov(system, x0_of(c), c.skip, c.n, options);
  std::vector<double> spectrum = r.spectrum.empty() ? std::vector<double>{r.top_exponent} : r.spectrum;

  Sink sink(c.out, out);
  if (json_output(c)) {
    nlohmann::ordered_json j;
    j["map"] = c.map;
    j["params"] = params_text(info_of(c), system.params());
    j["n"] = r.n_used;
    j["lambda_top"] = json_number(r.top_exponent);
    j["converged"] = r.converged;
    j["singular"] = r.singular;
    nlohmann::ordered_json spec = nlohmann::ordered_json::array();
    for (double l : spectrum) spec.push_back(json_number(l));
    j["spectrum"] = std::move(spec);
    nlohmann::ordered_json hist = nlohmann::ordered_json::array();
    for (const auto& [k, l] : r.convergence_history) hist.push_back({{"n", k}, {"lambda", json_number(l)}});
    j["history"] = std::move(hist);
    *sink << j.dump(2) << '\n';
  } else {
    *sink << "map,params,n,lambda_top,converged";
    for (std::size_t k = 0; k < spectrum.size(); ++k) *sink << ",lambda_" << k + 1;
    *sink << '\n'
          << c.map << ',' << params_text(info_of(c), system.params()) << ',' << r.n_used << ','
          << format_number(r.top_exponent) << ',' << (r.converged ? 1 : 0);
    for (double l : spectrum) *sink << ',' << format_number(l);
    *sink << '\n';
  }
  return 0;
}

// --------------------------------------------------------- quantum-ecd

int cmd_quantum_ecd(const RunConfig& c, std::ostream& out) {
  using namespace quantum;
  std::optional<DensityMatrix> rho;
  if (!c.state_file.empty()) {
    rho.emplace(io::load_matrices(c.state_file).front());
  } else {
    if (c.dim == 0 || c.dim > kMaxDimension) throw UsageError("--dim must be in [1, 32]");
    Vector e0 = Vector::Zero(static_cast<Eigen::Index>(c.dim));
    e0(0) = 1.0;
    rho.emplace(DensityMatrix::pure(e0));
  }
  const std::size_t d = rho->dim();

  std::optional<QuantumChannel> channel;
  if (!c.kraus_file.empty()) {
    channel.emplace(io::load_matrices(c.kraus_file));
  } else if (c.channel == "identity") {
    channel.emplace(QuantumChannel::identity(d));
  } else if (c.channel == "depolarizing") {
    if (!(c.p >= 0.0 && c.p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
    channel.emplace(QuantumChannel::depolarizing(d, c.p));
  } else if (c.channel == "fully-depolarizing") {
    channel.emplace(QuantumChannel::fully_depolarizing(d));
  } else {
    throw UsageError("--channel must be identity, depolarizing or fully-depolarizing (or pass --kraus)");
  }

  ObservationSpec obs;
  if (c.pvm == "computational") {
    obs = obs.then(QuantumPVM{std::make_shared<const PVM>(PVM::computational(d))});
  } else if (c.pvm != "none") {
    throw UsageError("--pvm must be 'none' or 'computational'");
  }
  obs = obs.then(QuantumSchatten{});
  const auto r = quantum_ecd_observed(*rho, *channel, obs, c.trials, c.seed);
  const LogBase base = log_base(c);

  Sink sink(c.out, out);
  if (json_output(c)) {
    nlohmann::ordered_json j;
    j["d"] = d;
    j["pvm"] = c.pvm;
    j["trials"] = r.trials;
    j["seed"] = c.seed;
    j["D"] = from_nats(r.value, base);
    j["D_canonical"] = from_nats(r.canonical_value, base);
    j["degenerate"] = r.degenerate;
    *sink << j.dump(2) << '\n';
  } else {
    *sink << "d,pvm,trials,seed," << d_column(base) << ",D_canonical,degenerate\n"
          << d << ',' << c.pvm << ',' << r.trials << ',' << c.seed << ',' << format_number(from_nats(r.value, base))
          << ',' << format_number(from_nats(r.canonical_value, base)) << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
  return 0;
}

// -------------------------------------------------------------- ingest

int cmd_ingest(const RunConfig& c, std::ostream& out) {
  if (c.orbit_file.empty()) throw UsageError("ingest needs --orbit-file");
  const Orbit orbit = io::load_orbit_csv(c.orbit_file);
  const Box box = orbit.bounding_box();
  Sink sink(c.out, out);
  if (json_output(c)) {
    nlohmann::ordered_json j;
    j["dimension"] = orbit.dimension();
    j["length"] = orbit.length();
    j["lower"] = box.lower;
    j["upper"] = box.upper;
    *sink << j.dump(2) << '\n';
  } else {
    *sink << "dimension,length,lower,upper\n"
          << orbit.dimension() << ',' << orbit.length() << ',';
    for (std::size_t d = 0; d < box.dimension(); ++d) *sink << (d ? ";" : "") << format_number(box.lower[d]);
    *sink << ',';
    for (std::size_t d = 0; d < box.dimension(); ++d) *sink << (d ? ";" : "") << format_number(box.upper[d]);
    *sink << '\n';
  }
  return 0;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string& cmd = config.command;
  if (cmd == "ecd") return cmd_ecd(config, out);
  if (cmd == "sweep") return cmd_sweep(config, out);
  if (cmd == "bifurcation") return cmd_bifurcation(config, out, err);
  if (cmd == "circle-decay") return cmd_circle_decay(config, out, err);
  if (cmd == "lyapunov") return cmd_lyapunov(config, out);
  if (cmd == "quantum-ecd") return cmd_quantum_ecd(config, out);
  if (cmd == "ingest") return cmd_ingest(config, out);
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace ecd::cli
