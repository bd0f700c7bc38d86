#include "app.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ecd/error.hpp"

namespace ecd::cli {

namespace {

constexpr const char* kCommands[] = {"ecd", "sweep", "bifurcation", "circle-decay", "lyapunov", "quantum-ecd", "ingest"};

constexpr const char* kFooter = R"(Output columns (CSV):
  ecd           map,params,L,skip,n,D_nats,S_out,I,classification
  sweep         param,D_nats,lambda,converged,warning
  bifurcation   param,x   (one row per retained point)
  circle-decay  j,c_j,D_emp,D_theo,bound
  lyapunov      map,params,n,lambda_top,converged,lambda_1..lambda_m
  quantum-ecd   d,pvm,trials,seed,D_nats,D_canonical,degenerate
  ingest        dimension,length,lower,upper
With --log-base 2 the D_nats columns become D_bits; lambda is always in nats.

Config files hold key=value lines using the long flag names (plus
command=<subcommand>); flags given on the command line take precedence.

Exit codes: 0 success, 1 computation error, 2 usage error.)";

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("invalid number '") + item + "' in " + flag);
    }
  }
  return values;
}

bool names_command(const std::string& arg) {
  return std::find(std::begin(kCommands), std::end(kCommands), arg) != std::end(kCommands);
}

/// Pulls --config out of the argument list and returns the expanded
/// arguments: config entries first, then the explicit ones.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> explicit_args;
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 == args.size()) throw UsageError("--config needs a file");
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      explicit_args.push_back(args[k]);
    }
  }
  if (path.empty()) return explicit_args;

  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  std::vector<std::string> expanded;
  try {
    expanded = config_arguments(text.str());
  } catch (const ParseError& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  const bool explicit_command = std::any_of(explicit_args.begin(), explicit_args.end(), names_command);
  if (explicit_command && !expanded.empty() && names_command(expanded.front())) expanded.erase(expanded.begin());
  // A subcommand token must precede the flags that follow it.
  std::vector<std::string> merged;
  auto command = std::find_if(explicit_args.begin(), explicit_args.end(), names_command);
  if (!expanded.empty() && names_command(expanded.front())) {
    merged.push_back(expanded.front());
    expanded.erase(expanded.begin());
  } else if (command != explicit_args.end()) {
    merged.push_back(*command);
    explicit_args.erase(command);
  }
  merged.insert(merged.end(), expanded.begin(), expanded.end());
  merged.insert(merged.end(), explicit_args.begin(), explicit_args.end());
  return merged;
}

}  // namespace

bool parse_arguments(const std::vector<std::string>& raw_args, RunConfig& config, std::ostream& out) {
  const std::vector<std::string> args = expand_config(raw_args);

  CLI::App app{"Entropic chaos degree and Lyapunov analysis of discrete maps", "ecd"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.footer(kFooter);
  app.require_subcommand(0, 1);
  app.add_option("--config", "key=value file; explicit flags override it");
  std::string save_config;

  RunConfig& c = config;
  std::string x0_text, values_text;
  std::optional<double> a, b, cc, d, v, mu;

  app.add_option("--map", c.map, "logistic, circle, tent, henon, baker or tinkerbell")->capture_default_str();
  app.add_option("--a", a, "map parameter a");
  app.add_option("--b", b, "map parameter b");
  app.add_option("--c", cc, "map parameter c");
  app.add_option("--d", d, "map parameter d");
  app.add_option("--v", v, "rotation number (circle)");
  app.add_option("--mu", mu, "slope (tent)");
  app.add_option("--x0", x0_text, "initial point, comma separated");
  app.add_option("--orbit-file", c.orbit_file, "orbit CSV to analyse instead of a map");
  app.add_option("--ensemble", c.ensemble, "uniform initial sample size (0 = single x0)")->capture_default_str();
  app.add_option("--cells", c.cells, "partition, e.g. 100 or 32x32")->capture_default_str();
  app.add_flag("--auto-box", c.auto_box, "partition the orbit's bounding box");
  app.add_option("--skip", c.skip, "transient length")->capture_default_str();
  app.add_option("--n", c.n, "orbit length")->capture_default_str();
  app.add_option("--epsilon", c.epsilon, "chaotic iff D > epsilon")->capture_default_str();
  app.add_option("--log-base", c.log_base, "e or 2")->capture_default_str();
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--param", c.param, "swept parameter (default: first map parameter)");
  app.add_option("--from", c.from, "first parameter value");
  app.add_option("--to", c.to, "last parameter value");
  app.add_option("--step", c.step, "parameter step");
  app.add_option("--values", values_text, "explicit parameter values, comma separated");
  app.add_option("--keep", c.keep, "points kept per parameter (bifurcation)")->capture_default_str();
  app.add_option("--reorthonormalize", c.reorthonormalize, "QR period for Lyapunov spectra")->capture_default_str();
  app.add_option("--convergents", c.convergents, "rows of the decay table")->capture_default_str();
  app.add_option("--min-denominator", c.min_denominator, "smallest c_j in the decay table")->capture_default_str();
  app.add_option("--theta0", c.theta0, "initial angle for circle-decay")->capture_default_str();
  app.add_option("--state", c.state_file, "density matrix file");
  app.add_option("--kraus", c.kraus_file, "Kraus operator file");
  app.add_option("--channel", c.channel, "identity, depolarizing or fully-depolarizing")->capture_default_str();
  app.add_option("--p", c.p, "depolarizing strength")->capture_default_str();
  app.add_option("--dim", c.dim, "dimension of the default pure state")->capture_default_str();
  app.add_option("--trials", c.trials, "random decompositions per degenerate spectrum")->capture_default_str();
  app.add_option("--pvm", c.pvm, "none or computational")->capture_default_str();
  app.add_option("--out", c.out, "output file (default: stdout)");
  app.add_option("--format", c.format, "csv or json")->capture_default_str();
  app.add_option("--svg", c.svg, "SVG output path or prefix");
  app.add_option("--save-config", save_config, "write the resolved run configuration to a file");

  app.add_subcommand("ecd", "chaos degree of one map or ingested orbit")->fallthrough();
  app.add_subcommand("sweep", "chaos degree and Lyapunov exponent over a parameter grid")->fallthrough();
  app.add_subcommand("bifurcation", "post-transient orbit points over a parameter grid")->fallthrough();
  app.add_subcommand("circle-decay", "chaos degree of the rotation map along convergents")->fallthrough();
  app.add_subcommand("lyapunov", "Lyapunov exponent or spectrum of a map")->fallthrough();
  app.add_subcommand("quantum-ecd", "quantum chaos degree of a state and channel")->fallthrough();
  app.add_subcommand("ingest", "validate and summarize an orbit CSV")->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return false;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  // Without a subcommand the run is a single chaos-degree evaluation.
  c.command = app.get_subcommands().empty() ? "ecd" : app.get_subcommands().front()->get_name();
  if (!x0_text.empty()) c.x0 = parse_list(x0_text, "--x0");
  if (!values_text.empty()) c.values = parse_list(values_text, "--values");
  const std::pair<const char*, std::optional<double>*> named[] = {
      {"a", &a}, {"b", &b}, {"c", &cc}, {"d", &d}, {"v", &v}, {"mu", &mu}};
  for (const auto& [name, value] : named) {
    if (*value) c.params[name] = **value;
  }
  if (!save_config.empty()) {
    std::ofstream file(save_config);
    if (!file) throw UsageError("cannot write config file '" + save_config + "'");
    file << serialize(c);
  }
  return true;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (!parse_arguments(args, config, out)) return 0;
    return run_command(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun 'ecd --help' for usage.\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ecd::cli
