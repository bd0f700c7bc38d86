#include "run_config.hpp"

#include <sstream>

#include "ecd/error.hpp"
#include "ecd/io.hpp"

namespace ecd::cli {

std::string format_number(double value) { return io::format_double(value); }

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) out += (k ? "," : "") + format_number(values[k]);
  return out;
}

std::string format_params(const std::map<std::string, double>& params) {
  std::string out;
  for (const auto& [name, value] : params) out += (out.empty() ? "" : ";") + name + "=" + format_number(value);
  return out;
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  auto put = [&](const std::string& key, const std::string& value) { out << key << '=' << value << '\n'; };
  auto num = [&](const std::string& key, double v) { put(key, format_number(v)); };
  auto count = [&](const std::string& key, auto v) { put(key, std::to_string(v)); };
  auto opt = [&](const std::string& key, const std::optional<double>& v) {
    if (v) num(key, *v);
  };
  auto text = [&](const std::string& key, const std::string& v) {
    if (!v.empty()) put(key, v);
  };

  text("command", c.command);
  put("map", c.map);
  for (const auto& [name, value] : c.params) num(name, value);
  if (!c.x0.empty()) put("x0", format_list(c.x0));
  text("orbit-file", c.orbit_file);
  count("ensemble", c.ensemble);
  put("cells", c.cells);
  put("auto-box", c.auto_box ? "true" : "false");
  count("skip", c.skip);
  count("n", c.n);
  num("epsilon", c.epsilon);
  put("log-base", c.log_base);
  count("seed", c.seed);
  count("threads", c.threads);
  text("param", c.param);
  opt("from", c.from);
  opt("to", c.to);
  opt("step", c.step);
  if (!c.values.empty()) put("values", format_list(c.values));
  count("keep", c.keep);
  count("reorthonormalize", c.reorthonormalize);
  count("convergents", c.convergents);
  count("min-denominator", c.min_denominator);
  num("theta0", c.theta0);
  text("state", c.state_file);
  text("kraus", c.kraus_file);
  put("channel", c.channel);
  num("p", c.p);
  count("dim", c.dim);
  count("trials", c.trials);
  put("pvm", c.pvm);
  text("out", c.out);
  put("format", c.format);
  text("svg", c.svg);
  return out.str();
}

std::vector<std::string> config_arguments(const std::string& text) {
  std::vector<std::string> args;
  std::string command;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    const auto last = raw.find_last_not_of(" \t\r");
    const std::string entry = raw.substr(first, last - first + 1);
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(line, "expected key=value, got '" + entry + "'");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key == "command") {
      command = value;
    } else {
      args.push_back("--" + key + "=" + value);
    }
  }
  if (!command.empty()) args.insert(args.begin(), command);
  return args;
}

}  // namespace ecd::cli
