#include "ecd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "ecd/error.hpp"

namespace ecd::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  token = trim(token);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError(line, "expected a nonnegative integer, got '" + std::string(token) + "'");
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  return in;
}

/// Reads a header line and the data rows of a small CSV table.
template <typename Row>
void for_each_row(std::istream& in, std::size_t fields, std::string_view what, Row&& row) {
  std::string text;
  std::size_t line = 0;
  if (!std::getline(in, text)) throw Error(ErrorCode::EmptyInput, std::string(what) + " is empty");
  ++line;
  while (std::getline(in, text)) {
    ++line;
    const std::string_view view = trim(text);
    if (view.empty()) continue;
    const auto parts = split(view, ',');
    if (parts.size() != fields) {
      throw ParseError(line, std::string(what) + " row needs " + std::to_string(fields) + " fields");
    }
    row(parts, line);
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a real number, got '" + std::string(token) + "'");
  }
  return value;
}

// --------------------------------------------------------------- orbit CSV

void write_orbit_csv(std::ostream& out, const Orbit& orbit) {
  out << "step_index";
  for (std::size_t d = 0; d < orbit.dimension(); ++d) out << ",x_" << d + 1;
  out << '\n';
  for (std::size_t k = 0; k < orbit.length(); ++k) {
    out << orbit.skip() + k;
    for (double x : orbit.point(k)) out << ',' << format_double(x);
    out << '\n';
  }
}

Orbit read_orbit_csv(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) throw Error(ErrorCode::EmptyInput, "orbit file is empty");
  const auto header = split(trim(text), ',');
  if (header.size() < 2) throw ParseError(1, "header needs an index column and at least one coordinate");
  const std::size_t dim = header.size() - 1;

  std::vector<double> coords;
  std::size_t line = 1;
  while (std::getline(in, text)) {
    ++line;
    const std::string_view view = trim(text);
    if (view.empty()) continue;
    const auto fields = split(view, ',');
    if (fields.size() != dim + 1) {
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(line) + ": expected " +
                                                    std::to_string(dim + 1) + " fields, found " +
                                                    std::to_string(fields.size()));
    }
    parse_index(fields[0], line);
    for (std::size_t d = 1; d <= dim; ++d) coords.push_back(parse_double(fields[d], line));
  }
  if (coords.size() < 2 * dim) throw Error(ErrorCode::EmptyInput, "orbit file needs at least two points");
  return Orbit(dim, std::move(coords), 0);
}

void save_orbit_csv(const std::filesystem::path& path, const Orbit& orbit) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  write_orbit_csv(out, orbit);
}

Orbit load_orbit_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_orbit_csv(in);
}

// --------------------------------------------------------------- model CSV

void write_model_csv(std::ostream& joint, std::ostream& marginal, const EmpiricalModel& model) {
  joint << "i,j,p_ij\n";
  for (const auto& e : model.joint()) joint << e.from << ',' << e.to << ',' << format_double(e.p) << '\n';
  marginal << "i,p_i\n";
  for (std::size_t i = 0; i < model.cells(); ++i) {
    if (model.marginal()[i] > 0.0) marginal << i << ',' << format_double(model.marginal()[i]) << '\n';
  }
}

EmpiricalModel read_model_csv(std::istream& joint, std::istream& marginal, std::size_t cells) {
  std::vector<JointEntry> entries;
  for_each_row(joint, 3, "joint", [&](const auto& f, std::size_t line) {
    entries.push_back({parse_index(f[0], line), parse_index(f[1], line), parse_double(f[2], line)});
  });
  std::vector<double> p(cells, 0.0);
  for_each_row(marginal, 2, "marginal", [&](const auto& f, std::size_t line) {
    const std::size_t i = parse_index(f[0], line);
    if (i >= cells) throw ParseError(line, "cell index out of range");
    p[i] = parse_double(f[1], line);
  });
  std::sort(entries.begin(), entries.end(),
            [](const JointEntry& a, const JointEntry& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  return EmpiricalModel(cells, std::move(p), std::move(entries), 0);
}

// ------------------------------------------------------------- ECD records

std::string ecd_csv_header(LogBase base) {
  return std::string("map,params,L,skip,n,") + (base == LogBase::Two ? "D_bits" : "D_nats") +
         ",S_out,I,classification";
}

std::string ecd_csv_row(const EcdRecord& r) {
  std::ostringstream out;
  out << r.map << ',' << r.params << ',' << r.cells << ',' << r.skip << ',' << r.n << ','
      << format_double(from_nats(r.result.value, r.base)) << ','
      << format_double(from_nats(r.result.marginal_entropy_out, r.base)) << ','
      << format_double(from_nats(r.result.mutual, r.base)) << ',' << to_string(r.classification);
  return out.str();
}

std::string ecd_json(const EcdRecord& r) {
  nlohmann::ordered_json j;
  j["map"] = r.map;
  j["params"] = r.params;
  j["L"] = r.cells;
  j["skip"] = r.skip;
  j["n"] = r.n;
  j["log_base"] = r.base == LogBase::Two ? "2" : "e";
  j["D"] = from_nats(r.result.value, r.base);
  j["S_out"] = from_nats(r.result.marginal_entropy_out, r.base);
  j["I"] = from_nats(r.result.mutual, r.base);
  j["sample_size"] = r.result.sample_size;
  j["observation"] = r.result.observation;
  j["classification"] = std::string(to_string(r.classification));
  return j.dump(2);
}

// ----------------------------------------------------------- matrix format

std::vector<quantum::Matrix> read_matrices(std::istream& in) {
  std::vector<quantum::Matrix> out;
  std::string text;
  std::size_t line = 0;
  quantum::Matrix current;
  std::size_t dim = 0, row = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view = trim(text);
    if (view.empty() || view.front() == '#') continue;
    std::istringstream tokens{std::string(view)};
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(t);
    if (row == dim) {
      if (parts.size() != 1) throw ParseError(line, "expected a dimension line");
      dim = parse_index(parts[0], line);
      if (dim == 0 || dim > quantum::kMaxDimension) {
        throw ParseError(line, "dimension must be in [1, " + std::to_string(quantum::kMaxDimension) + "]");
      }
      current = quantum::Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      row = 0;
      continue;
    }
    if (parts.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(line) + ": expected " +
                                                    std::to_string(dim) + " entries, found " +
                                                    std::to_string(parts.size()));
    }
    for (std::size_t c = 0; c < dim; ++c) {
      const auto pair = split(parts[c], ',');
      if (pair.size() != 2) throw ParseError(line, "entry '" + parts[c] + "' is not of the form re,im");
      current(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = {parse_double(pair[0], line),
                                                                               parse_double(pair[1], line)};
    }
    if (++row == dim) out.push_back(current);
  }
  if (row != dim) throw ParseError(line, "matrix block ended early");
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "no matrix blocks found");
  return out;
}

void write_matrices(std::ostream& out, const std::vector<quantum::Matrix>& matrices) {
  for (const auto& m : matrices) {
    out << m.rows() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
      }
      out << '\n';
    }
  }
}

std::vector<quantum::Matrix> load_matrices(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrices(in);
}

}  // namespace ecd::io
