#pragma once

// Text formats: orbit CSV, sparse model CSV, chaos-degree records and the
// complex matrix format for quantum states and Kraus sets.
//
// Orbit CSV
//   header   step_index,x_1,...,x_N
//   rows     <integer>,<real>,...,<real>
// Reals use the shortest representation that parses back to the same
// double, so export followed by ingest reproduces an orbit bit for bit.
// Ingested orbits have skip 0; the step_index column is read but not kept.
//
// Matrix format
//   Lines starting with '#' and blank lines are ignored. A block is a line
//   holding the dimension d followed by d rows of d entries "re,im"
//   separated by whitespace. Several blocks form a Kraus set.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ecd/dynamics.hpp"
#include "ecd/infodyn.hpp"
#include "ecd/partition.hpp"
#include "ecd/quantum.hpp"

namespace ecd::io {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_double(double value);
/// Strict parse of the whole token; throws ParseError(line) on failure.
double parse_double(std::string_view token, std::size_t line);

void write_orbit_csv(std::ostream& out, const Orbit& orbit);
/// Line numbers in errors are 1-based and count the header as line 1.
/// Malformed fields raise ParseError; rows with the wrong field count raise
/// DimensionMismatch.
Orbit read_orbit_csv(std::istream& in);
void save_orbit_csv(const std::filesystem::path& path, const Orbit& orbit);
Orbit load_orbit_csv(const std::filesystem::path& path);

/// Joint as "i,j,p_ij" triplets and marginal as "i,p_i" rows, each with a
/// header line.
void write_model_csv(std::ostream& joint, std::ostream& marginal, const EmpiricalModel& model);
EmpiricalModel read_model_csv(std::istream& joint, std::istream& marginal, std::size_t cells);

/// One chaos-degree evaluation with the settings that produced it.
struct EcdRecord {
  std::string map;
  std::string params;
  std::string cells;
  std::size_t skip = 0;
  std::size_t n = 0;
  EcdResult result;
  Classification classification = Classification::Stable;
  LogBase base = LogBase::Natural;
};

/// map,params,L,skip,n,D,S_out,I,classification. Entropy columns are in the
/// record's log base; the D column is named D_nats or D_bits accordingly.
std::string ecd_csv_header(LogBase base);
std::string ecd_csv_row(const EcdRecord& record);
std::string ecd_json(const EcdRecord& record);

std::vector<quantum::Matrix> read_matrices(std::istream& in);
void write_matrices(std::ostream& out, const std::vector<quantum::Matrix>& matrices);
std::vector<quantum::Matrix> load_matrices(const std::filesystem::path& path);

}  // namespace ecd::io
