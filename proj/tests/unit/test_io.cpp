#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ecd/error.hpp"
#include "ecd/io.hpp"
#include "ecd/observation.hpp"

using namespace ecd;

TEST(Doubles, ShortestRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int t = 0; t < 10000; ++t) {
    const double x = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(x)) continue;
    EXPECT_EQ(io::parse_double(io::format_double(x), 1), x);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
}

TEST(Doubles, StrictParse) {
  for (const char* bad : {"", "1.0x", "abc", "1,0", "1 2"}) {
    try {
      io::parse_double(bad, 4);
      FAIL() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 4u);
    }
  }
  EXPECT_EQ(io::parse_double("-2.5e-3", 1), -2.5e-3);
}

TEST(OrbitCsv, RoundTripIsBitExact) {
  for (const char* name : {"logistic", "henon", "tinkerbell"}) {
    const auto orbit = iterate_map(builtin_map(name), map_info(name).default_x0, 500, 1000);
    std::stringstream buffer;
    io::write_orbit_csv(buffer, orbit);
    const auto back = io::read_orbit_csv(buffer);
    ASSERT_EQ(back.length(), orbit.length());
    ASSERT_EQ(back.dimension(), orbit.dimension());
    for (std::size_t k = 0; k < orbit.coordinates().size(); ++k) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(back.coordinates()[k]), std::bit_cast<std::uint64_t>(orbit.coordinates()[k]));
    }
  }
}

TEST(OrbitCsv, HeaderAndStepIndex) {
  const Orbit o(2, {0.5, 1.0, 0.25, -1.0}, 7);
  std::stringstream buffer;
  io::write_orbit_csv(buffer, o);
  EXPECT_EQ(buffer.str(), "step_index,x_1,x_2\n7,0.5,1\n8,0.25,-1\n");
}

TEST(OrbitCsv, ThousandRowsGiveLengthThousand) {
  std::stringstream in;
  in << "step_index,x_1\n";
  for (int k = 0; k < 1000; ++k) in << k << "," << 0.001 * k << "\n";
  const auto o = io::read_orbit_csv(in);
  EXPECT_EQ(o.length(), 1000u);
  EXPECT_EQ(o.dimension(), 1u);
  EXPECT_EQ(o.skip(), 0u);
  EXPECT_GE(ecd_of_orbit(o, ObservationSpec::partition({10}, true)).value, 0.0);
}

TEST(OrbitCsv, MalformedRowReportsLine) {
  std::stringstream in;
  in << "step_index,x_1\n";
  for (int k = 0; k < 30; ++k) in << k << "," << (k == 15 ? std::string("0.5q") : std::to_string(0.01 * k)) << "\n";
  // Header is line 1, so step 15 sits on line 17.
  try {
    io::read_orbit_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 17u);
  }
}

TEST(OrbitCsv, WrongFieldCount) {
  std::stringstream in("step_index,x_1,x_2\n0,1,2\n1,3\n");
  try {
    io::read_orbit_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos);
  }
}

TEST(OrbitCsv, TooShortOrMissingHeader) {
  std::stringstream one("step_index,x_1\n0,0.5\n");
  EXPECT_THROW(io::read_orbit_csv(one), Error);
  std::stringstream empty("");
  EXPECT_THROW(io::read_orbit_csv(empty), Error);
  EXPECT_THROW(io::load_orbit_csv("/nonexistent/orbit.csv"), Error);
}

TEST(ModelCsv, RoundTrip) {
  const auto sys = builtin_map("logistic", {3.9});
  const EquiPartition part(sys.domain(), {20});
  const auto model = empirical_model(iterate_map(sys, std::vector{0.3}, 100, 5000), part);
  std::stringstream joint, marginal;
  io::write_model_csv(joint, marginal, model);
  EXPECT_EQ(joint.str().substr(0, 7), "i,j,p_i");
  const auto back = io::read_model_csv(joint, marginal, 20);
  EXPECT_EQ(back.joint(), model.joint());
  EXPECT_EQ(back.marginal(), model.marginal());
}

TEST(Matrices, FormatRoundTrip) {
  quantum::Matrix a(2, 2), b(2, 2);
  a << std::complex<double>(0.5, 0), std::complex<double>(0.1, -0.2), std::complex<double>(0.1, 0.2), 0.5;
  b = quantum::pauli_y();
  std::stringstream buffer;
  io::write_matrices(buffer, {a, b});
  const auto back = io::read_matrices(buffer);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], a);
  EXPECT_EQ(back[1], b);
}

TEST(Matrices, ParsesCommentsAndReportsBadLines) {
  std::stringstream in("# qubit\n2\n1,0 0,0\n\n0,0 0,0\n");
  const auto ms = io::read_matrices(in);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0](0, 0), std::complex<double>(1, 0));
  std::stringstream bad("2\n1,0 0,0\n0,0 x,0\n");
  try {
    io::read_matrices(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(EcdRecord, CsvAndJson) {
  io::EcdRecord rec;
  rec.map = "logistic";
  rec.params = "a=3.71";
  rec.cells = "100";
  rec.skip = 1000;
  rec.n = 100000;
  rec.result.value = 0.5;
  rec.classification = Classification::Chaotic;
  EXPECT_EQ(io::ecd_csv_header(LogBase::Natural), "map,params,L,skip,n,D_nats,S_out,I,classification");
  EXPECT_EQ(io::ecd_csv_header(LogBase::Two), "map,params,L,skip,n,D_bits,S_out,I,classification");
  EXPECT_EQ(io::ecd_csv_row(rec).substr(0, 32), "logistic,a=3.71,100,1000,100000,");
  EXPECT_NE(io::ecd_json(rec).find("\"classification\""), std::string::npos);
}
