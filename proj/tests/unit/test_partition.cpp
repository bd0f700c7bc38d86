#include <random>

#include <gtest/gtest.h>

#include "ecd/error.hpp"
#include "ecd/partition.hpp"
#include "support/random_models.hpp"

using namespace ecd;

TEST(EquiPartition, HalfOpenCellsWithClosedTop) {
  const EquiPartition p(Box::unit(1), {4});
  EXPECT_EQ(p.total_cells(), 4u);
  EXPECT_EQ(p.cell_of(std::vector{0.0}), 0u);
  EXPECT_EQ(p.cell_of(std::vector{0.2499999}), 0u);
  EXPECT_EQ(p.cell_of(std::vector{0.25}), 1u);
  EXPECT_EQ(p.cell_of(std::vector{0.75}), 3u);
  EXPECT_EQ(p.cell_of(std::vector{1.0}), 3u);
}

TEST(EquiPartition, RowMajorWithAxisZeroMostSignificant) {
  const EquiPartition p(Box::unit(2), {3, 2});
  EXPECT_EQ(p.total_cells(), 6u);
  EXPECT_EQ(p.cell_of(std::vector{0.1, 0.9}), 1u);
  EXPECT_EQ(p.cell_of(std::vector{0.9, 0.1}), 4u);
  EXPECT_EQ(p.unravel(5), (std::vector<std::size_t>{2, 1}));
  const Box cell = p.cell_box(4);
  EXPECT_NEAR(cell.lower[0], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(cell.lower[1], 0.0);
  EXPECT_EQ(cell.upper[1], 0.5);
}

TEST(EquiPartition, EveryPointLandsInItsOwnCellBox) {
  const EquiPartition p(Box{{-1.5, -0.5}, {1.5, 0.5}}, {7, 5});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(-0.5, 0.5);
  for (int k = 0; k < 1000; ++k) {
    const std::vector x{ux(rng), uy(rng)};
    const Box cell = p.cell_box(p.cell_of(x));
    for (std::size_t d = 0; d < 2; ++d) {
      EXPECT_LE(cell.lower[d], x[d] + 1e-15);
      EXPECT_GE(cell.upper[d], x[d] - 1e-15);
    }
  }
}

TEST(EquiPartition, Errors) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code_of([] { EquiPartition(Box::unit(1), {0}); }), ErrorCode::EmptyAxis);
  EXPECT_EQ(code_of([] { EquiPartition(Box::unbounded(1), {4}); }), ErrorCode::IncompatiblePartition);
  EXPECT_EQ(code_of([] { EquiPartition(Box::interval(1.0, 1.0), {4}); }), ErrorCode::IncompatiblePartition);
  EXPECT_EQ(code_of([] { EquiPartition(Box::unit(2), {4}); }), ErrorCode::DimensionMismatch);
  const EquiPartition p(Box::unit(1), {4});
  try {
    p.cell_of(std::vector{1.5});
    FAIL();
  } catch (const OutOfBoxError& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfBox);
  }
  EXPECT_EQ(p.cell_or_sentinel(std::vector{-0.1}), 4u);
}

TEST(PartitionSpec, ParseAndFormat) {
  EXPECT_EQ(parse_partition_spec("100"), (std::vector<std::size_t>{100}));
  EXPECT_EQ(parse_partition_spec("32x32"), (std::vector<std::size_t>{32, 32}));
  EXPECT_EQ(format_partition_spec(std::vector<std::size_t>{8, 4, 2}), "8x4x2");
  EXPECT_THROW(parse_partition_spec(""), ParseError);
  EXPECT_THROW(parse_partition_spec("3x"), ParseError);
  EXPECT_THROW(parse_partition_spec("a"), ParseError);
  EXPECT_THROW(parse_partition_spec("-4"), ParseError);
  EXPECT_THROW(parse_partition_spec("0"), Error);
}

TEST(Symbolize, ReportsFirstEscapingIndex) {
  const EquiPartition p(Box::unit(1), {2});
  EXPECT_EQ(symbolize(Orbit(1, {0.1, 0.6, 0.4, 1.0}), p), (std::vector<std::size_t>{0, 1, 0, 1}));
  try {
    symbolize(Orbit(1, {0.1, 0.6, 1.2, 0.3}), p);
    FAIL();
  } catch (const OutOfBoxError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(EmpiricalModel, CountsConsecutivePairs) {
  const std::vector<std::size_t> s = {0, 1, 0, 1, 1};
  const auto m = empirical_model_from_symbols(s, 2);
  EXPECT_EQ(m.sample_size(), 4u);
  EXPECT_EQ(m.marginal(), (std::vector<double>{0.5, 0.5}));
  const std::vector<JointEntry> expected = {{0, 1, 0.5}, {1, 0, 0.25}, {1, 1, 0.25}};
  EXPECT_EQ(m.joint(), expected);
  EXPECT_EQ(m.max_row_deviation(), 0.0);
  EXPECT_EQ(m.output_marginal(), (std::vector<double>{0.25, 0.75}));
  EXPECT_EQ(m.support(), (std::vector<std::size_t>{0, 1}));
}

TEST(EmpiricalModel, RowConsistencyIsExactOnLongOrbits) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> cell(0, 49);
  std::vector<std::size_t> s(100001);
  for (auto& x : s) x = cell(rng);
  const auto m = empirical_model_from_symbols(s, 50);
  EXPECT_LE(m.max_row_deviation(), 1e-15);
}

TEST(EmpiricalModel, ValidatesMass) {
  EXPECT_THROW(EmpiricalModel(2, {0.5, 0.4}, {{0, 0, 0.5}, {1, 1, 0.5}}, 0), Error);
  EXPECT_THROW(EmpiricalModel(2, {0.5, 0.5}, {{0, 0, 0.5}, {1, 1, 0.4}}, 0), Error);
  EXPECT_THROW(EmpiricalModel(2, {0.5, 0.5}, {{1, 1, 0.5}, {0, 0, 0.5}}, 0), Error);
  EXPECT_THROW(EmpiricalModel(2, {0.5, 0.5}, {{0, 2, 0.5}, {1, 1, 0.5}}, 0), Error);
  EXPECT_THROW(EmpiricalModel(2, {1.5, -0.5}, {{0, 0, 1.0}}, 0), Error);
}

TEST(Channel, FromModelIsRowStochastic) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = testing_support::random_model(rng, 30);
    const auto ch = channel_from(model);
    for (std::size_t i : model.support()) {
      double sum = 0.0;
      for (const auto& e : ch.row(i)) sum += e.p;
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    // Lambda* p reproduces the column sums of the joint.
    const auto q = ch.apply(model.marginal());
    const auto out = model.output_marginal();
    for (std::size_t j = 0; j < q.size(); ++j) EXPECT_NEAR(q[j], out[j], 1e-14);
  }
}

TEST(Channel, InconsistentModelRejected) {
  const EmpiricalModel m(2, {0.9, 0.1}, {{0, 0, 0.5}, {1, 1, 0.5}}, 0);
  try {
    channel_from(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentModel);
  }
}

TEST(Channel, ValidationAndIdentity) {
  EXPECT_THROW(Channel(2, {{0, 0, 0.5}, {0, 1, 0.4}}), Error);
  const auto id = Channel::identity(3);
  EXPECT_TRUE(id.is_deterministic());
  EXPECT_EQ(id.apply(std::vector{0.2, 0.3, 0.5}), (std::vector{0.2, 0.3, 0.5}));
  const auto dense = Channel::from_dense({{0.5, 0.5}, {0.0, 1.0}});
  EXPECT_FALSE(dense.is_deterministic());
  EXPECT_EQ(dense.row(0).size(), 2u);
}

TEST(MergeModels, WeightedAverage) {
  const auto a = empirical_model_from_symbols(std::vector<std::size_t>{0, 0, 0}, 2);
  const auto b = empirical_model_from_symbols(std::vector<std::size_t>{1, 1, 1}, 2);
  const std::vector models{a, b};
  const auto m = merge_models(models, std::vector{0.25, 0.75});
  EXPECT_EQ(m.marginal(), (std::vector{0.25, 0.75}));
  EXPECT_EQ(m.joint().size(), 2u);
  EXPECT_THROW(merge_models(models, std::vector{0.5, 0.6}), Error);
}

TEST(EnsembleModel, MatchesSinglePointForOneMember) {
  const auto sys = builtin_map("logistic", {3.9});
  const EquiPartition part(Box::unit(1), {20});
  const auto single = empirical_model(iterate_map(sys, std::vector{0.3}, 100, 1000), part);
  const auto ens = empirical_model_ensemble(sys, InitialEnsemble::single({0.3}), part, 100, 1000);
  EXPECT_EQ(single.joint(), ens.joint());
  EXPECT_EQ(single.marginal(), ens.marginal());
}
