#include <atomic>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "ecd/parallel.hpp"

using ecd::parallel_map;

TEST(ParallelMap, ResultsInIndexOrder) {
  for (std::size_t workers : {0u, 1u, 3u, 16u}) {
    const auto out = parallel_map(100, workers, [](std::size_t i) { return i * i; });
    ASSERT_EQ(out.size(), 100u);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
  }
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
}

TEST(ParallelMap, EveryIndexRunsOnce) {
  std::atomic<int> calls{0};
  parallel_map(257, 8, [&](std::size_t) { return ++calls; });
  EXPECT_EQ(calls.load(), 257);
}

TEST(ParallelMap, RethrowsLowestFailingIndex) {
  try {
    parallel_map(50, 4, [](std::size_t i) -> int {
      if (i == 31 || i == 7 || i == 44) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}
