/*
 * Copyright 2026 The Bushfire Risk Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include "bushfire/common.hpp"
#include "bushfire/parallel.hpp"
#include "bushfire/random.hpp"
#include "bushfire/text.hpp"

using namespace bushfire;

TEST(Csv, SplitsQuotedFields) {
  const auto f = split_csv_line(R"(a,"b,c",,"d""e")");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[0], "a");
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "");
  EXPECT_EQ(f[3], "d\"e");
}

TEST(Csv, JoinRoundTrips) {
  const std::vector<std::string> f = {"plain", "with,comma", "with\"quote", ""};
  EXPECT_EQ(split_csv_line(join_csv(f)), f);
}

TEST(Text, FormatDoubleRoundTrips) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal(0, 1e3) * std::pow(10.0, rng.uniform(-8, 8));
    EXPECT_EQ(parse_double(format_double(v)).value(), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Text, ParseNumbersRejectsGarbage) {
  EXPECT_FALSE(parse_double("1.5x"));
  EXPECT_FALSE(parse_double(""));
  EXPECT_FALSE(parse_int("3.2"));
  EXPECT_EQ(parse_int(" 42 ").value(), 42);
}

TEST(Dates, ParseAndArithmetic) {
  const auto d = parse_date("2020-02-28").value();
  EXPECT_EQ(format_date(add_days(d, 1)), "2020-02-29");
  EXPECT_EQ(format_date(add_days(d, 2)), "2020-03-01");
  EXPECT_EQ(days_between(d, parse_date("2020-03-10").value()), 11);
  EXPECT_EQ(day_of_year(parse_date("2021-12-31").value()), 365);
  EXPECT_FALSE(parse_date("2021-02-30"));
  EXPECT_FALSE(parse_date("2021/01/01"));
}

TEST(Rng, DeriveSeedSeparatesStreams) {
  EXPECT_NE(derive_seed(1, 2, 0), derive_seed(1, 2, 1));
  EXPECT_NE(derive_seed(1, 2, 0), derive_seed(1, 3, 0));
  EXPECT_EQ(derive_seed(9, 9, 9), derive_seed(9, 9, 9));
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(11);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.below(7)];
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Parallel, ResultIndependentOfThreadCount) {
  std::vector<double> a(1000), b(1000);
  auto work = [](std::vector<double>& out) {
    return [&out](std::size_t i) {
      Rng rng(derive_seed(5, 1, i));
      out[i] = rng.uniform();
    };
  };
  parallel_for(a.size(), 1, work(a));
  parallel_for(b.size(), 8, work(b));
  EXPECT_EQ(a, b);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 57) throw PreconditionError("boom");
                            }),
               PreconditionError);
}

TEST(Common, TakeRowsAndFnv) {
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const Matrix t = take_rows(x, {2, 0});
  EXPECT_EQ(t(0, 0), 5);
  EXPECT_EQ(t(1, 1), 2);
  EXPECT_EQ(take(Labels{4, 5, 6}, {1}), Labels{5});
  // Published FNV-1a test vector.
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}
