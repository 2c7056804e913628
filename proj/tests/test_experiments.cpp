// Copyright 2026 The syncnode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "syncnode/experiments.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace syncnode::experiments {
namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(ParseList, AcceptsAndRejects) {
  EXPECT_EQ(parse_list("0.1, 0.2,3"), (std::vector<double>{0.1, 0.2, 3.0}));
  EXPECT_THROW(parse_list(""), ValidationError);
  EXPECT_THROW(parse_list("1,,2"), ValidationError);
  EXPECT_THROW(parse_list("1,x"), ValidationError);
  EXPECT_THROW(parse_list("1.5e"), ValidationError);
  EXPECT_THROW(parse_int_list("1.5"), ValidationError);
  EXPECT_EQ(linspace(0, 1, 3), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(arange(1, 3, 1).size(), 3u);
  EXPECT_EQ(arange(0, 1, 0.1).size(), 11u);
  EXPECT_THROW(arange(2, 1, 1), ValidationError);
  EXPECT_THROW(arange(1, 2, 0), ValidationError);
}

TEST(Decay, DefaultGrid) {
  const auto rows = parse_csv(run_decay({}));
  ASSERT_EQ(rows.size(), 2602u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "mu_minus_lambda", "i_value"}));
  const auto& corner = rows.back();
  EXPECT_EQ(std::stod(corner[0]), 1.0);
  EXPECT_EQ(std::stod(corner[1]), 10.0);
  EXPECT_NEAR(std::stod(corner[2]), 1.466337068793427, 1e-11);
  for (std::size_t r = 1; r <= 51; ++r) EXPECT_EQ(std::stod(rows[r][2]), 0.0);
  EXPECT_THROW(run_decay({.x_min = 1, .x_max = 0}), ValidationError);
  EXPECT_THROW(run_decay({.x_steps = 0}), ValidationError);
}

TEST(Tail, ColumnsAndFooter) {
  TailOptions o;
  o.gammas = {0, 1, 2, 3};
  o.runs = 200;
  o.reps = 5;
  o.horizon = 300;
  const std::string csv = run_tail(o);
  const auto rows = parse_csv(csv);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"gamma", "hits", "runs", "p_hat", "std_err"}));
  EXPECT_EQ(rows[1][2], "1000");
  EXPECT_EQ(rows.back()[0], "fit");
  EXPECT_NEAR(std::stod(rows.back()[2]), std::log(2.0), 1e-11);
  EXPECT_EQ(run_tail(o), csv);

  o.gammas = {200, 300};
  EXPECT_THROW(run_tail(o), NumericalError);
  o.gammas = {3, 2};
  EXPECT_THROW(run_tail(o), ValidationError);
}

TEST(CapacityAndRate, UnitToleranceRows) {
  const auto cap = parse_csv(run_capacity({}));
  EXPECT_EQ(cap[0], (std::vector<std::string>{"epsilon", "gamma_star"}));
  EXPECT_EQ(cap.back(), (std::vector<std::string>{"1", "0"}));
  EXPECT_NEAR(std::stod(cap[2][1]), 6.643856189774725, 1e-10);
  const auto rate = parse_csv(run_rate({}));
  EXPECT_EQ(rate[0], (std::vector<std::string>{"epsilon", "mu_star"}));
  EXPECT_EQ(rate.back(), (std::vector<std::string>{"1", "3"}));
  EXPECT_NEAR(std::stod(rate[2][1]), 4.75467957738334, 1e-10);
  EXPECT_THROW(run_capacity({.epsilons = {0.0}}), ValidationError);
  EXPECT_THROW(run_rate({.epsilons = {0.5}, .gamma = 0.0}), ValidationError);
}

std::vector<int> p1_column(double eps_rest) {
  DecideOptions o;
  o.eps_rest = eps_rest;
  const auto rows = parse_csv(run_decide(o));
  std::vector<int> col;
  for (std::size_t r = 1; r < rows.size(); ++r) col.push_back(std::stoi(rows[r][1]));
  return col;
}

TEST(Decide, HeaderAndRequestPattern) {
  const auto rows = parse_csv(run_decide({}));
  ASSERT_EQ(rows.size(), 10u);
  ASSERT_EQ(rows[0].size(), 1u + 8 + 1 + 8);
  EXPECT_EQ(rows[0][0], "eps1");
  EXPECT_EQ(rows[0][1], "p_1");
  EXPECT_EQ(rows[0][9], "objective");
  EXPECT_EQ(rows[0][10], "marginal_1");
  EXPECT_EQ(p1_column(0.2), (std::vector<int>{1, 1, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(p1_column(0.8), (std::vector<int>{1, 1, 1, 1, 1, 1, 1, 1, 0}));
}

TEST(Decide, ExplicitVectorAndErrors) {
  DecideOptions o;
  o.m = 3;
  o.epsilon = std::vector<double>{0.5, 0.1, 0.3};
  const auto rows = parse_csv(run_decide(o));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ((std::vector<std::string>{rows[1][1], rows[1][2], rows[1][3]}),
            (std::vector<std::string>{"0", "1", "0"}));
  o.epsilon = std::vector<double>{0.5, 0.1};
  EXPECT_THROW(run_decide(o), ValidationError);
  o.epsilon.reset();
  o.m = 13;
  EXPECT_THROW(run_decide(o), ValidationError);
  o.m = 3;
  o.alpha = {1, 2};
  EXPECT_THROW(run_decide(o), ValidationError);
}

TEST(Sweep, AlphaAndCostShapes) {
  const auto alpha = sweep_points({});
  ASSERT_EQ(alpha.size(), 10u);
  for (const auto& p : alpha) {
    if (p.value <= 5.0) EXPECT_NEAR(p.max_total_utility, 0.0, 1e-9);
    else EXPECT_NEAR(p.max_total_utility, p.value - 5.0, 1e-9);
  }
  SweepOptions cost;
  cost.param = SweepParam::Cost;
  cost.from = 0.0;
  cost.to = 0.0;
  const auto zero = sweep_points(cost);
  const auto pure = best_pure_profile(GameSpec::uniform(8, 0.2, 10, 0));
  ASSERT_TRUE(pure);
  EXPECT_NEAR(zero[0].max_total_utility, pure->total_utility, 1e-9);
  EXPECT_NEAR(zero[0].max_total_utility, 10.0, 1e-9);
  EXPECT_EQ(parse_csv(run_sweep({}))[0],
            (std::vector<std::string>{"param_value", "max_total_utility"}));
  EXPECT_THROW(sweep_points({.from = 0.0, .to = 1.0, .step = 1.0}), ValidationError);  // alpha = 0
}

TEST(Netsim, CompareRows) {
  NetsimOptions o;
  o.rounds = 2000;
  o.reps = 3;
  const std::string csv = run_netsim(o);
  const auto rows = parse_csv(csv);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "strategy");
  EXPECT_EQ(rows[0].size(), 10u + 3);
  EXPECT_EQ(rows[1][0], "cautious");
  EXPECT_EQ(rows[2][0], "equilibrium");
  EXPECT_EQ(std::stod(rows[1][8]), 3.0);  // requests per round, 1 partial x 3 nodes
  EXPECT_EQ(std::stod(rows[2][8]), 1.0);
  EXPECT_EQ(run_netsim(o), csv);
  o.capacity = {1.5};
  EXPECT_THROW(run_netsim(o), ValidationError);
  o.capacity = {4};
  o.lambda = {3, 3};
  EXPECT_THROW(run_netsim(o), ValidationError);
}

}  // namespace
}  // namespace syncnode::experiments
