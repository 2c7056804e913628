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

#include "syncnode/netsim.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace syncnode {
namespace {

NetSimConfig uniform_config(int m, double lambda, double mu, std::int64_t capacity,
                            int n_partial, std::int64_t rounds, std::uint64_t seed = 42) {
  NetSimConfig c;
  c.n_partial = n_partial;
  c.rounds = rounds;
  c.master_seed = seed;
  for (int i = 0; i < m; ++i) c.full_nodes.push_back({{lambda, mu}, capacity});
  return c;
}

TEST(NetworkSim, HugeCapacityAlwaysSyncs) {
  const auto r = run_network_sim(uniform_config(3, 3.0, 6.0, 1000000000, 4, 2000));
  EXPECT_EQ(r.sync_success_rate, 1.0);
  EXPECT_EQ(r.predicted_success, 1.0);
  for (double p : r.per_node_failure) EXPECT_EQ(p, 0.0);
  EXPECT_EQ(r.rounds_used, 2000);
}

TEST(NetworkSim, SingleNodeSuccessIsComplementOfFailure) {
  const auto r = run_network_sim(uniform_config(1, 3.0, 6.0, 2, 1, 20000));
  EXPECT_GT(r.per_node_failure[0], 0.0);
  EXPECT_LT(r.per_node_failure[0], 1.0);
  EXPECT_DOUBLE_EQ(r.sync_success_rate, 1.0 - r.per_node_failure[0]);
}

TEST(NetworkSim, ProductFormHoldsForIndependentNodes) {
  for (int n_partial : {1, 10}) {
    const auto r = run_network_sim(uniform_config(3, 3.0, 6.0, 4, n_partial, 100000));
    const double se = r.combined_std_err();
    EXPECT_LE(std::abs(r.sync_success_rate - r.predicted_success), 3.0 * se + 1e-12)
        << "n_partial " << n_partial;
    for (double p : r.per_node_failure) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(NetworkSim, SameSeedSameReport) {
  auto c = uniform_config(3, 3.0, 6.0, 4, 2, 5000, 9);
  EXPECT_EQ(run_network_sim(c), run_network_sim(c));
  c.strategy = Equilibrium{GameSpec::uniform(3, 0.2, 10, 5)};
  EXPECT_EQ(run_network_sim(c), run_network_sim(c));
  auto other = c;
  other.master_seed = 10;
  EXPECT_NE(run_network_sim(c).per_node_failure, run_network_sim(other).per_node_failure);
}

TEST(NetworkSim, RejectsBadConfig) {
  auto c = uniform_config(2, 3.0, 6.0, 4, 1, 10);
  c.rounds = 0;
  EXPECT_THROW(run_network_sim(c), ValidationError);
  c = uniform_config(2, 3.0, 6.0, -1, 1, 10);
  EXPECT_THROW(run_network_sim(c), ValidationError);
  c = uniform_config(2, 3.0, 6.0, 4, 0, 10);
  EXPECT_THROW(run_network_sim(c), ValidationError);
  c = uniform_config(2, 6.0, 3.0, 4, 1, 10);
  EXPECT_THROW(run_network_sim(c), ValidationError);
  c = uniform_config(2, 3.0, 6.0, 4, 1, 10);
  c.strategy = Equilibrium{GameSpec::uniform(3, 0.2, 10, 5)};
  EXPECT_THROW(run_network_sim(c), ValidationError);
  EXPECT_THROW(run_network_sim(NetSimConfig{}), ValidationError);
}

TEST(CompareStrategies, CautiousRequestCountIsExact) {
  const auto c = uniform_config(4, 3.0, 6.0, 4, 3, 1000);
  const auto both = compare_strategies(c, GameSpec::uniform(4, 0.2, 10, 5));
  EXPECT_EQ(both.cautious.requests_sent, 3 * 4 * 1000);
  // Single-sender equilibrium: one request per partial node per round.
  EXPECT_EQ(both.equilibrium.requests_sent, 3 * 1000);
  EXPECT_EQ(both.equilibrium.redundant_responses, 0);
}

TEST(CompareStrategies, GenerousProfitSendsToAll) {
  const auto c = uniform_config(3, 3.0, 6.0, 4, 2, 2000);
  const GameSpec spec = GameSpec::uniform(3, 0.2, 100, 1);
  const auto r = solve_ns(spec);
  EXPECT_NEAR(r.distribution.g[7], 1.0, 1e-9);
  const auto both = compare_strategies(c, spec);
  EXPECT_EQ(both.cautious.requests_sent, both.equilibrium.requests_sent);
  EXPECT_EQ(both.cautious.sync_success_rate, both.equilibrium.sync_success_rate);
}

TEST(CompareStrategies, CautiousSucceedsMoreAndCostsMore) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto c = uniform_config(3, 3.0, 6.0, 4, 1, 50000, seed);
    const auto both = compare_strategies(c, GameSpec::uniform(3, 0.2, 10, 5));
    EXPECT_GE(both.cautious.sync_success_rate, both.equilibrium.sync_success_rate);
    EXPECT_LE(both.equilibrium.requests_sent, both.cautious.requests_sent);
    EXPECT_GT(both.cautious.redundant_responses, 0);
  }
}

TEST(CompareStrategies, DimensionMismatch) {
  const auto c = uniform_config(3, 3.0, 6.0, 4, 1, 10);
  EXPECT_THROW(compare_strategies(c, GameSpec::uniform(2, 0.2, 10, 5)), ValidationError);
}

TEST(ImpliedEpsilon, MatchesClosedFormTail) {
  const auto eps = implied_epsilon({{{3.0, 6.0}, 4}, {{2.0, 8.0}, 1}});
  EXPECT_NEAR(eps[0], 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(eps[1], 0.25, 1e-15);
  // Capacity 0 would give exactly 1, which the game excludes.
  EXPECT_LT(implied_epsilon({{{3.0, 6.0}, 0}})[0], 1.0);
}

}  // namespace
}  // namespace syncnode
