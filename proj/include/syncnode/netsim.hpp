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

// Round-based simulation of partial nodes pulling from m full nodes.
//
// Each round, full node i receives Poisson(lambda_i) ambient requests plus
// the requests routed to it by partial nodes, then serves Poisson(mu_i)
// responses (reflected queue). Requests routed in a round fail iff the
// post-arrival backlog exceeds the node's capacity. A partial node is
// synchronized in a round iff at least one of its requests succeeds.
//
// Streams: node i draws from derive_seed(derive_seed(seed, 0), i) and
// partial node j routes with derive_seed(derive_seed(seed, 1), j). Both
// strategies see identical node streams for a given seed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "syncnode/errors.hpp"
#include "syncnode/ldp.hpp"
#include "syncnode/queue_model.hpp"
#include "syncnode/rng.hpp"
#include "syncnode/sync_game.hpp"

namespace syncnode {

struct FullNodeConfig {
  RateParams params;
  std::int64_t capacity = 0;
};

struct CautiousAll {};

struct Equilibrium {
  GameSpec spec;
};

using Strategy = std::variant<CautiousAll, Equilibrium>;

struct NetSimConfig {
  int n_partial = 1;
  std::vector<FullNodeConfig> full_nodes;
  Strategy strategy = CautiousAll{};
  std::int64_t rounds = 1;
  std::uint64_t master_seed = 42;

  int m() const { return static_cast<int>(full_nodes.size()); }

  void validate() const {
    require(n_partial >= 1, "n_partial must be >= 1");
    require(!full_nodes.empty(), "at least one full node is required");
    require(rounds >= 1, "rounds must be >= 1");
    for (const auto& node : full_nodes) {
      node.params.validate();
      require(node.params.mu <= kMaxPoissonRate, "mu must be <= 30");
      require(node.capacity >= 0, "capacities must be >= 0");
    }
    if (const auto* eq = std::get_if<Equilibrium>(&strategy)) {
      eq->spec.validate();
      require(eq->spec.m == m(), "game size must match the number of full nodes");
    }
  }
};

struct SyncReport {
  std::vector<double> per_node_failure;  // fraction of rounds node i would fail
  double sync_success_rate = 0.0;        // over (partial node, round) pairs
  double predicted_success = 0.0;        // 1 - prod per_node_failure
  std::int64_t rounds_used = 0;
  std::int64_t requests_sent = 0;
  std::int64_t redundant_responses = 0;  // successes beyond the first per pair
  double success_std_err = 0.0;
  double predicted_std_err = 0.0;        // delta method over per-node rates

  // Combined standard error of (realized - predicted).
  double combined_std_err() const {
    return std::sqrt(success_std_err * success_std_err +
                     predicted_std_err * predicted_std_err);
  }

  bool operator==(const SyncReport&) const = default;
};

namespace detail {

// Inverse-CDF draw of a profile code from a distribution over 2^m profiles.
inline std::uint32_t sample_profile(const std::vector<double>& g, RandomStream& rng) {
  const double u = rng.uniform();
  double cdf = 0.0;
  std::uint32_t last = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] <= 0.0) continue;
    cdf += g[k];
    last = static_cast<std::uint32_t>(k);
    if (u < cdf) return last;
  }
  return last;
}

}  // namespace detail

inline SyncReport run_network_sim(const NetSimConfig& config) {
  config.validate();
  const int m = config.m();
  const auto mz = static_cast<std::size_t>(m);
  const auto partials = static_cast<std::size_t>(config.n_partial);

  std::vector<double> equilibrium_g;
  if (const auto* eq = std::get_if<Equilibrium>(&config.strategy)) {
    equilibrium_g = solve_ns(eq->spec).distribution.g;
  }
  const bool cautious = equilibrium_g.empty();
  const std::uint32_t all_nodes = (1u << m) - 1u;

  std::vector<RandomStream> node_rng, route_rng;
  std::vector<PoissonSampler> arrivals, responses;
  const std::uint64_t node_master = derive_seed(config.master_seed, 0);
  const std::uint64_t route_master = derive_seed(config.master_seed, 1);
  for (std::size_t i = 0; i < mz; ++i) {
    node_rng.emplace_back(derive_seed(node_master, i));
    arrivals.emplace_back(config.full_nodes[i].params.lambda);
    responses.emplace_back(config.full_nodes[i].params.mu);
  }
  for (std::size_t j = 0; j < partials; ++j) {
    route_rng.emplace_back(derive_seed(route_master, j));
  }

  std::vector<std::int64_t> queue(mz, 0);
  std::vector<std::int64_t> failures(mz, 0);
  std::vector<std::int64_t> routed(mz);
  std::vector<std::uint32_t> choice(partials);
  std::vector<char> failed(mz);
  std::int64_t synced = 0;

  SyncReport report;
  for (std::int64_t t = 0; t < config.rounds; ++t) {
    std::fill(routed.begin(), routed.end(), 0);
    for (std::size_t j = 0; j < partials; ++j) {
      choice[j] = cautious ? all_nodes : detail::sample_profile(equilibrium_g, route_rng[j]);
      for (std::size_t i = 0; i < mz; ++i) {
        if ((choice[j] >> i) & 1u) ++routed[i];
      }
    }
    for (std::size_t i = 0; i < mz; ++i) {
      const std::int64_t a = arrivals[i](node_rng[i]) + routed[i];
      const std::int64_t r = responses[i](node_rng[i]);
      failed[i] = queue[i] + a > config.full_nodes[i].capacity ? 1 : 0;
      failures[i] += failed[i];
      queue[i] = step_queue(queue[i], a, r);
      report.requests_sent += routed[i];
    }
    for (std::size_t j = 0; j < partials; ++j) {
      std::int64_t ok = 0;
      for (std::size_t i = 0; i < mz; ++i) {
        if (((choice[j] >> i) & 1u) && !failed[i]) ++ok;
      }
      if (ok > 0) {
        ++synced;
        report.redundant_responses += ok - 1;
      }
    }
  }

  const auto rounds = static_cast<double>(config.rounds);
  const double pairs = rounds * static_cast<double>(config.n_partial);
  report.rounds_used = config.rounds;
  report.per_node_failure.resize(mz);
  double product = 1.0;
  for (std::size_t i = 0; i < mz; ++i) {
    report.per_node_failure[i] = static_cast<double>(failures[i]) / rounds;
    product *= report.per_node_failure[i];
  }
  report.sync_success_rate = static_cast<double>(synced) / pairs;
  report.predicted_success = 1.0 - product;
  const double s = report.sync_success_rate;
  report.success_std_err = std::sqrt(s * (1.0 - s) / pairs);
  double var = 0.0;
  for (std::size_t i = 0; i < mz; ++i) {
    double others = 1.0;
    for (std::size_t k = 0; k < mz; ++k) {
      if (k != i) others *= report.per_node_failure[k];
    }
    const double p = report.per_node_failure[i];
    var += others * others * p * (1.0 - p) / rounds;
  }
  report.predicted_std_err = std::sqrt(var);
  return report;
}

struct StrategyComparison {
  SyncReport cautious;
  SyncReport equilibrium;
};

// Runs both strategies on the same seed, so node arrival/response draws are
// shared.
inline StrategyComparison compare_strategies(const NetSimConfig& config,
                                             const GameSpec& spec) {
  spec.validate();
  require(spec.m == config.m(), "game size must match the number of full nodes");
  NetSimConfig cautious = config;
  cautious.strategy = CautiousAll{};
  NetSimConfig equilibrium = config;
  equilibrium.strategy = Equilibrium{spec};
  return {run_network_sim(cautious), run_network_sim(equilibrium)};
}

// Tolerance degree a node's capacity implies under the closed-form tail,
// (lambda / mu)^capacity clipped into (0, 1) for use as a game input.
inline std::vector<double> implied_epsilon(const std::vector<FullNodeConfig>& nodes) {
  std::vector<double> eps;
  eps.reserve(nodes.size());
  for (const auto& node : nodes) {
    const double e = failure_rate_approx(static_cast<double>(node.capacity), node.params);
    eps.push_back(std::clamp(e, 1e-12, 1.0 - 1e-12));
  }
  return eps;
}

}  // namespace syncnode
