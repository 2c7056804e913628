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

// Experiment drivers behind the syncnode CLI. Each returns the full CSV
// document (header row, '.' decimals, LF line endings) so that output is
// only emitted once the whole computation succeeded.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "syncnode/errors.hpp"
#include "syncnode/ldp.hpp"
#include "syncnode/netsim.hpp"
#include "syncnode/queue_model.hpp"
#include "syncnode/sync_game.hpp"

namespace syncnode::experiments {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kDefaultReps = 20;

inline std::string num(double v) { return fmt::format("{:.12g}", v == 0.0 ? 0.0 : v); }

// Splits "a,b,c" into doubles; surrounding blanks are ignored.
inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    require(first != std::string::npos, "empty entry in list '" + text + "'");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == item.size() && std::isfinite(v), "bad number '" + item + "'");
    out.push_back(v);
  }
  require(!out.empty(), "list must be nonempty");
  return out;
}

inline std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (double v : parse_list(text)) {
    require(v == std::floor(v) && std::abs(v) < 9e15, "expected integers in '" + text + "'");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

// n evenly spaced points covering [lo, hi]; n == 1 gives {lo}.
inline std::vector<double> linspace(double lo, double hi, int n) {
  require(n >= 1, "step count must be >= 1");
  require(hi >= lo, "range upper bound must be >= lower bound");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] =
        n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = hi;
  return out;
}

// from, from + step, ... up to `to` (inclusive within 1e-9 step).
inline std::vector<double> arange(double from, double to, double step) {
  require(step > 0.0, "step must be > 0");
  require(to >= from, "range upper bound must be >= lower bound");
  std::vector<double> out;
  for (std::int64_t k = 0;; ++k) {
    const double v = from + static_cast<double>(k) * step;
    if (v > to + 1e-9 * step) break;
    out.push_back(v);
    require(out.size() <= 100000, "range has too many points");
  }
  return out;
}

// Expands a scalar or an m-long list into m values.
inline std::vector<double> per_node(const std::vector<double>& values, int m,
                                    const char* name) {
  if (values.size() == 1) return std::vector<double>(static_cast<std::size_t>(m), values[0]);
  require(values.size() == static_cast<std::size_t>(m),
          std::string(name) + " must have 1 or m entries");
  return values;
}

// ---------------------------------------------------------------- decay

struct DecayOptions {
  double x_min = 0.0, x_max = 1.0;
  int x_steps = 51;
  double lambda = 3.0;
  double gap_min = 0.0, gap_max = 10.0;
  int gap_steps = 51;
};

inline std::string run_decay(const DecayOptions& o) {
  const auto grid = decay_surface(linspace(o.x_min, o.x_max, o.x_steps),
                                  linspace(o.gap_min, o.gap_max, o.gap_steps), o.lambda);
  std::string out = "x,mu_minus_lambda,i_value\n";
  for (const auto& p : grid) {
    out += fmt::format("{},{},{}\n", num(p.x), num(p.rate_gap), num(p.i_value));
  }
  return out;
}

// ----------------------------------------------------------------- tail

struct TailOptions {
  double lambda = 3.0, mu = 6.0;
  std::vector<std::int64_t> gammas = {3, 4, 5, 6, 7, 8, 9, 10};
  std::int64_t runs = 5000;  // per repetition; repetitions are pooled
  int reps = kDefaultReps;
  std::int64_t horizon = kDefaultHorizon;
  std::uint64_t seed = kDefaultSeed;
};

// Footer row: fit,<fitted slope>,<analytic ln(mu/lambda)>,<intercept>,<excluded>.
inline std::string run_tail(const TailOptions& o) {
  require(o.reps >= 1, "reps must be >= 1");
  require(o.runs >= 1, "runs must be >= 1");
  const RateParams params{o.lambda, o.mu};
  const auto estimates =
      estimate_tail(params, o.gammas, o.runs * o.reps, o.horizon, o.seed);
  std::string out = "gamma,hits,runs,p_hat,std_err\n";
  for (const auto& e : estimates) {
    out += fmt::format("{},{},{},{},{}\n", e.gamma, e.hits, e.runs, num(e.p_hat),
                       num(e.std_err));
  }
  const SlopeFit fit = fit_decay_slope(estimates);
  out += fmt::format("fit,{},{},{},{}\n", num(fit.slope),
                     num(std::log(o.mu / o.lambda)), num(fit.intercept), fit.excluded);
  return out;
}

// ------------------------------------------------------ capacity / rate

inline const std::vector<double> kDefaultEpsilons = {0.001, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0};

struct CapacityOptions {
  std::vector<double> epsilons = kDefaultEpsilons;
  double lambda = 3.0, mu = 6.0;
};

inline std::string run_capacity(const CapacityOptions& o) {
  std::string out = "epsilon,gamma_star\n";
  for (double eps : o.epsilons) {
    out += fmt::format("{},{}\n", num(eps),
                       num(effective_capacity({eps}, RateParams{o.lambda, o.mu})));
  }
  return out;
}

struct RateOptions {
  std::vector<double> epsilons = kDefaultEpsilons;
  double lambda = 3.0;
  double gamma = 10.0;
};

inline std::string run_rate(const RateOptions& o) {
  std::string out = "epsilon,mu_star\n";
  for (double eps : o.epsilons) {
    out += fmt::format("{},{}\n", num(eps), num(effective_rate({eps}, o.gamma, o.lambda)));
  }
  return out;
}

// --------------------------------------------------------------- decide

struct DecideOptions {
  int m = 8;
  std::vector<double> eps1 = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double eps_rest = 0.2;
  std::optional<std::vector<double>> epsilon;  // explicit vector; overrides the sweep
  std::vector<double> alpha = {10.0};
  std::vector<double> cost = {5.0};
};

inline std::string run_decide(const DecideOptions& o) {
  require(o.m >= 1 && o.m <= kMaxFullNodes, "m must lie in [1, 12]");
  std::vector<std::vector<double>> cases;
  if (o.epsilon) {
    require(o.epsilon->size() == static_cast<std::size_t>(o.m), "epsilon must have m entries");
    cases.push_back(*o.epsilon);
  } else {
    for (double e1 : o.eps1) {
      std::vector<double> eps(static_cast<std::size_t>(o.m), o.eps_rest);
      eps[0] = e1;
      cases.push_back(std::move(eps));
    }
  }

  std::string out = "eps1";
  for (int i = 1; i <= o.m; ++i) out += fmt::format(",p_{}", i);
  out += ",objective";
  for (int i = 1; i <= o.m; ++i) out += fmt::format(",marginal_{}", i);
  out += "\n";

  for (const auto& eps : cases) {
    const GameSpec spec{o.m, eps, per_node(o.alpha, o.m, "alpha"),
                        per_node(o.cost, o.m, "cost")};
    spec.validate();
    const DecisionReport report = solve_ns(spec);
    out += num(eps[0]);
    for (int i = 0; i < o.m; ++i) out += report.chosen_profile.sends(i) ? ",1" : ",0";
    out += "," + num(report.objective);
    for (double g : report.marginals) out += "," + num(g);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- sweep

enum class SweepParam { Alpha, Cost };

struct SweepOptions {
  SweepParam param = SweepParam::Alpha;
  std::optional<double> from, to, step;  // default 1..10 step 1
  double alpha = 10.0;
  double cost = 5.0;
  int m = 8;
  double epsilon = 0.2;
};

struct SweepPoint {
  double value = 0.0;
  double max_total_utility = 0.0;
};

inline std::vector<SweepPoint> sweep_points(const SweepOptions& o) {
  std::vector<SweepPoint> out;
  for (double v : arange(o.from.value_or(1.0), o.to.value_or(10.0), o.step.value_or(1.0))) {
    const double alpha = o.param == SweepParam::Alpha ? v : o.alpha;
    const double cost = o.param == SweepParam::Cost ? v : o.cost;
    const GameSpec spec = GameSpec::uniform(o.m, o.epsilon, alpha, cost);
    spec.validate();
    out.push_back({v, solve_ns(spec).objective});
  }
  return out;
}

inline std::string run_sweep(const SweepOptions& o) {
  std::string out = "param_value,max_total_utility\n";
  for (const auto& p : sweep_points(o)) {
    out += fmt::format("{},{}\n", num(p.value), num(p.max_total_utility));
  }
  return out;
}

// --------------------------------------------------------------- netsim

enum class NetsimMode { Cautious, Equilibrium, Compare };

struct NetsimOptions {
  int m = 3;
  std::vector<double> lambda = {3.0};
  std::vector<double> mu = {6.0};
  std::vector<double> capacity = {4.0};
  int n_partial = 1;
  std::int64_t rounds = 100000;
  NetsimMode mode = NetsimMode::Compare;
  std::vector<double> alpha = {10.0};
  std::vector<double> cost = {5.0};
  std::optional<std::vector<double>> epsilon;  // default: implied by capacity
  int reps = kDefaultReps;
  std::uint64_t seed = kDefaultSeed;
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return r;
}

inline std::string run_netsim(const NetsimOptions& o) {
  require(o.m >= 1 && o.m <= kMaxFullNodes, "m must lie in [1, 12]");
  require(o.reps >= 1, "reps must be >= 1");
  NetSimConfig base;
  base.n_partial = o.n_partial;
  base.rounds = o.rounds;
  const auto lambda = per_node(o.lambda, o.m, "lambda");
  const auto mu = per_node(o.mu, o.m, "mu");
  const auto capacity = per_node(o.capacity, o.m, "capacity");
  for (int i = 0; i < o.m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    require(capacity[k] == std::floor(capacity[k]), "capacities must be integers");
    base.full_nodes.push_back({RateParams{lambda[k], mu[k]},
                               static_cast<std::int64_t>(capacity[k])});
  }
  base.validate();
  const GameSpec spec{o.m, o.epsilon ? *o.epsilon : implied_epsilon(base.full_nodes),
                      per_node(o.alpha, o.m, "alpha"), per_node(o.cost, o.m, "cost")};
  spec.validate();

  std::vector<std::pair<std::string, Strategy>> strategies;
  if (o.mode != NetsimMode::Equilibrium) strategies.emplace_back("cautious", CautiousAll{});
  if (o.mode != NetsimMode::Cautious) strategies.emplace_back("equilibrium", Equilibrium{spec});

  std::string out = "strategy,reps,rounds,n_partial,sync_success,sync_success_se,"
                    "predicted_success,predicted_success_se,requests_per_round,"
                    "redundant_per_round";
  for (int i = 1; i <= o.m; ++i) out += fmt::format(",failure_{}", i);
  out += "\n";

  for (const auto& [name, strategy] : strategies) {
    std::vector<double> success, predicted, requests, redundant;
    std::vector<std::vector<double>> failure(static_cast<std::size_t>(o.m));
    for (int rep = 0; rep < o.reps; ++rep) {
      NetSimConfig config = base;
      config.strategy = strategy;
      config.master_seed = derive_seed(o.seed, static_cast<std::uint64_t>(rep));
      const SyncReport r = run_network_sim(config);
      success.push_back(r.sync_success_rate);
      predicted.push_back(r.predicted_success);
      requests.push_back(static_cast<double>(r.requests_sent) / static_cast<double>(o.rounds));
      redundant.push_back(static_cast<double>(r.redundant_responses) /
                          static_cast<double>(o.rounds));
      for (std::size_t i = 0; i < failure.size(); ++i) failure[i].push_back(r.per_node_failure[i]);
    }
    const MeanSe s = mean_se(success), p = mean_se(predicted);
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}", name, o.reps, o.rounds, o.n_partial,
                       num(s.mean), num(s.se), num(p.mean), num(p.se),
                       num(mean_se(requests).mean), num(mean_se(redundant).mean));
    for (const auto& f : failure) out += "," + num(mean_se(f).mean);
    out += "\n";
  }
  return out;
}

}  // namespace syncnode::experiments
