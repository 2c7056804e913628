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

// syncnode: command-line runner for the synchronization analysis toolkit.
//
//   syncnode <decay|tail|capacity|rate|decide|sweep|netsim> [flags]
//
// Every subcommand accepts --seed, --reps, --out and --config. A config file
// holds flat `key = value` lines whose keys are the long flag names (dashes
// or underscores); flags given on the command line win over file values.
// Exit codes: 0 success, 1 invalid input, 2 numerical/solver failure.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "syncnode/errors.hpp"
#include "syncnode/experiments.hpp"

namespace ex = syncnode::experiments;

namespace {

struct Common {
  std::uint64_t seed = ex::kDefaultSeed;
  int reps = ex::kDefaultReps;
  std::string out;
  std::string config;
};

// String-typed flags for lists and optional values; converted after parsing.
struct Raw {
  std::string gammas = "3,4,5,6,7,8,9,10";
  std::string epsilons;
  std::string eps1 = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string epsilon;
  std::string alpha;
  std::string cost;
  std::string lambda_list = "3";
  std::string mu_list = "6";
  std::string capacity_list = "4";
  std::string param = "alpha";
  std::string strategy = "compare";
  std::optional<double> from, to, step;
  std::optional<double> sweep_alpha, sweep_cost;
};

struct Invocation {
  Common common;
  Raw raw;
  ex::DecayOptions decay;
  ex::TailOptions tail;
  ex::CapacityOptions capacity;
  ex::RateOptions rate;
  ex::DecideOptions decide;
  ex::SweepOptions sweep;
  ex::NetsimOptions netsim;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master random seed")->capture_default_str();
  sub->add_option("--reps", c.reps, "Repetitions for statistical commands")
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output CSV path (default stdout)");
  sub->add_option("--config", c.config, "Flat key = value config file");
}

void build(CLI::App& app, Invocation& v) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto* decay = app.add_subcommand("decay", "Tabulate I(x) over an x by (mu - lambda) grid");
  add_common(decay, v.common);
  decay->add_option("--x-min", v.decay.x_min)->capture_default_str();
  decay->add_option("--x-max", v.decay.x_max)->capture_default_str();
  decay->add_option("--x-steps", v.decay.x_steps)->capture_default_str();
  decay->add_option("--lambda", v.decay.lambda)->capture_default_str();
  decay->add_option("--gap-min", v.decay.gap_min)->capture_default_str();
  decay->add_option("--gap-max", v.decay.gap_max)->capture_default_str();
  decay->add_option("--gap-steps", v.decay.gap_steps)->capture_default_str();

  auto* tail = app.add_subcommand("tail", "Monte Carlo response failure rate and decay slope");
  add_common(tail, v.common);
  tail->add_option("--lambda", v.tail.lambda)->capture_default_str();
  tail->add_option("--mu", v.tail.mu)->capture_default_str();
  tail->add_option("--gammas", v.raw.gammas, "Comma-separated thresholds")->capture_default_str();
  tail->add_option("--runs", v.tail.runs, "Walks per repetition")->capture_default_str();
  tail->add_option("--horizon", v.tail.horizon)->capture_default_str();

  auto* capacity = app.add_subcommand("capacity", "Effective response capacity per epsilon");
  add_common(capacity, v.common);
  capacity->add_option("--epsilon", v.raw.epsilons, "Comma-separated tolerance degrees");
  capacity->add_option("--lambda", v.capacity.lambda)->capture_default_str();
  capacity->add_option("--mu", v.capacity.mu)->capture_default_str();

  auto* rate = app.add_subcommand("rate", "Effective response rate per epsilon");
  add_common(rate, v.common);
  rate->add_option("--epsilon", v.raw.epsilons, "Comma-separated tolerance degrees");
  rate->add_option("--lambda", v.rate.lambda)->capture_default_str();
  rate->add_option("--gamma", v.rate.gamma)->capture_default_str();

  auto* decide = app.add_subcommand("decide", "Best correlated-equilibrium request decision");
  add_common(decide, v.common);
  decide->add_option("--m", v.decide.m)->capture_default_str();
  decide->add_option("--eps1", v.raw.eps1, "Sweep values for node 1")->capture_default_str();
  decide->add_option("--eps-rest", v.decide.eps_rest)->capture_default_str();
  decide->add_option("--epsilon", v.raw.epsilon, "Explicit m-vector (replaces the sweep)");
  decide->add_option("--alpha", v.raw.alpha, "Scalar or m-vector (default 10)");
  decide->add_option("--cost", v.raw.cost, "Scalar or m-vector (default 5)");

  auto* sweep = app.add_subcommand("sweep", "Maximized total utility over an alpha or cost range");
  add_common(sweep, v.common);
  sweep->add_option("--param", v.raw.param, "alpha or cost")
      ->check(CLI::IsMember({"alpha", "cost"}))
      ->capture_default_str();
  sweep->add_option("--from", v.raw.from, "Range start (default 1)");
  sweep->add_option("--to", v.raw.to, "Range end (default 10)");
  sweep->add_option("--step", v.raw.step, "Range step (default 1)");
  sweep->add_option("--alpha", v.raw.sweep_alpha, "Fixed alpha for cost sweeps (default 10)");
  sweep->add_option("--cost", v.raw.sweep_cost, "Fixed cost for alpha sweeps (default 5)");
  sweep->add_option("--m", v.sweep.m)->capture_default_str();
  sweep->add_option("--epsilon", v.sweep.epsilon, "Uniform tolerance degree")
      ->capture_default_str();

  auto* netsim = app.add_subcommand("netsim", "Partial/full node pull simulation");
  add_common(netsim, v.common);
  netsim->add_option("--m", v.netsim.m)->capture_default_str();
  netsim->add_option("--lambda", v.raw.lambda_list, "Scalar or m-vector")->capture_default_str();
  netsim->add_option("--mu", v.raw.mu_list, "Scalar or m-vector")->capture_default_str();
  netsim->add_option("--capacity", v.raw.capacity_list, "Scalar or m-vector")
      ->capture_default_str();
  netsim->add_option("--n-partial", v.netsim.n_partial)->capture_default_str();
  netsim->add_option("--rounds", v.netsim.rounds)->capture_default_str();
  netsim->add_option("--strategy", v.raw.strategy, "cautious, equilibrium or compare")
      ->check(CLI::IsMember({"cautious", "equilibrium", "compare"}))
      ->capture_default_str();
  netsim->add_option("--alpha", v.raw.alpha, "Scalar or m-vector (default 10)");
  netsim->add_option("--cost", v.raw.cost, "Scalar or m-vector (default 5)");
  netsim->add_option("--epsilon", v.raw.epsilon,
                     "Game tolerance degrees (default (lambda/mu)^capacity)");
}

// Reads `key = value` lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  syncnode::require(static_cast<bool>(in), "cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    syncnode::require(eq != std::string::npos,
                      path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    syncnode::require(!key.empty() && !value.empty(),
                      path + ":" + std::to_string(lineno) + ": expected key = value");
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    syncnode::require(key != "config", "config files cannot include other configs");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

std::string dispatch(const std::string& name, Invocation& v) {
  const Raw& r = v.raw;
  if (name == "decay") return ex::run_decay(v.decay);
  if (name == "tail") {
    v.tail.gammas = ex::parse_int_list(r.gammas);
    v.tail.reps = v.common.reps;
    v.tail.seed = v.common.seed;
    return ex::run_tail(v.tail);
  }
  if (name == "capacity") {
    if (!r.epsilons.empty()) v.capacity.epsilons = ex::parse_list(r.epsilons);
    return ex::run_capacity(v.capacity);
  }
  if (name == "rate") {
    if (!r.epsilons.empty()) v.rate.epsilons = ex::parse_list(r.epsilons);
    return ex::run_rate(v.rate);
  }
  if (name == "decide") {
    v.decide.eps1 = ex::parse_list(r.eps1);
    if (!r.epsilon.empty()) v.decide.epsilon = ex::parse_list(r.epsilon);
    if (!r.alpha.empty()) v.decide.alpha = ex::parse_list(r.alpha);
    if (!r.cost.empty()) v.decide.cost = ex::parse_list(r.cost);
    return ex::run_decide(v.decide);
  }
  if (name == "sweep") {
    v.sweep.param = r.param == "cost" ? ex::SweepParam::Cost : ex::SweepParam::Alpha;
    v.sweep.from = r.from;
    v.sweep.to = r.to;
    v.sweep.step = r.step;
    if (r.sweep_alpha) v.sweep.alpha = *r.sweep_alpha;
    if (r.sweep_cost) v.sweep.cost = *r.sweep_cost;
    return ex::run_sweep(v.sweep);
  }
  // netsim
  v.netsim.lambda = ex::parse_list(r.lambda_list);
  v.netsim.mu = ex::parse_list(r.mu_list);
  v.netsim.capacity = ex::parse_list(r.capacity_list);
  v.netsim.mode = r.strategy == "cautious"      ? ex::NetsimMode::Cautious
                  : r.strategy == "equilibrium" ? ex::NetsimMode::Equilibrium
                                                : ex::NetsimMode::Compare;
  if (!r.alpha.empty()) v.netsim.alpha = ex::parse_list(r.alpha);
  if (!r.cost.empty()) v.netsim.cost = ex::parse_list(r.cost);
  if (!r.epsilon.empty()) v.netsim.epsilon = ex::parse_list(r.epsilon);
  v.netsim.reps = v.common.reps;
  v.netsim.seed = v.common.seed;
  return ex::run_netsim(v.netsim);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // First pass discovers the subcommand and the config path.
  auto first = std::make_unique<Invocation>();
  CLI::App probe{"syncnode"};
  build(probe, *first);
  try {
    probe.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return probe.exit(e) == 0 ? 0 : 1;
  }
  const std::string name = probe.get_subcommands().front()->get_name();

  auto v = std::make_unique<Invocation>();
  CLI::App app{"syncnode"};
  build(app, *v);
  if (!first->common.config.empty()) {
    // Config values go right after the subcommand so later flags override them.
    std::vector<std::string> merged;
    std::size_t pos = 0;
    while (pos < args.size() && args[pos] != name) merged.push_back(args[pos++]);
    merged.push_back(name);
    CLI::App* sub = app.get_subcommand(name);
    for (const auto& [key, value] : read_config(first->common.config)) {
      syncnode::require(sub->get_option_no_throw("--" + key) != nullptr,
                        "unknown config key '" + key + "' for " + name);
      merged.push_back("--" + key + "=" + value);
    }
    for (++pos; pos < args.size(); ++pos) merged.push_back(args[pos]);
    args = std::move(merged);
  }
  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string csv = dispatch(name, *v);
  if (v->common.out.empty()) {
    std::cout << csv << std::flush;
  } else {
    std::ofstream out(v->common.out, std::ios::binary);
    syncnode::require(static_cast<bool>(out), "cannot open '" + v->common.out + "'");
    out << csv;
    out.close();
    syncnode::require(!out.fail(), "failed writing '" + v->common.out + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const syncnode::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const syncnode::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
}
