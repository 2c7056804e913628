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

// The partial node's request decision. A profile p in {0,1}^m says which of
// the m connected full nodes receive a synchronization request. Node i earns
// the profit share
//
//   phi_i(p) = p_i (1 - eps_i) / sum_j p_j (1 - eps_j)     (0 when p = 0)
//
// and utility U_i(p) = alpha_i phi_i(p) - p_i C_i. Each send decision is a
// virtual player; the best correlated equilibrium maximizes the expected sum
// of utilities and is found as an LP over the 2^m profile probabilities.
//
// Node indices are 0-based throughout; bit i of a profile code is p_i.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "syncnode/errors.hpp"
#include "syncnode/lp.hpp"

namespace syncnode {

inline constexpr int kMaxFullNodes = 12;

struct GameSpec {
  int m = 0;
  std::vector<double> epsilon;  // response failure tolerance degrees, (0,1)
  std::vector<double> alpha;    // profit scalars, > 0
  std::vector<double> cost;     // request-sending costs, >= 0

  void validate() const {
    require(m >= 1 && m <= kMaxFullNodes, "m must lie in [1, 12]");
    const auto size = static_cast<std::size_t>(m);
    require(epsilon.size() == size && alpha.size() == size && cost.size() == size,
            "epsilon, alpha and cost must each have m entries");
    for (int i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      require(std::isfinite(epsilon[k]) && epsilon[k] > 0.0 && epsilon[k] < 1.0,
              "epsilon entries must lie in (0, 1)");
      require(std::isfinite(alpha[k]) && alpha[k] > 0.0, "alpha entries must be > 0");
      require(std::isfinite(cost[k]) && cost[k] >= 0.0, "cost entries must be >= 0");
    }
  }

  static GameSpec uniform(int m, double epsilon, double alpha, double cost) {
    const auto size = static_cast<std::size_t>(std::max(m, 0));
    return {m, std::vector<double>(size, epsilon), std::vector<double>(size, alpha),
            std::vector<double>(size, cost)};
  }
};

class Profile {
 public:
  Profile(int m, std::uint32_t code) : m_(m), code_(code) {
    require(m >= 1 && m <= kMaxFullNodes, "profile width must lie in [1, 12]");
    require(code < (1u << m), "profile code out of range");
  }

  static Profile from_bits(const std::vector<int>& bits) {
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      require(bits[i] == 0 || bits[i] == 1, "profile bits must be 0 or 1");
      if (bits[i] != 0) code |= 1u << i;
    }
    return Profile(static_cast<int>(bits.size()), code);
  }

  int m() const { return m_; }
  std::uint32_t code() const { return code_; }
  bool sends(int i) const { return ((code_ >> i) & 1u) != 0; }
  int senders() const { return std::popcount(code_); }

  Profile with(int i, bool send) const {
    return Profile(m_, send ? (code_ | (1u << i)) : (code_ & ~(1u << i)));
  }

  std::vector<int> bits() const {
    std::vector<int> out(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) out[static_cast<std::size_t>(i)] = sends(i) ? 1 : 0;
    return out;
  }

  bool operator==(const Profile&) const = default;

 private:
  int m_;
  std::uint32_t code_;
};

struct CorrelatedDistribution {
  int m = 0;
  std::vector<double> g;  // indexed by profile code

  static CorrelatedDistribution point_mass(const Profile& p) {
    CorrelatedDistribution d{p.m(), std::vector<double>(std::size_t{1} << p.m(), 0.0)};
    d.g[p.code()] = 1.0;
    return d;
  }
};

struct CeCheck {
  bool ok = false;
  double max_violation = 0.0;
};

struct DecisionReport {
  CorrelatedDistribution distribution;
  double objective = 0.0;
  std::vector<double> marginals;  // P(p_i = 1)
  Profile chosen_profile{1, 0};
  double cautious_failure = 0.0;
  CeCheck check;
};

struct PureOptimum {
  Profile profile;
  double total_utility = 0.0;
};

inline void check_node(int i, int m) {
  require(i >= 0 && i < m, "node index out of range");
}

inline double profit(const Profile& p, int i, const std::vector<double>& epsilon) {
  check_node(i, p.m());
  require(epsilon.size() == static_cast<std::size_t>(p.m()),
          "epsilon length must equal m");
  if (!p.sends(i)) return 0.0;
  double denom = 0.0;
  for (int j = 0; j < p.m(); ++j) {
    if (p.sends(j)) denom += 1.0 - epsilon[static_cast<std::size_t>(j)];
  }
  return (1.0 - epsilon[static_cast<std::size_t>(i)]) / denom;
}

inline double utility(const Profile& p, int i, const GameSpec& spec) {
  check_node(i, spec.m);
  const auto k = static_cast<std::size_t>(i);
  return spec.alpha[k] * profit(p, i, spec.epsilon) - (p.sends(i) ? spec.cost[k] : 0.0);
}

inline double total_utility(const Profile& p, const GameSpec& spec) {
  double total = 0.0;
  for (int i = 0; i < spec.m; ++i) total += utility(p, i, spec);
  return total;
}

// Failure probability when every node is asked: prod eps_i.
inline double cautious_failure(const std::vector<double>& epsilon) {
  require(!epsilon.empty(), "epsilon must be nonempty");
  double product = 1.0;
  for (double e : epsilon) {
    require(std::isfinite(e) && e > 0.0 && e < 1.0, "epsilon entries must lie in (0, 1)");
    product *= e;
  }
  return product;
}

// Variables g_k, k in [0, 2^m). Row 0: sum g = 1. Then for node i = 0..m-1
// two rows, recommended v = 0 (deviate to 1) and v = 1 (deviate to 0):
//   sum_{k : p_i(k) = v} g_k (U_i(k) - U_i(k with p_i flipped)) >= 0.
inline lp::LpProblem build_ns_lp(const GameSpec& spec) {
  spec.validate();
  const std::size_t n = std::size_t{1} << spec.m;
  lp::LpProblem problem;
  problem.n = n;
  problem.objective.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    problem.objective[k] = total_utility(Profile(spec.m, static_cast<std::uint32_t>(k)), spec);
  }
  problem.rows.push_back({std::vector<double>(n, 1.0), lp::Relation::Equal, 1.0});
  for (int i = 0; i < spec.m; ++i) {
    for (const bool recommended : {false, true}) {
      std::vector<double> coeffs(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const Profile p(spec.m, static_cast<std::uint32_t>(k));
        if (p.sends(i) != recommended) continue;
        coeffs[k] = utility(p, i, spec) - utility(p.with(i, !recommended), i, spec);
      }
      problem.rows.push_back({std::move(coeffs), lp::Relation::GreaterEqual, 0.0});
    }
  }
  return problem;
}

inline CeCheck is_correlated_equilibrium(const CorrelatedDistribution& dist,
                                         const GameSpec& spec, double tol) {
  spec.validate();
  require(dist.m == spec.m && dist.g.size() == (std::size_t{1} << spec.m),
          "distribution dimensions do not match the game");
  CeCheck out;
  for (int i = 0; i < spec.m; ++i) {
    double gain[2] = {0.0, 0.0};  // by recommended action
    for (std::size_t k = 0; k < dist.g.size(); ++k) {
      if (dist.g[k] == 0.0) continue;
      const Profile p(spec.m, static_cast<std::uint32_t>(k));
      const bool rec = p.sends(i);
      gain[rec ? 1 : 0] +=
          dist.g[k] * (utility(p, i, spec) - utility(p.with(i, !rec), i, spec));
    }
    for (double v : gain) out.max_violation = std::max(out.max_violation, -v);
  }
  out.ok = out.max_violation <= tol;
  return out;
}

// Exhaustive search over pure profiles that are correlated equilibria as
// point masses. Empty when no pure equilibrium exists; the NS optimum is at
// least this value whenever one does.
inline std::optional<PureOptimum> best_pure_profile(const GameSpec& spec) {
  spec.validate();
  std::optional<PureOptimum> best;
  const std::uint32_t n = 1u << spec.m;
  for (std::uint32_t k = 0; k < n; ++k) {
    const Profile p(spec.m, k);
    if (!is_correlated_equilibrium(CorrelatedDistribution::point_mass(p), spec, 1e-9).ok) {
      continue;
    }
    const double value = total_utility(p, spec);
    if (!best || value > best->total_utility) best = PureOptimum{p, value};
  }
  return best;
}

inline constexpr double kSupportMass = 1e-6;
inline constexpr double kCeTolerance = 1e-8;

// Most probable maximum-utility profile in the support, lowest code on ties.
inline Profile extract_profile(const CorrelatedDistribution& dist, const GameSpec& spec) {
  double best_utility = -INFINITY;
  for (std::size_t k = 0; k < dist.g.size(); ++k) {
    if (dist.g[k] <= kSupportMass) continue;
    best_utility = std::max(
        best_utility, total_utility(Profile(spec.m, static_cast<std::uint32_t>(k)), spec));
  }
  std::optional<std::size_t> chosen;
  for (std::size_t k = 0; k < dist.g.size(); ++k) {
    if (dist.g[k] <= kSupportMass) continue;
    const double u = total_utility(Profile(spec.m, static_cast<std::uint32_t>(k)), spec);
    if (u < best_utility - 1e-9 * (1.0 + std::abs(best_utility))) continue;
    if (!chosen || dist.g[k] > dist.g[*chosen] + 1e-12) chosen = k;
  }
  if (!chosen) throw NumericalError("distribution has no support");
  return Profile(spec.m, static_cast<std::uint32_t>(*chosen));
}

inline DecisionReport solve_ns(const GameSpec& spec) {
  const lp::LpProblem problem = build_ns_lp(spec);
  const lp::LpSolution sol = lp::solve(problem);
  if (sol.status != lp::LpStatus::Optimal) {
    throw NumericalError(std::string("NS linear program is ") + lp::to_string(sol.status));
  }

  DecisionReport report;
  report.distribution.m = spec.m;
  report.distribution.g = sol.x;
  double mass = 0.0;
  for (double& g : report.distribution.g) {
    if (g < 0.0) {
      if (g < -1e-9) throw NumericalError("solver returned a negative probability");
      g = 0.0;
    }
    mass += g;
  }
  if (std::abs(mass - 1.0) > 1e-6) throw NumericalError("solver returned mass != 1");
  for (double& g : report.distribution.g) g /= mass;

  report.objective = 0.0;
  report.marginals.assign(static_cast<std::size_t>(spec.m), 0.0);
  for (std::size_t k = 0; k < report.distribution.g.size(); ++k) {
    const double g = report.distribution.g[k];
    if (g == 0.0) continue;
    const Profile p(spec.m, static_cast<std::uint32_t>(k));
    report.objective += g * total_utility(p, spec);
    for (int i = 0; i < spec.m; ++i) {
      if (p.sends(i)) report.marginals[static_cast<std::size_t>(i)] += g;
    }
  }
  report.chosen_profile = extract_profile(report.distribution, spec);
  report.cautious_failure = cautious_failure(spec.epsilon);
  report.check = is_correlated_equilibrium(report.distribution, spec, kCeTolerance);
  if (!report.check.ok) {
    throw NumericalError("NS solution fails the correlated-equilibrium check");
  }
  return report;
}

}  // namespace syncnode
