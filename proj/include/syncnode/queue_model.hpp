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

// Full-node request queue: Poisson arrivals and responses per unit time slot,
// the reflected queue, the unreflected cumulative backlog, and Monte Carlo
// estimation of P(sup_t L_t > gamma).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "syncnode/errors.hpp"
#include "syncnode/rng.hpp"

namespace syncnode {

inline constexpr double kMaxPoissonRate = 30.0;
inline constexpr std::int64_t kDefaultHorizon = 5000;

struct RateParams {
  double lambda = 0.0;  // mean request arrivals per slot
  double mu = 0.0;      // mean responses per slot

  void validate() const {
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    require(std::isfinite(mu) && mu > lambda, "mu must exceed lambda");
  }
};

struct WalkResult {
  std::int64_t sup_backlog = 0;  // max(0, max_t L_t)
  std::int64_t horizon = 0;
};

struct TailEstimate {
  std::int64_t gamma = 0;
  std::int64_t runs = 0;
  std::int64_t hits = 0;
  double p_hat = 0.0;
  double std_err = 0.0;

  bool operator==(const TailEstimate&) const = default;
};

struct SlopeFit {
  double slope = 0.0;      // nats per request; estimates ln(mu / lambda)
  double intercept = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // estimates dropped because p_hat == 0
};

// Poisson sampler by inversion with sequential search over the CDF. One
// uniform per draw, so a stream yields the same counts on every platform.
class PoissonSampler {
 public:
  explicit PoissonSampler(double rate) : rate_(rate) {
    require(std::isfinite(rate) && rate > 0.0 && rate <= kMaxPoissonRate,
            "Poisson rate must lie in (0, 30]");
    p0_ = std::exp(-rate);
  }

  double rate() const { return rate_; }

  std::int64_t operator()(RandomStream& rng) const {
    const double u = rng.uniform();
    std::int64_t k = 0;
    double p = p0_;
    double cdf = p;
    // p underflows to 0 long before k overflows; the CDF may saturate just
    // below 1, so stop once no mass is left to add.
    while (cdf <= u && p > 0.0) {
      ++k;
      p *= rate_ / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

 private:
  double rate_;
  double p0_;
};

inline std::int64_t sample_poisson(double rate, RandomStream& rng) {
  return PoissonSampler(rate)(rng);
}

// Lindley recursion Q_t = (Q_{t-1} + a_t - r_t)^+.
inline std::int64_t step_queue(std::int64_t q_prev, std::int64_t arrivals,
                               std::int64_t responses) {
  require(q_prev >= 0 && arrivals >= 0 && responses >= 0,
          "step_queue inputs must be nonnegative");
  return std::max<std::int64_t>(q_prev + arrivals - responses, 0);
}

// Unreflected walk L_t = A_t - R_t over t = 1..horizon. Returns the running
// maximum floored at L_0 = 0.
inline WalkResult simulate_walk(const RateParams& params, std::int64_t horizon,
                                RandomStream& rng) {
  params.validate();
  require(horizon >= 1, "horizon must be >= 1");
  const PoissonSampler arrivals(params.lambda);
  const PoissonSampler responses(params.mu);
  std::int64_t level = 0;
  std::int64_t peak = 0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    level += arrivals(rng);
    level -= responses(rng);
    peak = std::max(peak, level);
  }
  return {peak, horizon};
}

namespace detail {

inline unsigned worker_count(std::int64_t jobs) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(
      std::min<std::int64_t>(hw, std::max<std::int64_t>(jobs, 1)));
}

}  // namespace detail

// Runs `runs` independent walks; run r uses the stream seeded with
// derive_seed(master_seed, r), so the result does not depend on `workers`
// (0 picks the hardware thread count). Every gamma is evaluated on the same set of
// walks, so p_hat is nonincreasing in gamma.
inline std::vector<TailEstimate> estimate_tail(const RateParams& params,
                                               std::span<const std::int64_t> gammas,
                                               std::int64_t runs,
                                               std::int64_t horizon,
                                               std::uint64_t master_seed,
                                               unsigned workers = 0) {
  params.validate();
  require(runs >= 1, "runs must be >= 1");
  require(horizon >= 1, "horizon must be >= 1");
  require(!gammas.empty(), "gammas must be nonempty");
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    require(gammas[j] >= 0, "gammas must be nonnegative");
    require(j == 0 || gammas[j] > gammas[j - 1],
            "gammas must be strictly increasing");
  }

  std::vector<std::int64_t> sup(static_cast<std::size_t>(runs));
  if (workers == 0) workers = detail::worker_count(runs);
  auto work = [&](unsigned w) {
    for (std::int64_t r = w; r < runs; r += workers) {
      RandomStream rng(derive_seed(master_seed, static_cast<std::uint64_t>(r)));
      sup[static_cast<std::size_t>(r)] =
          simulate_walk(params, horizon, rng).sup_backlog;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  std::vector<TailEstimate> out;
  out.reserve(gammas.size());
  for (const std::int64_t gamma : gammas) {
    const auto hits = std::count_if(sup.begin(), sup.end(),
                                    [gamma](std::int64_t s) { return s > gamma; });
    TailEstimate est;
    est.gamma = gamma;
    est.runs = runs;
    est.hits = hits;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(runs);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(runs));
    out.push_back(est);
  }
  return out;
}

// Least-squares fit of -ln p_hat against gamma. Points with p_hat == 0 are
// dropped and counted in `excluded`.
inline SlopeFit fit_decay_slope(std::span<const TailEstimate> estimates) {
  SlopeFit fit;
  std::vector<double> xs, ys;
  for (const auto& e : estimates) {
    if (e.p_hat <= 0.0) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(static_cast<double>(e.gamma));
    ys.push_back(-std::log(e.p_hat));
  }
  fit.used = xs.size();
  if (fit.used < 2) {
    throw NumericalError("slope fit needs at least 2 estimates with p_hat > 0");
  }
  const double n = static_cast<double>(fit.used);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    mean_x += xs[j];
    mean_y += ys[j];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sxx += (xs[j] - mean_x) * (xs[j] - mean_x);
    sxy += (xs[j] - mean_x) * (ys[j] - mean_y);
  }
  if (sxx <= 0.0) throw NumericalError("slope fit needs distinct gamma values");
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  return fit;
}

}  // namespace syncnode
