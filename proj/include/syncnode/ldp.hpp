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

// Closed-form large-deviation quantities for a full node with Poisson
// arrivals (rate lambda) and responses (rate mu > lambda):
//
//   I(x)               = x ln(mu / lambda)
//   P(sup L > gamma)  ~= exp(-gamma ln(mu / lambda)) = (lambda / mu)^gamma
//   Gamma*(eps)        = -ln eps / ln(mu / lambda)
//   mu*(eps; gamma)    = lambda exp(-ln eps / gamma)
//
// Gamma = l x with the scale l left free; only the product enters the tail,
// so the functions below take gamma directly.

#pragma once

#include <cmath>
#include <vector>

#include "syncnode/errors.hpp"
#include "syncnode/queue_model.hpp"

namespace syncnode {

struct ToleranceSpec {
  double epsilon = 1.0;  // (0, 1]

  void validate() const {
    require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon <= 1.0,
            "epsilon must lie in (0, 1]");
  }
};

struct DecayPoint {
  double x = 0.0;
  double rate_gap = 0.0;  // mu - lambda
  double i_value = 0.0;
};

inline double rate_function(double x, const RateParams& params) {
  params.validate();
  require(std::isfinite(x) && x >= 0.0, "x must be >= 0");
  return x * std::log(params.mu / params.lambda);
}

inline double failure_rate_approx(double gamma, const RateParams& params) {
  params.validate();
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
  return std::exp(-gamma * std::log(params.mu / params.lambda));
}

// Effective response capacity: smallest gamma with approximate failure rate
// <= epsilon. Real-valued; callers that need an integer capacity round up.
inline double effective_capacity(const ToleranceSpec& tol, const RateParams& params) {
  tol.validate();
  params.validate();
  return -std::log(tol.epsilon) / std::log(params.mu / params.lambda);
}

// Effective response rate: smallest mu with approximate failure rate
// <= epsilon at capacity gamma.
inline double effective_rate(const ToleranceSpec& tol, double gamma, double lambda) {
  tol.validate();
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
  return lambda * std::exp(-std::log(tol.epsilon) / gamma);
}

// I(x) over the Cartesian grid x_grid x gap_grid, x-major. A zero gap means
// mu == lambda, which rate_function rejects; the limit I = 0 is used there.
inline std::vector<DecayPoint> decay_surface(const std::vector<double>& x_grid,
                                             const std::vector<double>& gap_grid,
                                             double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
  for (double x : x_grid) require(std::isfinite(x) && x >= 0.0, "x grid entries must be >= 0");
  for (double g : gap_grid) require(std::isfinite(g) && g >= 0.0, "gap grid entries must be >= 0");
  std::vector<DecayPoint> out;
  out.reserve(x_grid.size() * gap_grid.size());
  for (double x : x_grid) {
    for (double gap : gap_grid) {
      const double i_value =
          gap == 0.0 ? 0.0 : rate_function(x, RateParams{lambda, lambda + gap});
      out.push_back({x, gap, i_value});
    }
  }
  return out;
}

}  // namespace syncnode
