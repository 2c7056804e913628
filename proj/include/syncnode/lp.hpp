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

// Dense two-phase primal simplex with Bland's rule.
//
//   maximize  c^T x
//   s.t.      a_r^T x  {<=, =, >=}  b_r   for each row r
//             x >= 0
//
// Entering column: lowest index with positive reduced cost. Leaving row:
// minimum ratio, ties to the lowest basic variable index. This makes pivoting
// a pure function of the problem, so equal inputs give equal outputs.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "syncnode/errors.hpp"

namespace syncnode::lp {

inline constexpr std::size_t kMaxVariables = 65536;
inline constexpr std::size_t kMaxRows = 4096;
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasTol = 1e-9;
inline constexpr double kZeroTol = 1e-12;

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Row {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct LpProblem {
  std::size_t n = 0;
  std::vector<double> objective;  // maximized
  std::vector<Row> rows;

  void validate() const {
    require(n >= 1, "LP needs at least one variable");
    require(n <= kMaxVariables, "LP exceeds the variable cap");
    require(rows.size() <= kMaxRows, "LP exceeds the row cap");
    require(objective.size() == n, "objective length must equal n");
    for (double c : objective) require(std::isfinite(c), "objective entries must be finite");
    for (const Row& row : rows) {
      require(row.coeffs.size() == n, "every row must have n coefficients");
      require(std::isfinite(row.rhs), "rhs must be finite");
      for (double a : row.coeffs) require(std::isfinite(a), "row entries must be finite");
    }
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;                  // empty unless Optimal
  std::optional<double> objective_value;  // set iff Optimal
  std::size_t pivots = 0;
};

namespace detail {

class Tableau {
 public:
  explicit Tableau(const LpProblem& p) : n_(p.n) {
    // Orient rows so that rhs >= 0. A ">= 0" row becomes "<= 0" and then
    // starts feasible on its slack.
    struct Oriented {
      const Row* row;
      double sign;
      Relation rel;
    };
    std::vector<Oriented> oriented;
    oriented.reserve(p.rows.size());
    std::size_t slacks = 0, artificials = 0;
    for (const Row& row : p.rows) {
      double sign = 1.0;
      Relation rel = row.relation;
      if (row.rhs < 0.0 || (row.rhs == 0.0 && rel == Relation::GreaterEqual)) {
        sign = -1.0;
        if (rel == Relation::LessEqual) rel = Relation::GreaterEqual;
        else if (rel == Relation::GreaterEqual) rel = Relation::LessEqual;
      }
      if (rel != Relation::Equal) ++slacks;
      if (rel != Relation::LessEqual) ++artificials;
      oriented.push_back({&row, sign, rel});
    }

    first_artificial_ = n_ + slacks;
    cols_ = first_artificial_ + artificials;
    rows_ = oriented.size();
    width_ = cols_ + 1;
    data_.assign((rows_ + 1) * width_, 0.0);
    basis_.assign(rows_, 0);

    std::size_t next_slack = n_, next_art = first_artificial_;
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto& o = oriented[r];
      for (std::size_t j = 0; j < n_; ++j) at(r, j) = o.sign * o.row->coeffs[j];
      rhs(r) = o.sign * o.row->rhs;
      switch (o.rel) {
        case Relation::LessEqual:
          at(r, next_slack) = 1.0;
          basis_[r] = next_slack++;
          break;
        case Relation::GreaterEqual:
          at(r, next_slack++) = -1.0;
          at(r, next_art) = 1.0;
          basis_[r] = next_art++;
          break;
        case Relation::Equal:
          at(r, next_art) = 1.0;
          basis_[r] = next_art++;
          break;
      }
    }
    original_ = data_;
    reinvert_every_ = std::max<std::size_t>(32, rows_);
  }

  LpSolution solve(const LpProblem& p) {
    LpSolution sol;
    if (first_artificial_ < cols_) {
      // Phase 1: maximize -sum(artificials).
      std::vector<double> cost(cols_, 0.0);
      for (std::size_t j = first_artificial_; j < cols_; ++j) cost[j] = -1.0;
      load_objective(cost);
      if (!iterate(cols_)) throw NumericalError("phase 1 reported unbounded");
      double infeasibility = 0.0;
      double scale = 1.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        scale = std::max(scale, std::abs(rhs(r)));
        if (basis_[r] >= first_artificial_) infeasibility += rhs(r);
      }
      if (infeasibility > 1e-9 * scale) {
        sol.status = LpStatus::Infeasible;
        sol.pivots = pivots_;
        return sol;
      }
      drive_out_artificials();
    }

    // Phase 2 over structural and slack columns only.
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = p.objective[j];
    load_objective(cost);
    if (!iterate(first_artificial_)) {
      sol.status = LpStatus::Unbounded;
      sol.pivots = pivots_;
      return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x.assign(n_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < n_) sol.x[basis_[r]] = rhs(r);
    }
    double value = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (sol.x[j] < 0.0 && sol.x[j] > -kPivotTol) sol.x[j] = 0.0;
      value += p.objective[j] * sol.x[j];
    }
    sol.objective_value = value;
    sol.pivots = pivots_;
    return sol;
  }

 private:
  double& at(std::size_t r, std::size_t j) { return data_[r * width_ + j]; }
  double& rhs(std::size_t r) { return data_[r * width_ + cols_]; }
  // Reduced-cost row lives below the constraint rows.
  double& reduced(std::size_t j) { return data_[rows_ * width_ + j]; }

  void load_objective(const std::vector<double>& cost) {
    cost_ = cost;
    for (std::size_t j = 0; j <= cols_; ++j) reduced(j) = j < cols_ ? cost[j] : 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) reduced(j) -= cb * at(r, j);
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &data_[pr * width_];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * width_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        row[j] -= f * prow[j];
        if (std::abs(row[j]) < kZeroTol) row[j] = 0.0;
      }
      row[pc] = 0.0;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (rhs(r) < 0.0 && rhs(r) > -kFeasTol) rhs(r) = 0.0;
    }
    basis_[pr] = pc;
    ++pivots_;
    if (pivots_ % reinvert_every_ == 0) reinvert();
  }

  // Rebuilds the tableau as B^-1 [A | b] from the original rows and the
  // current basis, discarding accumulated pivoting error.
  void reinvert() {
    if (rows_ == 0) return;
    const auto m = static_cast<Eigen::Index>(rows_);
    Eigen::MatrixXd basis_matrix(m, m);
    Eigen::MatrixXd full(m, static_cast<Eigen::Index>(width_));
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < rows_; ++c) {
        basis_matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            original_[r * width_ + basis_[c]];
      }
      for (std::size_t j = 0; j < width_; ++j) {
        full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
            original_[r * width_ + j];
      }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const Eigen::MatrixXd solved = lu.solve(full);
    if (!solved.allFinite()) throw NumericalError("basis became singular");
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = 0; j < width_; ++j) {
        double v = solved(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
        if (std::abs(v) < kZeroTol) v = 0.0;
        at(r, j) = v;
      }
      at(r, basis_[r]) = 1.0;
      if (rhs(r) < 0.0 && rhs(r) > -kFeasTol) rhs(r) = 0.0;
    }
    load_objective(cost_);
  }

  // Runs Bland pivots with entering candidates restricted to [0, limit).
  // Returns false if an improving column has no bounding row.
  bool iterate(std::size_t limit) {
    const std::size_t cap = 100 * (rows_ + cols_) + 10000;
    bool fresh = false;
    for (std::size_t it = 0; it < cap; ++it) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (reduced(j) > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == limit) {
        // Confirm optimality on a freshly factored tableau.
        if (fresh) return true;
        reinvert();
        fresh = true;
        continue;
      }
      fresh = false;

      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(rhs(r), 0.0) / a;
        if (leave == rows_ || ratio < best - 1e-12 * (1.0 + std::abs(best)) ||
            (ratio <= best + 1e-12 * (1.0 + std::abs(best)) &&
             basis_[r] < basis_[leave])) {
          if (leave == rows_ || ratio < best) best = ratio;
          leave = r;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
    throw NumericalError("simplex iteration cap reached");
  }

  // After a feasible phase 1, replace zero-valued basic artificials by
  // structural or slack columns. Rows with no such column are redundant and
  // are dropped.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_;) {
      if (basis_[r] < first_artificial_) {
        ++r;
        continue;
      }
      std::size_t col = first_artificial_;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (std::abs(at(r, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col < first_artificial_) {
        pivot(r, col);
        ++r;
      } else {
        remove_row(r);
      }
    }
  }

  void remove_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * width_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
    original_.erase(original_.begin() + static_cast<std::ptrdiff_t>(r * width_),
                    original_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

  std::size_t n_;
  std::size_t first_artificial_ = 0;
  std::size_t cols_ = 0;
  std::size_t rows_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<double> original_;  // oriented rows with slack/artificial columns
  std::vector<double> cost_;
  std::size_t reinvert_every_ = 32;
  std::size_t pivots_ = 0;
};

}  // namespace detail

inline LpSolution solve(const LpProblem& problem) {
  problem.validate();
  detail::Tableau tableau(problem);
  return tableau.solve(problem);
}

}  // namespace syncnode::lp
