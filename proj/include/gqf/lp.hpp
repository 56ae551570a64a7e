/* Copyright (C) 2026 The gqf-dmt Authors.
 * This program is Licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. See accompanying LICENSE file.
 */
/* lp.hpp - dense two-phase simplex for the small linear programs of the
 * exponent analysis (tens of variables and rows at most).
 *
 *   minimize  c'x   subject to  A x <= b,  x >= 0
 *
 * Pivoting uses Bland's rule, so degenerate vertices (common here, since
 * most exponent optima sit on several clamp boundaries at once) cannot cycle.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gqf::lp {

struct LinearProgram {
  std::vector<double> cost;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  explicit LinearProgram(std::size_t num_vars = 0) : cost(num_vars, 0.0) {}

  std::size_t num_vars() const { return cost.size(); }
  std::size_t num_rows() const { return rows.size(); }

  /// Adds  coeffs . x <= bound.
  void add_le(std::vector<double> coeffs, double bound) {
    if (coeffs.size() != cost.size()) throw std::invalid_argument("row width does not match variable count");
    rows.push_back(std::move(coeffs));
    rhs.push_back(bound);
  }
  void add_ge(std::vector<double> coeffs, double bound) {
    for (double& v : coeffs) v = -v;
    add_le(std::move(coeffs), -bound);
  }
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::infinity();
  /// Multipliers of the <= rows (all <= 0 at optimality for a minimization).
  std::vector<double> dual;
  /// Worst violation among primal feasibility, dual feasibility and the duality gap.
  double certificate_error = std::numeric_limits<double>::infinity();

  bool certified(double tol = 1e-9) const { return status == Status::optimal && certificate_error <= tol; }
};

namespace detail {

class Tableau {
 public:
  Tableau(const LinearProgram& lp, double eps) : eps_(eps), m_(lp.num_rows()), n_(lp.num_vars()) {
    std::size_t artificials = 0;
    for (double b : lp.rhs) artificials += b < 0.0;
    cols_ = n_ + m_ + artificials;
    t_.assign(m_, std::vector<double>(cols_, 0.0));
    b_.assign(m_, 0.0);
    basis_.assign(m_, 0);
    std::size_t next_art = n_ + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign * lp.rows[i][j];
      t_[i][n_ + i] = sign;
      b_[i] = sign * lp.rhs[i];
      if (sign < 0.0) {
        t_[i][next_art] = 1.0;
        basis_[i] = next_art++;
      } else {
        basis_[i] = n_ + i;
      }
    }
    active_.assign(m_, true);
  }

  /// Runs the simplex on the given column costs; columns with `allowed[j]` false never enter.
  Status optimize(const std::vector<double>& cost, const std::vector<bool>& allowed) {
    for (std::size_t iter = 0; iter < 10000; ++iter) {
      const auto d = reduced_costs(cost);
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && d[j] < -eps_) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Status::optimal;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (!active_[i] || t_[i][enter] <= eps_) continue;
        const double ratio = b_[i] / t_[i][enter];
        if (ratio < best - eps_ || (ratio <= best + eps_ && leave < m_ && basis_[i] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == m_) return Status::unbounded;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> d = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) d[j] -= cb * t_[i][j];
    }
    return d;
  }

  /// Pivots basic artificials out after phase one; rows that cannot be
  /// pivoted are linearly dependent and get dropped.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i] || basis_[i] < n_ + m_) continue;
      std::size_t col = cols_;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (std::abs(t_[i][j]) > eps_) {
          col = j;
          break;
        }
      }
      if (col == cols_) {
        active_[i] = false;
      } else {
        pivot(i, col);
      }
    }
  }

  double value_of(std::size_t col) const {
    for (std::size_t i = 0; i < m_; ++i) {
      if (active_[i] && basis_[i] == col) return b_[i];
    }
    return 0.0;
  }

  std::size_t cols() const { return cols_; }
  std::size_t structural() const { return n_; }
  std::size_t rows() const { return m_; }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const double p = t_[r][c];
    for (double& v : t_[r]) v /= p;
    b_[r] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || !active_[i]) continue;
      const double f = t_[i][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) t_[i][j] -= f * t_[r][j];
      b_[i] -= f * b_[r];
      if (std::abs(b_[i]) < eps_) b_[i] = 0.0;
    }
    basis_[r] = c;
  }

  double eps_;
  std::size_t m_, n_, cols_ = 0;
  std::vector<std::vector<double>> t_;
  std::vector<double> b_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

inline double certificate_error(const LinearProgram& lp, const Solution& s) {
  double err = 0.0;
  for (double v : s.x) err = std::max(err, -v);
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) lhs += lp.rows[i][j] * s.x[j];
    err = std::max(err, lhs - lp.rhs[i]);
    err = std::max(err, s.dual[i]);
  }
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) dual_obj += lp.rhs[i] * s.dual[i];
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    double aty = 0.0;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) aty += lp.rows[i][j] * s.dual[i];
    err = std::max(err, aty - lp.cost[j]);
  }
  return std::max(err, std::abs(s.objective - dual_obj));
}

}  // namespace detail

inline Solution solve(const LinearProgram& lp, double eps = 1e-12) {
  for (const auto& row : lp.rows) {
    if (row.size() != lp.num_vars()) throw std::invalid_argument("ragged constraint matrix");
  }
  detail::Tableau tab(lp, eps);
  const std::size_t n = lp.num_vars(), m = lp.num_rows(), cols = tab.cols();

  Solution sol;
  if (cols > n + m) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = n + m; j < cols; ++j) phase1[j] = 1.0;
    tab.optimize(phase1, std::vector<bool>(cols, true));
    double infeasibility = 0.0;
    for (std::size_t j = n + m; j < cols; ++j) infeasibility += tab.value_of(j);
    if (infeasibility > 1e-9) {
      sol.status = Status::infeasible;
      return sol;
    }
    tab.expel_artificials();
  }

  std::vector<double> cost(cols, 0.0);
  std::copy(lp.cost.begin(), lp.cost.end(), cost.begin());
  std::vector<bool> allowed(cols, false);
  std::fill(allowed.begin(), allowed.begin() + static_cast<std::ptrdiff_t>(n + m), true);
  sol.status = tab.optimize(cost, allowed);
  if (sol.status != Status::optimal) return sol;

  sol.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.x[j] = tab.value_of(j);
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.cost[j] * sol.x[j];
  const auto d = tab.reduced_costs(cost);
  sol.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.dual[i] = -d[n + i];
  sol.certificate_error = detail::certificate_error(lp, sol);
  return sol;
}

}  // namespace gqf::lp
