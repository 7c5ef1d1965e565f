#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "lpwp/error.hpp"
#include "lpwp/lp_model.hpp"

namespace lpwp {

enum class SolveStatus { OPTIMAL, INFEASIBLE, UNBOUNDED };

constexpr std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::OPTIMAL: return "OPTIMAL";
    case SolveStatus::INFEASIBLE: return "INFEASIBLE";
    case SolveStatus::UNBOUNDED: return "UNBOUNDED";
  }
  return "?";
}

struct Solution {
  SolveStatus status = SolveStatus::INFEASIBLE;
  std::optional<std::vector<double>> x;  // set iff OPTIMAL
  std::optional<double> objective;       // set iff OPTIMAL
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  // Default: 10 * (rows + cols)^2 of the input model.
  std::optional<std::size_t> max_iter;
};

namespace detail {

inline constexpr double kPivotTol = 1e-9;

// Dense tableau over equality rows with nonnegative right-hand sides.
// Column order: structural, slack, artificial. Bland's rule throughout.
class SimplexTableau {
 public:
  SimplexTableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), t_(rows * (cols + 1), 0.0), basis_(rows, 0), reduced_(cols + 1, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double rhs(std::size_t i) const { return at(i, n_); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  // Loads a cost vector and prices out the current basis.
  void set_costs(const std::vector<double>& cost) {
    for (std::size_t j = 0; j < n_; ++j) reduced_[j] = cost[j];
    reduced_[n_] = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) reduced_[j] -= cb * at(i, j);
    }
  }

  double objective_value() const { return -reduced_[n_]; }

  enum class Step { optimal, unbounded, pivot };

  struct Choice {
    Step step = Step::optimal;
    std::size_t row = 0;
    std::size_t col = 0;
  };

  // Bland's rule over columns [0, eligible): lowest-index improving column
  // enters; min-ratio row leaves, ties to the lowest basic index.
  Choice choose(std::size_t eligible) const {
    Choice c;
    std::size_t enter = n_;
    for (std::size_t j = 0; j < eligible; ++j) {
      if (reduced_[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == n_) return c;

    std::size_t leave = m_;
    double best = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = at(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = rhs(i) / a;
      const double slack = 1e-12 * (1.0 + std::fabs(best));
      if (leave == m_ || ratio < best - slack) {
        leave = i;
        best = ratio;
      } else if (std::fabs(ratio - best) <= slack && basis_[i] < basis_[leave]) {
        leave = i;
        best = std::min(best, ratio);
      }
    }
    c.step = leave == m_ ? Step::unbounded : Step::pivot;
    c.row = leave;
    c.col = enter;
    return c;
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    const double f = reduced_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= n_; ++j) reduced_[j] -= f * at(r, j);
      reduced_[c] = 0.0;
    }
    basis_[r] = c;
  }

  void remove_row(std::size_t r) {
    std::vector<double> t;
    t.reserve((m_ - 1) * (n_ + 1));
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) t.insert(t.end(), t_.begin() + static_cast<std::ptrdiff_t>(i * (n_ + 1)),
                           t_.begin() + static_cast<std::ptrdiff_t>((i + 1) * (n_ + 1)));
    t_ = std::move(t);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<double> reduced_;
};

}  // namespace detail

/// Two-phase dense simplex with Bland's rule. Phase 1 minimizes the sum of
/// artificial variables; phase 2 optimizes the model objective (negated
/// internally for maximization). Finite lower bounds are shifted to zero
/// and free variables are split into two nonnegative parts.
///
/// Throws IterationLimitError when the pivot budget is exhausted.
inline Solution solve_simplex(const LpModel& model, const SimplexOptions& opts = {}) {
  model.validate();
  const std::size_t n = model.num_cols();
  const std::size_t m = model.num_rows();
  const std::size_t limit = opts.max_iter.value_or(10 * (m + n) * (m + n));

  // Structural columns.
  struct ColumnMap {
    std::size_t pos;
    std::optional<std::size_t> neg;
  };
  std::vector<ColumnMap> colmap;
  std::size_t n_struct = 0;
  for (std::size_t j = 0; j < n; ++j) {
    ColumnMap cm{n_struct++, std::nullopt};
    if (detail::is_free(model.lower_bounds[j])) cm.neg = n_struct++;
    colmap.push_back(cm);
  }

  // Row data after bound shifting; sign-flip rows with negative rhs.
  std::vector<double> shifted_rhs(m);
  std::vector<bool> flipped(m, false);
  std::vector<bool> needs_artificial(m, false);
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double b = model.rhs[i];
    for (std::size_t j = 0; j < n; ++j)
      if (!colmap[j].neg) b -= model.rows[i][j] * model.lower_bounds[j];
    shifted_rhs[i] = b;
    flipped[i] = b < 0.0;
    if (model.relations[i] == Relation::LE) ++n_slack;
    needs_artificial[i] = model.relations[i] == Relation::EQ || flipped[i];
    if (needs_artificial[i]) ++n_art;
  }

  const std::size_t slack_start = n_struct;
  const std::size_t art_start = n_struct + n_slack;
  const std::size_t total_cols = art_start + n_art;
  detail::SimplexTableau tab(m, total_cols);

  std::size_t next_slack = slack_start;
  std::size_t next_art = art_start;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = flipped[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = model.rows[i][j];
      tab.at(i, colmap[j].pos) = sign * a;
      if (colmap[j].neg) tab.at(i, *colmap[j].neg) = -sign * a;
    }
    tab.rhs(i) = sign * shifted_rhs[i];
    std::optional<std::size_t> slack;
    if (model.relations[i] == Relation::LE) {
      slack = next_slack++;
      tab.at(i, *slack) = sign;
    }
    if (needs_artificial[i]) {
      const std::size_t a = next_art++;
      tab.at(i, a) = 1.0;
      tab.basis()[i] = a;
    } else {
      tab.basis()[i] = *slack;
    }
  }

  Solution sol;
  auto run = [&](std::size_t eligible) {
    while (true) {
      const auto choice = tab.choose(eligible);
      if (choice.step != detail::SimplexTableau::Step::pivot) return choice.step;
      if (sol.iterations >= limit) throw IterationLimitError(limit);
      tab.pivot(choice.row, choice.col);
      ++sol.iterations;
    }
  };

  // Phase 1.
  if (n_art > 0) {
    std::vector<double> cost(total_cols, 0.0);
    for (std::size_t j = art_start; j < total_cols; ++j) cost[j] = 1.0;
    tab.set_costs(cost);
    run(total_cols);
    if (tab.objective_value() > opts.feas_tol) {
      sol.status = SolveStatus::INFEASIBLE;
      return sol;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < art_start) {
        ++i;
        continue;
      }
      std::size_t col = art_start;
      for (std::size_t j = 0; j < art_start; ++j)
        if (std::fabs(tab.at(i, j)) > detail::kPivotTol) {
          col = j;
          break;
        }
      if (col == art_start) {
        tab.remove_row(i);
        continue;
      }
      if (sol.iterations >= limit) throw IterationLimitError(limit);
      tab.pivot(i, col);
      ++sol.iterations;
      ++i;
    }
  }

  // Phase 2: minimize, so maximization negates the costs.
  std::vector<double> cost(total_cols, 0.0);
  const double sense = model.sense == Sense::MAXIMIZE ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    cost[colmap[j].pos] = sense * model.objective[j];
    if (colmap[j].neg) cost[*colmap[j].neg] = -sense * model.objective[j];
  }
  tab.set_costs(cost);
  if (run(art_start) == detail::SimplexTableau::Step::unbounded) {
    sol.status = SolveStatus::UNBOUNDED;
    return sol;
  }

  std::vector<double> value(total_cols, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i) value[tab.basis()[i]] = tab.rhs(i);
  std::vector<double> x(n, 0.0);
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = colmap[j].neg ? value[colmap[j].pos] - value[*colmap[j].neg] : model.lower_bounds[j] + value[colmap[j].pos];
    obj += model.objective[j] * x[j];
  }
  sol.status = SolveStatus::OPTIMAL;
  sol.x = std::move(x);
  sol.objective = obj;
  return sol;
}

}  // namespace lpwp
