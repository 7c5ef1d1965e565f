#pragma once

// Brute-force LP oracle: intersect every n-subset of constraint hyperplanes
// (rows and variable bounds), keep the feasible points. Exponential, so it
// is guarded to tiny models and used only to check the simplex solver.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "lpwp/error.hpp"
#include "lpwp/lp_model.hpp"
#include "lpwp/simplex.hpp"

namespace lpwp {

struct Vertex {
  std::vector<double> point;
  double objective = 0.0;
};

namespace detail {

struct Halfspace {
  std::vector<double> a;
  Relation rel;  // LE, GE or EQ
  double b;
};

// Solves the square system by Gaussian elimination with partial pivoting;
// nullopt when (numerically) singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-10) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline bool satisfies(const Halfspace& h, const std::vector<double>& x, double tol) {
  double lhs = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) lhs += h.a[j] * x[j];
  const double slack = tol * (1.0 + std::fabs(h.b));
  switch (h.rel) {
    case Relation::LE: return lhs <= h.b + slack;
    case Relation::GE: return lhs >= h.b - slack;
    case Relation::EQ: return std::fabs(lhs - h.b) <= slack;
  }
  return false;
}

inline std::vector<std::vector<double>> enumerate_points(const std::vector<Halfspace>& hs, std::size_t n,
                                                          double tol) {
  std::vector<std::vector<double>> points;
  if (n == 0) {
    const std::vector<double> origin;
    if (std::all_of(hs.begin(), hs.end(), [&](const Halfspace& h) { return satisfies(h, origin, tol); }))
      points.emplace_back();
    return points;
  }
  if (hs.size() < n) return points;

  // Iterate all n-subsets in lexicographic order.
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t k : pick) {
      a.push_back(hs[k].a);
      b.push_back(hs[k].b);
    }
    if (auto x = solve_square(std::move(a), std::move(b))) {
      const bool feasible = std::all_of(hs.begin(), hs.end(), [&](const Halfspace& h) { return satisfies(h, *x, tol); });
      const bool duplicate = std::any_of(points.begin(), points.end(), [&](const std::vector<double>& p) {
        for (std::size_t j = 0; j < n; ++j)
          if (std::fabs(p[j] - (*x)[j]) > 1e-7 * (1.0 + std::fabs(p[j]))) return false;
        return true;
      });
      if (feasible && !duplicate) points.push_back(std::move(*x));
    }

    std::size_t i = n;
    while (i > 0 && pick[i - 1] == hs.size() - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  std::sort(points.begin(), points.end());
  return points;
}

inline std::vector<Halfspace> halfspaces_of(const LpModel& m) {
  std::vector<Halfspace> hs;
  const std::size_t n = m.num_cols();
  for (std::size_t i = 0; i < m.num_rows(); ++i) hs.push_back({m.rows[i], m.relations[i], m.rhs[i]});
  for (std::size_t j = 0; j < n; ++j) {
    if (is_free(m.lower_bounds[j])) continue;
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    hs.push_back({std::move(e), Relation::GE, m.lower_bounds[j]});
  }
  return hs;
}

}  // namespace detail

inline constexpr std::size_t kMaxEnumerationCols = 6;
inline constexpr std::size_t kMaxEnumerationRows = 12;

/// Every basic feasible point of the model with its objective value, in
/// lexicographic order. Requires at most 6 columns and 12 rows.
inline std::vector<Vertex> enumerate_vertices(const LpModel& m, double tol = 1e-9) {
  m.validate();
  if (m.num_cols() > kMaxEnumerationCols || m.num_rows() > kMaxEnumerationRows)
    throw Error("vertex enumeration limited to " + std::to_string(kMaxEnumerationCols) + " columns and " +
                std::to_string(kMaxEnumerationRows) + " rows (got " + std::to_string(m.num_cols()) + "x" +
                std::to_string(m.num_rows()) + ")");
  std::vector<Vertex> out;
  for (auto& p : detail::enumerate_points(detail::halfspaces_of(m), m.num_cols(), tol)) {
    double obj = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) obj += m.objective[j] * p[j];
    out.push_back({std::move(p), obj});
  }
  return out;
}

struct OracleResult {
  SolveStatus status = SolveStatus::INFEASIBLE;
  std::optional<Vertex> best;  // set iff OPTIMAL
};

/// Classifies a model by enumeration. Needs finite lower bounds on every
/// variable so the feasible region is pointed: then it is empty iff it has
/// no vertex, and the LP is unbounded iff some extreme ray of the
/// recession cone {d >= 0 : rows . d (rel) 0} improves the objective. Those
/// rays are the vertices of the cone cut by sum(d) = 1.
inline OracleResult solve_by_enumeration(const LpModel& m, double tol = 1e-9) {
  for (double lb : m.lower_bounds)
    if (detail::is_free(lb)) throw Error("enumeration oracle needs finite lower bounds");
  OracleResult r;
  const auto vertices = enumerate_vertices(m, tol);
  if (vertices.empty()) return r;

  const double sense = m.sense == Sense::MAXIMIZE ? 1.0 : -1.0;
  const std::size_t n = m.num_cols();
  std::vector<detail::Halfspace> cone;
  for (std::size_t i = 0; i < m.num_rows(); ++i) cone.push_back({m.rows[i], m.relations[i], 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    cone.push_back({std::move(e), Relation::GE, 0.0});
  }
  cone.push_back({std::vector<double>(n, 1.0), Relation::EQ, 1.0});
  for (const auto& d : detail::enumerate_points(cone, n, tol)) {
    double gain = 0.0;
    for (std::size_t j = 0; j < n; ++j) gain += m.objective[j] * d[j];
    if (sense * gain > 1e-9) {
      r.status = SolveStatus::UNBOUNDED;
      return r;
    }
  }

  r.status = SolveStatus::OPTIMAL;
  r.best = *std::max_element(vertices.begin(), vertices.end(), [&](const Vertex& a, const Vertex& b) {
    return sense * a.objective < sense * b.objective;
  });
  return r;
}

}  // namespace lpwp
