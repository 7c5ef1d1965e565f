#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpwp/error.hpp"
#include "lpwp/ir.hpp"

namespace lpwp {

struct CanonObjective {
  Sense direction = Sense::MAXIMIZE;
  std::vector<double> coeffs;

  bool operator==(const CanonObjective&) const = default;
};

/// coeffs . x (relation) bound, with relation LE or EQ only.
struct CanonConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LE;
  double bound = 0.0;

  bool operator==(const CanonConstraint&) const = default;
};

/// A formulation as coefficient vectors over `vars`. The objective is
/// optional so that an empty prediction is representable.
struct CanonForm {
  std::optional<CanonObjective> objective;
  std::vector<CanonConstraint> constraints;
  VarOrderMap vars;

  std::size_t declaration_count() const { return (objective ? 1 : 0) + constraints.size(); }
  bool operator==(const CanonForm&) const = default;
};

/// Moves variable terms left and constants right, turns GE into LE by
/// negation and makes the leading nonzero coefficient of an EQ row
/// positive (x = y and y = x canonicalize identically).
inline CanonForm canonicalize(const ProblemFormulation& f) {
  CanonForm cf;
  cf.vars = f.vars;
  const std::size_t n = f.vars.size();

  CanonObjective obj;
  obj.direction = f.objective.direction;
  obj.coeffs.assign(n, 0.0);
  for (const auto& [name, coeff] : f.objective.expr.terms) {
    auto idx = f.vars.index_of(name);
    if (!idx) throw ValidationError("objective variable '" + name + "' missing from vars");
    obj.coeffs[*idx] += coeff;
  }
  if (std::all_of(obj.coeffs.begin(), obj.coeffs.end(), [](double c) { return c == 0.0; }))
    throw ValidationError("objective has only zero coefficients");
  cf.objective = std::move(obj);

  for (std::size_t i = 0; i < f.constraints.size(); ++i) {
    const auto& c = f.constraints[i];
    CanonConstraint row;
    row.coeffs.assign(n, 0.0);
    auto accumulate = [&](const LinExpr& e, double sign) {
      for (const auto& [name, coeff] : e.terms) {
        auto idx = f.vars.index_of(name);
        if (!idx) throw ValidationError("constraint " + std::to_string(i + 1) + ": variable '" + name +
                                        "' missing from vars");
        row.coeffs[*idx] += sign * coeff;
      }
    };
    accumulate(c.lhs, 1.0);
    accumulate(c.rhs, -1.0);
    row.bound = c.rhs.constant - c.lhs.constant;
    row.relation = c.relation;

    if (std::all_of(row.coeffs.begin(), row.coeffs.end(), [](double v) { return v == 0.0; }))
      throw ValidationError("constraint " + std::to_string(i + 1) + " is vacuous (reduces to constant vs constant)");

    bool negate = c.relation == Relation::GE;
    if (c.relation == Relation::EQ) {
      auto lead = std::find_if(row.coeffs.begin(), row.coeffs.end(), [](double v) { return v != 0.0; });
      negate = *lead < 0.0;
    }
    if (negate) {
      for (double& v : row.coeffs) v = -v;
      row.bound = -row.bound;
    }
    if (row.relation == Relation::GE) row.relation = Relation::LE;
    // Avoid -0 in the output so equal forms compare equal bitwise too.
    for (double& v : row.coeffs) v += 0.0;
    row.bound += 0.0;
    cf.constraints.push_back(std::move(row));
  }
  return cf;
}

struct MatchOptions {
  double tol = 1e-6;
  // Divide each constraint (coefficients and bound) by its largest
  // coefficient magnitude before comparing, so 2x+2y<=10 matches x+y<=5.
  bool normalize_scale = false;
};

namespace detail {

inline CanonConstraint scale_normalized(const CanonConstraint& c) {
  double m = 0.0;
  for (double v : c.coeffs) m = std::max(m, std::fabs(v));
  if (m == 0.0) return c;
  CanonConstraint out = c;
  for (double& v : out.coeffs) v /= m;
  out.bound /= m;
  return out;
}

inline bool within(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(std::fabs(a[i] - b[i]) <= tol)) return false;
  return true;
}

}  // namespace detail

inline bool decl_equal(const CanonConstraint& a, const CanonConstraint& b, const MatchOptions& opts = {}) {
  if (a.coeffs.size() != b.coeffs.size())
    throw std::invalid_argument("decl_equal: dimension mismatch (" + std::to_string(a.coeffs.size()) + " vs " +
                                std::to_string(b.coeffs.size()) + ")");
  if (a.relation != b.relation) return false;
  if (opts.normalize_scale) {
    const auto na = detail::scale_normalized(a);
    const auto nb = detail::scale_normalized(b);
    return detail::within(na.coeffs, nb.coeffs, opts.tol) && std::fabs(na.bound - nb.bound) <= opts.tol;
  }
  return detail::within(a.coeffs, b.coeffs, opts.tol) && std::fabs(a.bound - b.bound) <= opts.tol;
}

inline bool decl_equal(const CanonObjective& a, const CanonObjective& b, const MatchOptions& opts = {}) {
  if (a.coeffs.size() != b.coeffs.size())
    throw std::invalid_argument("decl_equal: dimension mismatch (" + std::to_string(a.coeffs.size()) + " vs " +
                                std::to_string(b.coeffs.size()) + ")");
  return a.direction == b.direction && detail::within(a.coeffs, b.coeffs, opts.tol);
}

/// Declaration index 0 is the objective; index k >= 1 is constraint k-1.
struct MatchResult {
  std::size_t gold_declarations = 0;  // D
  std::size_t false_positives = 0;    // unmatched predictions
  std::size_t false_negatives = 0;    // unmatched gold declarations
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;  // (gold, pred)

  std::size_t clamped_loss() const { return std::min(false_positives + false_negatives, gold_declarations); }
};

namespace detail {

// Re-expresses `coeffs` (over `from`) in the index space of `to`. Returns
// nullopt when a nonzero coefficient sits on a variable `to` lacks.
inline std::optional<std::vector<double>> reindex(const std::vector<double>& coeffs, const VarOrderMap& from,
                                                  const VarOrderMap& to) {
  std::vector<double> out(to.size(), 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    auto j = to.index_of(from[i]);
    if (!j) return std::nullopt;
    out[*j] = coeffs[i];
  }
  return out;
}

// Kuhn's augmenting-path maximum bipartite matching.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), match_right_(right, kNone) {}

  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  std::vector<std::pair<std::size_t, std::size_t>> solve() {
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      std::vector<bool> visited(match_right_.size(), false);
      augment(l, visited);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t r = 0; r < match_right_.size(); ++r)
      if (match_right_[r] != kNone) pairs.emplace_back(match_right_[r], r);
    std::sort(pairs.begin(), pairs.end());
    return pairs;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t l, std::vector<bool>& visited) {
    for (std::size_t r : adj_[l]) {
      if (visited[r]) continue;
      visited[r] = true;
      if (match_right_[r] == kNone || augment(match_right_[r], visited)) {
        match_right_[r] = l;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_right_;
};

}  // namespace detail

/// Maximum one-to-one matching of predicted to gold declarations under
/// decl_equal. Objectives pair only with objectives. Predicted declarations
/// that use variables unknown to gold cannot match.
inline MatchResult match_declarations(const CanonForm& gold, const CanonForm& pred, const MatchOptions& opts = {}) {
  const std::size_t n_gold = gold.constraints.size() + 1;
  const std::size_t n_pred = pred.constraints.size() + 1;
  detail::BipartiteMatcher matcher(n_gold, n_pred);

  if (gold.objective && pred.objective) {
    if (auto coeffs = detail::reindex(pred.objective->coeffs, pred.vars, gold.vars)) {
      CanonObjective p{pred.objective->direction, std::move(*coeffs)};
      if (decl_equal(*gold.objective, p, opts)) matcher.add_edge(0, 0);
    }
  }

  std::vector<std::optional<CanonConstraint>> reindexed;
  reindexed.reserve(pred.constraints.size());
  for (const auto& c : pred.constraints) {
    auto coeffs = detail::reindex(c.coeffs, pred.vars, gold.vars);
    if (coeffs)
      reindexed.push_back(CanonConstraint{std::move(*coeffs), c.relation, c.bound});
    else
      reindexed.push_back(std::nullopt);
  }
  for (std::size_t g = 0; g < gold.constraints.size(); ++g)
    for (std::size_t p = 0; p < reindexed.size(); ++p)
      if (reindexed[p] && decl_equal(gold.constraints[g], *reindexed[p], opts)) matcher.add_edge(g + 1, p + 1);

  MatchResult r;
  r.gold_declarations = gold.declaration_count();
  r.matched_pairs = matcher.solve();
  r.false_negatives = r.gold_declarations - r.matched_pairs.size();
  r.false_positives = pred.declaration_count() - r.matched_pairs.size();
  return r;
}

struct ScoredPair {
  std::string id;
  CanonForm gold;
  CanonForm pred;
};

struct AccuracyReport {
  std::size_t problems = 0;  // N
  std::vector<std::string> ids;
  std::vector<MatchResult> per_problem;
  std::size_t total_declarations = 0;  // sum of D_i
  std::size_t total_loss = 0;          // sum of min{FP_i + FN_i, D_i}
  double accuracy = 0.0;
};

/// Acc = 1 - sum_i min{FP_i + FN_i, D_i} / sum_i D_i.
inline AccuracyReport accuracy_from_matches(std::vector<std::string> ids, std::vector<MatchResult> results) {
  if (results.empty()) throw Error("mapping accuracy is undefined for an empty problem set");
  AccuracyReport rep;
  rep.problems = results.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].gold_declarations == 0)
      throw Error("problem '" + (i < ids.size() ? ids[i] : std::to_string(i)) + "' has no gold declarations");
    rep.total_declarations += results[i].gold_declarations;
    rep.total_loss += results[i].clamped_loss();
  }
  rep.accuracy = 1.0 - static_cast<double>(rep.total_loss) / static_cast<double>(rep.total_declarations);
  rep.ids = std::move(ids);
  rep.per_problem = std::move(results);
  return rep;
}

inline AccuracyReport mapping_accuracy(std::span<const ScoredPair> pairs, const MatchOptions& opts = {}) {
  std::vector<std::string> ids;
  std::vector<MatchResult> results;
  for (const auto& p : pairs) {
    if (!p.gold.objective) throw Error("gold formulation '" + p.id + "' has no objective");
    ids.push_back(p.id);
    results.push_back(match_declarations(p.gold, p.pred, opts));
  }
  return accuracy_from_matches(std::move(ids), std::move(results));
}

}  // namespace lpwp
