#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lpwp/entities.hpp"
#include "lpwp/error.hpp"

namespace lpwp {

struct TypeCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  TypeCounts& operator+=(const TypeCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const TypeCounts&) const = default;
};

struct MatchCounts {
  std::array<TypeCounts, 6> per_type{};

  TypeCounts& operator[](EntityType t) { return per_type[index_of(t)]; }
  const TypeCounts& operator[](EntityType t) const { return per_type[index_of(t)]; }

  TypeCounts pooled() const {
    TypeCounts sum;
    for (const auto& c : per_type) sum += c;
    return sum;
  }

  MatchCounts& operator+=(const MatchCounts& o) {
    for (std::size_t i = 0; i < per_type.size(); ++i) per_type[i] += o.per_type[i];
    return *this;
  }
  bool operator==(const MatchCounts&) const = default;
};

/// Exact (start, end, label) matching. Each gold span absorbs at most one
/// prediction; repeated predictions of the same span are false positives.
inline MatchCounts count_matches(std::span<const Span> gold, std::span<const Span> pred) {
  MatchCounts counts;
  std::map<Span, std::size_t> unmatched;
  for (const Span& g : gold) ++unmatched[g];
  for (const Span& p : pred) {
    auto it = unmatched.find(p);
    if (it != unmatched.end() && it->second > 0) {
      --it->second;
      ++counts[p.label].tp;
    } else {
      ++counts[p.label].fp;
    }
  }
  for (const auto& [span, left] : unmatched) counts[span.label].fn += left;
  return counts;
}

enum class AveragingMode { micro, macro };

constexpr std::string_view to_string(AveragingMode m) { return m == AveragingMode::micro ? "micro" : "macro"; }

inline std::optional<AveragingMode> averaging_mode_from_string(std::string_view s) {
  if (s == "micro") return AveragingMode::micro;
  if (s == "macro") return AveragingMode::macro;
  return std::nullopt;
}

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

inline PrecisionRecall precision_recall(const TypeCounts& c) {
  PrecisionRecall r;
  r.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  r.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

struct NerScore {
  AveragingMode mode = AveragingMode::micro;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::array<PrecisionRecall, 6> per_type{};
  MatchCounts counts;

  const PrecisionRecall& type_score(EntityType t) const { return per_type[index_of(t)]; }
};

/// Micro pools tp/fp/fn over every type before forming P and R. Macro
/// averages per-type P and R over the types that occur in gold or
/// predictions (a type with no support is left out). F1 is always formed
/// from the aggregated P and R.
inline NerScore score_counts(const MatchCounts& counts, AveragingMode mode) {
  NerScore s;
  s.mode = mode;
  s.counts = counts;
  for (EntityType t : kEntityTypes) s.per_type[index_of(t)] = precision_recall(counts[t]);

  if (mode == AveragingMode::micro) {
    const auto pooled = precision_recall(counts.pooled());
    s.precision = pooled.precision;
    s.recall = pooled.recall;
  } else {
    double p_sum = 0.0;
    double r_sum = 0.0;
    std::size_t active = 0;
    for (EntityType t : kEntityTypes) {
      const TypeCounts& c = counts[t];
      if (c.tp + c.fp + c.fn == 0) continue;
      p_sum += s.per_type[index_of(t)].precision;
      r_sum += s.per_type[index_of(t)].recall;
      ++active;
    }
    if (active > 0) {
      s.precision = p_sum / static_cast<double>(active);
      s.recall = r_sum / static_cast<double>(active);
    }
  }
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

/// Pools counts over problems aligned by id. Gold problems without a
/// prediction contribute only false negatives. Offsets are only comparable
/// over identical text, so a text mismatch is an error.
inline MatchCounts count_dataset_matches(std::span<const AnnotatedProblem> gold,
                                         std::span<const AnnotatedProblem> pred) {
  std::unordered_map<std::string, const AnnotatedProblem*> gold_by_id;
  for (const auto& g : gold)
    if (!gold_by_id.emplace(g.id, &g).second) throw Error("duplicate gold problem id '" + g.id + "'");

  std::unordered_map<std::string, const AnnotatedProblem*> pred_by_id;
  for (const auto& p : pred) {
    auto g = gold_by_id.find(p.id);
    if (g == gold_by_id.end()) throw Error("prediction for unknown problem id '" + p.id + "'");
    if (g->second->text != p.text) throw Error("prediction for problem '" + p.id + "' has different text than gold");
    if (!pred_by_id.emplace(p.id, &p).second) throw Error("duplicate prediction for problem id '" + p.id + "'");
  }

  MatchCounts total;
  for (const auto& g : gold) {
    auto it = pred_by_id.find(g.id);
    std::span<const Span> predicted;
    if (it != pred_by_id.end()) predicted = it->second->spans;
    total += count_matches(g.spans, predicted);
  }
  return total;
}

inline NerScore score_ner(std::span<const AnnotatedProblem> gold, std::span<const AnnotatedProblem> pred,
                          AveragingMode mode = AveragingMode::micro) {
  return score_counts(count_dataset_matches(gold, pred), mode);
}

}  // namespace lpwp
