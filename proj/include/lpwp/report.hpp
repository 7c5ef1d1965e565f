#pragma once

// Text and JSON renderings of scores, accuracy reports, solutions and
// dataset statistics. JSON objects keep insertion order so output diffs
// cleanly.

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpwp/canonical.hpp"
#include "lpwp/dataset.hpp"
#include "lpwp/ner_scorer.hpp"
#include "lpwp/numeric.hpp"
#include "lpwp/simplex.hpp"

namespace lpwp {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  return s == "-0" ? "0" : s;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// NER

inline ordered_json to_json(const NerScore& s) {
  ordered_json j;
  j["mode"] = std::string(to_string(s.mode));
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  const auto pooled = s.counts.pooled();
  j["tp"] = pooled.tp;
  j["fp"] = pooled.fp;
  j["fn"] = pooled.fn;
  ordered_json rows = ordered_json::array();
  for (EntityType t : kEntityTypes) {
    const auto& c = s.counts[t];
    const auto& prf = s.type_score(t);
    ordered_json row;
    row["type"] = std::string(to_string(t));
    row["tp"] = c.tp;
    row["fp"] = c.fp;
    row["fn"] = c.fn;
    row["precision"] = prf.precision;
    row["recall"] = prf.recall;
    row["f1"] = prf.f1;
    rows.push_back(std::move(row));
  }
  j["per_type"] = std::move(rows);
  return j;
}

/// Both averaging modes, `primary` first.
inline ordered_json ner_report_json(const NerScore& primary, const NerScore& secondary) {
  ordered_json j;
  j["primary"] = std::string(to_string(primary.mode));
  j[std::string(to_string(primary.mode))] = to_json(primary);
  j[std::string(to_string(secondary.mode))] = to_json(secondary);
  return j;
}

inline std::string ner_report_text(const NerScore& primary, const NerScore& secondary) {
  using detail::fixed6;
  using detail::pad;
  std::string out = pad("mode", 8) + pad("precision", 12) + pad("recall", 12) + "f1\n";
  for (const NerScore* s : {&primary, &secondary})
    out += pad(std::string(to_string(s->mode)), 8) + pad(fixed6(s->precision), 12) + pad(fixed6(s->recall), 12) +
           fixed6(s->f1) + "\n";
  out += "\n" + pad("type", 11) + pad("tp", 6) + pad("fp", 6) + pad("fn", 6) + pad("precision", 12) +
         pad("recall", 12) + "f1\n";
  for (EntityType t : kEntityTypes) {
    const auto& c = primary.counts[t];
    const auto& prf = primary.type_score(t);
    out += pad(std::string(to_string(t)), 11) + pad(std::to_string(c.tp), 6) + pad(std::to_string(c.fp), 6) +
           pad(std::to_string(c.fn), 6) + pad(fixed6(prf.precision), 12) + pad(fixed6(prf.recall), 12) +
           fixed6(prf.f1) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Declaration-level accuracy

inline ordered_json to_json(const AccuracyReport& r) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < r.per_problem.size(); ++i) {
    const auto& m = r.per_problem[i];
    ordered_json row;
    row["id"] = i < r.ids.size() ? r.ids[i] : std::to_string(i);
    row["D"] = m.gold_declarations;
    row["FP"] = m.false_positives;
    row["FN"] = m.false_negatives;
    row["loss"] = m.clamped_loss();
    rows.push_back(std::move(row));
  }
  j["problems"] = std::move(rows);
  j["N"] = r.problems;
  j["declarations"] = r.total_declarations;
  j["loss"] = r.total_loss;
  j["accuracy"] = r.accuracy;
  return j;
}

inline std::string to_text(const AccuracyReport& r) {
  using detail::pad;
  std::size_t w = 4;
  for (const auto& id : r.ids) w = std::max(w, id.size() + 2);
  std::string out = pad("id", w) + pad("D", 6) + pad("FP", 6) + pad("FN", 6) + "loss\n";
  for (std::size_t i = 0; i < r.per_problem.size(); ++i) {
    const auto& m = r.per_problem[i];
    const std::string id = i < r.ids.size() ? r.ids[i] : std::to_string(i);
    out += pad(id.empty() ? "-" : id, w) + pad(std::to_string(m.gold_declarations), 6) +
           pad(std::to_string(m.false_positives), 6) + pad(std::to_string(m.false_negatives), 6) +
           std::to_string(m.clamped_loss()) + "\n";
  }
  out += "\nproblems: " + std::to_string(r.problems) + "\n";
  out += "declarations: " + std::to_string(r.total_declarations) + "\n";
  out += "loss: " + std::to_string(r.total_loss) + "\n";
  out += "accuracy: " + detail::fixed6(r.accuracy) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Solutions

inline ordered_json to_json(const Solution& s, const std::vector<std::string>& var_names) {
  ordered_json j;
  j["status"] = std::string(to_string(s.status));
  j["objective"] = s.objective ? ordered_json(*s.objective) : ordered_json(nullptr);
  ordered_json vars = ordered_json::object();
  if (s.x)
    for (std::size_t i = 0; i < s.x->size(); ++i) vars[var_names.at(i)] = (*s.x)[i];
  j["variables"] = std::move(vars);
  j["iterations"] = s.iterations;
  return j;
}

inline std::string to_text(const Solution& s, const std::vector<std::string>& var_names) {
  std::string out = "status: " + std::string(to_string(s.status)) + "\n";
  if (s.objective) out += "objective: " + detail::compact(*s.objective) + "\n";
  if (s.x)
    for (std::size_t i = 0; i < s.x->size(); ++i)
      out += var_names.at(i) + " = " + detail::compact((*s.x)[i]) + "\n";
  out += "iterations: " + std::to_string(s.iterations) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Dataset statistics

inline ordered_json to_json(const StatsReport& r) {
  ordered_json j;
  j["total"] = r.total;
  ordered_json splits = ordered_json::array();
  auto split_row = [](const std::string& name, const SplitStats& s) {
    ordered_json row;
    row["split"] = name;
    row["samples"] = s.samples;
    row["source"] = s.source;
    row["target"] = s.target;
    row["unknown_domain"] = s.unknown_domain;
    row["source_target"] = source_target_ratio(s.source, s.target);
    return row;
  };
  for (Split s : kSplits) splits.push_back(split_row(std::string(to_string(s)), r[s]));
  if (r.unknown_split.samples > 0) splits.push_back(split_row("unknown", r.unknown_split));
  j["splits"] = std::move(splits);
  ordered_json domains = ordered_json::object();
  for (Domain d : kDomains) domains[std::string(to_string(d))] = r.domain_count(d);
  if (r.unknown_domain > 0) domains["unknown"] = r.unknown_domain;
  j["domains"] = std::move(domains);
  return j;
}

inline std::string to_text(const StatsReport& r) {
  using detail::pad;
  std::string out = pad("split", 9) + pad("samples", 9) + pad("source", 8) + pad("target", 8) + "source:target\n";
  auto row = [&](const std::string& name, const SplitStats& s) {
    out += pad(name, 9) + pad(std::to_string(s.samples), 9) + pad(std::to_string(s.source), 8) +
           pad(std::to_string(s.target), 8) + source_target_ratio(s.source, s.target) + "\n";
  };
  for (Split s : kSplits) row(std::string(to_string(s)), r[s]);
  if (r.unknown_split.samples > 0) row("unknown", r.unknown_split);
  out += "\n";
  for (Domain d : kDomains) out += pad(std::string(to_string(d)), 16) + std::to_string(r.domain_count(d)) + "\n";
  if (r.unknown_domain > 0) out += pad("unknown", 16) + std::to_string(r.unknown_domain) + "\n";
  out += "\ntotal: " + std::to_string(r.total) + "\n";
  return out;
}

}  // namespace lpwp
