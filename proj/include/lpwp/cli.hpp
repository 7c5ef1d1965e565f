#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lpwp/canonical.hpp"
#include "lpwp/dataset.hpp"
#include "lpwp/direction.hpp"
#include "lpwp/error.hpp"
#include "lpwp/io.hpp"
#include "lpwp/ir.hpp"
#include "lpwp/lp_model.hpp"
#include "lpwp/lp_reader.hpp"
#include "lpwp/ner_scorer.hpp"
#include "lpwp/report.hpp"
#include "lpwp/simplex.hpp"

namespace lpwp::cli {

enum class Command { score_ner, score_gen, parse_ir, emit_lp, solve, stats, pipeline };
enum class EmitFormat { lp, mps };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

struct CliConfig {
  Command command = Command::stats;
  std::string gold;
  std::string pred;
  std::string input;    // IR file for parse-ir / emit-lp / solve / pipeline
  std::string data;     // dataset file or directory
  std::string problem;  // problem id inside a multi-problem file
  DatasetFormat format = DatasetFormat::span_json;
  AveragingMode mode = AveragingMode::micro;
  double tol = 1e-6;
  double feas_tol = 1e-9;
  bool normalize_scale = false;
  bool json = false;
  EmitFormat emit = EmitFormat::lp;
  std::string out;     // empty: standard output
  std::string lp_out;  // pipeline: where to write the LP file (empty: inline)
  std::optional<std::string> lexicon_path;
};

inline void validate(const CliConfig& c) {
  auto require = [](const std::string& value, const char* flag) {
    if (value.empty()) throw Error(std::string("missing required option ") + flag);
  };
  if (!(c.tol > 0.0)) throw Error("--tol must be positive");
  if (!(c.feas_tol > 0.0)) throw Error("--feas-tol must be positive");
  switch (c.command) {
    case Command::score_ner:
    case Command::score_gen:
      require(c.gold, "--gold");
      require(c.pred, "--pred");
      break;
    case Command::parse_ir:
    case Command::emit_lp:
    case Command::solve:
    case Command::pipeline:
      require(c.input, "--input");
      break;
    case Command::stats:
      require(c.data, "--data");
      break;
  }
}

namespace detail {

struct LoadedIr {
  std::string id;
  ProblemFormulation formulation;
};

inline DirectionLexicon lexicon_for(const CliConfig& c) {
  if (c.lexicon_path) return DirectionLexicon::load(*c.lexicon_path);
  return DirectionLexicon::builtin();
}

inline std::string positioned(const std::string& path, const ParseError& e) {
  return path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.message();
}

inline std::vector<IrDocument> read_ir_documents(const std::string& path) {
  const std::string content = read_text_file(path);
  try {
    return split_ir_documents(content);
  } catch (const ParseError& e) {
    throw Error(positioned(path, e));
  }
}

inline ProblemFormulation parse_document(const std::string& path, const IrDocument& doc,
                                         const DirectionLexicon& lexicon) {
  try {
    return parse_ir(doc.text, {&lexicon, doc.first_line});
  } catch (const ParseError& e) {
    throw Error(positioned(path, e) + (doc.id.empty() ? "" : " (problem '" + doc.id + "')"));
  }
}

inline LoadedIr load_one(const CliConfig& c, const DirectionLexicon& lexicon) {
  const auto docs = read_ir_documents(c.input);
  const IrDocument* chosen = nullptr;
  if (c.problem.empty()) {
    if (docs.size() != 1)
      throw Error(c.input + ": file holds " + std::to_string(docs.size()) + " problems; select one with --problem");
    chosen = &docs.front();
  } else {
    for (const auto& d : docs)
      if (d.id == c.problem) chosen = &d;
    if (!chosen) throw Error(c.input + ": no problem with id '" + c.problem + "'");
  }
  return {chosen->id, parse_document(c.input, *chosen, lexicon)};
}

inline LpModel model_for(const CliConfig& c, const LoadedIr& ir) {
  try {
    LpModel m = build_model(canonicalize(ir.formulation));
    m.name = ir.id;
    return m;
  } catch (const ValidationError& e) {
    throw Error(c.input + ": " + e.what());
  }
}

inline ordered_json canon_json(const std::string& id, const CanonForm& cf) {
  ordered_json j;
  j["id"] = id;
  j["vars"] = cf.vars.names();
  ordered_json obj;
  obj["direction"] = std::string(to_string(cf.objective->direction));
  obj["coeffs"] = cf.objective->coeffs;
  j["objective"] = std::move(obj);
  ordered_json rows = ordered_json::array();
  for (const auto& c : cf.constraints) {
    ordered_json row;
    row["coeffs"] = c.coeffs;
    row["relation"] = std::string(to_string(c.relation));
    row["bound"] = c.bound;
    rows.push_back(std::move(row));
  }
  j["constraints"] = std::move(rows);
  return j;
}

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

inline std::string score_ner(const CliConfig& c) {
  const auto gold = load_dataset(c.gold, c.format);
  const auto pred = load_dataset(c.pred, c.format);
  MatchCounts counts;
  try {
    counts = count_dataset_matches(gold, pred);
  } catch (const Error& e) {
    throw Error(c.pred + ": " + e.what());
  }
  const AveragingMode other = c.mode == AveragingMode::micro ? AveragingMode::macro : AveragingMode::micro;
  const NerScore primary = score_counts(counts, c.mode);
  const NerScore secondary = score_counts(counts, other);
  return c.json ? dump(ner_report_json(primary, secondary)) : ner_report_text(primary, secondary);
}

inline std::string score_gen(const CliConfig& c, std::ostream& err) {
  const DirectionLexicon lexicon = lexicon_for(c);
  const auto gold_docs = read_ir_documents(c.gold);
  const auto pred_docs = read_ir_documents(c.pred);

  std::map<std::string, const IrDocument*> pred_by_id;
  for (const auto& d : pred_docs) pred_by_id[d.id] = &d;
  std::map<std::string, const IrDocument*> gold_by_id;
  for (const auto& d : gold_docs) gold_by_id[d.id] = &d;
  for (const auto& [id, doc] : pred_by_id)
    if (!gold_by_id.contains(id)) throw Error(c.pred + ": prediction for unknown problem id '" + id + "'");

  std::vector<ScoredPair> pairs;
  for (const auto& [id, doc] : gold_by_id) {
    ScoredPair pair;
    pair.id = id;
    try {
      pair.gold = canonicalize(parse_document(c.gold, *doc, lexicon));
    } catch (const ValidationError& e) {
      throw Error(c.gold + ": problem '" + id + "': " + e.what());
    }
    if (auto it = pred_by_id.find(id); it != pred_by_id.end()) {
      // A prediction that does not parse counts as empty: every gold
      // declaration is then unmatched and the clamped loss is D.
      try {
        pair.pred = canonicalize(parse_document(c.pred, *it->second, lexicon));
      } catch (const Error& e) {
        err << "warning: " << e.what() << "; scoring as an empty prediction\n";
        pair.pred = CanonForm{};
      }
    }
    pairs.push_back(std::move(pair));
  }
  if (pairs.empty()) throw Error(c.gold + ": no problems to score");
  const MatchOptions opts{c.tol, c.normalize_scale};
  const AccuracyReport report = mapping_accuracy(pairs, opts);
  return c.json ? dump(to_json(report)) : to_text(report);
}

inline std::string parse_ir_command(const CliConfig& c) {
  const DirectionLexicon lexicon = lexicon_for(c);
  const auto docs = read_ir_documents(c.input);
  std::string out;
  ordered_json all = ordered_json::array();
  for (const auto& d : docs) {
    if (!c.problem.empty() && d.id != c.problem) continue;
    const ProblemFormulation f = parse_document(c.input, d, lexicon);
    CanonForm cf;
    try {
      cf = canonicalize(f);
    } catch (const ValidationError& e) {
      throw Error(c.input + ": problem '" + d.id + "': " + e.what());
    }
    if (c.json) {
      all.push_back(canon_json(d.id, cf));
    } else {
      if (!d.id.empty()) out += "### " + d.id + "\n";
      out += serialize_ir(f);
    }
  }
  if (!c.problem.empty() && all.empty() && out.empty())
    throw Error(c.input + ": no problem with id '" + c.problem + "'");
  return c.json ? dump(all) : out;
}

inline std::string emit_lp(const CliConfig& c) {
  const DirectionLexicon lexicon = lexicon_for(c);
  const LpModel m = model_for(c, load_one(c, lexicon));
  return c.emit == EmitFormat::mps ? emit_mps(m) : emit_lp_format(m);
}

inline std::string solve(const CliConfig& c) {
  const DirectionLexicon lexicon = lexicon_for(c);
  const LpModel m = model_for(c, load_one(c, lexicon));
  const Solution s = solve_simplex(m, {c.feas_tol, std::nullopt});
  return c.json ? dump(to_json(s, m.var_names)) : to_text(s, m.var_names);
}

inline std::string stats(const CliConfig& c) {
  const auto problems = load_dataset_tree(c.data, c.format);
  const StatsReport r = dataset_stats(problems);
  return c.json ? dump(to_json(r)) : to_text(r);
}

// IR -> canonical form -> LP file -> simplex. With --data, the problem must
// also exist in the gold-entity dataset.
inline std::string pipeline(const CliConfig& c) {
  const DirectionLexicon lexicon = lexicon_for(c);
  const LoadedIr ir = load_one(c, lexicon);
  std::optional<AnnotatedProblem> annotated;
  if (!c.data.empty()) {
    const auto problems = load_dataset_tree(c.data, c.format);
    auto it = std::find_if(problems.begin(), problems.end(), [&](const AnnotatedProblem& p) { return p.id == ir.id; });
    if (it == problems.end()) throw Error(c.data + ": no annotated problem with id '" + ir.id + "'");
    annotated = *it;
  }
  const LpModel built = model_for(c, ir);
  const std::string lp = c.emit == EmitFormat::mps ? emit_mps(built) : emit_lp_format(built);
  if (!c.lp_out.empty()) write_text_file(c.lp_out, lp);
  // The solver reads the model back from the LP text, so the emitted file is
  // exactly what gets solved.
  LpModel m = built;
  if (c.emit == EmitFormat::lp) {
    try {
      m = read_lp_format(lp);
    } catch (const ParseError& e) {
      throw std::logic_error("emitted LP text does not re-read: " + std::string(e.what()));
    }
  }
  const Solution s = solve_simplex(m, {c.feas_tol, std::nullopt});

  if (c.json) {
    ordered_json j;
    j["id"] = ir.id;
    if (annotated) j["entities"] = annotated->spans.size();
    j["model"] = lp;
    j["solution"] = to_json(s, m.var_names);
    return dump(j);
  }
  std::string out;
  if (!ir.id.empty()) out += "problem: " + ir.id + "\n";
  if (annotated) out += "entities: " + std::to_string(annotated->spans.size()) + "\n";
  if (c.lp_out.empty())
    out += "\n" + lp + "\n";
  else
    out += "model written to " + c.lp_out + "\n";
  out += to_text(s, m.var_names);
  return out;
}

}  // namespace detail

/// `pipeline --problem FILE` without --input reads the IR from FILE.
inline CliConfig resolve_inputs(CliConfig c) {
  std::error_code ec;
  if (c.command == Command::pipeline && c.input.empty() && !c.problem.empty() &&
      std::filesystem::is_regular_file(c.problem, ec)) {
    c.input = c.problem;
    c.problem.clear();
  }
  return c;
}

/// Runs one command. Returns 0 on success, 1 on input errors (reported on
/// `err` with their file and position), 2 on internal failures.
inline int run(const CliConfig& given, std::ostream& out, std::ostream& err) {
  try {
    const CliConfig config = resolve_inputs(given);
    validate(config);
    std::string report;
    switch (config.command) {
      case Command::score_ner: report = detail::score_ner(config); break;
      case Command::score_gen: report = detail::score_gen(config, err); break;
      case Command::parse_ir: report = detail::parse_ir_command(config); break;
      case Command::emit_lp: report = detail::emit_lp(config); break;
      case Command::solve: report = detail::solve(config); break;
      case Command::stats: report = detail::stats(config); break;
      case Command::pipeline: report = detail::pipeline(config); break;
    }
    if (config.out.empty())
      out << report;
    else
      write_text_file(config.out, report);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace lpwp::cli
