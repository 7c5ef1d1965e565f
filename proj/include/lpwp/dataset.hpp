#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "lpwp/entities.hpp"
#include "lpwp/error.hpp"
#include "lpwp/io.hpp"

namespace lpwp {

enum class DatasetFormat { span_json, conll_bio };

inline std::optional<DatasetFormat> dataset_format_from_string(std::string_view s) {
  if (s == "span_json") return DatasetFormat::span_json;
  if (s == "conll_bio") return DatasetFormat::conll_bio;
  return std::nullopt;
}

namespace detail {

// byte offset of every code point boundary, plus one past the end
inline std::vector<std::size_t> codepoint_byte_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size(); ++i)
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) offsets.push_back(i);
  offsets.push_back(text.size());
  return offsets;
}

inline std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline AnnotatedProblem problem_from_json(const nlohmann::json& rec, std::size_t index) {
  const std::string where = "record " + std::to_string(index);
  auto fail = [&](const std::string& why) -> Error { return Error(where + ": " + why); };
  if (!rec.is_object()) throw fail("expected an object");

  AnnotatedProblem p;
  if (!rec.contains("id") || !rec["id"].is_string()) throw fail("missing string field 'id'");
  if (!rec.contains("text") || !rec["text"].is_string()) throw fail("missing string field 'text'");
  p.id = rec["id"].get<std::string>();
  p.text = rec["text"].get<std::string>();

  if (rec.contains("domain") && !rec["domain"].is_null()) {
    if (!rec["domain"].is_string()) throw fail("field 'domain' must be a string");
    p.domain = domain_from_string(rec["domain"].get<std::string>());
    if (!p.domain) throw fail("unknown domain '" + rec["domain"].get<std::string>() + "'");
  }
  if (rec.contains("split") && !rec["split"].is_null()) {
    if (!rec["split"].is_string()) throw fail("field 'split' must be a string");
    p.split = split_from_string(rec["split"].get<std::string>());
    if (!p.split) throw fail("unknown split '" + rec["split"].get<std::string>() + "'");
  }

  // Offsets in the file count code points; internally they are byte offsets.
  const auto cp = codepoint_byte_offsets(p.text);
  const std::size_t n_cp = cp.size() - 1;
  if (rec.contains("spans")) {
    if (!rec["spans"].is_array()) throw fail("field 'spans' must be an array");
    for (std::size_t k = 0; k < rec["spans"].size(); ++k) {
      const auto& s = rec["spans"][k];
      const std::string span_where = "span " + std::to_string(k) + " of problem '" + p.id + "'";
      if (!s.is_object() || !s.contains("start") || !s.contains("end") || !s.contains("label") ||
          !s["start"].is_number_integer() || !s["end"].is_number_integer() || !s["label"].is_string())
        throw fail(span_where + " needs integer start/end and string label");
      const auto start = s["start"].get<long long>();
      const auto end = s["end"].get<long long>();
      auto label = entity_type_from_string(s["label"].get<std::string>());
      if (!label) throw fail(span_where + " has unknown label '" + s["label"].get<std::string>() + "'");
      if (start < 0 || end < 0 || static_cast<std::size_t>(end) > n_cp || start >= end)
        throw ValidationError(where + ": problem '" + p.id + "': span (" + std::to_string(start) + "," +
                              std::to_string(end) + "," + std::string(to_string(*label)) + ") outside text of " +
                              std::to_string(n_cp) + " characters");
      p.spans.push_back({cp[static_cast<std::size_t>(start)], cp[static_cast<std::size_t>(end)], *label});
    }
  }
  try {
    validate_problem(p);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return p;
}

}  // namespace detail

/// Reads span_json content: either a JSON array of records or one record
/// per line (JSON Lines). Empty input yields no problems.
inline std::vector<AnnotatedProblem> parse_span_json(std::string_view content) {
  std::vector<AnnotatedProblem> out;
  std::string_view body = detail::trim(content);
  if (body.empty()) return out;

  if (body.front() == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(std::string("malformed JSON: ") + e.what());
    }
    for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(detail::problem_from_json(doc[i], i));
  } else {
    std::size_t index = 0;
    for (std::string_view line : detail::split_lines(content)) {
      line = detail::trim(line);
      if (line.empty()) continue;
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error("record " + std::to_string(index) + ": malformed JSON: " + e.what());
      }
      out.push_back(detail::problem_from_json(rec, index));
      ++index;
    }
  }
  return out;
}

/// Reads conll_bio content. Each problem is introduced by "#id <id>" and
/// holds one "TOKEN<TAB>TAG" line per token; a blank line ends it.
///
/// Optional "#text <raw>", "#domain <d>" and "#split <s>" comments may follow
/// the id line. With "#text", token offsets are recovered by locating each
/// token in the raw text, so any tokenization whose tokens concatenate back
/// to the non-space characters is accepted. Without it the text is the
/// tokens joined by single spaces.
inline std::vector<AnnotatedProblem> parse_conll_bio(std::string_view content) {
  std::vector<AnnotatedProblem> out;
  const auto lines = detail::split_lines(content);

  struct Pending {
    AnnotatedProblem problem;
    std::optional<std::string> raw_text;
    std::vector<std::pair<std::string, BioTag>> tokens;
    std::vector<std::size_t> token_lines;
    std::size_t first_line = 0;
  };
  std::optional<Pending> cur;
  std::unordered_set<std::string> seen;

  auto finish = [&]() {
    if (!cur) return;
    Pending& pd = *cur;
    const std::string where = "line " + std::to_string(pd.first_line) + ": problem '" + pd.problem.id + "'";
    std::vector<TokenTag> tags;
    tags.reserve(pd.tokens.size());
    if (pd.raw_text) {
      const std::string& raw = *pd.raw_text;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < pd.tokens.size(); ++k) {
        const std::string& tok = pd.tokens[k].first;
        // Tokens may abut (punctuation) or be separated by whitespace.
        while (pos < raw.size() && detail::is_space(raw[pos])) ++pos;
        if (raw.compare(pos, tok.size(), tok) != 0)
          throw Error("line " + std::to_string(pd.token_lines[k]) + ": token '" + tok +
                      "' does not match the #text of problem '" + pd.problem.id + "'");
        tags.push_back({tok, pos, pos + tok.size(), pd.tokens[k].second});
        pos += tok.size();
      }
      pd.problem.text = raw;
    } else {
      std::string text;
      for (std::size_t k = 0; k < pd.tokens.size(); ++k) {
        if (k) text.push_back(' ');
        tags.push_back({pd.tokens[k].first, text.size(), text.size() + pd.tokens[k].first.size(), pd.tokens[k].second});
        text += pd.tokens[k].first;
      }
      pd.problem.text = std::move(text);
    }
    try {
      pd.problem.spans = bio_to_spans(tags);
    } catch (const BioSequenceError& e) {
      throw Error("line " + std::to_string(pd.token_lines[e.token_index()]) + ": problem '" + pd.problem.id +
                  "': malformed BIO sequence at " + e.what());
    }
    try {
      validate_problem(pd.problem);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    out.push_back(std::move(pd.problem));
    cur.reset();
  };

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    std::string_view line = lines[ln];
    auto fail = [&](const std::string& why) -> Error { return Error("line " + std::to_string(line_no) + ": " + why); };

    if (detail::trim(line).empty()) {
      finish();
      continue;
    }
    if (line.starts_with("#id ")) {
      finish();
      std::string id(detail::trim(line.substr(4)));
      if (id.empty()) throw fail("empty problem id");
      if (!seen.insert(id).second) throw fail("duplicate problem id '" + id + "'");
      cur = Pending{};
      cur->problem.id = std::move(id);
      cur->first_line = line_no;
      continue;
    }
    if (!cur) throw fail("expected '#id <id>' before tokens");
    if (line.starts_with("#text ")) {
      cur->raw_text = std::string(line.substr(6));
      continue;
    }
    if (line.starts_with("#domain ")) {
      std::string_view d = detail::trim(line.substr(8));
      cur->problem.domain = domain_from_string(d);
      if (!cur->problem.domain) throw fail("unknown domain '" + std::string(d) + "'");
      continue;
    }
    if (line.starts_with("#split ")) {
      std::string_view s = detail::trim(line.substr(7));
      cur->problem.split = split_from_string(s);
      if (!cur->problem.split) throw fail("unknown split '" + std::string(s) + "'");
      continue;
    }
    if (line.starts_with("#")) continue;  // other comments

    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw fail("expected TOKEN<TAB>TAG");
    std::string_view token = line.substr(0, tab);
    std::string_view tag_text = detail::trim(line.substr(tab + 1));
    if (token.empty()) throw fail("empty token");
    auto tag = parse_bio_tag(tag_text);
    if (!tag) throw fail("unknown tag '" + std::string(tag_text) + "'");
    cur->tokens.emplace_back(std::string(token), *tag);
    cur->token_lines.push_back(line_no);
  }
  finish();
  return out;
}

/// Loads and validates one dataset file. Every returned problem satisfies
/// validate_problem(); ids are unique.
inline std::vector<AnnotatedProblem> load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  const std::string content = read_text_file(path);
  std::vector<AnnotatedProblem> problems;
  try {
    problems = format == DatasetFormat::span_json ? parse_span_json(content) : parse_conll_bio(content);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  std::unordered_set<std::string> ids;
  for (const auto& p : problems)
    if (!ids.insert(p.id).second) throw Error(path.string() + ": duplicate problem id '" + p.id + "'");
  return problems;
}

/// Loads a file, or every *.json / *.jsonl (span_json) and *.conll / *.bio
/// (conll_bio) file of a directory in name order.
inline std::vector<AnnotatedProblem> load_dataset_tree(const std::filesystem::path& path, DatasetFormat format) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path)) return load_dataset(path, format);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<AnnotatedProblem> all;
  for (const auto& f : files) {
    const auto ext = f.extension().string();
    std::optional<DatasetFormat> fmt;
    if (ext == ".json" || ext == ".jsonl") fmt = DatasetFormat::span_json;
    if (ext == ".conll" || ext == ".bio") fmt = DatasetFormat::conll_bio;
    if (!fmt) continue;
    auto part = load_dataset(f, *fmt);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

// ---------------------------------------------------------------------------
// Statistics

struct SplitStats {
  std::size_t samples = 0;
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t unknown_domain = 0;
};

/// "1:k" or "k:1" with k rounded to the nearest integer; "1:0", "0:1" and
/// "0:0" for the degenerate cases.
inline std::string source_target_ratio(std::size_t source, std::size_t target) {
  if (source == 0 && target == 0) return "0:0";
  if (target == 0) return "1:0";
  if (source == 0) return "0:1";
  if (source <= target)
    return "1:" + std::to_string(static_cast<long long>(std::llround(static_cast<double>(target) / source)));
  return std::to_string(static_cast<long long>(std::llround(static_cast<double>(source) / target))) + ":1";
}

struct StatsReport {
  std::size_t total = 0;
  std::array<SplitStats, 3> per_split{};
  SplitStats unknown_split{};
  std::array<std::size_t, 6> per_domain{};
  std::size_t unknown_domain = 0;

  const SplitStats& operator[](Split s) const { return per_split[static_cast<std::size_t>(s)]; }
  std::size_t domain_count(Domain d) const { return per_domain[static_cast<std::size_t>(d)]; }
};

inline StatsReport dataset_stats(std::span<const AnnotatedProblem> problems) {
  StatsReport r;
  r.total = problems.size();
  for (const auto& p : problems) {
    SplitStats& s = p.split ? r.per_split[static_cast<std::size_t>(*p.split)] : r.unknown_split;
    ++s.samples;
    if (!p.domain) {
      ++s.unknown_domain;
      ++r.unknown_domain;
      continue;
    }
    ++r.per_domain[static_cast<std::size_t>(*p.domain)];
    if (is_source_domain(*p.domain))
      ++s.source;
    else
      ++s.target;
  }
  return r;
}

}  // namespace lpwp
