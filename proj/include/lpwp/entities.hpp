#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpwp/error.hpp"

namespace lpwp {

enum class EntityType { CONST_DIR, LIMIT, OBJ_DIR, OBJ_NAME, PARAM, VAR };

inline constexpr std::array<EntityType, 6> kEntityTypes = {
    EntityType::CONST_DIR, EntityType::LIMIT, EntityType::OBJ_DIR,
    EntityType::OBJ_NAME,  EntityType::PARAM, EntityType::VAR,
};

constexpr std::size_t index_of(EntityType type) { return static_cast<std::size_t>(type); }

constexpr std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::CONST_DIR: return "CONST_DIR";
    case EntityType::LIMIT: return "LIMIT";
    case EntityType::OBJ_DIR: return "OBJ_DIR";
    case EntityType::OBJ_NAME: return "OBJ_NAME";
    case EntityType::PARAM: return "PARAM";
    case EntityType::VAR: return "VAR";
  }
  return "?";
}

inline std::optional<EntityType> entity_type_from_string(std::string_view name) {
  for (EntityType t : kEntityTypes)
    if (to_string(t) == name) return t;
  return std::nullopt;
}

/// Half-open byte range [start, end) of the owning text plus its label.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityType label = EntityType::VAR;

  auto operator<=>(const Span&) const = default;
};

inline std::string describe(const Span& s) {
  return "(" + std::to_string(s.start) + "," + std::to_string(s.end) + "," + std::string(to_string(s.label)) + ")";
}

enum class Domain { sales, advertising, investment, production, transportation, sciences };
enum class Split { train, dev, test };

inline constexpr std::array<Domain, 6> kDomains = {Domain::sales,      Domain::advertising,    Domain::investment,
                                                   Domain::production, Domain::transportation, Domain::sciences};
inline constexpr std::array<Split, 3> kSplits = {Split::train, Split::dev, Split::test};

constexpr std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::sales: return "sales";
    case Domain::advertising: return "advertising";
    case Domain::investment: return "investment";
    case Domain::production: return "production";
    case Domain::transportation: return "transportation";
    case Domain::sciences: return "sciences";
  }
  return "?";
}

constexpr std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "?";
}

inline std::optional<Domain> domain_from_string(std::string_view name) {
  for (Domain d : kDomains)
    if (to_string(d) == name) return d;
  return std::nullopt;
}

inline std::optional<Split> split_from_string(std::string_view name) {
  for (Split s : kSplits)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

/// Sales, advertising and investment are the source domains; the rest are
/// held out for dev/test.
constexpr bool is_source_domain(Domain d) {
  return d == Domain::sales || d == Domain::advertising || d == Domain::investment;
}

struct AnnotatedProblem {
  std::string id;
  std::string text;
  std::vector<Span> spans;
  // Absent when the input format does not carry them (e.g. bare CoNLL).
  std::optional<Domain> domain;
  std::optional<Split> split;

  bool operator==(const AnnotatedProblem&) const = default;
};

/// Checks span bounds, pairwise disjointness and the train/source-domain
/// rule. Throws ValidationError naming the problem id.
inline void validate_problem(const AnnotatedProblem& p) {
  const std::string who = "problem '" + p.id + "'";
  for (const Span& s : p.spans) {
    if (s.start >= s.end || s.end > p.text.size())
      throw ValidationError(who + ": span " + describe(s) + " outside text of length " +
                            std::to_string(p.text.size()));
  }
  std::vector<Span> sorted = p.spans;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start < sorted[i - 1].end)
      throw ValidationError(who + ": overlapping spans " + describe(sorted[i - 1]) + " and " + describe(sorted[i]));
  }
  if (p.split == Split::train && p.domain && !is_source_domain(*p.domain))
    throw ValidationError(who + ": train split contains target-domain problem (" +
                          std::string(to_string(*p.domain)) + ")");
}

// ---------------------------------------------------------------------------
// Tokenizer and BIO codec

struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

namespace detail {

constexpr bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

constexpr bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '(': case ')':
      return true;
    default:
      return false;
  }
}

}  // namespace detail

/// Whitespace split, then leading and trailing punctuation from .,;:!?()
/// peeled off one character per token. Interior characters are kept, so
/// "1.5" and "well-known" stay whole.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  auto emit = [&](std::size_t a, std::size_t b) { tokens.push_back({std::string(text.substr(a, b - a)), a, b}); };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && detail::is_space(text[i])) ++i;
    if (i >= n) break;
    std::size_t j = i;
    while (j < n && !detail::is_space(text[j])) ++j;

    std::size_t a = i;
    while (a < j && detail::is_edge_punct(text[a])) {
      emit(a, a + 1);
      ++a;
    }
    std::size_t b = j;
    while (b > a && detail::is_edge_punct(text[b - 1])) --b;
    if (a < b) emit(a, b);
    for (std::size_t k = b; k < j; ++k) emit(k, k + 1);
    i = j;
  }
  return tokens;
}

enum class BioPrefix { O, B, I };

struct BioTag {
  BioPrefix prefix = BioPrefix::O;
  EntityType type = EntityType::VAR;  // ignored when prefix == O

  static BioTag outside() { return {}; }
  static BioTag begin(EntityType t) { return {BioPrefix::B, t}; }
  static BioTag inside(EntityType t) { return {BioPrefix::I, t}; }

  friend bool operator==(const BioTag& a, const BioTag& b) {
    if (a.prefix != b.prefix) return false;
    return a.prefix == BioPrefix::O || a.type == b.type;
  }
};

inline std::string to_string(const BioTag& tag) {
  switch (tag.prefix) {
    case BioPrefix::O: return "O";
    case BioPrefix::B: return "B-" + std::string(to_string(tag.type));
    case BioPrefix::I: return "I-" + std::string(to_string(tag.type));
  }
  return "O";
}

inline std::optional<BioTag> parse_bio_tag(std::string_view s) {
  if (s == "O") return BioTag::outside();
  if (s.size() < 3 || s[1] != '-') return std::nullopt;
  auto type = entity_type_from_string(s.substr(2));
  if (!type) return std::nullopt;
  if (s[0] == 'B') return BioTag::begin(*type);
  if (s[0] == 'I') return BioTag::inside(*type);
  return std::nullopt;
}

struct TokenTag {
  std::string token;
  std::size_t start = 0;
  std::size_t end = 0;
  BioTag tag;

  bool operator==(const TokenTag&) const = default;
};

/// A span whose boundary does not coincide with token boundaries.
class SpanAlignmentError : public Error {
 public:
  SpanAlignmentError(const Span& span, const std::string& why)
      : Error("span " + describe(span) + " " + why), span_(span) {}
  const Span& span() const noexcept { return span_; }

 private:
  Span span_;
};

/// A BIO sequence that cannot be decoded.
class BioSequenceError : public Error {
 public:
  BioSequenceError(std::size_t index, const std::string& why)
      : Error("token " + std::to_string(index) + ": " + why), index_(index) {}
  std::size_t token_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Tags every token of `text`. Each span must start at a token start and end
/// at a token end; anything else raises SpanAlignmentError.
inline std::vector<TokenTag> spans_to_bio(std::string_view text, std::span<const Span> spans) {
  const std::vector<Token> tokens = tokenize(text);
  std::vector<TokenTag> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back({t.text, t.start, t.end, BioTag::outside()});

  std::vector<bool> claimed(tokens.size(), false);
  for (const Span& span : spans) {
    if (span.start >= span.end || span.end > text.size()) throw SpanAlignmentError(span, "lies outside the text");
    auto first = std::lower_bound(tokens.begin(), tokens.end(), span.start,
                                  [](const Token& t, std::size_t pos) { return t.end <= pos; });
    bool covered = false;
    for (auto it = first; it != tokens.end() && it->start < span.end; ++it) {
      if (it->start < span.start || it->end > span.end)
        throw SpanAlignmentError(span, "splits token '" + it->text + "' at [" + std::to_string(it->start) + "," +
                                           std::to_string(it->end) + ")");
      const auto k = static_cast<std::size_t>(it - tokens.begin());
      if (claimed[k]) throw SpanAlignmentError(span, "overlaps another span at token '" + it->text + "'");
      claimed[k] = true;
      out[k].tag = covered ? BioTag::inside(span.label) : BioTag::begin(span.label);
      covered = true;
    }
    if (!covered) throw SpanAlignmentError(span, "covers no token");
    // A span may not start or end in whitespace either.
    if (tokens[static_cast<std::size_t>(first - tokens.begin())].start != span.start)
      throw SpanAlignmentError(span, "does not start at a token boundary");
    auto last = std::find_if(first, tokens.end(), [&](const Token& t) { return t.start >= span.end; });
    if (std::prev(last)->end != span.end) throw SpanAlignmentError(span, "does not end at a token boundary");
  }
  return out;
}

/// Maximal B-I* runs become spans, in token order.
inline std::vector<Span> bio_to_spans(std::span<const TokenTag> tags) {
  std::vector<Span> spans;
  std::optional<Span> open;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const TokenTag& t = tags[i];
    if (t.start >= t.end) throw BioSequenceError(i, "empty token offsets");
    switch (t.tag.prefix) {
      case BioPrefix::O:
        if (open) spans.push_back(*open), open.reset();
        break;
      case BioPrefix::B:
        if (open) spans.push_back(*open);
        open = Span{t.start, t.end, t.tag.type};
        break;
      case BioPrefix::I:
        if (!open) throw BioSequenceError(i, to_string(t.tag) + " does not continue an entity");
        if (open->label != t.tag.type)
          throw BioSequenceError(i, to_string(t.tag) + " follows an entity of type " +
                                        std::string(to_string(open->label)));
        open->end = t.end;
        break;
    }
  }
  if (open) spans.push_back(*open);
  return spans;
}

}  // namespace lpwp
