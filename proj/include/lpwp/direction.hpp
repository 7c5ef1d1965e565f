#pragma once

#include <cctype>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "lpwp/error.hpp"
#include "lpwp/io.hpp"

namespace lpwp {

enum class Sense { MAXIMIZE, MINIMIZE };
enum class Relation { LE, GE, EQ };

constexpr std::string_view to_string(Sense s) { return s == Sense::MAXIMIZE ? "MAXIMIZE" : "MINIMIZE"; }

constexpr std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LE: return "LE";
    case Relation::GE: return "GE";
    case Relation::EQ: return "EQ";
  }
  return "?";
}

using Direction = std::variant<Relation, Sense>;

inline std::string to_string(const Direction& d) {
  return std::visit([](auto v) { return std::string(to_string(v)); }, d);
}

/// Attribute keys accepted by norm="...": LE, GE, EQ, MAX, MIN, MAXIMIZE,
/// MINIMIZE (case-insensitive).
inline std::optional<Direction> direction_from_key(std::string_view key) {
  std::string k;
  for (char c : key) k.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (k == "LE") return Relation::LE;
  if (k == "GE") return Relation::GE;
  if (k == "EQ") return Relation::EQ;
  if (k == "MAX" || k == "MAXIMIZE") return Sense::MAXIMIZE;
  if (k == "MIN" || k == "MINIMIZE") return Sense::MINIMIZE;
  return std::nullopt;
}

class UnknownDirectionError : public Error {
 public:
  explicit UnknownDirectionError(std::string phrase)
      : Error("unknown direction '" + phrase + "'"), phrase_(std::move(phrase)) {}
  const std::string& phrase() const noexcept { return phrase_; }

 private:
  std::string phrase_;
};

/// Maps surface phrases ("at most", "no less than", ...) to relations and
/// objective senses. Lookup ignores case and collapses runs of whitespace.
class DirectionLexicon {
 public:
  DirectionLexicon() = default;

  static const DirectionLexicon& builtin() {
    static const DirectionLexicon lexicon = [] {
      DirectionLexicon lex;
      for (auto p : {"at most", "no more than", "cannot exceed", "up to"}) lex.add(p, Relation::LE);
      for (auto p : {"at least", "a minimum of", "no less than"}) lex.add(p, Relation::GE);
      for (auto p : {"exactly", "equal to"}) lex.add(p, Relation::EQ);
      lex.add("maximize", Sense::MAXIMIZE);
      lex.add("minimize", Sense::MINIMIZE);
      return lex;
    }();
    return lexicon;
  }

  /// One "phrase = KEY" entry per line; '#' starts a comment line.
  static DirectionLexicon parse(std::string_view content) {
    DirectionLexicon lex;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
      std::size_t nl = content.find('\n', pos);
      if (nl == std::string_view::npos) nl = content.size();
      std::string_view line = content.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      const std::string norm = normalize(line);
      if (norm.empty() || norm.front() == '#') continue;
      const std::size_t eq = norm.rfind('=');
      if (eq == std::string::npos) throw Error("lexicon line " + std::to_string(line_no) + ": expected 'phrase = KEY'");
      const std::string phrase = normalize(std::string_view(norm).substr(0, eq));
      const std::string key = normalize(std::string_view(norm).substr(eq + 1));
      auto dir = direction_from_key(key);
      if (phrase.empty() || !dir)
        throw Error("lexicon line " + std::to_string(line_no) + ": bad entry '" + std::string(line) + "'");
      lex.add(phrase, *dir);
      if (nl == content.size()) break;
    }
    return lex;
  }

  static DirectionLexicon load(const std::filesystem::path& path) {
    try {
      return parse(read_text_file(path));
    } catch (const Error& e) {
      throw Error(path.string() + ": " + e.what());
    }
  }

  void add(std::string_view phrase, Direction d) { entries_[normalize(phrase)] = d; }

  std::optional<Direction> lookup(std::string_view phrase) const {
    auto it = entries_.find(normalize(phrase));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }

  /// Lowercase, trimmed, internal whitespace collapsed to one space.
  static std::string normalize(std::string_view phrase) {
    std::string out;
    bool pending_space = false;
    for (char c : phrase) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
  }

 private:
  std::map<std::string, Direction> entries_;
};

inline Direction normalize_direction_phrase(std::string_view phrase,
                                            const DirectionLexicon& lexicon = DirectionLexicon::builtin()) {
  if (auto d = lexicon.lookup(phrase)) return *d;
  throw UnknownDirectionError(std::string(phrase));
}

}  // namespace lpwp
