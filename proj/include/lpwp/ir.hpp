#pragma once

// XML-like meaning representation of an LP word problem.
//
//   document   := vars? decl+
//   vars       := "<VARS>" var* "</VARS>"
//   decl       := "<DECLARATION>" (objective | constraint) "</DECLARATION>"
//   objective  := objdir objname "[IS]" expr
//   constraint := expr constdir expr? limit?
//   expr       := "[MINUS]"? signedterm (("[PLUS]" | "[MINUS]") signedterm)*
//   signedterm := param ("[TIMES]"? var)? | var
//   param      := "<PARAM>" numeral "</PARAM>"
//   var        := "<VAR>" name "</VAR>"
//   limit      := "<LIMIT>" numeral "</LIMIT>"
//   objdir     := "<OBJ_DIR" attr? ">" text "</OBJ_DIR>"
//   objname    := "<OBJ_NAME>" text "</OBJ_NAME>"
//   constdir   := "<CONST_DIR" attr? ">" text "</CONST_DIR>"
//   attr       := ' norm="' KEY '"'
//
// A param without a var is a constant term. The right side of a constraint
// is the sum of its optional expr and optional limit (at least one present).
// Whitespace between elements is insignificant.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lpwp/direction.hpp"
#include "lpwp/error.hpp"
#include "lpwp/numeric.hpp"

namespace lpwp {

struct LinExpr {
  double constant = 0.0;
  std::map<std::string, double> terms;

  void add_term(const std::string& var, double coeff) { terms[var] += coeff; }
  bool is_constant_only() const { return terms.empty(); }
  double coefficient(const std::string& var) const {
    auto it = terms.find(var);
    return it == terms.end() ? 0.0 : it->second;
  }

  bool operator==(const LinExpr&) const = default;
};

struct ObjectiveDecl {
  Sense direction = Sense::MAXIMIZE;
  std::string name;
  LinExpr expr;

  bool operator==(const ObjectiveDecl&) const = default;
};

struct ConstraintDecl {
  LinExpr lhs;
  Relation relation = Relation::LE;
  LinExpr rhs;

  bool operator==(const ConstraintDecl&) const = default;
};

/// Ordered, duplicate-free list of decision variable names.
class VarOrderMap {
 public:
  VarOrderMap() = default;
  explicit VarOrderMap(std::vector<std::string> names) {
    for (auto& n : names)
      if (!add_new(n)) throw ValidationError("duplicate variable '" + n + "'");
  }

  /// Index of `name`, appending it if unseen.
  std::size_t add(const std::string& name) {
    if (auto i = index_of(name)) return *i;
    add_new(name);
    return names_.size() - 1;
  }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& name) const { return index_.contains(name); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  friend bool operator==(const VarOrderMap& a, const VarOrderMap& b) { return a.names_ == b.names_; }

 private:
  bool add_new(const std::string& name) {
    if (name.empty()) throw ValidationError("empty variable name");
    if (!index_.emplace(name, names_.size()).second) return false;
    names_.push_back(name);
    return true;
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ProblemFormulation {
  ObjectiveDecl objective;
  std::vector<ConstraintDecl> constraints;
  VarOrderMap vars;

  bool operator==(const ProblemFormulation&) const = default;
};

namespace detail {

inline bool is_valid_atom_text(std::string_view s) {
  if (s.find('<') != std::string_view::npos) return false;
  if (!s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) ||
                     std::isspace(static_cast<unsigned char>(s.back()))))
    return false;
  return true;
}

}  // namespace detail

/// Checks every ProblemFormulation / declaration invariant.
inline void validate(const ProblemFormulation& f) {
  auto check_expr = [&](const LinExpr& e, const std::string& where) {
    for (const auto& [name, coeff] : e.terms) {
      if (name.empty() || !detail::is_valid_atom_text(name))
        throw ValidationError(where + ": invalid variable name '" + name + "'");
      if (!f.vars.contains(name)) throw ValidationError(where + ": variable '" + name + "' missing from vars");
      if (!std::isfinite(coeff)) throw ValidationError(where + ": non-finite coefficient on '" + name + "'");
    }
    if (!std::isfinite(e.constant)) throw ValidationError(where + ": non-finite constant");
  };
  if (f.objective.expr.terms.empty()) throw ValidationError("objective has no variable term");
  if (f.objective.expr.constant != 0.0) throw ValidationError("objective carries a constant");
  if (!detail::is_valid_atom_text(f.objective.name)) throw ValidationError("invalid objective name");
  check_expr(f.objective.expr, "objective");
  for (std::size_t i = 0; i < f.constraints.size(); ++i) {
    const auto& c = f.constraints[i];
    const std::string where = "constraint " + std::to_string(i + 1);
    if (c.lhs.is_constant_only() && c.rhs.is_constant_only())
      throw ValidationError(where + ": both sides are constant");
    check_expr(c.lhs, where);
    check_expr(c.rhs, where);
  }
  for (const auto& v : f.vars.names())
    if (!detail::is_valid_atom_text(v)) throw ValidationError("invalid variable name '" + v + "'");
}

struct IrParseOptions {
  const DirectionLexicon* lexicon = nullptr;  // null: built-in lexicon
  std::size_t first_line = 1;                 // line number of the text's first line
};

namespace detail {

class IrParser {
 public:
  IrParser(std::string_view src, const IrParseOptions& opts)
      : src_(src), lexicon_(opts.lexicon ? *opts.lexicon : DirectionLexicon::builtin()), first_line_(opts.first_line) {}

  ProblemFormulation parse() {
    skip_ws();
    std::optional<VarOrderMap> header;
    if (at_open("VARS")) header = parse_vars_header();

    std::optional<ObjectiveDecl> objective;
    std::vector<ConstraintDecl> constraints;
    VarOrderMap mentioned;

    skip_ws();
    if (eof()) fail(pos_, "no objective declaration");
    while (!eof()) {
      const std::size_t decl_pos = pos_;
      expect_open("DECLARATION");
      skip_ws();
      if (at_open("OBJ_DIR")) {
        ObjectiveDecl obj = parse_objective();
        if (objective) fail(decl_pos, "multiple objectives");
        objective = std::move(obj);
      } else {
        constraints.push_back(parse_constraint(decl_pos));
      }
      skip_ws();
      expect_close("DECLARATION");
      skip_ws();
    }
    if (!objective) fail(pos_, "no objective declaration");

    ProblemFormulation f;
    f.objective = std::move(*objective);
    f.constraints = std::move(constraints);
    if (header) {
      for (const auto& [name, where] : mentions_)
        if (!header->contains(name)) fail(where, "variable '" + name + "' is not listed in <VARS>");
      f.vars = std::move(*header);
    } else {
      for (const auto& [name, where] : mentions_) f.vars.add(name);
    }
    return f;
  }

 private:
  struct Element {
    std::string content;
    std::optional<std::string> norm;
    std::size_t pos = 0;
  };

  [[noreturn]] void fail(std::size_t offset, const std::string& message) const {
    std::size_t line = first_line_;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, message);
  }

  bool eof() const { return pos_ >= src_.size(); }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  static bool known_tag(std::string_view name) {
    static constexpr std::string_view kTags[] = {"DECLARATION", "VARS",  "OBJ_DIR", "OBJ_NAME",
                                                 "CONST_DIR",   "LIMIT", "PARAM",   "VAR"};
    return std::find(std::begin(kTags), std::end(kTags), name) != std::end(kTags);
  }

  // Reads a tag name starting at `at` (just after '<' or '</').
  std::string_view tag_name_at(std::size_t at) const {
    std::size_t end = at;
    while (end < src_.size() && (std::isupper(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
    return src_.substr(at, end - at);
  }

  // Peeks the next open tag name, reporting unknown tags.
  std::optional<std::string_view> peek_open() const {
    if (eof() || src_[pos_] != '<' || (pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) return std::nullopt;
    std::string_view name = tag_name_at(pos_ + 1);
    if (!known_tag(name)) fail(pos_, "unknown tag <" + std::string(name.empty() ? "?" : name) + ">");
    return name;
  }

  bool at_open(std::string_view name) const {
    auto n = peek_open();
    return n && *n == name;
  }

  std::optional<std::string_view> peek_keyword() const {
    if (eof() || src_[pos_] != '[') return std::nullopt;
    std::size_t close = src_.find(']', pos_);
    if (close == std::string_view::npos) fail(pos_, "unterminated keyword");
    std::string_view kw = src_.substr(pos_ + 1, close - pos_ - 1);
    if (kw != "IS" && kw != "PLUS" && kw != "MINUS" && kw != "TIMES") fail(pos_, "unknown keyword [" + std::string(kw) + "]");
    return kw;
  }

  bool at_keyword(std::string_view kw) const {
    auto k = peek_keyword();
    return k && *k == kw;
  }

  void expect_keyword(std::string_view kw) {
    skip_ws();
    if (!at_keyword(kw)) fail(pos_, "expected [" + std::string(kw) + "]");
    pos_ += kw.size() + 2;
  }

  // Parses "<NAME" attrs ">" and returns the attribute norm if present.
  std::optional<std::string> expect_open(std::string_view name) {
    skip_ws();
    const std::size_t start = pos_;
    if (eof()) fail(pos_, "expected <" + std::string(name) + ">, found end of input");
    if (src_.substr(pos_, 2) == "</") {
      std::string_view found = tag_name_at(pos_ + 2);
      fail(pos_, "unbalanced tags: unexpected </" + std::string(found) + ">, expected <" + std::string(name) + ">");
    }
    auto found = peek_open();
    if (!found) fail(pos_, "expected <" + std::string(name) + ">");
    if (*found != name) fail(pos_, "expected <" + std::string(name) + ">, found <" + std::string(*found) + ">");
    pos_ += 1 + name.size();

    std::optional<std::string> norm;
    while (true) {
      skip_ws();
      if (eof()) fail(start, "unterminated tag <" + std::string(name));
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      const std::size_t attr_pos = pos_;
      std::size_t eq = pos_;
      while (eq < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[eq])) || src_[eq] == '_')) ++eq;
      std::string_view attr = src_.substr(pos_, eq - pos_);
      if (attr.empty()) fail(attr_pos, "malformed tag <" + std::string(name));
      if (attr != "norm") fail(attr_pos, "unknown attribute '" + std::string(attr) + "'");
      if (name != "OBJ_DIR" && name != "CONST_DIR")
        fail(attr_pos, "attribute 'norm' not allowed on <" + std::string(name) + ">");
      if (norm) fail(attr_pos, "duplicate attribute 'norm'");
      pos_ = eq;
      if (eof() || src_[pos_] != '=' || pos_ + 1 >= src_.size() || src_[pos_ + 1] != '"')
        fail(attr_pos, "expected norm=\"KEY\"");
      pos_ += 2;
      const std::size_t close = src_.find('"', pos_);
      if (close == std::string_view::npos) fail(attr_pos, "unterminated attribute value");
      norm = std::string(src_.substr(pos_, close - pos_));
      pos_ = close + 1;
    }
    return norm;
  }

  void expect_close(std::string_view name) {
    skip_ws();
    if (src_.substr(pos_, 2) != "</") {
      if (eof()) fail(pos_, "unbalanced tags: missing </" + std::string(name) + ">");
      fail(pos_, "unbalanced tags: expected </" + std::string(name) + ">");
    }
    std::string_view found = tag_name_at(pos_ + 2);
    if (found != name)
      fail(pos_, "unbalanced tags: expected </" + std::string(name) + ">, found </" + std::string(found) + ">");
    pos_ += 2 + name.size();
    if (eof() || src_[pos_] != '>') fail(pos_, "malformed closing tag </" + std::string(name));
    ++pos_;
  }

  // <NAME attrs>text</NAME>; text may not contain '<'.
  Element read_element(std::string_view name) {
    skip_ws();
    Element e;
    e.pos = pos_;
    e.norm = expect_open(name);
    const std::size_t content_start = pos_;
    const std::size_t lt = src_.find('<', pos_);
    if (lt == std::string_view::npos) fail(content_start, "unbalanced tags: missing </" + std::string(name) + ">");
    std::string_view raw = src_.substr(content_start, lt - content_start);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
    e.content = std::string(raw);
    pos_ = lt;
    if (src_.substr(pos_, 2) != "</") {
      std::string_view inner = tag_name_at(pos_ + 1);
      if (!known_tag(inner)) fail(pos_, "unknown tag <" + std::string(inner.empty() ? "?" : inner) + ">");
      fail(pos_, "unbalanced tags: <" + std::string(inner) + "> inside <" + std::string(name) + ">");
    }
    expect_close(name);
    return e;
  }

  double read_numeral(std::string_view name) {
    Element e = read_element(name);
    auto v = parse_numeral(e.content);
    if (!v) fail(e.pos, "invalid numeral '" + e.content + "' in <" + std::string(name) + ">");
    return *v;
  }

  std::string read_var() {
    Element e = read_element("VAR");
    if (e.content.empty()) fail(e.pos, "empty variable name");
    mention(e.content, e.pos);
    return e.content;
  }

  void mention(const std::string& name, std::size_t where) {
    if (seen_.insert(name).second) mentions_.emplace_back(name, where);
  }

  VarOrderMap parse_vars_header() {
    expect_open("VARS");
    VarOrderMap vars;
    skip_ws();
    while (at_open("VAR")) {
      Element e = read_element("VAR");
      if (e.content.empty()) fail(e.pos, "empty variable name");
      if (vars.contains(e.content)) fail(e.pos, "duplicate variable '" + e.content + "' in <VARS>");
      vars.add(e.content);
      skip_ws();
    }
    expect_close("VARS");
    return vars;
  }

  Direction resolve_direction(const Element& e, std::string_view tag) {
    if (e.norm) {
      auto d = direction_from_key(*e.norm);
      if (!d) fail(e.pos, "unknown norm key '" + *e.norm + "' on <" + std::string(tag) + ">");
      return *d;
    }
    if (auto d = lexicon_.lookup(e.content)) return *d;
    fail(e.pos, "unknown direction '" + e.content + "'");
  }

  bool at_term_start() const { return at_open("PARAM") || at_open("VAR"); }

  // Parses an expr; returns false (consuming nothing) if none starts here.
  bool parse_expr(LinExpr& out) {
    skip_ws();
    double sign = 1.0;
    if (at_keyword("MINUS")) {
      expect_keyword("MINUS");
      skip_ws();
      sign = -1.0;
      if (!at_term_start()) fail(pos_, "expected term after [MINUS]");
    } else if (!at_term_start()) {
      return false;
    }
    parse_signed_term(out, sign);
    while (true) {
      skip_ws();
      if (at_keyword("PLUS")) {
        expect_keyword("PLUS");
        parse_signed_term(out, 1.0);
      } else if (at_keyword("MINUS")) {
        expect_keyword("MINUS");
        parse_signed_term(out, -1.0);
      } else {
        break;
      }
    }
    return true;
  }

  void parse_signed_term(LinExpr& out, double sign) {
    skip_ws();
    if (at_open("PARAM")) {
      const double coeff = read_numeral("PARAM");
      skip_ws();
      if (at_keyword("TIMES")) {
        expect_keyword("TIMES");
        skip_ws();
        if (!at_open("VAR")) fail(pos_, "expected <VAR> after [TIMES]");
      }
      if (at_open("VAR")) {
        out.add_term(read_var(), sign * coeff);
      } else {
        out.constant += sign * coeff;
      }
      return;
    }
    if (at_open("VAR")) {
      out.add_term(read_var(), sign);
      return;
    }
    fail(pos_, "expected <PARAM> or <VAR>");
  }

  ObjectiveDecl parse_objective() {
    ObjectiveDecl obj;
    Element dir = read_element("OBJ_DIR");
    Direction d = resolve_direction(dir, "OBJ_DIR");
    if (!std::holds_alternative<Sense>(d))
      fail(dir.pos, "objective direction '" + dir.content + "' maps to a constraint relation");
    obj.direction = std::get<Sense>(d);
    Element name = read_element("OBJ_NAME");
    obj.name = name.content;
    expect_keyword("IS");
    const std::size_t expr_pos = pos_;
    if (!parse_expr(obj.expr)) fail(pos_, "expected objective expression");
    if (obj.expr.terms.empty()) fail(expr_pos, "objective has no variable term");
    if (obj.expr.constant != 0.0) fail(expr_pos, "objective carries a constant term");
    return obj;
  }

  ConstraintDecl parse_constraint(std::size_t decl_pos) {
    ConstraintDecl c;
    skip_ws();
    if (!parse_expr(c.lhs)) {
      if (auto tag = peek_open(); tag && *tag == "CONST_DIR") fail(pos_, "constraint has no left-hand side");
      if (auto tag = peek_open()) fail(pos_, "unexpected <" + std::string(*tag) + "> in constraint");
      fail(pos_, "expected constraint expression");
    }
    skip_ws();
    if (!at_open("CONST_DIR")) fail(pos_, "expected <CONST_DIR>");
    Element dir = read_element("CONST_DIR");
    Direction d = resolve_direction(dir, "CONST_DIR");
    if (!std::holds_alternative<Relation>(d))
      fail(dir.pos, "constraint direction '" + dir.content + "' maps to an objective sense");
    c.relation = std::get<Relation>(d);

    const bool has_expr = parse_expr(c.rhs);
    skip_ws();
    bool has_limit = false;
    if (at_open("LIMIT")) {
      c.rhs.constant += read_numeral("LIMIT");
      has_limit = true;
    }
    if (!has_expr && !has_limit) fail(pos_, "constraint has no right-hand side");
    if (c.lhs.is_constant_only() && c.rhs.is_constant_only()) fail(decl_pos, "vacuous constraint (no variables)");
    return c;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  const DirectionLexicon& lexicon_;
  std::size_t first_line_;
  std::vector<std::pair<std::string, std::size_t>> mentions_;
  std::unordered_set<std::string> seen_;
};

}  // namespace detail

/// Parses one problem. Either returns a valid formulation or throws a
/// ParseError carrying line and column.
inline ProblemFormulation parse_ir(std::string_view text, const IrParseOptions& options = {}) {
  return detail::IrParser(text, options).parse();
}

namespace detail {

inline void append_expr(std::string& out, const std::vector<std::pair<double, const std::string*>>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& [coeff, var] = items[i];
    const bool negative = std::signbit(coeff);
    if (i == 0) {
      if (negative) out += "[MINUS] ";
    } else {
      out += negative ? " [MINUS] " : " [PLUS] ";
    }
    out += "<PARAM>" + format_number(std::fabs(coeff)) + "</PARAM>";
    if (var) out += " [TIMES] <VAR>" + *var + "</VAR>";
  }
}

inline std::vector<std::pair<double, const std::string*>> ordered_terms(const LinExpr& e, const VarOrderMap& vars) {
  std::vector<std::pair<double, const std::string*>> items;
  for (const auto& name : vars.names()) {
    auto it = e.terms.find(name);
    if (it != e.terms.end()) items.emplace_back(it->second, &name);
  }
  return items;
}

}  // namespace detail

/// Emits a <VARS> header and one DECLARATION per line (objective first).
/// Terms follow variable order; every coefficient is written explicitly.
inline std::string serialize_ir(const ProblemFormulation& f) {
  validate(f);
  std::string out = "<VARS>";
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (i) out += ' ';
    out += "<VAR>" + f.vars[i] + "</VAR>";
  }
  out += "</VARS>\n";

  const bool max = f.objective.direction == Sense::MAXIMIZE;
  out += "<DECLARATION><OBJ_DIR norm=\"";
  out += max ? "MAX\">maximize" : "MIN\">minimize";
  out += "</OBJ_DIR> <OBJ_NAME>" + f.objective.name + "</OBJ_NAME> [IS] ";
  detail::append_expr(out, detail::ordered_terms(f.objective.expr, f.vars));
  out += "</DECLARATION>\n";

  for (const auto& c : f.constraints) {
    out += "<DECLARATION>";
    auto lhs = detail::ordered_terms(c.lhs, f.vars);
    if (c.lhs.constant != 0.0 || lhs.empty()) lhs.emplace_back(c.lhs.constant, nullptr);
    detail::append_expr(out, lhs);

    switch (c.relation) {
      case Relation::LE: out += " <CONST_DIR norm=\"LE\">at most</CONST_DIR> "; break;
      case Relation::GE: out += " <CONST_DIR norm=\"GE\">at least</CONST_DIR> "; break;
      case Relation::EQ: out += " <CONST_DIR norm=\"EQ\">exactly</CONST_DIR> "; break;
    }

    auto rhs = detail::ordered_terms(c.rhs, f.vars);
    if (!rhs.empty()) {
      if (c.rhs.constant != 0.0) rhs.emplace_back(c.rhs.constant, nullptr);
      detail::append_expr(out, rhs);
    } else if (std::signbit(c.rhs.constant) && c.rhs.constant != 0.0) {
      detail::append_expr(out, {{c.rhs.constant, nullptr}});
    } else {
      out += "<LIMIT>" + format_number(c.rhs.constant) + "</LIMIT>";
    }
    out += "</DECLARATION>\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multi-problem files

struct IrDocument {
  std::string id;
  std::string text;
  std::size_t first_line = 1;
};

/// Splits on "### <problem-id>" lines. A file without such lines is one
/// document with an empty id.
inline std::vector<IrDocument> split_ir_documents(std::string_view content) {
  std::vector<IrDocument> docs;
  std::unordered_set<std::string> ids;
  std::string preamble;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool any_header = false;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    const std::size_t next = nl == std::string_view::npos ? content.size() : nl + 1;
    std::string_view line = content.substr(pos, next - pos);
    ++line_no;
    std::string_view stripped = line;
    while (!stripped.empty() && (stripped.back() == '\n' || stripped.back() == '\r')) stripped.remove_suffix(1);
    if (stripped.starts_with("###")) {
      std::string_view id = stripped.substr(3);
      while (!id.empty() && std::isspace(static_cast<unsigned char>(id.front()))) id.remove_prefix(1);
      while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.remove_suffix(1);
      if (id.empty()) throw ParseError(line_no, 1, "empty problem id after ###");
      if (!ids.insert(std::string(id)).second)
        throw ParseError(line_no, 1, "duplicate problem id '" + std::string(id) + "'");
      if (!any_header && preamble.find_first_not_of(" \t\r\n") != std::string::npos)
        throw ParseError(1, 1, "content before the first ### header");
      any_header = true;
      docs.push_back({std::string(id), {}, line_no + 1});
    } else if (any_header) {
      docs.back().text.append(line);
    } else {
      preamble.append(line);
    }
    pos = next;
  }
  if (!any_header) docs.push_back({"", std::string(content), 1});
  return docs;
}

}  // namespace lpwp
