#pragma once

// Reader for the line-oriented LP subset that emit_lp_format writes:
// one objective line, one constraint per line, lower bounds or "free" in
// the Bounds section. GE rows are negated into LE on the way in.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lpwp/error.hpp"
#include "lpwp/lp_model.hpp"
#include "lpwp/numeric.hpp"

namespace lpwp {

namespace detail {

class LpReader {
 public:
  explicit LpReader(std::string_view src) : src_(src) {}

  LpModel read() {
    enum class Section { none, objective, constraints, bounds, end };
    Section section = Section::none;
    bool saw_objective = false;
    std::size_t pos = 0;
    while (pos <= src_.size() && section != Section::end) {
      std::size_t nl = src_.find('\n', pos);
      if (nl == std::string_view::npos) nl = src_.size();
      line_ = src_.substr(pos, nl - pos);
      if (!line_.empty() && line_.back() == '\r') line_.remove_suffix(1);
      ++line_no_;
      pos = nl + 1;
      col_ = 0;
      skip_ws();
      if (col_ == line_.size() || line_[col_] == '\\') {
        if (nl == src_.size()) break;
        continue;
      }

      const std::string head = lower(line_.substr(col_));
      if (head == "maximize" || head == "maximum" || head == "max" || head == "minimize" || head == "minimum" ||
          head == "min") {
        if (section != Section::none) fail("objective sense after the objective section");
        model_.sense = head.starts_with("max") ? Sense::MAXIMIZE : Sense::MINIMIZE;
        section = Section::objective;
      } else if (head == "subject to" || head == "such that" || head == "st" || head == "s.t.") {
        if (!saw_objective) fail("constraints before the objective");
        section = Section::constraints;
      } else if (head == "bounds") {
        if (!saw_objective) fail("bounds before the objective");
        section = Section::bounds;
      } else if (head == "end") {
        section = Section::end;
      } else {
        switch (section) {
          case Section::none: fail("expected Maximize or Minimize");
          case Section::objective:
            if (saw_objective) fail("objective must fit on one line");
            read_objective();
            saw_objective = true;
            break;
          case Section::constraints: read_constraint(); break;
          case Section::bounds: read_bound(); break;
          case Section::end: break;
        }
      }
      if (nl == src_.size()) break;
    }
    if (!saw_objective) throw ParseError(line_no_ ? line_no_ : 1, 1, "missing objective");
    if (section != Section::end) throw ParseError(line_no_ ? line_no_ : 1, 1, "missing End");

    const std::size_t n = model_.var_names.size();
    model_.objective.resize(n, 0.0);
    for (auto& row : model_.rows) row.resize(n, 0.0);
    model_.lower_bounds.resize(n, 0.0);
    for (const auto& [j, lb] : bounds_) model_.lower_bounds[j] = lb;
    if (bound_order_.size() == n) permute_columns();
    return std::move(model_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_no_, col_ + 1, msg); }

  static std::string lower(std::string_view s) {
    std::string out;
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
  }

  void skip_ws() {
    while (col_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[col_]))) ++col_;
  }

  bool at_end() {
    skip_ws();
    return col_ >= line_.size();
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']' || c == '#';
  }

  std::string name() {
    skip_ws();
    const std::size_t start = col_;
    while (col_ < line_.size() && is_name_char(line_[col_])) ++col_;
    if (col_ == start) fail("expected a variable name");
    return std::string(line_.substr(start, col_ - start));
  }

  std::optional<double> number() {
    skip_ws();
    const std::size_t start = col_;
    if (col_ == line_.size() || !(std::isdigit(static_cast<unsigned char>(line_[col_])) || line_[col_] == '.'))
      return std::nullopt;
    while (col_ < line_.size() && (std::isdigit(static_cast<unsigned char>(line_[col_])) || line_[col_] == '.' ||
                                   line_[col_] == 'e' || line_[col_] == 'E' ||
                                   ((line_[col_] == '+' || line_[col_] == '-') && col_ > start &&
                                    (line_[col_ - 1] == 'e' || line_[col_ - 1] == 'E'))))
      ++col_;
    if (col_ == start) return std::nullopt;
    const std::string_view text = line_.substr(start, col_ - start);
    auto v = parse_numeral(text);
    if (!v) {
      col_ = start;
      fail("malformed number '" + std::string(text) + "'");
    }
    return v;
  }

  std::size_t column_of(const std::string& var) {
    auto [it, inserted] = index_.emplace(var, model_.var_names.size());
    if (inserted) model_.var_names.push_back(var);
    return it->second;
  }

  // Skips an optional "label:" prefix.
  void skip_label() {
    skip_ws();
    const std::size_t colon = line_.find(':', col_);
    if (colon == std::string_view::npos) return;
    const std::size_t save = col_;
    std::size_t k = col_;
    while (k < colon && is_name_char(line_[k])) ++k;
    if (k == colon && k > save)
      col_ = colon + 1;
    else
      col_ = save;
  }

  // terms := ["+"|"-"] [number] name (("+"|"-") [number] name)*
  std::vector<double> terms(bool stop_at_relation) {
    std::vector<double> coeffs;
    bool first = true;
    while (!at_end()) {
      const char c = line_[col_];
      if (stop_at_relation && (c == '<' || c == '>' || c == '=')) break;
      double sign = 1.0;
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1.0 : 1.0;
        ++col_;
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      first = false;
      const double coef = number().value_or(1.0);
      if (at_end()) fail("expected a variable name");
      if (stop_at_relation && (line_[col_] == '<' || line_[col_] == '>' || line_[col_] == '=')) {
        fail("constant terms belong on the right-hand side");
      }
      const std::size_t j = column_of(name());
      if (coeffs.size() <= j) coeffs.resize(j + 1, 0.0);
      coeffs[j] += sign * coef;
    }
    if (first) fail("empty expression");
    return coeffs;
  }

  double signed_number() {
    skip_ws();
    double sign = 1.0;
    if (col_ < line_.size() && (line_[col_] == '+' || line_[col_] == '-')) {
      sign = line_[col_] == '-' ? -1.0 : 1.0;
      ++col_;
    }
    skip_ws();
    if (line_.substr(col_).starts_with("inf") || line_.substr(col_).starts_with("Inf")) {
      col_ = line_.size();
      return sign * std::numeric_limits<double>::infinity();
    }
    auto v = number();
    if (!v) fail("expected a number");
    return sign * *v;
  }

  void read_objective() {
    skip_label();
    model_.objective = terms(false);
  }

  void read_constraint() {
    skip_label();
    auto coeffs = terms(true);
    if (at_end()) fail("expected <=, >= or =");
    Relation rel;
    const std::string_view rest = line_.substr(col_);
    if (rest.starts_with("<=") || rest.starts_with("=<")) {
      rel = Relation::LE;
      col_ += 2;
    } else if (rest.starts_with(">=") || rest.starts_with("=>")) {
      rel = Relation::GE;
      col_ += 2;
    } else if (rest.starts_with("<") || rest.starts_with(">")) {
      rel = rest.front() == '<' ? Relation::LE : Relation::GE;
      col_ += 1;
    } else {
      rel = Relation::EQ;
      col_ += 1;
    }
    double rhs = signed_number();
    if (!at_end()) fail("unexpected text after the right-hand side");
    if (rel == Relation::GE) {
      for (double& v : coeffs) v = -v;
      rhs = -rhs;
      rel = Relation::LE;
    }
    for (double& v : coeffs) v += 0.0;
    model_.rows.push_back(std::move(coeffs));
    model_.relations.push_back(rel);
    model_.rhs.push_back(rhs + 0.0);
  }

  // A Bounds section naming every variable fixes the column order.
  void permute_columns() {
    auto apply = [&](auto& v) {
      std::remove_reference_t<decltype(v)> out;
      out.reserve(v.size());
      for (std::size_t j : bound_order_) out.push_back(v[j]);
      v = std::move(out);
    };
    apply(model_.objective);
    for (auto& row : model_.rows) apply(row);
    apply(model_.var_names);
    apply(model_.lower_bounds);
  }

  void read_bound() {
    const std::string var = name();
    const std::size_t j = column_of(var);
    if (std::find(bound_order_.begin(), bound_order_.end(), j) != bound_order_.end())
      fail("variable '" + var + "' bounded twice");
    bound_order_.push_back(j);
    skip_ws();
    const std::string rest = lower(line_.substr(col_));
    if (rest == "free") {
      bounds_[j] = -std::numeric_limits<double>::infinity();
      return;
    }
    if (!line_.substr(col_).starts_with(">=")) fail("only 'x >= value' and 'x free' bounds are supported");
    col_ += 2;
    const double lb = signed_number();
    if (!at_end()) fail("unexpected text after the bound");
    if (std::isinf(lb) && lb > 0.0) fail("lower bound of +infinity");
    bounds_[j] = lb;
  }

  std::string_view src_;
  std::string_view line_;
  std::size_t line_no_ = 0;
  std::size_t col_ = 0;
  LpModel model_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::size_t, double> bounds_;
  std::vector<std::size_t> bound_order_;
};

}  // namespace detail

/// Parses LP text into a model. Variables are numbered in order of first
/// appearance; unlisted variables default to a lower bound of 0. Throws
/// ParseError with line and column.
inline LpModel read_lp_format(std::string_view text) {
  LpModel m = detail::LpReader(text).read();
  m.validate();
  return m;
}

}  // namespace lpwp
