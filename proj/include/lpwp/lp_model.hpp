#pragma once

#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "lpwp/canonical.hpp"
#include "lpwp/direction.hpp"
#include "lpwp/error.hpp"
#include "lpwp/numeric.hpp"

namespace lpwp {

/// Dense LP:  optimize objective . x  s.t.  rows[i] . x (relations[i]) rhs[i],
/// x >= lower_bounds. A lower bound of -infinity marks a free variable.
struct LpModel {
  std::string name;
  Sense sense = Sense::MAXIMIZE;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;
  std::vector<std::string> var_names;
  std::vector<double> lower_bounds;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_cols() const { return objective.size(); }

  void validate() const {
    const std::size_t n = objective.size();
    if (var_names.size() != n || lower_bounds.size() != n)
      throw ValidationError("LP model: objective, var_names and lower_bounds differ in length");
    if (relations.size() != rows.size() || rhs.size() != rows.size())
      throw ValidationError("LP model: rows, relations and rhs differ in length");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != n)
        throw ValidationError("LP model: row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                              " columns, expected " + std::to_string(n));
      if (relations[i] == Relation::GE)
        throw ValidationError("LP model: row " + std::to_string(i + 1) + " uses GE; rows must be LE or EQ");
    }
  }

  bool operator==(const LpModel&) const = default;
};

/// One row per canonical constraint, in order; every variable >= 0.
inline LpModel build_model(const CanonForm& cf) {
  if (!cf.objective) throw ValidationError("cannot build an LP model without an objective");
  LpModel m;
  m.sense = cf.objective->direction;
  m.objective = cf.objective->coeffs;
  m.var_names = cf.vars.names();
  m.lower_bounds.assign(m.var_names.size(), 0.0);
  for (const auto& c : cf.constraints) {
    m.rows.push_back(c.coeffs);
    m.relations.push_back(c.relation);
    m.rhs.push_back(c.bound);
  }
  m.validate();
  return m;
}

/// LP/MPS-safe identifiers: non-alphanumerics become '_', a leading digit
/// gets a "v_" prefix, and collisions get a numeric suffix.
inline std::vector<std::string> sanitized_names(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  std::unordered_set<std::string> used;
  for (const auto& raw : names) {
    std::string s;
    for (char c : raw) s.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) s = "v_" + s;
    std::string candidate = s;
    for (int k = 2; used.contains(candidate); ++k) candidate = s + "_" + std::to_string(k);
    used.insert(candidate);
    out.push_back(std::move(candidate));
  }
  return out;
}

namespace detail {

inline std::string lp_terms(const std::vector<double>& coeffs, const std::vector<std::string>& names) {
  std::string out;
  bool first = true;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double c = coeffs[j];
    if (c == 0.0) continue;
    if (first)
      out += c < 0.0 ? "- " : "";
    else
      out += c < 0.0 ? " - " : " + ";
    first = false;
    const double a = std::fabs(c);
    if (a != 1.0) out += format_number(a) + " ";
    out += names[j];
  }
  if (first && !names.empty()) out = "0 " + names.front();
  return out;
}

inline bool is_free(double lower_bound) { return std::isinf(lower_bound) && lower_bound < 0.0; }

}  // namespace detail

/// CPLEX-style LP text. Deterministic for a given model.
inline std::string emit_lp_format(const LpModel& m) {
  m.validate();
  const auto names = sanitized_names(m.var_names);
  std::string out = m.sense == Sense::MAXIMIZE ? "Maximize\n" : "Minimize\n";
  out += " obj: " + detail::lp_terms(m.objective, names) + "\n";
  if (!m.rows.empty()) {
    out += "Subject To\n";
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      out += " c" + std::to_string(i + 1) + ": " + detail::lp_terms(m.rows[i], names);
      out += m.relations[i] == Relation::EQ ? " = " : " <= ";
      out += format_number(m.rhs[i]) + "\n";
    }
  }
  out += "Bounds\n";
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (detail::is_free(m.lower_bounds[j]))
      out += " " + names[j] + " free\n";
    else
      out += " " + names[j] + " >= " + format_number(m.lower_bounds[j]) + "\n";
  }
  out += "End\n";
  return out;
}

namespace detail {

inline std::string mps_field(const std::string& s) {
  std::string out = s;
  if (out.size() < 8) out.append(8 - out.size(), ' ');
  return out;
}

}  // namespace detail

/// Fixed-layout MPS. Records are indented two spaces; fields are separated
/// by whitespace. Maximization is declared in an OBJSENSE section.
inline std::string emit_mps(const LpModel& m) {
  m.validate();
  const auto names = sanitized_names(m.var_names);
  std::vector<std::string> row_names;
  for (std::size_t i = 0; i < m.rows.size(); ++i) row_names.push_back("c" + std::to_string(i + 1));

  std::string out = "NAME          " + (m.name.empty() ? std::string("LPWP") : m.name) + "\n";
  if (m.sense == Sense::MAXIMIZE) out += "OBJSENSE\n  MAX\n";
  out += "ROWS\n  N  obj\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    out += std::string("  ") + (m.relations[i] == Relation::EQ ? "E" : "L") +
           "  " + row_names[i] + "\n";

  out += "COLUMNS\n";
  for (std::size_t j = 0; j < names.size(); ++j) {
    bool in_rows = false;
    for (const auto& row : m.rows) in_rows = in_rows || row[j] != 0.0;
    if (m.objective[j] != 0.0 || !in_rows)
      out += "  " + detail::mps_field(names[j]) + "  " + detail::mps_field("obj") + "  " +
             format_number(m.objective[j]) + "\n";
    for (std::size_t i = 0; i < m.rows.size(); ++i)
      if (m.rows[i][j] != 0.0)
        out += "  " + detail::mps_field(names[j]) + "  " + detail::mps_field(row_names[i]) + "  " +
               format_number(m.rows[i][j]) + "\n";
  }

  out += "RHS\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    if (m.rhs[i] != 0.0)
      out += "  " + detail::mps_field("RHS") + "  " + detail::mps_field(row_names[i]) + "  " +
             format_number(m.rhs[i]) + "\n";

  out += "BOUNDS\n";
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (detail::is_free(m.lower_bounds[j]))
      out += "  FR  " + detail::mps_field("BND") + "  " + names[j] + "\n";
    else
      out += "  LO  " + detail::mps_field("BND") + "  " + detail::mps_field(names[j]) + "  " +
             format_number(m.lower_bounds[j]) + "\n";
  }
  out += "ENDATA\n";
  return out;
}

}  // namespace lpwp
