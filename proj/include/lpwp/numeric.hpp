#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace lpwp {

/// Shortest decimal string that reads back to exactly `value`.
/// Negative zero prints as "0".
inline std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, end);
}

/// Parses a numeral as it appears inside PARAM/LIMIT atoms: optional sign,
/// optional '$', digits with optional thousands separators, optional
/// fraction and exponent, optional trailing '%' (scaled by 1/100).
inline std::optional<double> parse_numeral(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (!text.empty() && text.front() == '$') text.remove_prefix(1);
  bool percent = false;
  if (!text.empty() && text.back() == '%') {
    percent = true;
    text.remove_suffix(1);
  }
  if (text.empty()) return std::nullopt;

  std::string digits;
  digits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == ',') {
      // Thousands separator: digit on the left, three digits on the right.
      bool ok = i > 0 && i + 3 < text.size() && std::isdigit(static_cast<unsigned char>(text[i - 1]));
      for (std::size_t k = 1; ok && k <= 3; ++k)
        ok = std::isdigit(static_cast<unsigned char>(text[i + k])) != 0;
      if (ok && i + 4 < text.size()) ok = !std::isdigit(static_cast<unsigned char>(text[i + 4]));
      if (!ok) return std::nullopt;
      continue;
    }
    digits.push_back(c);
  }
  if (digits.empty() || !(std::isdigit(static_cast<unsigned char>(digits.front())) || digits.front() == '.'))
    return std::nullopt;

  double value = 0.0;
  const char* first = digits.data();
  const char* last = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  if (percent) value /= 100.0;
  return negative ? -value : value;
}

}  // namespace lpwp
