#pragma once

// Text and JSON encodings of a tournament.
//
// Text: first line `n`, then n lines of n characters; row i column j is
// '1' iff i -> j, '0' otherwise, '-' on the diagonal.  The canonical form
// ends every line with '\n'.
//
// JSON: {"n": n, "rows": [...]} where each row is a lowercase hex string of
// ceil(n/4) digits.  Columns are packed four per digit, first column in the
// most significant bit of the first digit; padding bits are zero.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tourncyc/tournament.hpp"

namespace tourncyc {

/// Malformed or non-tournament input.  line/column are 1-based; for JSON
/// input line is the row index + 1 and column the hex digit index + 1.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline std::string to_text(const Tournament& t) {
  const std::size_t n = t.size();
  std::string out = std::to_string(n) + '\n';
  out.reserve(out.size() + n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out += (i == j) ? '-' : (t.arc(i, j) ? '1' : '0');
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos)
    lines.pop_back();
  return lines;
}

// Shared check once the raw 0/1 matrix is known.
inline Tournament assemble(std::size_t n, const std::vector<std::vector<char>>& m,
                           bool json_positions) {
  TournamentBuilder b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool ij = m[i][j], ji = m[j][i];
      if (ij == ji) {
        const std::size_t line = json_positions ? i + 1 : i + 2;
        const std::size_t col = json_positions ? j / 4 + 1 : j + 1;
        throw ParseError(ij ? "both " + std::to_string(i) + "->" + std::to_string(j) +
                                  " and the reverse arc are present"
                            : "pair {" + std::to_string(i) + "," + std::to_string(j) +
                                  "} has no orientation",
                         line, col);
      }
      if (ij)
        b.set_arc(i, j);
      else
        b.set_arc(j, i);
    }
  return std::move(b).build();
}

}  // namespace detail

inline Tournament parse_text(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("empty input", 1, 1);

  std::size_t n = 0;
  {
    auto head = lines[0];
    const auto first = head.find_first_not_of(" \t");
    const auto last = head.find_last_not_of(" \t");
    if (first == std::string_view::npos) throw ParseError("missing vertex count", 1, 1);
    head = head.substr(first, last - first + 1);
    for (std::size_t c = 0; c < head.size(); ++c) {
      if (head[c] < '0' || head[c] > '9')
        throw ParseError("vertex count must be a positive integer", 1, first + c + 1);
      n = n * 10 + static_cast<std::size_t>(head[c] - '0');
      if (n > 1'000'000) throw ParseError("vertex count too large", 1, first + c + 1);
    }
    if (n == 0) throw ParseError("vertex count must be at least 1", 1, first + 1);
  }
  if (lines.size() != n + 1)
    throw ParseError("expected " + std::to_string(n) + " matrix rows, found " +
                         std::to_string(lines.size() - 1),
                     lines.size() < n + 1 ? lines.size() + 1 : n + 2, 1);

  std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = lines[i + 1];
    if (row.size() != n)
      throw ParseError("row has " + std::to_string(row.size()) + " characters, expected " +
                           std::to_string(n),
                       i + 2, std::min(row.size(), n) + 1);
    for (std::size_t j = 0; j < n; ++j) {
      const char c = row[j];
      if (i == j) {
        if (c != '-') throw ParseError("diagonal entry must be '-'", i + 2, j + 1);
        continue;
      }
      if (c != '0' && c != '1')
        throw ParseError(std::string("unexpected character '") + c + "'", i + 2, j + 1);
      m[i][j] = (c == '1');
    }
  }
  return detail::assemble(n, m, false);
}

inline nlohmann::json to_json(const Tournament& t) {
  static constexpr char kHex[] = "0123456789abcdef";
  const std::size_t n = t.size();
  const std::size_t digits = (n + 3) / 4;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    std::string s(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
      unsigned nib = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t j = 4 * d + b;
        if (j < n && t.arc(i, j)) nib |= 8U >> b;
      }
      s[d] = kHex[nib];
    }
    rows.push_back(std::move(s));
  }
  return {{"n", n}, {"rows", std::move(rows)}};
}

inline Tournament parse_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("expected a JSON object", 1, 1);
  for (const auto& [key, _] : j.items())
    if (key != "n" && key != "rows") throw ParseError("unknown key '" + key + "'", 1, 1);
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0)
    throw ParseError("\"n\" must be a positive integer", 1, 1);
  if (!j.contains("rows") || !j["rows"].is_array()) throw ParseError("\"rows\" must be an array", 1, 1);

  const auto n = j["n"].get<std::size_t>();
  const auto& rows = j["rows"];
  if (rows.size() != n)
    throw ParseError("expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size()),
                     rows.size() + 1, 1);
  const std::size_t digits = (n + 3) / 4;
  std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_string()) throw ParseError("row must be a hex string", i + 1, 1);
    const auto s = rows[i].get<std::string>();
    if (s.size() != digits)
      throw ParseError("row has " + std::to_string(s.size()) + " hex digits, expected " +
                           std::to_string(digits),
                       i + 1, 1);
    for (std::size_t d = 0; d < digits; ++d) {
      const char c = s[d];
      unsigned nib;
      if (c >= '0' && c <= '9')
        nib = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f')
        nib = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F')
        nib = static_cast<unsigned>(c - 'A' + 10);
      else
        throw ParseError(std::string("invalid hex digit '") + c + "'", i + 1, d + 1);
      for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t col = 4 * d + b;
        const bool bit = nib & (8U >> b);
        if (col >= n) {
          if (bit) throw ParseError("padding bits must be zero", i + 1, d + 1);
        } else if (col == i) {
          if (bit) throw ParseError("diagonal bit must be zero", i + 1, d + 1);
        } else {
          m[i][col] = bit;
        }
      }
    }
  }
  return detail::assemble(n, m, true);
}

inline Tournament parse_json_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
  }
  return parse_json(j);
}

/// Dispatches on the first non-blank character: '{' means JSON.
inline Tournament parse_any(std::string_view text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  if (p != std::string_view::npos && text[p] == '{') return parse_json_text(text);
  return parse_text(text);
}

}  // namespace tourncyc
