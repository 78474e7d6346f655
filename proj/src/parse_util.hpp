#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "gameforms/errors.hpp"

namespace gameforms::detail {

struct Line {
  int number = 0;
  std::string text;  // comment-stripped, trimmed
};

// Splits into trimmed lines, dropping blank lines and '#' comments.
inline std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> out;
  int number = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
    size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = raw.find_last_not_of(" \t\r");
    out.push_back({number, raw.substr(b, e - b + 1)});
  }
  return out;
}

inline std::vector<std::string> tokens_of(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline int parse_int(const std::string& tok, int line) {
  try {
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  }
}

// "key: rest" split; returns false when the prefix does not match.
inline bool strip_prefix(const std::string& s, const std::string& prefix, std::string* rest) {
  if (s.rfind(prefix, 0) != 0) return false;
  *rest = s.substr(prefix.size());
  return true;
}

inline bool valid_label(const std::string& s) {
  if (s.empty() || !isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace gameforms::detail
