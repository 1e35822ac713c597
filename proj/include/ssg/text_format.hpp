#pragma once

// Line-oriented text format for presentations (1-based indices):
//
//   p 3
//   n 5
//   w 1 1 2 2 2
//   pow 1 = 3^1
//   comm 2 1 = 5^1
//   def 3 pow 1
//   def 5 comm 2 1
//
// Trivial relations are omitted. Blank lines and lines starting with '#' are
// ignored by the parser. Towers are blocks separated by "---" lines.

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ssg/error.hpp"
#include "ssg/gfp.hpp"
#include "ssg/pc_presentation.hpp"

namespace ssg {

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& msg)
      : InputError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline void render_word(std::ostream& os, const GroupElement& x) {
  for (int k = 0; k < x.size(); ++k)
    if (x[k] != 0) os << ' ' << (k + 1) << '^' << x[k];
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline int parse_int(const std::string& tok, int line) {
  if (tok.empty() || tok.size() > 9) throw ParseError(line, "expected an integer, got '" + tok + "'");
  for (char ch : tok)
    if (ch < '0' || ch > '9') throw ParseError(line, "expected an integer, got '" + tok + "'");
  return std::stoi(tok);
}

}  // namespace detail

inline std::string render(const PcPresentation& G) {
  std::ostringstream os;
  const int n = G.ngens();
  os << "p " << G.prime() << "\nn " << n << "\nw";
  for (int w : G.weights()) os << ' ' << w;
  os << '\n';
  for (int i = 0; i < n; ++i) {
    if (G.power_rhs(i).is_identity()) continue;
    os << "pow " << (i + 1) << " =";
    detail::render_word(os, G.power_rhs(i));
    os << '\n';
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (G.commutator_rhs(j, i).is_identity()) continue;
      os << "comm " << (j + 1) << ' ' << (i + 1) << " =";
      detail::render_word(os, G.commutator_rhs(j, i));
      os << '\n';
    }
  for (int k = 0; k < n; ++k) {
    const auto& d = G.definition(k);
    if (!d) continue;
    os << "def " << (k + 1);
    if (d->kind == Definition::Kind::Power)
      os << " pow " << (d->j + 1);
    else
      os << " comm " << (d->j + 1) << ' ' << (d->i + 1);
    os << '\n';
  }
  return os.str();
}

// first_line: line number of the first line of text, for error messages.
inline PcPresentation parse_presentation(std::string_view text, int first_line = 1) {
  std::optional<int> p, n;
  std::optional<std::vector<int>> weights;
  PcRelations rel;
  std::vector<char> seen_pow, seen_def;
  std::vector<std::vector<char>> seen_comm;
  int line_no = first_line - 1;
  int last_line = first_line;

  auto index = [&](const std::string& tok, int line) {
    int i = detail::parse_int(tok, line);
    if (i < 1 || i > *n) throw ParseError(line, "generator index " + tok + " out of range");
    return i - 1;
  };
  auto word = [&](const std::vector<std::string>& toks, std::size_t from, int line) {
    std::vector<int> e(static_cast<std::size_t>(*n), 0);
    for (std::size_t t = from; t < toks.size(); ++t) {
      auto caret = toks[t].find('^');
      if (caret == std::string::npos) throw ParseError(line, "expected <index>^<exponent>, got '" + toks[t] + "'");
      int g = index(toks[t].substr(0, caret), line);
      int x = detail::parse_int(toks[t].substr(caret + 1), line);
      if (x < 1 || x >= *p) throw ParseError(line, "exponent " + std::to_string(x) + " outside [1, p)");
      if (e[g] != 0) throw ParseError(line, "generator " + std::to_string(g + 1) + " repeated");
      e[g] = x;
    }
    return GroupElement(std::move(e));
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    last_line = line_no;
    const auto toks = detail::split_ws(raw);
    if (toks.empty() || toks[0][0] == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::string& key = toks[0];
    if (key == "p") {
      if (p) throw ParseError(line_no, "duplicate 'p' line");
      if (toks.size() != 2) throw ParseError(line_no, "expected 'p <prime>'");
      p = detail::parse_int(toks[1], line_no);
      if (*p < 3 || *p % 2 == 0 || !gfp::is_prime(*p)) throw ParseError(line_no, "p must be an odd prime");
    } else if (key == "n") {
      if (!p) throw ParseError(line_no, "'n' before 'p'");
      if (n) throw ParseError(line_no, "duplicate 'n' line");
      if (toks.size() != 2) throw ParseError(line_no, "expected 'n <count>'");
      n = detail::parse_int(toks[1], line_no);
      if (*n > 4096) throw ParseError(line_no, "too many generators");
    } else if (key == "w") {
      if (!n) throw ParseError(line_no, "'w' before 'n'");
      if (weights) throw ParseError(line_no, "duplicate 'w' line");
      if (static_cast<int>(toks.size()) != *n + 1)
        throw ParseError(line_no, "expected " + std::to_string(*n) + " weights");
      std::vector<int> w;
      for (std::size_t t = 1; t < toks.size(); ++t) w.push_back(detail::parse_int(toks[t], line_no));
      weights = w;
      rel = PcRelations::trivial(*p, w);
      seen_pow.assign(static_cast<std::size_t>(*n), 0);
      seen_def.assign(static_cast<std::size_t>(*n), 0);
      seen_comm.assign(static_cast<std::size_t>(*n), std::vector<char>(static_cast<std::size_t>(*n), 0));
    } else if (key == "pow" || key == "comm" || key == "def") {
      if (!weights) throw ParseError(line_no, "'" + key + "' before the header lines p, n, w");
      if (key == "pow") {
        if (toks.size() < 3 || toks[2] != "=") throw ParseError(line_no, "expected 'pow <i> = ...'");
        int i = index(toks[1], line_no);
        if (seen_pow[i]) throw ParseError(line_no, "duplicate power relation");
        seen_pow[i] = 1;
        rel.powers[i] = word(toks, 3, line_no);
      } else if (key == "comm") {
        if (toks.size() < 4 || toks[3] != "=") throw ParseError(line_no, "expected 'comm <j> <i> = ...'");
        int j = index(toks[1], line_no);
        int i = index(toks[2], line_no);
        if (j <= i) throw ParseError(line_no, "commutator indices must satisfy j > i");
        if (seen_comm[j][i]) throw ParseError(line_no, "duplicate commutator relation");
        seen_comm[j][i] = 1;
        rel.commutators[j][i] = word(toks, 4, line_no);
      } else {
        if (toks.size() < 3) throw ParseError(line_no, "expected 'def <k> pow <i>' or 'def <k> comm <j> <i>'");
        int k = index(toks[1], line_no);
        if (seen_def[k]) throw ParseError(line_no, "duplicate definition");
        seen_def[k] = 1;
        if (toks[2] == "pow" && toks.size() == 4) {
          rel.definitions[k] = Definition::power(index(toks[3], line_no));
        } else if (toks[2] == "comm" && toks.size() == 5) {
          int j = index(toks[3], line_no);
          int i = index(toks[4], line_no);
          if (j <= i) throw ParseError(line_no, "commutator indices must satisfy j > i");
          rel.definitions[k] = Definition::commutator(j, i);
        } else {
          throw ParseError(line_no, "expected 'def <k> pow <i>' or 'def <k> comm <j> <i>'");
        }
      }
    } else {
      throw ParseError(line_no, "unknown keyword '" + key + "'");
    }
    if (end == text.size()) break;
  }
  if (!p || !n || !weights) throw ParseError(last_line, "missing header line (need p, n and w)");
  try {
    return PcPresentation(std::move(rel));
  } catch (const Error& e) {
    throw ParseError(last_line, std::string("invalid presentation: ") + e.what());
  }
}

inline constexpr const char* kTowerSeparator = "---";

inline std::string render_tower(const std::vector<PcPresentation>& levels) {
  std::string out;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (k) out += std::string(kTowerSeparator) + "\n";
    out += render(levels[k]);
  }
  return out;
}

inline std::vector<PcPresentation> parse_tower(std::string_view text) {
  std::vector<PcPresentation> out;
  std::size_t pos = 0;
  int line_no = 1;
  int block_start = 1;
  std::size_t block_pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line == kTowerSeparator) {
      out.push_back(parse_presentation(text.substr(block_pos, pos - block_pos), block_start));
      block_pos = end + 1;
      block_start = line_no + 1;
    }
    pos = end + 1;
    ++line_no;
    if (end == text.size()) break;
  }
  out.push_back(parse_presentation(text.substr(std::min(block_pos, text.size())), block_start));
  return out;
}

}  // namespace ssg
