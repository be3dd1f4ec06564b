// Copyright 2026 cpdyn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text formats:
//   matrices   : one row per line, entries `re`, `imj`, or `re+imj`
//                 separated by whitespace; '#' starts a comment; a blank line
//                 separates operators in a multi-matrix (Kraus) file.
//   S tables   : two columns (q [Å^-1], S >= 0), '#' comments.
//   numbers out: %.17g, locale-independent, round-trip exact.
// Writes go through a temp file in the target directory plus rename, so a
// crash never leaves a half-written output.

#ifndef CPDYN_IO_HPP
#define CPDYN_IO_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpdyn/matrix.hpp"
#include "cpdyn/optics.hpp"

namespace cpdyn {

/// Accepts `1.5`, `-2e-3`, `2j`, `-0.5j`, `1+2j`, `1.5e-3-2.0e+1j`.
inline Complex parse_complex(const std::string& token) {
  if (token.empty()) throw std::invalid_argument("parse_complex: empty token");
  const bool has_j = token.back() == 'j' || token.back() == 'J';
  const std::string body = has_j ? token.substr(0, token.size() - 1) : token;
  if (body.empty()) throw std::invalid_argument("parse_complex: bare 'j' in '" + token + "'");

  // split at the last '+'/'-' that is not the leading sign and not part of an
  // exponent; if none, the token is a single real or pure-imaginary number
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }

  auto to_double = [&token](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_complex: bad number in '" + token + "'");
    }
    if (used != s.size())
      throw std::invalid_argument("parse_complex: trailing junk in '" + token + "'");
    return v;
  };

  if (!has_j) {
    if (split != std::string::npos)
      throw std::invalid_argument("parse_complex: missing 'j' on imaginary part in '" + token +
                                  "'");
    return Complex(to_double(body), 0.0);
  }
  if (split == std::string::npos) return Complex(0.0, to_double(body));
  return Complex(to_double(body.substr(0, split)), to_double(body.substr(split)));
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_complex(Complex z) {
  std::string out = format_double(z.real());
  if (z.imag() >= 0.0 || std::isnan(z.imag())) out += "+";
  out += format_double(z.imag());
  out += "j";
  return out;
}

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const std::size_t pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline Matrix rows_to_matrix(const std::vector<std::vector<Complex>>& rows,
                             const std::string& path) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  if (r == 0) throw std::invalid_argument(path + ": no matrix rows found");
  const auto c = static_cast<Eigen::Index>(rows.front().size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != c)
      throw std::invalid_argument(path + ": ragged matrix rows");
    for (Eigen::Index j = 0; j < c; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace detail

/// Every matrix in the file, in order; blank (or comment-only) lines separate
/// consecutive matrices.
inline std::vector<Matrix> load_matrix_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  std::vector<Matrix> out;
  std::vector<std::vector<Complex>> rows;
  std::string line;
  auto flush = [&]() {
    if (!rows.empty()) {
      out.push_back(detail::rows_to_matrix(rows, path));
      rows.clear();
    }
  };
  while (std::getline(in, line)) {
    const auto tokens = detail::split_ws(detail::strip_comment(line));
    if (tokens.empty()) {
      flush();
      continue;
    }
    std::vector<Complex> row;
    row.reserve(tokens.size());
    for (const auto& t : tokens) row.push_back(parse_complex(t));
    rows.push_back(std::move(row));
  }
  flush();
  if (out.empty()) throw std::invalid_argument(path + ": no matrix rows found");
  return out;
}

inline Matrix load_matrix(const std::string& path) {
  const auto all = load_matrix_list(path);
  if (all.size() != 1)
    throw std::invalid_argument(path + ": expected a single matrix, found " +
                                std::to_string(all.size()));
  return all.front();
}

inline StructureFunction load_structure_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open structure table: " + path);
  std::vector<double> q, s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = detail::split_ws(detail::strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() != 2)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected two columns (q, S)");
    try {
      q.push_back(std::stod(tokens[0]));
      s.push_back(std::stod(tokens[1]));
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return StructureFunction::tabulated(std::move(q), std::move(s));
}

/// Writes `content` to `path` via a temp file in the same directory + rename.
inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace cpdyn

#endif  // CPDYN_IO_HPP
