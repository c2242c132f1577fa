// Copyright 2026 The Authors.
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

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "mmf/errors.hpp"
#include "mmf/matrix.hpp"
#include "mmf/product_space.hpp"

namespace mmf {

// Chain files hold a product space, one stationary law and any number of
// named transition matrices. Two encodings:
//
//   JSON: {"dims": [...], "pi": [...], "matrices": {"name": [[...], ...]}}
//   CSV:  one matrix per file; line 1 "dims=2,2", line 2 "pi,<p_1>,...",
//         then one comma-separated row per state. The matrix is named after
//         the file stem.
//
// Numbers are written with 17 significant digits.

class ChainFileError : public Error {
 public:
  enum class Code { io = 1, malformed, invalid_distribution, negative_entry, row_sum, stationarity };

  ChainFileError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct NamedMatrix {
  std::string name;
  StochasticMatrix matrix;
};

struct ChainFile {
  ProductSpace space;
  Distribution pi;
  std::vector<NamedMatrix> matrices;

  const StochasticMatrix& find(const std::string& name) const {
    for (const auto& m : matrices) {
      if (m.name == name) return m.matrix;
    }
    throw DomainError("chain file has no matrix named '" + name + "'");
  }
};

namespace detail {

inline std::string format_number(double v) { return fmt::format("{:.17g}", v); }

inline ChainFileError malformed(const std::string& what) {
  return {ChainFileError::Code::malformed, what};
}

inline ProductSpace make_space(const std::vector<std::size_t>& dims) {
  try {
    return ProductSpace(dims);
  } catch (const DomainError& e) {
    throw malformed(std::string("bad dims: ") + e.what());
  }
}

inline Distribution make_pi(const ProductSpace& space, std::vector<double> pi) {
  if (pi.size() != space.size()) {
    throw ChainFileError(ChainFileError::Code::invalid_distribution,
                         "pi has " + std::to_string(pi.size()) + " entries, expected " +
                             std::to_string(space.size()));
  }
  try {
    return Distribution(space, std::move(pi));
  } catch (const DomainError& e) {
    throw ChainFileError(ChainFileError::Code::invalid_distribution, e.what());
  }
}

// Checks that raise distinct codes before the matrix type validates again.
inline StochasticMatrix make_matrix(const std::string& name, const ProductSpace& space, const Distribution& pi,
                                    std::vector<double> e) {
  const std::size_t n = space.size();
  if (e.size() != n * n) {
    throw malformed("matrix '" + name + "' has " + std::to_string(e.size()) + " entries, expected " +
                    std::to_string(n * n));
  }
  for (std::size_t x = 0; x < n; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double v = e[x * n + y];
      if (!std::isfinite(v) || v < 0.0) {
        throw ChainFileError(ChainFileError::Code::negative_entry,
                             "matrix '" + name + "' entry (" + std::to_string(x) + "," + std::to_string(y) +
                                 ") is negative or not finite");
      }
      row += v;
    }
    if (std::abs(row - 1.0) > kStochasticTolerance) {
      throw ChainFileError(ChainFileError::Code::row_sum, "matrix '" + name + "' row " + std::to_string(x) +
                                                              " sums to " + format_number(row));
    }
  }
  StochasticMatrix unchecked(space, e);
  const double r = unchecked.stationarity_residual(pi);
  if (r > kStationarityTolerance) {
    throw ChainFileError(ChainFileError::Code::stationarity,
                         "matrix '" + name + "' is not stationary for pi (residual " + format_number(r) + ")");
  }
  return {space, std::move(e), pi};
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChainFileError(ChainFileError::Code::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw malformed("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline ChainFile parse_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw malformed(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("dims") || !j.contains("pi") || !j.contains("matrices")) {
      throw malformed("chain file needs dims, pi and matrices");
    }
    auto space = make_space(j.at("dims").get<std::vector<std::size_t>>());
    auto pi = make_pi(space, j.at("pi").get<std::vector<double>>());
    ChainFile out{space, pi, {}};
    if (!j.at("matrices").is_object()) throw malformed("matrices must be an object of name -> rows");
    for (const auto& [name, rows] : j.at("matrices").items()) {
      std::vector<double> e;
      if (!rows.is_array() || rows.size() != space.size()) {
        throw malformed("matrix '" + name + "' must have " + std::to_string(space.size()) + " rows");
      }
      for (const auto& row : rows) {
        if (!row.is_array() || row.size() != space.size()) {
          throw malformed("matrix '" + name + "' has a row of the wrong length");
        }
        for (const auto& v : row) e.push_back(v.get<double>());
      }
      out.matrices.push_back({name, make_matrix(name, space, pi, std::move(e))});
    }
    if (out.matrices.empty()) throw malformed("chain file contains no matrices");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw malformed(std::string("unexpected JSON structure: ") + e.what());
  }
}

inline ChainFile parse_csv(const std::string& text, const std::string& name) {
  std::vector<std::string_view> lines;
  for (auto l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!l.empty()) lines.push_back(l);
  }
  if (lines.size() < 2 || lines[0].substr(0, 5) != "dims=") throw malformed("CSV chain file must start with dims=");
  std::vector<std::size_t> dims;
  for (auto f : split(lines[0].substr(5), ',')) {
    const double v = parse_double(f);
    if (v < 0 || v != std::floor(v)) throw malformed("dims must be nonnegative integers");
    dims.push_back(static_cast<std::size_t>(v));
  }
  auto space = make_space(dims);
  auto head = split(lines[1], ',');
  if (head.empty() || head[0] != "pi") throw malformed("second CSV line must start with pi");
  std::vector<double> pv;
  for (std::size_t k = 1; k < head.size(); ++k) pv.push_back(parse_double(head[k]));
  auto pi = make_pi(space, std::move(pv));
  if (lines.size() != 2 + space.size()) {
    throw malformed("CSV chain file has " + std::to_string(lines.size() - 2) + " matrix rows, expected " +
                    std::to_string(space.size()));
  }
  std::vector<double> e;
  for (std::size_t r = 2; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != space.size()) throw malformed("CSV row " + std::to_string(r - 2) + " has the wrong length");
    for (auto c : cells) e.push_back(parse_double(c));
  }
  auto m = make_matrix(name, space, pi, std::move(e));
  return {space, pi, {{name, std::move(m)}}};
}

}  // namespace detail

inline ChainFile load_chain_file(const std::filesystem::path& path) {
  const auto text = detail::read_file(path);
  if (path.extension() == ".csv") return detail::parse_csv(text, path.stem().string());
  return detail::parse_json(text);
}

inline std::string chain_to_json(const ProductSpace& space, const Distribution& pi,
                                 const std::vector<NamedMatrix>& matrices) {
  // Hand-written so every number carries 17 significant digits.
  std::string out = "{\n  \"dims\": [";
  for (std::size_t i = 0; i < space.dims().size(); ++i) out += (i ? ", " : "") + std::to_string(space.dims()[i]);
  out += "],\n  \"pi\": [";
  for (std::size_t x = 0; x < pi.size(); ++x) out += (x ? ", " : "") + detail::format_number(pi[x]);
  out += "],\n  \"matrices\": {";
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    const auto& m = matrices[k].matrix;
    out += (k ? ",\n    " : "\n    ") + nlohmann::json(matrices[k].name).dump() + ": [";
    for (std::size_t x = 0; x < m.size(); ++x) {
      out += x ? ",\n      [" : "\n      [";
      for (std::size_t y = 0; y < m.size(); ++y) out += (y ? ", " : "") + detail::format_number(m(x, y));
      out += "]";
    }
    out += "]";
  }
  out += "\n  }\n}\n";
  return out;
}

inline std::string chain_to_csv(const StochasticMatrix& m, const Distribution& pi) {
  std::string out = "dims=";
  const auto dims = m.space().dims();
  for (std::size_t i = 0; i < dims.size(); ++i) out += (i ? "," : "") + std::to_string(dims[i]);
  out += "\npi";
  for (std::size_t x = 0; x < pi.size(); ++x) out += "," + detail::format_number(pi[x]);
  out += "\n";
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) out += (y ? "," : "") + detail::format_number(m(x, y));
    out += "\n";
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ChainFileError(ChainFileError::Code::io, "cannot write " + path.string());
  out << text;
  if (!out) throw ChainFileError(ChainFileError::Code::io, "write failed for " + path.string());
}

inline void save_chain_json(const std::filesystem::path& path, const ProductSpace& space, const Distribution& pi,
                            const std::vector<NamedMatrix>& matrices) {
  write_text(path, chain_to_json(space, pi, matrices));
}

inline void save_chain_csv(const std::filesystem::path& path, const StochasticMatrix& m, const Distribution& pi) {
  write_text(path, chain_to_csv(m, pi));
}

}  // namespace mmf
