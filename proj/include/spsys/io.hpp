// Copyright 2026 The spsys Authors
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

// JSON and CSV formats.
//
//   matrix      {"rows": r, "cols": c, "data": [x, ...]}   row-major, x = re or [re, im];
//               "data" may also be a list of r rows.
//   polynomial  [{"coeff": [re, im], "word": [i, j, ...]}, ...]
//   system      {"d": d, "depth": N, "kind": k, ...} with k one of
//                 full | symmetric                    (no extra keys)
//                 ideal      "generators": [polynomial, ...]
//                 subshift   "forbidden": [[i, j, ...], ...]
//                 qmatrix    "q": matrix
//                 quadratic  "A": matrix
//                 fibers     "fibers": [matrix, ...]  columns spanning X(1), X(2), ...
//   rep         {"d": d, "h": h, "matrices": [matrix, ...]}
//   channel     {"kraus": [matrix, ...]}
//   stochastic  matrix, or CSV with one row of reals per line

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spsys/cpmaps.hpp"
#include "spsys/error.hpp"
#include "spsys/fock.hpp"
#include "spsys/linalg.hpp"
#include "spsys/ncpoly.hpp"
#include "spsys/reps.hpp"
#include "spsys/subproduct.hpp"

namespace spsys::io {

using json = nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": " + e.what());
  }
}

inline json load_json(const std::filesystem::path& path) { return parse_json(read_file(path), path.string()); }

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) throw InputError(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(ctx + ": missing key \"" + key + "\"");
  return *it;
}

inline long long require_int(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number_integer()) throw InputError(ctx + "." + key + ": expected an integer");
  return v.get<long long>();
}

inline Complex to_complex(const json& x, const std::string& ctx) {
  if (x.is_number()) return {x.get<double>(), 0.0};
  if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number())
    return {x[0].get<double>(), x[1].get<double>()};
  throw InputError(ctx + ": expected a number or [re, im]");
}

inline json from_complex(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace detail

inline CMatrix matrix_from_json(const json& j, const std::string& ctx = "matrix") {
  const long long r = detail::require_int(j, "rows", ctx);
  const long long c = detail::require_int(j, "cols", ctx);
  if (r < 0 || c < 0) throw InputError(ctx + ": negative shape");
  const json& data = detail::require(j, "data", ctx);
  if (!data.is_array()) throw InputError(ctx + ".data: expected an array");
  CMatrix M(r, c);
  const std::size_t rs = static_cast<std::size_t>(r), cs = static_cast<std::size_t>(c);
  const bool nested = rs > 0 && data.size() == rs && data[0].is_array() && data[0].size() == cs &&
                      !(data.size() == rs * cs && data[0].size() == 2 && data[0][0].is_number());
  if (nested) {
    for (long long i = 0; i < r; ++i) {
      const json& row = data[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(c))
        throw InputError(ctx + ".data[" + std::to_string(i) + "]: expected " + std::to_string(c) + " entries");
      for (long long k = 0; k < c; ++k)
        M(i, k) = detail::to_complex(row[static_cast<std::size_t>(k)],
                                     ctx + ".data[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  } else {
    if (data.size() != static_cast<std::size_t>(r * c))
      throw InputError(ctx + ".data: expected " + std::to_string(r * c) + " entries, found " +
                       std::to_string(data.size()));
    for (long long i = 0; i < r; ++i)
      for (long long k = 0; k < c; ++k) {
        const std::size_t at = static_cast<std::size_t>(i * c + k);
        M(i, k) = detail::to_complex(data[at], ctx + ".data[" + std::to_string(at) + "]");
      }
  }
  if (!M.allFinite()) throw InputError(ctx + ": non-finite entry");
  return M;
}

inline json matrix_to_json(const CMatrix& M) {
  json data = json::array();
  for (Index i = 0; i < M.rows(); ++i)
    for (Index k = 0; k < M.cols(); ++k) data.push_back(detail::from_complex(M(i, k)));
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

inline Letters word_from_json(const json& j, int d, const std::string& ctx) {
  if (!j.is_array()) throw InputError(ctx + ": expected a list of letters");
  Letters w;
  for (const auto& a : j) {
    if (!a.is_number_integer()) throw InputError(ctx + ": letters must be integers");
    w.push_back(a.get<int>());
  }
  try {
    check_letters(w, d);
  } catch (const Error& e) {
    throw InputError(ctx + ": " + e.what());
  }
  return w;
}

inline NCPoly poly_from_json(const json& j, int d, const std::string& ctx = "polynomial") {
  if (!j.is_array()) throw InputError(ctx + ": expected a list of terms");
  NCPoly p(d);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string tc = ctx + "[" + std::to_string(t) + "]";
    Complex c = detail::to_complex(detail::require(j[t], "coeff", tc), tc + ".coeff");
    Letters w = word_from_json(detail::require(j[t], "word", tc), d, tc + ".word");
    p = p + NCPoly::monomial(d, w, c);
  }
  return p;
}

inline json poly_to_json(const NCPoly& p) {
  json out = json::array();
  for (const auto& [w, c] : p.terms()) out.push_back({{"coeff", detail::from_complex(c)}, {"word", w}});
  return out;
}

struct SystemSpecFile {
  int d = 0;
  std::optional<std::size_t> depth;
  std::string kind;
  json body;
};

inline SystemSpecFile system_spec_from_json(const json& j, const std::string& ctx = "spec") {
  SystemSpecFile s;
  const long long d = detail::require_int(j, "d", ctx);
  if (d < 1) throw InputError(ctx + ".d: must be >= 1");
  s.d = static_cast<int>(d);
  if (j.contains("depth")) {
    const long long N = detail::require_int(j, "depth", ctx);
    if (N < 1) throw InputError(ctx + ".depth: must be >= 1");
    s.depth = static_cast<std::size_t>(N);
  }
  const json& kind = detail::require(j, "kind", ctx);
  if (!kind.is_string()) throw InputError(ctx + ".kind: expected a string");
  s.kind = kind.get<std::string>();
  s.body = j;
  return s;
}

inline SubproductSystem build_system(const SystemSpecFile& s, std::size_t N, double tol = 1e-9,
                                     const std::string& ctx = "spec") {
  const int d = s.d;
  try {
    if (s.kind == "full") return full_system(d, N);
    if (s.kind == "symmetric") return from_ideal(symmetric_ideal(d), N, tol);
    if (s.kind == "ideal") {
      const json& gens = detail::require(s.body, "generators", ctx);
      if (!gens.is_array()) throw InputError(ctx + ".generators: expected a list");
      IdealGens I(d);
      for (std::size_t k = 0; k < gens.size(); ++k)
        I.add(poly_from_json(gens[k], d, ctx + ".generators[" + std::to_string(k) + "]"));
      return from_ideal(I, N, tol);
    }
    if (s.kind == "subshift") {
      const json& fw = detail::require(s.body, "forbidden", ctx);
      if (!fw.is_array()) throw InputError(ctx + ".forbidden: expected a list");
      std::vector<Letters> words;
      for (std::size_t k = 0; k < fw.size(); ++k)
        words.push_back(word_from_json(fw[k], d, ctx + ".forbidden[" + std::to_string(k) + "]"));
      return from_subshift(SubshiftSpec(d, words), N);
    }
    if (s.kind == "qmatrix") {
      CMatrix q = matrix_from_json(detail::require(s.body, "q", ctx), ctx + ".q");
      if (q.rows() != d || q.cols() != d) throw InputError(ctx + ".q: expected a d x d matrix");
      return from_qmatrix(q, N, tol);
    }
    if (s.kind == "quadratic") {
      CMatrix A = matrix_from_json(detail::require(s.body, "A", ctx), ctx + ".A");
      if (A.rows() != d || A.cols() != d) throw InputError(ctx + ".A: expected a d x d matrix");
      return from_quadratic(A, N, tol);
    }
    if (s.kind == "fibers") {
      const json& fb = detail::require(s.body, "fibers", ctx);
      if (!fb.is_array() || fb.empty()) throw InputError(ctx + ".fibers: expected a nonempty list");
      std::vector<Subspace> pres;
      for (std::size_t k = 0; k < fb.size() && k < N; ++k)
        pres.push_back(span_columns(matrix_from_json(fb[k], ctx + ".fibers[" + std::to_string(k) + "]"), tol));
      return maximal_with_fibers(d, pres, N, tol);
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(ctx + ": " + e.what());
  }
  throw InputError(ctx + ".kind: unknown kind \"" + s.kind + "\"");
}

inline RepTuple rep_from_json(const json& j, const std::string& ctx = "rep") {
  const long long d = detail::require_int(j, "d", ctx);
  const long long h = detail::require_int(j, "h", ctx);
  const json& ms = detail::require(j, "matrices", ctx);
  if (!ms.is_array() || ms.size() != static_cast<std::size_t>(d))
    throw InputError(ctx + ".matrices: expected " + std::to_string(d) + " matrices");
  std::vector<CMatrix> T;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    CMatrix M = matrix_from_json(ms[k], ctx + ".matrices[" + std::to_string(k) + "]");
    if (M.rows() != h || M.cols() != h)
      throw InputError(ctx + ".matrices[" + std::to_string(k) + "]: expected " + std::to_string(h) + "x" +
                       std::to_string(h));
    T.push_back(std::move(M));
  }
  return RepTuple(std::move(T));
}

inline json rep_to_json(const RepTuple& T) {
  json ms = json::array();
  for (const auto& M : T.tuple()) ms.push_back(matrix_to_json(M));
  return {{"d", T.d()}, {"h", T.h()}, {"matrices", std::move(ms)}};
}

inline KrausChannel channel_from_json(const json& j, const std::string& ctx = "channel") {
  const json& ks = detail::require(j, "kraus", ctx);
  if (!ks.is_array() || ks.empty()) throw InputError(ctx + ".kraus: expected a nonempty list");
  std::vector<CMatrix> K;
  for (std::size_t k = 0; k < ks.size(); ++k)
    K.push_back(matrix_from_json(ks[k], ctx + ".kraus[" + std::to_string(k) + "]"));
  try {
    return KrausChannel(std::move(K));
  } catch (const Error& e) {
    throw InputError(ctx + ": " + e.what());
  }
}

inline Eigen::MatrixXd real_matrix_from_csv(const std::string& text, const std::string& ctx = "csv") {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw InputError(ctx + ": line " + std::to_string(lineno) + ": cannot parse \"" + cell + "\"");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(ctx + ": line " + std::to_string(lineno) + ": expected " +
                       std::to_string(rows.front().size()) + " entries");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(ctx + ": no rows");
  Eigen::MatrixXd M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) M(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
  return M;
}

// CSV when the extension is .csv, matrix JSON otherwise.
inline StochasticMatrix load_stochastic(const std::filesystem::path& path) {
  Eigen::MatrixXd P;
  if (path.extension() == ".csv") {
    P = real_matrix_from_csv(read_file(path), path.string());
  } else {
    CMatrix M = matrix_from_json(load_json(path), path.string());
    if (M.imag().cwiseAbs().maxCoeff() > 0.0) throw InputError(path.string() + ": stochastic matrix must be real");
    P = M.real();
  }
  try {
    return StochasticMatrix(P);
  } catch (const Error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// Writes S_1..S_d as S1.json, ..., Sd.json in `dir`.
inline std::vector<std::filesystem::path> export_shifts(const ShiftSet& S, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (int i = 1; i <= S.d(); ++i) {
    auto p = dir / ("S" + std::to_string(i) + ".json");
    std::ofstream f(p);
    if (!f) throw InputError("cannot write " + p.string());
    f << matrix_to_json(S[i]).dump() << "\n";
    out.push_back(p);
  }
  return out;
}

}  // namespace spsys::io
