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

// Truncated Fock space ⊕_{n<=N} X(n) and the shift tuple acting on it.
//
// Coordinates of level n are taken in the orthonormal basis of X(n) held by
// the system. S_i maps level n to level n+1 by v -> P_{X(n+1)}(e_i ⊗ v) for
// n < N and kills level N. Levels <= N are co-invariant for the adjoints, so
// the truncated tuple is the compression of the untruncated one, and every
// identity checked below is exact on the stated window of levels.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spsys/linalg.hpp"
#include "spsys/ncpoly.hpp"
#include "spsys/subproduct.hpp"

namespace spsys {

class TruncatedFock {
 public:
  explicit TruncatedFock(SubproductSystem X) : system_(std::move(X)) {
    Index acc = 0;
    for (std::size_t n = 0; n <= system_.depth(); ++n) {
      offsets_.push_back(acc);
      acc += system_.dim(n);
    }
    total_ = acc;
  }

  const SubproductSystem& system() const { return system_; }
  std::size_t depth() const { return system_.depth(); }
  int d() const { return system_.d(); }
  Index total_dim() const { return total_; }
  Index offset(std::size_t n) const { return offsets_.at(n); }
  Index level_dim(std::size_t n) const { return system_.dim(n); }
  const std::vector<Index>& offsets() const { return offsets_; }
  static constexpr Index vacuum_index = 0;

  // Number of coordinates in levels 0..n.
  Index dim_through(std::size_t n) const {
    return n >= depth() ? total_ : offsets_[n + 1];
  }

  CVector vacuum() const {
    CVector v = CVector::Zero(total_);
    v(vacuum_index) = 1.0;
    return v;
  }

  // Embeds X(n) coordinates into the Fock space.
  CVector embed(std::size_t n, const CVector& coords) const {
    if (coords.size() != level_dim(n)) throw DimensionError("embed: coordinate length mismatch");
    CVector v = CVector::Zero(total_);
    v.segment(offset(n), level_dim(n)) = coords;
    return v;
  }

  // Projection onto the levels in [lo, hi].
  CMatrix level_projector(std::size_t lo, std::size_t hi) const {
    CMatrix P = CMatrix::Zero(total_, total_);
    for (std::size_t n = lo; n <= std::min(hi, depth()); ++n)
      P.block(offset(n), offset(n), level_dim(n), level_dim(n)).setIdentity();
    return P;
  }

  CMatrix vacuum_projector() const { return level_projector(0, 0); }

  // The top-left block acting on levels 0..n.
  CMatrix window(const CMatrix& M, std::size_t n) const {
    const Index w = dim_through(n);
    return M.topLeftCorner(w, w);
  }

 private:
  SubproductSystem system_;
  std::vector<Index> offsets_;
  Index total_ = 0;
};

inline TruncatedFock build_fock(SubproductSystem X) { return TruncatedFock(std::move(X)); }

struct ShiftSet {
  std::vector<CMatrix> S;  // S_1..S_d, each total_dim x total_dim

  std::span<const CMatrix> tuple() const { return S; }
  const CMatrix& operator[](int i) const { return S.at(static_cast<std::size_t>(i - 1)); }
  int d() const { return static_cast<int>(S.size()); }

  // The row [S_1 ... S_d].
  CMatrix row() const {
    const Index t = S.front().rows();
    CMatrix R(t, t * d());
    for (int i = 0; i < d(); ++i) R.middleCols(i * t, t) = S[static_cast<std::size_t>(i)];
    return R;
  }
};

inline ShiftSet build_shifts(const TruncatedFock& F) {
  const auto& X = F.system();
  ShiftSet out;
  for (int i = 1; i <= X.d(); ++i) {
    CMatrix S = CMatrix::Zero(F.total_dim(), F.total_dim());
    for (std::size_t n = 0; n < F.depth(); ++n) {
      if (F.level_dim(n) == 0 || F.level_dim(n + 1) == 0) continue;
      S.block(F.offset(n + 1), F.offset(n), F.level_dim(n + 1), F.level_dim(n)) =
          X.left_block(n + 1, i).adjoint();
    }
    out.S.push_back(std::move(S));
  }
  return out;
}

// S^α = S_{α_1} ... S_{α_n}.
inline CMatrix shift_word(const ShiftSet& S, const Letters& w) {
  CMatrix M = identity(S.S.front().rows());
  for (int a : w) M = M * S[a];
  return M;
}

// Largest entry outside the (n+1, n) blocks.
inline double off_block_magnitude(const TruncatedFock& F, const CMatrix& S) {
  CMatrix rest = S;
  for (std::size_t n = 0; n < F.depth(); ++n)
    rest.block(F.offset(n + 1), F.offset(n), F.level_dim(n + 1), F.level_dim(n)).setZero();
  return max_abs(rest);
}

// S(ξ) = sum_α <e_α, ξ> S^α for ξ ∈ X(n) given in X(n) coordinates, formed
// as the lifted row operator of the shift tuple applied to ξ ⊗ ·.
inline CMatrix shift_of_vector(const TruncatedFock& F, const ShiftSet& S, std::size_t n,
                               const CVector& xi) {
  if (xi.size() != F.level_dim(n)) throw DimensionError("shift_of_vector: ξ not in X(n) coordinates");
  const Index t = F.total_dim();
  if (n == 0) return xi(0) * identity(t);
  auto rows = lifted_row_operators(F.system(), S.tuple(), n);
  const CMatrix& Tn = rows[n];
  CMatrix out = CMatrix::Zero(t, t);
  for (Index j = 0; j < xi.size(); ++j) out += xi(j) * Tn.middleCols(j * t, t);
  return out;
}

// Ambient vector in C^(d^n) to X(n) coordinates (orthogonal projection).
inline CVector fiber_coordinates(const SubproductSystem& X, std::size_t n, const CVector& v) {
  if (v.size() != ipow(X.d(), n)) throw DimensionError("fiber_coordinates: length mismatch");
  std::vector<Letters> words;
  std::vector<Complex> vals;
  for (Index k = 0; k < v.size(); ++k)
    if (v(k) != Complex(0.0)) {
      words.push_back(word_from_index(k, n, X.d()));
      vals.push_back(v(k));
    }
  CVector c = CVector::Zero(X.dim(n));
  if (words.empty()) return c;
  CMatrix R = X.frame_rows(words);
  for (std::size_t k = 0; k < words.size(); ++k)
    c += std::conj(vals[k]) * R.row(static_cast<Index>(k)).transpose();
  return c.conjugate();
}

// sum_{|α|=k} S^α S^{α*}, by iterating A -> sum_i S_i A S_i^*.
inline CMatrix word_range_sum(const ShiftSet& S, std::size_t k) {
  CMatrix A = identity(S.S.front().rows());
  for (std::size_t r = 0; r < k; ++r) {
    CMatrix next = CMatrix::Zero(A.rows(), A.cols());
    for (const auto& Si : S.S) next += Si * A * Si.adjoint();
    A = std::move(next);
  }
  return A;
}

// I - sum_{|α|=k} S^α S^{α*}.
inline CMatrix defect_projection(const TruncatedFock& F, const ShiftSet& S, std::size_t k) {
  if (k > F.depth()) throw DimensionError("defect_projection: k exceeds depth");
  return identity(F.total_dim()) - word_range_sum(S, k);
}

struct DefectReport {
  std::size_t k;
  std::size_t window_hi;  // levels 0..window_hi checked
  double residual;        // ||defect - P_{levels < k}|| on the window
  bool pass;
};

inline DefectReport check_defect(const TruncatedFock& F, const ShiftSet& S, std::size_t k,
                                 double tol = 1e-10) {
  CMatrix D = defect_projection(F, S, k);
  DefectReport rep{k, F.depth() - std::min(k, F.depth()), 0.0, true};
  if (k == F.depth()) {
    rep.residual = 0.0;  // vacuous: the whole window is truncation
    return rep;
  }
  CMatrix target = k == 0 ? CMatrix::Zero(F.total_dim(), F.total_dim()) : F.level_projector(0, k - 1);
  rep.residual = opnorm(F.window(D - target, rep.window_hi));
  rep.pass = rep.residual <= tol;
  return rep;
}

struct AnnihilationReport {
  bool in_ideal;              // ||P_{X(n)} p(e)|| <= tol
  double projection_norm;     // ||P_{X(n)} p(e)||
  double residual;            // ||p(S) Ω||
  double operator_norm;       // ||p(S)|| on levels <= N - n
  bool operator_vanishes;     // operator_norm <= tol
  bool agree;                 // |projection_norm - residual| <= 1e-10
};

inline AnnihilationReport annihilation_check(const TruncatedFock& F, const ShiftSet& S, const NCPoly& p,
                                             double tol = 1e-8) {
  auto n = p.degree();
  if (!n) throw DomainError("annihilation_check: polynomial must be homogeneous and nonzero");
  if (*n > F.depth()) throw DimensionError("annihilation_check: degree exceeds depth");
  const auto& X = F.system();
  AnnihilationReport rep{};
  if (*n == 0) {
    rep.projection_norm = std::abs(p.terms().begin()->second);
  } else {
    rep.projection_norm = fiber_coordinates(X, *n, eval_on_basis(p)).norm();
  }
  CVector pv = apply_on_vector(p, S.tuple(), F.vacuum());
  rep.residual = pv.norm();
  CMatrix pS = eval_on_tuple(p, S.tuple());
  const Index w = F.dim_through(F.depth() - *n);
  rep.operator_norm = opnorm(pS.leftCols(w));
  rep.in_ideal = rep.projection_norm <= tol;
  rep.operator_vanishes = rep.operator_norm <= tol;
  rep.agree = std::abs(rep.projection_norm - rep.residual) <= 1e-10;
  return rep;
}

// E_i^k: legal words α of length k with iα legal.
inline std::vector<Letters> extension_set(const SubshiftSpec& spec, int i, std::size_t k) {
  std::vector<Letters> out;
  for (const auto& a : spec.legal_words(k)) {
    Letters w{i};
    w.insert(w.end(), a.begin(), a.end());
    if (spec.is_legal(w)) out.push_back(a);
  }
  return out;
}

struct SubshiftRelationReport {
  std::size_t step = 1;
  std::size_t window_hi = 0;           // levels 0..N-k-1
  double max_cross = 0.0;              // max_{i != j} ||S_i^* S_j||
  std::vector<Index> defect_rank;      // rank of D_i on the window
  std::vector<double> defect_leak;     // ||D_i|| outside levels < k, on the window
  std::vector<double> defect_vacuum_distance;  // ||D_i - P_Ω|| on the window
  double cuntz_residual = 0.0;         // ||I - sum S_i S_i^* - P_Ω|| on levels <= N-1
  bool pass = false;
};

inline SubshiftRelationReport subshift_relations(const TruncatedFock& F, const ShiftSet& S,
                                                 const SubshiftSpec& spec, double tol = 1e-10) {
  const std::size_t k = spec.step(), N = F.depth();
  if (N < k + 2)
    throw DimensionError("subshift_relations: depth " + std::to_string(N) + " < step + 2 = " +
                         std::to_string(k + 2));
  if (spec.d() != F.d()) throw DimensionError("subshift_relations: alphabet mismatch");
  SubshiftRelationReport rep;
  rep.step = k;
  rep.window_hi = N - k - 1;
  for (int i = 1; i <= F.d(); ++i)
    for (int j = 1; j <= F.d(); ++j)
      if (i != j) rep.max_cross = std::max(rep.max_cross, opnorm(S[i].adjoint() * S[j]));

  const Index w = F.dim_through(rep.window_hi);
  const Index low = F.dim_through(k - 1);
  CMatrix vac = F.window(F.vacuum_projector(), rep.window_hi);
  bool ok = rep.max_cross <= 1e-12;
  for (int i = 1; i <= F.d(); ++i) {
    CMatrix D = S[i].adjoint() * S[i];
    for (const auto& a : extension_set(spec, i, k)) {
      CMatrix Sa = shift_word(S, a);
      D -= Sa * Sa.adjoint();
    }
    CMatrix Dw = D.topLeftCorner(w, w);
    rep.defect_rank.push_back(numerical_rank(Dw));
    CMatrix leak = Dw;
    leak.topLeftCorner(low, low).setZero();
    rep.defect_leak.push_back(opnorm(leak));
    rep.defect_vacuum_distance.push_back(opnorm(Dw - vac));
    ok = ok && rep.defect_leak.back() <= tol;
  }
  CMatrix cuntz = identity(F.total_dim()) - word_range_sum(S, 1) - F.vacuum_projector();
  rep.cuntz_residual = opnorm(F.window(cuntz, N - 1));
  rep.pass = ok && rep.cuntz_residual <= tol;
  return rep;
}

}  // namespace spsys
