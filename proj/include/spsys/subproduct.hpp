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

// Standard subproduct systems over N truncated at a fixed depth.
//
// A system is a chain of fibers X(0) = C, X(1) ⊆ C^d, X(n) ⊆ C^(d^n) with
// X(m+n) ⊆ X(m) ⊗ X(n). Fibers are not stored as frames in the ambient
// space C^(d^n), which grows exponentially. Each level instead keeps two
// isometries expressing an orthonormal basis of X(n) in coordinates of
//
//   left:  E ⊗ X(n-1)   (rows indexed a * dim X(n-1) + m)
//   right: X(n-1) ⊗ E   (rows indexed m * d + b)
//
// Everything downstream (shifts, kernels, representation checks) is built
// from these blocks. Ambient frames are materialized on request through the
// recursion F_n = (F_{n-1} ⊗ I_d) * right_n.
//
// Fibers past the first level are generated by
//
//   X(n) = (X(n-1) ⊗ X(1)) ∩ (X(1) ⊗ X(n-1)) ∩ G_n^⊥,
//
// computed inside E ⊗ X(n-2) ⊗ E, where G_n holds the degree-n relations.
// Without relations this is the maximal system with the given lower fibers:
// the remaining intersections over i + j = n follow from these two because
// (A ⊗ B) ∩ (C ⊗ D) = (A ∩ C) ⊗ (B ∩ D).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spsys/error.hpp"
#include "spsys/linalg.hpp"
#include "spsys/ncpoly.hpp"

namespace spsys {

inline constexpr std::size_t kDefaultBudgetBytes = std::size_t{2} << 30;

enum class SourceKind { Ideal, Subshift, QMatrix, QuadMatrix, Fibers, FullSystem };

inline std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::Ideal: return "ideal";
    case SourceKind::Subshift: return "subshift";
    case SourceKind::QMatrix: return "qmatrix";
    case SourceKind::QuadMatrix: return "quadratic";
    case SourceKind::Fibers: return "fibers";
    case SourceKind::FullSystem: return "full";
  }
  return "unknown";
}

struct Provenance {
  SourceKind kind = SourceKind::FullSystem;
  std::string detail;
  // First level whose fiber is zero, if any.
  std::optional<std::size_t> zero_from;
  // Subshift fibers were taken as "no forbidden subword" words.
  bool subword_legality = false;
};

// Forbidden-word description of a subshift.
class SubshiftSpec {
 public:
  SubshiftSpec(int d, std::vector<Letters> forbidden) : d_(d) {
    if (d < 1) throw DimensionError("alphabet size must be >= 1");
    for (const auto& w : forbidden) {
      check_letters(w, d);
      if (w.size() < 2)
        throw DomainError("forbidden word " + word_to_string(w) + " must have length >= 2");
    }
    std::sort(forbidden.begin(), forbidden.end(),
              [](const Letters& a, const Letters& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
    // Drop words containing a shorter forbidden word.
    for (const auto& w : forbidden) {
      bool redundant = false;
      for (const auto& v : forbidden_)
        if (contains_subword(w, v)) redundant = true;
      if (!redundant) forbidden_.push_back(w);
    }
  }

  int d() const { return d_; }
  const std::vector<Letters>& forbidden() const { return forbidden_; }

  // Step k = (longest forbidden length) - 1, at least 1.
  std::size_t step() const {
    std::size_t m = 2;
    for (const auto& w : forbidden_) m = std::max(m, w.size());
    return m - 1;
  }

  bool is_legal(const Letters& w) const {
    for (const auto& v : forbidden_)
      if (contains_subword(w, v)) return false;
    return true;
  }

  std::vector<Letters> legal_words(std::size_t n) const {
    std::vector<Letters> out;
    for (auto& w : all_words(d_, n))
      if (is_legal(w)) out.push_back(std::move(w));
    return out;
  }

  static bool contains_subword(const Letters& w, const Letters& v) {
    if (v.size() > w.size()) return false;
    return std::search(w.begin(), w.end(), v.begin(), v.end()) != w.end();
  }

 private:
  int d_;
  std::vector<Letters> forbidden_;
};

class SubproductSystem {
 public:
  struct Level {
    CMatrix left;   // (d * dim(n-1)) x dim(n)
    CMatrix right;  // (dim(n-1) * d) x dim(n)
    double tol_used = 0.0;
  };

  int d() const { return d_; }
  std::size_t depth() const { return levels_.size() - 1; }
  const Provenance& provenance() const { return provenance_; }

  Index dim(std::size_t n) const { return level(n).left.cols(); }

  std::vector<Index> dims() const {
    std::vector<Index> out;
    for (std::size_t n = 0; n < levels_.size(); ++n) out.push_back(dim(n));
    return out;
  }

  const Level& level(std::size_t n) const {
    if (n >= levels_.size())
      throw DimensionError("level " + std::to_string(n) + " beyond depth " + std::to_string(depth()));
    return levels_[n];
  }

  const CMatrix& left_inclusion(std::size_t n) const { return level(n).left; }
  const CMatrix& right_inclusion(std::size_t n) const { return level(n).right; }

  // Frame of X(1) in C^d.
  const CMatrix& first_frame() const { return level(1).left; }

  // Bytes needed for the ambient frame of X(n).
  std::size_t frame_bytes(std::size_t n) const {
    return static_cast<std::size_t>(ipow(d_, n)) * static_cast<std::size_t>(dim(n)) * sizeof(Complex);
  }

  // X(n) as a subspace of C^(d^n).
  Subspace fiber(std::size_t n, std::size_t budget_bytes = kDefaultBudgetBytes) const {
    if (frame_bytes(n) > budget_bytes)
      throw BudgetError("frame of X(" + std::to_string(n) + ") needs about " +
                        std::to_string(frame_bytes(n) >> 20) + " MiB, budget is " +
                        std::to_string(budget_bytes >> 20) + " MiB");
    CMatrix F = CMatrix::Ones(1, 1);
    for (std::size_t k = 1; k <= n; ++k) F = extend_frame(F, k);
    return Subspace(std::move(F), level(n).tol_used);
  }

  // Rows of the ambient frame of X(|w|) at the given words: row k is
  // <e_{w_k}, f_j> over the basis f_j, computed without the full frame.
  CMatrix frame_rows(const std::vector<Letters>& words) const {
    if (words.empty()) return CMatrix(0, 0);
    const std::size_t n = words.front().size();
    CMatrix out(static_cast<Index>(words.size()), dim(n));
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (words[k].size() != n) throw DimensionError("frame_rows: words of mixed length");
      check_letters(words[k], d_);
      Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Ones(1);
      for (std::size_t j = 0; j < n; ++j) row = row * right_block(j + 1, words[k][j]);
      out.row(static_cast<Index>(k)) = row;
    }
    return out;
  }

  // Rows b, b + d, b + 2d, ... of right_n: the map X(n) -> X(n-1) picking
  // out the component ending in letter b (1-based).
  CMatrix right_block(std::size_t n, int b) const {
    const CMatrix& R = level(n).right;
    const Index prev = dim(n - 1);
    CMatrix out(prev, R.cols());
    for (Index m = 0; m < prev; ++m) out.row(m) = R.row(m * d_ + (b - 1));
    return out;
  }

  // Rows (a-1) * dim(n-1) ... of left_n: the component starting with letter a.
  CMatrix left_block(std::size_t n, int a) const {
    const Index prev = dim(n - 1);
    return level(n).left.middleRows((a - 1) * prev, prev);
  }

  // Building blocks for constructors.
  static SubproductSystem from_levels(int d, std::vector<Level> levels, Provenance prov) {
    SubproductSystem X;
    X.d_ = d;
    X.levels_ = std::move(levels);
    X.provenance_ = std::move(prov);
    for (std::size_t n = 0; n < X.levels_.size(); ++n)
      if (X.dim(n) == 0) {
        X.provenance_.zero_from = n;
        break;
      }
    return X;
  }

 private:
  CMatrix extend_frame(const CMatrix& F, std::size_t n) const {
    const Index rows = F.rows() * d_;
    CMatrix out(rows, dim(n));
    for (int b = 1; b <= d_; ++b) {
      CMatrix block = F * right_block(n, b);
      for (Index w = 0; w < F.rows(); ++w) out.row(w * d_ + (b - 1)) = block.row(w);
    }
    return out;
  }

  int d_ = 1;
  std::vector<Level> levels_;
  Provenance provenance_;
};

namespace detail {

inline SubproductSystem::Level level_zero() {
  SubproductSystem::Level L;
  L.left = CMatrix::Ones(1, 1);
  L.right = CMatrix::Ones(1, 1);
  return L;
}

inline SubproductSystem::Level level_one(const Subspace& X1) {
  SubproductSystem::Level L;
  L.left = X1.frame();
  L.right = X1.frame();
  L.tol_used = X1.tol_used();
  return L;
}

// Relation rows for level n in coordinates of V = E ⊗ X(n-2) ⊗ E: for each
// relation g the row ((I ⊗ F_{n-2} ⊗ I)^* g)^*, normalized.
inline CMatrix relation_rows(const SubproductSystem& partial, std::size_t n,
                             const std::vector<const NCPoly*>& rels) {
  const int d = partial.d();
  const Index mid = partial.dim(n - 2);
  CMatrix rows = CMatrix::Zero(static_cast<Index>(rels.size()), d * mid * d);
  for (std::size_t r = 0; r < rels.size(); ++r) {
    std::vector<Letters> middles;
    std::vector<std::pair<Index, Complex>> slots;  // (a * d + b, coefficient)
    double cn = 0.0;
    for (const auto& [w, c] : rels[r]->terms()) {
      middles.emplace_back(w.begin() + 1, w.end() - 1);
      slots.emplace_back((w.front() - 1) * d + (w.back() - 1), c);
      cn += std::norm(c);
    }
    CMatrix F = n >= 3 ? partial.frame_rows(middles) : CMatrix::Ones(static_cast<Index>(middles.size()), 1);
    for (std::size_t t = 0; t < slots.size(); ++t) {
      const Index a = slots[t].first / d, b = slots[t].first % d;
      for (Index m = 0; m < mid; ++m)
        rows(static_cast<Index>(r), (a * mid + m) * d + b) += slots[t].second * std::conj(F(static_cast<Index>(t), m));
    }
    // Scale by the coefficient norm, not the projected norm: a relation
    // already implied by lower degrees projects to noise.
    if (cn > 0.0) rows.row(static_cast<Index>(r)) /= std::sqrt(cn);
  }
  return rows.conjugate();
}

// Next level from X(n-1), X(n-2) and X(1) with optional relation rows
// (already expressed in V coordinates, each row acting as x -> row * x).
inline SubproductSystem::Level intersect_level(const SubproductSystem& partial, std::size_t n,
                                               const CMatrix& relation_rows_v, double rel_tol) {
  const int d = partial.d();
  const CMatrix& F1 = partial.first_frame();
  const CMatrix& leftPrev = partial.left_inclusion(n - 1);
  const CMatrix& rightPrev = partial.right_inclusion(n - 1);
  const Index prev = partial.dim(n - 1);

  SubproductSystem::Level L;
  L.tol_used = rel_tol;
  if (prev == 0 || F1.cols() == 0) {
    L.left = CMatrix(d * prev, 0);
    L.right = CMatrix(prev * d, 0);
    return L;
  }
  CMatrix A = kron(leftPrev, F1);   // X(n-1) ⊗ X(1) inside V
  CMatrix B = kron(F1, rightPrev);  // X(1) ⊗ X(n-1) inside V
  CMatrix residual = A - B * (B.adjoint() * A);
  CMatrix stacked(residual.rows() + relation_rows_v.rows(), A.cols());
  stacked << residual, (relation_rows_v.rows() ? CMatrix(relation_rows_v * A) : CMatrix(0, A.cols()));
  CMatrix Y = null_space(stacked, rel_tol);
  CMatrix x = A * Y;
  L.right = kron(identity(prev), F1) * Y;
  L.left = kron(identity(d), rightPrev).adjoint() * x;
  return L;
}

}  // namespace detail

// Maximal system with prescribed fibers X(1..k) (ambient subspaces of
// C^(d^n)), continued to depth N.
inline SubproductSystem maximal_with_fibers(int d, const std::vector<Subspace>& prescribed,
                                            std::size_t N, double tol = 1e-9,
                                            SourceKind kind = SourceKind::Fibers,
                                            std::string detail = {}) {
  if (prescribed.empty()) throw DimensionError("maximal_with_fibers: need at least X(1)");
  for (std::size_t n = 1; n <= prescribed.size(); ++n)
    if (prescribed[n - 1].ambient_dim() != ipow(d, n))
      throw DimensionError("prescribed X(" + std::to_string(n) + ") has ambient dimension " +
                           std::to_string(prescribed[n - 1].ambient_dim()) + ", expected " +
                           std::to_string(ipow(d, n)));
  auto fib = [&](std::size_t n) -> Subspace {
    return n == 0 ? Subspace::full(1) : prescribed[n - 1];
  };
  const std::size_t k = prescribed.size();
  for (std::size_t n = 2; n <= k; ++n)
    for (std::size_t i = 1; i < n; ++i) {
      const Subspace Xi = fib(i);
      const Subspace Xj = fib(n - i);
      Subspace prod(kron(Xi.frame(), Xj.frame()), 0.0);
      double res = containment_residual(prod, fib(n));
      if (res > tol)
        throw DomainError("prescribed fibers violate X(" + std::to_string(n) + ") ⊆ X(" +
                          std::to_string(i) + ") ⊗ X(" + std::to_string(n - i) + "): (i, j, n) = (" +
                          std::to_string(i) + ", " + std::to_string(n - i) + ", " +
                          std::to_string(n) + "), residual " + std::to_string(res));
    }

  std::vector<SubproductSystem::Level> levels{detail::level_zero(), detail::level_one(fib(1))};
  for (std::size_t n = 2; n <= std::min(k, N); ++n) {
    const CMatrix Fn = fib(n).frame();
    const CMatrix Fp = fib(n - 1).frame();
    SubproductSystem::Level L;
    L.left = kron(identity(d), Fp).adjoint() * Fn;
    L.right = kron(Fp, identity(d)).adjoint() * Fn;
    L.tol_used = fib(n).tol_used();
    levels.push_back(std::move(L));
  }
  Provenance prov{kind, std::move(detail), std::nullopt, false};
  if (N == 0) levels.resize(1);
  SubproductSystem X = SubproductSystem::from_levels(d, levels, prov);
  for (std::size_t n = levels.size(); n <= N; ++n) {
    levels.push_back(detail::intersect_level(X, n, CMatrix(0, 0), tol));
    X = SubproductSystem::from_levels(d, levels, prov);
  }
  return X;
}

// X_I(n) = E^{⊗n} ⊖ {p(e) : p ∈ I^{(n)}}.
inline SubproductSystem from_ideal(const IdealGens& I, std::size_t N, double tol = 1e-9) {
  const int d = I.d();
  std::vector<CVector> deg1;
  for (const NCPoly* g : I.of_degree(1)) deg1.push_back(eval_on_basis(*g));
  Subspace X1 = complement(span(deg1, d, tol));
  Provenance prov{SourceKind::Ideal, std::to_string(I.generators().size()) + " generators",
                  std::nullopt, false};
  std::vector<SubproductSystem::Level> levels{detail::level_zero()};
  if (N >= 1) levels.push_back(detail::level_one(X1));
  SubproductSystem X = SubproductSystem::from_levels(d, levels, prov);
  for (std::size_t n = 2; n <= N; ++n) {
    CMatrix rows = detail::relation_rows(X, n, I.of_degree(n));
    levels.push_back(detail::intersect_level(X, n, rows, tol));
    X = SubproductSystem::from_levels(d, levels, prov);
  }
  return X;
}

// Coordinate fibers spanned by the legal words.
inline SubproductSystem from_subshift(const SubshiftSpec& S, std::size_t N) {
  const int d = S.d();
  std::vector<SubproductSystem::Level> levels{detail::level_zero()};
  std::vector<Letters> prev{Letters{}};
  auto position = [](const std::vector<Letters>& list, const Letters& w) -> Index {
    auto it = std::lower_bound(list.begin(), list.end(), w);
    return static_cast<Index>(it - list.begin());
  };
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<Letters> cur = S.legal_words(n);
    const Index pd = static_cast<Index>(prev.size()), cd = static_cast<Index>(cur.size());
    SubproductSystem::Level L;
    L.left = CMatrix::Zero(d * pd, cd);
    L.right = CMatrix::Zero(pd * d, cd);
    for (Index j = 0; j < cd; ++j) {
      const Letters& w = cur[static_cast<std::size_t>(j)];
      Letters head(w.begin(), w.end() - 1), tail(w.begin() + 1, w.end());
      L.right(position(prev, head) * d + (w.back() - 1), j) = 1.0;
      L.left((w.front() - 1) * pd + position(prev, tail), j) = 1.0;
    }
    levels.push_back(std::move(L));
    prev = std::move(cur);
  }
  std::string detail = "forbidden:";
  for (const auto& w : S.forbidden()) detail += " " + word_to_string(w);
  return SubproductSystem::from_levels(d, std::move(levels),
                                       Provenance{SourceKind::Subshift, detail, std::nullopt, true});
}

// Full product system, X(n) = E^{⊗n}.
inline SubproductSystem full_system(int d, std::size_t N) {
  auto X = maximal_with_fibers(d, {Subspace::full(d)}, N, 1e-9, SourceKind::FullSystem, "full");
  return X;
}

// Ideal generated by x_i x_j - x_j x_i.
inline IdealGens symmetric_ideal(int d) {
  IdealGens I(d);
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j)
      I.add(NCPoly::monomial(d, {i, j}) - NCPoly::monomial(d, {j, i}));
  return I;
}

// Admissibility: q_ij != 0 and q_ij q_ji = 1 off the diagonal. Returns the
// first violating pair (1-based) if any.
inline std::optional<std::pair<int, int>> admissibility_violation(const CMatrix& q, double tol = 1e-12) {
  if (q.rows() != q.cols()) throw DimensionError("q must be square");
  for (Index i = 0; i < q.rows(); ++i)
    for (Index j = 0; j < q.cols(); ++j) {
      if (i == j) continue;
      if (std::abs(q(i, j)) == 0.0 || std::abs(q(i, j) * q(j, i) - 1.0) > tol)
        return std::make_pair(static_cast<int>(i + 1), static_cast<int>(j + 1));
    }
  return std::nullopt;
}

inline void require_admissible(const CMatrix& q) {
  if (auto bad = admissibility_violation(q))
    throw DomainError("q is not admissible at (i, j) = (" + std::to_string(bad->first) + ", " +
                      std::to_string(bad->second) + "): need q_ij = 1/q_ji != 0");
}

// Ideal generated by x_i x_j - q_ij x_j x_i, i < j.
inline IdealGens q_commuting_ideal(const CMatrix& q) {
  require_admissible(q);
  const int d = static_cast<int>(q.rows());
  IdealGens I(d);
  for (int i = 1; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j)
      I.add(NCPoly::monomial(d, {i, j}) - q(i - 1, j - 1) * NCPoly::monomial(d, {j, i}));
  return I;
}

// Maximal system with X(1) = E and X(2) = E ⊗ E ⊖ span{e_ij - q_ij e_ji}.
inline SubproductSystem from_qmatrix(const CMatrix& q, std::size_t N, double tol = 1e-9) {
  require_admissible(q);
  const int d = static_cast<int>(q.rows());
  std::vector<CVector> rel;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      CVector v = CVector::Zero(d * d);
      v(i * d + j) += 1.0;
      v(j * d + i) -= q(i, j);
      rel.push_back(v);
    }
  std::vector<Subspace> pres{Subspace::full(d)};
  if (N >= 2) pres.push_back(complement(span(rel, d * d, tol)));
  return maximal_with_fibers(d, pres, N, tol, SourceKind::QMatrix, "q-commuting");
}

// Maximal system with X(2) = E ⊗ E ⊖ span{sum a_ij e_i ⊗ e_j}.
inline SubproductSystem from_quadratic(const CMatrix& A, std::size_t N, double tol = 1e-9) {
  if (A.rows() != A.cols()) throw DimensionError("quadratic relation matrix must be square");
  const int d = static_cast<int>(A.rows());
  CVector v(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(i * d + j) = A(i, j);
  std::vector<Subspace> pres{Subspace::full(d)};
  if (N >= 2) pres.push_back(complement(span({v}, d * d, tol)));
  return maximal_with_fibers(d, pres, N, tol, SourceKind::QuadMatrix, "quadratic");
}

// (I^X)^{(n)} as a subspace: the complement of X(n).
inline Subspace recover_ideal(const SubproductSystem& X, std::size_t n,
                              std::size_t budget_bytes = kDefaultBudgetBytes) {
  return complement(X.fiber(n, budget_bytes));
}

// Generators of I^X through degree N: an orthonormal basis of each
// (I^X)^{(n)}, written as homogeneous polynomials.
inline IdealGens recovered_generators(const SubproductSystem& X,
                                      std::size_t budget_bytes = kDefaultBudgetBytes) {
  const int d = X.d();
  IdealGens I(d);
  for (std::size_t n = 1; n <= X.depth(); ++n) {
    Subspace J = recover_ideal(X, n, budget_bytes);
    for (Index c = 0; c < J.dim(); ++c) {
      NCPoly p(d);
      for (Index r = 0; r < J.ambient_dim(); ++r)
        if (std::abs(J.frame()(r, c)) > 1e-15) p.add_term(word_from_index(r, n, d), J.frame()(r, c));
      if (!p.is_zero()) I.add(std::move(p));
    }
  }
  return I;
}

// Row operators of a tuple lifted to the fibers: entry n is
// T_n : X(n) ⊗ H -> H, T_n(e_α ⊗ h) = T_{α_1} ... T_{α_n} h, an
// h x (dim X(n) * h) matrix, for n = 0..N. Built level by level as
// T_n = T_{n-1} (I ⊗ [T_1 ... T_d]) (right_n ⊗ I_h).
inline std::vector<CMatrix> lifted_row_operators(const SubproductSystem& X,
                                                 std::span<const CMatrix> T, std::size_t N) {
  const Index h = detail::check_tuple(X.d(), T);
  if (N > X.depth())
    throw DimensionError("lifted_row_operators: level " + std::to_string(N) + " beyond depth " +
                         std::to_string(X.depth()));
  CMatrix row(h, X.d() * h);
  for (int i = 0; i < X.d(); ++i) row.middleCols(i * h, h) = T[static_cast<std::size_t>(i)];
  std::vector<CMatrix> out{identity(h)};
  for (std::size_t n = 1; n <= N; ++n) {
    const Index prev = X.dim(n - 1);
    CMatrix step(h, X.dim(n) * h);
    if (X.dim(n) > 0) {
      // T_{n-1} (I_prev ⊗ row): h x (prev * d * h)
      CMatrix wide(h, prev * X.d() * h);
      for (Index m = 0; m < prev; ++m)
        wide.middleCols(m * X.d() * h, X.d() * h) = out.back().middleCols(m * h, h) * row;
      step = times_kron_id(wide, X.right_inclusion(n), h);
    }
    out.push_back(std::move(step));
  }
  return out;
}

struct AxiomResidual {
  std::size_t m, n;
  double residual;
};

struct AxiomReport {
  std::vector<AxiomResidual> entries;
  double max_residual = 0.0;
  bool pass = true;
};

// ||(I - P_{X(m)} ⊗ P_{X(n)}) F_{X(m+n)}|| for all m, n >= 1, m + n <= N.
inline AxiomReport verify_axioms(const SubproductSystem& X, double tol = 1e-9,
                                 std::size_t budget_bytes = kDefaultBudgetBytes) {
  AxiomReport rep;
  const std::size_t N = X.depth();
  std::vector<Subspace> F;
  for (std::size_t n = 0; n <= N; ++n) F.push_back(X.fiber(n, budget_bytes));
  const Index d = X.d();
  for (std::size_t total = 2; total <= N; ++total)
    for (std::size_t m = 1; m < total; ++m) {
      const std::size_t n = total - m;
      const CMatrix& Fm = F[m].frame();
      const CMatrix& Fn = F[n].frame();
      const CMatrix& Ft = F[total].frame();
      const Index dm = ipow(d, m), dn = ipow(d, n);
      double worst = 0.0;
      if (Ft.cols() > 0) {
        CMatrix R(Ft.rows(), Ft.cols());
        for (Index c = 0; c < Ft.cols(); ++c) {
          // Column c reshaped so that (A ⊗ B) v corresponds to B Mt A^t.
          Eigen::Map<const CMatrix> Mt(Ft.col(c).data(), dn, dm);
          CMatrix proj = Fn * (Fn.adjoint() * Mt * Fm.conjugate()) * Fm.transpose();
          CMatrix diff = Mt - proj;
          R.col(c) = Eigen::Map<const CVector>(diff.data(), diff.size());
        }
        worst = opnorm(R);
      }
      rep.entries.push_back({m, n, worst});
      rep.max_residual = std::max(rep.max_residual, worst);
    }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

struct UnitReport {
  std::vector<double> residuals;  // index n: ||v^{⊗n} - p_n v^{⊗n}||, n = 1..N
  bool is_unit = true;
  bool unital = false;
  std::optional<std::size_t> first_failure;
};

// Checks p_n v^{⊗n} = v^{⊗n} for n <= N, i.e. (v^{⊗n}) is a unit.
inline UnitReport verify_unit(const SubproductSystem& X, const CVector& v, double tol = 1e-9,
                              std::size_t budget_bytes = kDefaultBudgetBytes) {
  if (v.size() != X.d()) throw DimensionError("unit vector must lie in C^d");
  UnitReport rep;
  CVector power = CVector::Ones(1);
  for (std::size_t n = 1; n <= X.depth(); ++n) {
    power = kron(power, v);
    Subspace F = X.fiber(n, budget_bytes);
    double res = (power - project(F, power)).norm();
    rep.residuals.push_back(res);
    if (res > tol * std::max(1.0, power.norm()) && !rep.first_failure) rep.first_failure = n;
  }
  rep.is_unit = !rep.first_failure.has_value();
  rep.unital = rep.is_unit && std::abs(v.norm() - 1.0) <= tol;
  return rep;
}

}  // namespace spsys
