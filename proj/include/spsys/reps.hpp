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

// Finite-dimensional representations of a subproduct system: tuples
// T = (T_1, ..., T_d) on C^h annihilating the relations of X.
//
// Word sums are never expanded over all d^n words. The lifted row operators
// T_n : X(n) ⊗ H -> H (see lifted_row_operators) carry them level by level.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spsys/cpmaps.hpp"
#include "spsys/fock.hpp"
#include "spsys/linalg.hpp"
#include "spsys/ncpoly.hpp"
#include "spsys/subproduct.hpp"

namespace spsys {

class RepTuple {
 public:
  explicit RepTuple(std::vector<CMatrix> T) : T_(std::move(T)) {
    if (T_.empty()) throw DimensionError("representation needs at least one matrix");
    h_ = detail::check_tuple(static_cast<int>(T_.size()), T_);
    for (std::size_t i = 0; i < T_.size(); ++i)
      if (!T_[i].allFinite()) throw DomainError("matrix " + std::to_string(i + 1) + " has non-finite entries");
    row_norm_ = opnorm(row());
  }

  int d() const { return static_cast<int>(T_.size()); }
  Index h() const { return h_; }
  double row_norm() const { return row_norm_; }
  std::span<const CMatrix> tuple() const { return T_; }
  const CMatrix& operator[](int i) const { return T_.at(static_cast<std::size_t>(i - 1)); }

  CMatrix row() const {
    CMatrix R(h_, h_ * d());
    for (int i = 0; i < d(); ++i) R.middleCols(i * h_, h_) = T_[static_cast<std::size_t>(i)];
    return R;
  }

  // I - sum T_i T_i^*.
  CMatrix defect() const { return identity(h_) - row() * row().adjoint(); }

  RepTuple scaled(Complex s) const {
    std::vector<CMatrix> out;
    for (const auto& M : T_) out.push_back(s * M);
    return RepTuple(std::move(out));
  }

  // T^α = T_{α_1} ... T_{α_n}.
  CMatrix word(const Letters& w) const {
    CMatrix M = identity(h_);
    for (int a : w) M = M * T_.at(static_cast<std::size_t>(a - 1));
    return M;
  }

 private:
  std::vector<CMatrix> T_;
  Index h_ = 0;
  double row_norm_ = 0.0;
};

inline CMatrix eval_on_tuple(const NCPoly& p, const RepTuple& T) { return eval_on_tuple(p, T.tuple()); }

inline RepTuple shifts_as_rep(const ShiftSet& S) { return RepTuple(S.S); }

struct RepresentationReport {
  std::vector<double> residuals;  // level n = 1..N
  double max_residual = 0.0;
  double row_norm = 0.0;
  std::optional<std::size_t> first_failure;
  bool pass = true;
};

// T is a representation of X through level N when T_n vanishes on
// (E^{⊗n} ⊖ X(n)) ⊗ H. Given the lower levels, only the part of the
// complement inside X(n-1) ⊗ E is new at level n.
inline RepresentationReport is_representation(const SubproductSystem& X, const RepTuple& T,
                                              std::optional<std::size_t> depth = std::nullopt,
                                              double tol = 1e-8) {
  if (T.d() != X.d())
    throw DimensionError("representation has " + std::to_string(T.d()) + " matrices, system has d = " +
                         std::to_string(X.d()));
  const std::size_t N = depth.value_or(X.depth());
  const Index h = T.h();
  RepresentationReport rep;
  rep.row_norm = T.row_norm();
  auto rows = lifted_row_operators(X, T.tuple(), N - (N > 0 ? 1 : 0));
  const CMatrix Trow = T.row();
  for (std::size_t n = 1; n <= N; ++n) {
    const Index prev = X.dim(n - 1);
    double res = 0.0;
    if (prev > 0) {
      Subspace inner(X.right_inclusion(n), 0.0);
      Subspace comp = complement(inner);
      if (comp.dim() > 0) {
        CMatrix wide(h, prev * X.d() * h);
        for (Index m = 0; m < prev; ++m)
          wide.middleCols(m * X.d() * h, X.d() * h) = rows[n - 1].middleCols(m * h, h) * Trow;
        res = opnorm(times_kron_id(wide, comp.frame(), h));
      }
    }
    rep.residuals.push_back(res);
    rep.max_residual = std::max(rep.max_residual, res);
    if (res > tol && !rep.first_failure) rep.first_failure = n;
  }
  rep.pass = !rep.first_failure.has_value();
  return rep;
}

struct PoissonKernel {
  double r = 0.0;
  std::size_t depth = 0;
  Index h = 0;
  std::vector<Index> offsets;  // Fock level offsets (before ⊗ H)
  Index fock_dim = 0;
  CMatrix K;                   // (fock_dim * h) x h
};

// K_r(T) h = sum_n r^n (I ⊗ Δ(rT)^{1/2}) T_n^* h, truncated at level N.
inline PoissonKernel poisson_kernel(const SubproductSystem& X, const RepTuple& T, double r) {
  constexpr double kRowSlack = 1e-12;
  if (!(r > 0.0)) throw DomainError("poisson_kernel: r must be positive");
  if (r > 1.0) throw DomainError("poisson_kernel: r must be at most 1");
  if (T.row_norm() > 1.0 + kRowSlack)
    throw DomainError("poisson_kernel: tuple is not a row contraction (row norm " +
                      std::to_string(T.row_norm()) + ")");
  if (r == 1.0 && T.row_norm() >= 1.0 - kRowSlack)
    throw DomainError("poisson_kernel: r = 1 requires a strict row contraction");
  const std::size_t N = X.depth();
  const Index h = T.h();
  PoissonKernel P;
  P.r = r;
  P.depth = N;
  P.h = h;
  CMatrix delta = identity(h) - r * r * T.row() * T.row().adjoint();
  CMatrix D = psd_sqrt(delta, 1e-10);
  auto rows = lifted_row_operators(X, T.tuple(), N);
  Index acc = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    P.offsets.push_back(acc);
    acc += X.dim(n);
  }
  P.fock_dim = acc;
  P.K = CMatrix::Zero(acc * h, h);
  double rn = 1.0;
  for (std::size_t n = 0; n <= N; ++n) {
    const Index dn = X.dim(n);
    if (dn > 0) {
      CMatrix block = rn * apply_id_kron(D, rows[n].adjoint());
      P.K.middleRows(P.offsets[n] * h, dn * h) = block;
    }
    rn *= r;
  }
  return P;
}

// r^{2(N+1-|α|-|β|)} / (1 - r^2).
inline double poisson_tail_bound(double r, std::size_t N, std::size_t len) {
  if (r >= 1.0) return 0.0;
  const double e = 2.0 * (static_cast<double>(N) + 1.0 - static_cast<double>(len));
  return std::pow(r, e) / (1.0 - r * r);
}

// K^* (S^α S^{β*} ⊗ I_h) K.
inline CMatrix poisson_transform(const PoissonKernel& P, const ShiftSet& S, const Letters& alpha,
                                 const Letters& beta) {
  if (S.S.front().rows() != P.fock_dim) throw DimensionError("poisson_transform: shift size mismatch");
  CMatrix Sa = shift_word(S, alpha), Sb = shift_word(S, beta);
  CMatrix left = apply_kron_id(Sa.adjoint(), P.h, P.K);
  CMatrix right = apply_kron_id(Sb.adjoint(), P.h, P.K);
  return left.adjoint() * right;
}

struct TransformCheck {
  Letters alpha, beta;
  double residual;  // ||K^*(S^α S^{β*} ⊗ I)K - r^{|α|+|β|} T^α T^{β*}||
  double bound;
  bool pass;
};

inline TransformCheck check_poisson_transform(const PoissonKernel& P, const ShiftSet& S, const RepTuple& T,
                                              const Letters& alpha, const Letters& beta) {
  CMatrix lhs = poisson_transform(P, S, alpha, beta);
  const std::size_t len = alpha.size() + beta.size();
  CMatrix rhs = std::pow(P.r, static_cast<double>(len)) * T.word(alpha) * T.word(beta).adjoint();
  TransformCheck c{alpha, beta, opnorm(lhs - rhs), poisson_tail_bound(P.r, P.depth, len) + 1e-10, false};
  c.pass = c.residual <= c.bound;
  return c;
}

struct ModelReport {
  double r = 0.0;
  double scaled_row_norm = 0.0;  // row norm of W = T / r
  double tail_bound = 0.0;       // scaled_row_norm^{N+1}
  std::vector<double> residuals;         // ||(S_i ⊗ I)^* K - K W_i^*||
  std::vector<double> window_residuals;  // same on levels < N
  bool pass = false;
};

// With W = T / r and K = K_1(W): (S_i^* ⊗ I) K = K W_i^* off the top level.
inline ModelReport model_intertwining_check(const SubproductSystem& X, const RepTuple& T, double r) {
  if (!(r > T.row_norm()))
    throw DomainError("model_intertwining_check: r must exceed the row norm " + std::to_string(T.row_norm()));
  RepTuple W = T.scaled(1.0 / r);
  PoissonKernel P = poisson_kernel(X, W, 1.0);
  TruncatedFock F(X);
  ShiftSet S = build_shifts(F);
  const std::size_t N = X.depth();
  const Index h = T.h();
  ModelReport rep;
  rep.r = r;
  rep.scaled_row_norm = W.row_norm();
  rep.tail_bound = std::pow(W.row_norm(), static_cast<double>(N + 1));
  const Index window_rows = F.offset(N) * h;
  bool ok = true;
  for (int i = 1; i <= X.d(); ++i) {
    CMatrix diff = apply_kron_id(S[i].adjoint(), h, P.K) - P.K * W[i].adjoint();
    rep.residuals.push_back(opnorm(diff));
    rep.window_residuals.push_back(opnorm(diff.topRows(window_rows)));
    ok = ok && rep.residuals.back() <= rep.tail_bound + 1e-9 && rep.window_residuals.back() <= 1e-9;
  }
  rep.pass = ok;
  return rep;
}

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct VonNeumannReport {
  double lhs = 0.0;       // ||p(T) q(T)^*||
  double rhs = 0.0;       // truncation N
  double rhs_prev = 0.0;  // truncation N - 1
  double gap = 0.0;
  bool certified = false;  // lhs <= rhs + 1e-8; truncated norms bound the true one from below
  Verdict verdict = Verdict::Fail;
};

// ||p(T) q(T)^*|| <= ||p(S) q(S)^*||. Truncated shift norms increase with N
// toward the Fock-space value.
inline VonNeumannReport vn_inequality_check(const TruncatedFock& F, const ShiftSet& S, const RepTuple& T,
                                            const NCPoly& p, const NCPoly& q) {
  const std::size_t N = F.depth();
  if (N < 3) throw DimensionError("vn_inequality_check: depth must be at least 3");
  if (p.max_length() + q.max_length() > N - 2)
    throw DimensionError("vn_inequality_check: deg p + deg q must be <= N - 2");
  if (T.row_norm() > 1.0 + 1e-12) throw DomainError("vn_inequality_check: tuple is not a row contraction");
  auto memb = is_representation(F.system(), T);
  if (!memb.pass)
    throw DomainError("vn_inequality_check: tuple is not a representation (level " +
                      std::to_string(*memb.first_failure) + ")");
  VonNeumannReport rep;
  rep.lhs = opnorm(eval_on_tuple(p, T) * eval_on_tuple(q, T).adjoint());
  CMatrix M = eval_on_tuple(p, S.tuple()) * eval_on_tuple(q, S.tuple()).adjoint();
  rep.rhs = opnorm(M);
  rep.rhs_prev = opnorm(F.window(M, N - 1));
  rep.gap = std::abs(rep.rhs - rep.rhs_prev);
  rep.certified = rep.lhs <= rep.rhs + 1e-8;
  if (rep.lhs <= rep.rhs + std::max(1e-8, rep.gap))
    rep.verdict = Verdict::Pass;
  else if (rep.gap > 1e-3)
    rep.verdict = Verdict::Inconclusive;
  else
    rep.verdict = Verdict::Fail;
  return rep;
}

struct PieceResult {
  Subspace piece;
  std::size_t iterations = 0;
};

// Maximal X-piece of a representation T of Y, for X ⊆ Y: the largest
// H' with T_n^* H' ⊆ X(n) ⊗ H' for n <= N. Fixed-point iteration from the
// whole space.
inline PieceResult maximal_piece(const SubproductSystem& X, const SubproductSystem& Y, const RepTuple& T,
                                 double tol = 1e-9) {
  if (X.d() != Y.d() || T.d() != Y.d()) throw DimensionError("maximal_piece: alphabet mismatch");
  const std::size_t N = std::min(X.depth(), Y.depth());
  const Index h = T.h();
  // G_n: coordinates of X(n) inside Y(n).
  std::vector<CMatrix> G{CMatrix::Ones(1, 1)};
  G.push_back(Y.first_frame().adjoint() * X.first_frame());
  for (std::size_t n = 2; n <= N; ++n)
    G.push_back(Y.right_inclusion(n).adjoint() * kron(G[n - 1], identity(Y.d())) * X.right_inclusion(n));
  for (std::size_t n = 1; n <= N; ++n) {
    double defect = max_abs(G[n].adjoint() * G[n] - identity(G[n].cols()));
    if (defect > 1e-8) throw DomainError("maximal_piece: X(" + std::to_string(n) + ") is not inside Y(" +
                                         std::to_string(n) + ")");
  }
  auto rows = lifted_row_operators(Y, T.tuple(), N);
  std::vector<CMatrix> out_of_x, adj;
  for (std::size_t n = 1; n <= N; ++n) {
    adj.push_back(rows[n].adjoint());
    CMatrix perp = identity(Y.dim(n)) - G[n] * G[n].adjoint();
    out_of_x.push_back(apply_kron_id(perp, h, adj.back()));
  }
  PieceResult res;
  CMatrix Q = identity(h);
  while (true) {
    ++res.iterations;
    const Index k = Q.cols();
    if (k == 0) break;
    CMatrix Pperp = identity(h) - Q * Q.adjoint();
    Index total_rows = 0;
    for (std::size_t n = 0; n < N; ++n) total_rows += 2 * out_of_x[n].rows();
    CMatrix stacked(total_rows, k);
    Index at = 0;
    for (std::size_t n = 0; n < N; ++n) {
      const Index r = out_of_x[n].rows();
      stacked.middleRows(at, r) = out_of_x[n] * Q;
      at += r;
      stacked.middleRows(at, r) = apply_id_kron(Pperp, adj[n] * Q);
      at += r;
    }
    CMatrix Z = null_space(stacked, tol);
    if (Z.cols() == k) break;
    Q = Q * Z;
  }
  res.piece = Subspace(Q, tol);
  return res;
}

// Compression P_K T_i |_K to a subspace K (given by an orthonormal frame).
inline RepTuple compress(const RepTuple& T, const Subspace& K) {
  std::vector<CMatrix> out;
  for (auto M : T.tuple()) out.push_back(K.frame().adjoint() * M * K.frame());
  return RepTuple(std::move(out));
}

// Smallest subspace containing the given vectors and invariant under every T_i^*.
inline Subspace coinvariant_hull(const RepTuple& T, const CMatrix& vectors, double rel_tol = kDefaultRelTol) {
  Subspace S = span_columns(vectors, rel_tol);
  while (true) {
    CMatrix next(T.h(), S.dim() * (T.d() + 1));
    next.leftCols(S.dim()) = S.frame();
    for (int i = 1; i <= T.d(); ++i) next.middleCols(i * S.dim(), S.dim()) = T[i].adjoint() * S.frame();
    Subspace grown = span_columns(next, rel_tol);
    if (grown.dim() == S.dim()) return S;
    S = grown;
  }
}

// Θ_s(a) = T_s (I_{X(s)} ⊗ a) T_s^*.
inline CMatrix induced_map(const std::vector<CMatrix>& rows, std::size_t s, const CMatrix& a) {
  const CMatrix& R = rows.at(s);
  return R * apply_id_kron(a, R.adjoint());
}

// Kraus form of Θ_s: the h x h blocks of T_s.
inline KrausChannel induced_kraus(const std::vector<CMatrix>& rows, std::size_t s, Index h) {
  const CMatrix& R = rows.at(s);
  std::vector<CMatrix> ks;
  for (Index j = 0; j < R.cols() / h; ++j) ks.push_back(R.middleCols(j * h, h));
  if (ks.empty()) ks.push_back(CMatrix::Zero(h, h));
  return KrausChannel(std::move(ks));
}

struct SemigroupCheck {
  CMatrix lhs;  // Θ_m(Θ_n(a))
  CMatrix rhs;  // Θ_{m+n}(a)
  double residual;
  double choi_min_eigenvalue;  // min over Θ_m, Θ_n, Θ_{m+n}
};

inline SemigroupCheck induced_cp_semigroup(const SubproductSystem& X, const RepTuple& T, const CMatrix& a,
                                           std::size_t m, std::size_t n) {
  if (m + n > X.depth()) throw DimensionError("induced_cp_semigroup: m + n exceeds depth");
  if (a.rows() != T.h() || a.cols() != T.h()) throw DimensionError("induced_cp_semigroup: a has wrong size");
  auto rows = lifted_row_operators(X, T.tuple(), m + n);
  SemigroupCheck c;
  c.lhs = induced_map(rows, m, induced_map(rows, n, a));
  c.rhs = induced_map(rows, m + n, a);
  c.residual = opnorm(c.lhs - c.rhs);
  c.choi_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t s : {m, n, m + n})
    c.choi_min_eigenvalue =
        std::min(c.choi_min_eigenvalue, min_hermitian_eigenvalue(choi_matrix(induced_kraus(rows, s, T.h()))));
  return c;
}

}  // namespace spsys
