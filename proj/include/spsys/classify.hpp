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

// Isomorphism tests for two classified families:
//   * q-commuting systems, equivalent iff r = U_σ q U_σ^{-1} for a permutation σ;
//   * d = 2 quadratic systems X_A, equivalent iff B = λ U^t A U with U unitary.
// The quadratic test has an inconclusive outcome for pairs that pass every
// invariant screen but defeat the bounded search.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spsys/error.hpp"
#include "spsys/linalg.hpp"
#include "spsys/subproduct.hpp"

namespace spsys {

struct QEquivalence {
  bool equivalent = false;
  std::optional<std::vector<int>> sigma;  // 1-based, r_{σ(i)σ(j)} = q_ij
  double residual = 0.0;                  // best max-entry mismatch over S_d
};

namespace detail {

inline void require_classified_q(const CMatrix& q, const char* name) {
  require_admissible(q);
  for (Index i = 0; i < q.rows(); ++i)
    for (Index j = 0; j < q.cols(); ++j)
      if (i != j && std::abs(q(i, j) - Complex(1.0)) <= 1e-12)
        throw InputError(std::string(name) + ": entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                         ") equals 1, outside classified family");
}

}  // namespace detail

inline QEquivalence q_equivalent(const CMatrix& q, const CMatrix& r, double tol = 1e-10) {
  if (q.rows() != r.rows()) throw DimensionError("q_equivalent: matrices of different sizes");
  if (q.rows() > 10) throw DomainError("q_equivalent: exhaustive search limited to d <= 10");
  detail::require_classified_q(q, "q");
  detail::require_classified_q(r, "r");
  const int d = static_cast<int>(q.rows());
  std::vector<int> p(static_cast<std::size_t>(d));
  std::iota(p.begin(), p.end(), 0);
  QEquivalence out;
  out.residual = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < d && worst <= out.residual; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) worst = std::max(worst, std::abs(r(p[i], p[j]) - q(i, j)));
    if (worst < out.residual) {
      out.residual = worst;
      if (worst <= tol) {
        std::vector<int> s;
        for (int v : p) s.push_back(v + 1);
        out.equivalent = true;
        out.sigma = std::move(s);
        return out;
      }
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

enum class QuadVerdict { Yes, No, Inconclusive };

inline std::string to_string(QuadVerdict v) {
  switch (v) {
    case QuadVerdict::Yes: return "yes";
    case QuadVerdict::No: return "no";
    case QuadVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct QuadInvariants {
  Index rank = 0, rank_sym = 0, rank_antisym = 0;
  double sigma_ratio = 0.0;  // σ_2 / σ_1, 0 for A = 0
};

inline QuadInvariants quad_invariants(const CMatrix& A) {
  QuadInvariants inv;
  const double scale = opnorm(A);
  auto rk = [scale](const CMatrix& M) -> Index {
    if (scale == 0.0) return 0;
    Eigen::VectorXd s = singular_values(M);
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) > 1e-9 * scale) ++r;
    return r;
  };
  inv.rank = rk(A);
  inv.rank_sym = rk(0.5 * (A + A.transpose()));
  inv.rank_antisym = rk(0.5 * (A - A.transpose()));
  if (scale > 0.0) {
    Eigen::VectorXd s = singular_values(A);
    inv.sigma_ratio = s(1) / s(0);
  }
  return inv;
}

struct QuadResult {
  QuadVerdict verdict = QuadVerdict::Inconclusive;
  std::string stage;  // which step decided
  std::optional<Complex> lambda;
  std::optional<CMatrix> U;
  double residual = 0.0;  // ||B - λ U^t A U|| for a witness
  QuadInvariants inv_a, inv_b;
  std::optional<double> canonical_q_a, canonical_q_b;
  int starts = 0, iterations = 0;  // search budget actually spent
};

struct QuadSearchOptions {
  int starts = 64;
  int iterations = 200;
  unsigned seed = 20260;
  double accept = 1e-8;  // relative to max(1, ||B||)
};

inline double congruence_residual(const CMatrix& A, const CMatrix& B, Complex lambda, const CMatrix& U) {
  return opnorm(B - lambda * U.transpose() * A * U);
}

struct CanonicalRankOne {
  double q = 0.0;
  Complex lambda;  // λ U^t A U = [[1, q], [-q, 0]]
  CMatrix U;
};

// Reduction of A with r(A^s) = 1 to A_q = [[1, q], [-q, 0]], q >= 0.
// A^s = w w^t; with v = w / |w| the unitary U_0 = [[v̄_1, v_2], [v̄_2, -v_1]]
// sends A^s to |w|^2 E_11, and a diagonal phase fixes the sign of q.
inline CanonicalRankOne canonical_rank_one(const CMatrix& A) {
  const CMatrix As = 0.5 * (A + A.transpose());
  const Complex a = 0.5 * (A(0, 1) - A(1, 0));
  Index j = std::abs(As(0, 0)) >= std::abs(As(1, 1)) ? 0 : 1;
  if (As(j, j) == Complex(0.0)) throw DomainError("canonical_rank_one: symmetric part has zero diagonal");
  CVector w = As.col(j) / std::sqrt(As(j, j));
  const double mu = w.squaredNorm();
  CVector v = w / std::sqrt(mu);
  CMatrix U0(2, 2);
  U0 << std::conj(v(0)), v(1), std::conj(v(1)), -v(0);
  Complex phase = 1.0;
  if (std::abs(a) > 0.0) phase = -std::conj(a) / std::abs(a);
  CMatrix D = CMatrix::Identity(2, 2);
  D(1, 1) = phase;
  CanonicalRankOne out;
  out.U = U0 * D;
  out.lambda = 1.0 / mu;
  out.q = std::abs(a) / mu;
  return out;
}

namespace detail {

inline CMatrix su2(const Eigen::Vector4d& x) {
  Eigen::Vector4d y = x / x.norm();
  Complex alpha(y(0), y(3)), beta(y(2), y(1));
  CMatrix U(2, 2);
  U << alpha, -std::conj(beta), beta, std::conj(alpha);
  return U;
}

// Residual of the best λ for a fixed U, as a real 8-vector.
inline Eigen::VectorXd quad_residual(const CMatrix& A, const CMatrix& B, const Eigen::Vector4d& x, Complex* lambda) {
  CMatrix M = su2(x).transpose() * A * su2(x);
  const double mm = M.squaredNorm();
  Complex l = mm > 0.0 ? (M.adjoint() * B).trace() / mm : Complex(0.0);
  if (lambda) *lambda = l;
  CMatrix R = B - l * M;
  Eigen::VectorXd r(8);
  for (Index k = 0; k < 4; ++k) {
    r(2 * k) = R(k / 2, k % 2).real();
    r(2 * k + 1) = R(k / 2, k % 2).imag();
  }
  return r;
}

}  // namespace detail

// Levenberg-Marquardt over SU(2) with least-squares λ, multi-start.
inline QuadResult quad_search(const CMatrix& A, const CMatrix& B, const QuadSearchOptions& opt, QuadResult out) {
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const double target = opt.accept * std::max(1.0, opnorm(B));
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector4d best_x = Eigen::Vector4d::UnitX();
  for (int s = 0; s < opt.starts; ++s) {
    ++out.starts;
    Eigen::Vector4d x(g(rng), g(rng), g(rng), g(rng));
    x /= x.norm();
    double mu = 1e-3;
    Eigen::VectorXd r = detail::quad_residual(A, B, x, nullptr);
    for (int it = 0; it < opt.iterations; ++it) {
      ++out.iterations;
      Eigen::MatrixXd J(8, 4);
      for (int k = 0; k < 4; ++k) {
        Eigen::Vector4d dx = Eigen::Vector4d::Zero();
        dx(k) = 1e-7;
        J.col(k) = (detail::quad_residual(A, B, x + dx, nullptr) - detail::quad_residual(A, B, x - dx, nullptr)) / 2e-7;
      }
      Eigen::Matrix4d H = J.transpose() * J;
      Eigen::Vector4d gr = J.transpose() * r;
      Eigen::Matrix4d Hd = H;
      Hd.diagonal().array() += mu * (1.0 + H.diagonal().array());
      Eigen::Vector4d step = Hd.ldlt().solve(-gr);
      Eigen::Vector4d xn = x + step;
      xn /= xn.norm();
      Eigen::VectorXd rn = detail::quad_residual(A, B, xn, nullptr);
      if (rn.norm() < r.norm()) {
        x = xn;
        r = rn;
        mu = std::max(mu / 3.0, 1e-12);
      } else {
        mu *= 4.0;
      }
      if (r.norm() <= 0.1 * target || mu > 1e12) break;
    }
    if (r.norm() < best) {
      best = r.norm();
      best_x = x;
    }
    if (best <= 0.1 * target) break;
  }
  Complex lambda;
  detail::quad_residual(A, B, best_x, &lambda);
  CMatrix U = detail::su2(best_x);
  double res = congruence_residual(A, B, lambda, U);
  out.stage = "search";
  if (res <= target && lambda != Complex(0.0)) {
    out.verdict = QuadVerdict::Yes;
    out.lambda = lambda;
    out.U = U;
    out.residual = res;
  } else {
    out.verdict = QuadVerdict::Inconclusive;
    out.residual = res;
  }
  return out;
}

// Decides whether X_A and X_B are isomorphic, i.e. B = λ U^t A U with λ != 0.
inline QuadResult quad_equivalent(const CMatrix& A, const CMatrix& B, const QuadSearchOptions& opt = {}) {
  if (A.rows() != 2 || A.cols() != 2 || B.rows() != 2 || B.cols() != 2)
    throw DimensionError("quad_equivalent: A and B must be 2x2");
  if (!A.allFinite() || !B.allFinite()) throw DomainError("quad_equivalent: non-finite entries");
  QuadResult out;
  out.inv_a = quad_invariants(A);
  out.inv_b = quad_invariants(B);
  const auto& ia = out.inv_a;
  const auto& ib = out.inv_b;
  const double target = opt.accept * std::max(1.0, opnorm(B));
  auto no = [&out](std::string why) {
    out.verdict = QuadVerdict::No;
    out.stage = std::move(why);
    return out;
  };
  auto witness = [&](Complex lambda, const CMatrix& U, std::string stage) -> std::optional<QuadResult> {
    double res = congruence_residual(A, B, lambda, U);
    if (res > target) return std::nullopt;
    out.verdict = QuadVerdict::Yes;
    out.stage = std::move(stage);
    out.lambda = lambda;
    out.U = U;
    out.residual = res;
    return out;
  };

  if (ia.rank != ib.rank) return no("screen: rank");
  if (ia.rank_sym != ib.rank_sym) return no("screen: rank of symmetric part");
  if (ia.rank_antisym != ib.rank_antisym) return no("screen: rank of antisymmetric part");
  if (std::abs(ia.sigma_ratio - ib.sigma_ratio) > 1e-8) return no("screen: singular value ratio");

  if (ia.rank == 0) {
    if (auto r = witness(1.0, identity(2), "zero")) return *r;
  }
  if (ia.rank_sym == 0) {
    // U^t J U = det(U) J, so U = I suffices.
    Complex lambda = B(0, 1) / A(0, 1);
    if (auto r = witness(lambda, identity(2), "antisymmetric")) return *r;
  }
  if (ia.rank_sym == 1) {
    CanonicalRankOne ca = canonical_rank_one(A), cb = canonical_rank_one(B);
    out.canonical_q_a = ca.q;
    out.canonical_q_b = cb.q;
    const double scale = std::max({1.0, ca.q, cb.q});
    if (std::abs(ca.q - cb.q) > 1e-8 * scale) return no("canonical q");
    // λ_a U_a^t A U_a = λ_b U_b^t B U_b.
    CMatrix U = ca.U * cb.U.adjoint();
    Complex lambda = ca.lambda / cb.lambda;
    if (auto r = witness(lambda, U, ia.rank_antisym == 0 ? "symmetric rank one" : "canonical q")) return *r;
  }
  return quad_search(A, B, opt, out);
}

struct CharacterSet {
  int d = 0;
  std::vector<std::pair<int, int>> edges;          // 1-based, i < j, q_ij != 1
  std::vector<std::vector<int>> maximal_supports;  // maximal independent sets, 1-based
  std::string tag;                                 // "ball", "glued discs", "independent sets"

  std::string describe() const {
    if (tag == "ball") return "unit ball of C^" + std::to_string(d);
    if (tag == "glued discs") return std::to_string(d) + " discs glued at the origin";
    std::string s = "union of balls on supports";
    for (const auto& m : maximal_supports) {
      s += " {";
      for (std::size_t k = 0; k < m.size(); ++k) s += (k ? "," : "") + std::to_string(m[k]);
      s += "}";
    }
    return s;
  }

  bool contains(const CVector& z, double tol = 1e-12) const {
    if (z.size() != d) throw DimensionError("character set membership: point has wrong length");
    if (z.norm() > 1.0 + tol) return false;
    for (auto [i, j] : edges)
      if (std::abs(z(i - 1) * z(j - 1)) > tol) return false;
    return true;
  }
};

// Z_q = {z in B_d : (1 - q_ij) z_i z_j = 0}.
inline CharacterSet character_set_descriptor(const CMatrix& q, double tol = 1e-12) {
  require_admissible(q);
  CharacterSet cs;
  cs.d = static_cast<int>(q.rows());
  const int d = cs.d;
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(d), std::vector<bool>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(q(i, j) - Complex(1.0)) > tol) {
        cs.edges.push_back({i + 1, j + 1});
        adj[i][j] = adj[j][i] = true;
      }
  if (d > 20) throw DomainError("character_set_descriptor: d <= 20 required");
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    bool independent = true, maximal = true;
    for (int i = 0; i < d && independent; ++i)
      for (int j = i + 1; j < d; ++j)
        if ((mask >> i & 1u) && (mask >> j & 1u) && adj[i][j]) {
          independent = false;
          break;
        }
    if (!independent) continue;
    for (int k = 0; k < d && maximal; ++k) {
      if (mask >> k & 1u) continue;
      bool free = true;
      for (int i = 0; i < d; ++i)
        if ((mask >> i & 1u) && adj[i][k]) free = false;
      if (free) maximal = false;
    }
    if (!maximal) continue;
    std::vector<int> s;
    for (int i = 0; i < d; ++i)
      if (mask >> i & 1u) s.push_back(i + 1);
    cs.maximal_supports.push_back(std::move(s));
  }
  const std::size_t all_pairs = static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2;
  if (cs.edges.empty())
    cs.tag = "ball";
  else if (cs.edges.size() == all_pairs)
    cs.tag = "glued discs";
  else
    cs.tag = "independent sets";
  return cs;
}

}  // namespace spsys
