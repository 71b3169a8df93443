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

// Completely positive maps on matrix algebras and the stochastic-matrix
// strong commutation test.
//
// Choi convention: Choi(Θ) = sum_{ab} E_ab ⊗ Θ(E_ab), an h^2 x h^2 matrix
// whose rank is the minimal number of Kraus operators of Θ.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "spsys/error.hpp"
#include "spsys/linalg.hpp"

namespace spsys {

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw DimensionError("Kraus list must be nonempty");
    h_ = kraus_.front().rows();
    for (std::size_t i = 0; i < kraus_.size(); ++i)
      if (kraus_[i].rows() != h_ || kraus_[i].cols() != h_)
        throw DimensionError("Kraus operator " + std::to_string(i) + " is not " + std::to_string(h_) +
                             "x" + std::to_string(h_));
  }

  Index h() const { return h_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }

  CMatrix apply(const CMatrix& a) const {
    CMatrix out = CMatrix::Zero(h_, h_);
    for (const auto& K : kraus_) out += K * a * K.adjoint();
    return out;
  }

  // sum K K^* <= I + 1e-10.
  bool contractive() const {
    CMatrix s = apply(identity(h_));
    return min_hermitian_eigenvalue(identity(h_) - s) >= -1e-10;
  }

  // Superoperator on row-major vec: vec(K a K^*) = (K ⊗ conj(K)) vec(a).
  CMatrix superoperator() const {
    CMatrix S = CMatrix::Zero(h_ * h_, h_ * h_);
    for (const auto& K : kraus_) S += kron(K, K.conjugate());
    return S;
  }

 private:
  std::vector<CMatrix> kraus_;
  Index h_ = 0;
};

// Choi matrix of a = sum_ab E_ab ⊗ Θ(E_ab) from the row-major superoperator.
inline CMatrix choi_from_superoperator(const CMatrix& S, Index h) {
  CMatrix C = CMatrix::Zero(h * h, h * h);
  for (Index a = 0; a < h; ++a)
    for (Index b = 0; b < h; ++b) {
      // Θ(E_ab) is column (a * h + b) of S, reshaped row-major.
      for (Index c = 0; c < h; ++c)
        for (Index e = 0; e < h; ++e) C(a * h + c, b * h + e) = S(c * h + e, a * h + b);
    }
  return C;
}

inline CMatrix choi_matrix(const KrausChannel& C) {
  return choi_from_superoperator(C.superoperator(), C.h());
}

inline Index choi_rank(const KrausChannel& C, double rel_tol = kDefaultRelTol) {
  return numerical_rank(choi_matrix(C), rel_tol);
}

struct FiberDims {
  std::vector<Index> dims;  // dims[k-1] = Choi rank of the k-th iterate
  bool submultiplicative = true;
};

// Choi ranks of C, C∘C, ..., C^{n_max}, via powers of the superoperator.
inline FiberDims as_fiber_dims(const KrausChannel& C, std::size_t n_max, double rel_tol = kDefaultRelTol) {
  FiberDims out;
  const CMatrix S = C.superoperator();
  CMatrix P = S;
  for (std::size_t k = 1; k <= n_max; ++k) {
    out.dims.push_back(numerical_rank(choi_from_superoperator(P, C.h()), rel_tol));
    P = S * P;
  }
  for (std::size_t j = 1; j <= n_max; ++j)
    for (std::size_t k = 1; j + k <= n_max; ++k)
      if (out.dims[j + k - 1] > out.dims[j - 1] * out.dims[k - 1]) out.submultiplicative = false;
  return out;
}

class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd P) : P_(std::move(P)) {
    if (P_.rows() != P_.cols()) throw DimensionError("stochastic matrix must be square");
    for (Index i = 0; i < P_.rows(); ++i) {
      for (Index j = 0; j < P_.cols(); ++j) {
        if (!std::isfinite(P_(i, j))) throw DomainError("non-finite entry");
        if (P_(i, j) < -1e-15)
          throw DomainError("negative entry at (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
        if (P_(i, j) < 0.0) P_(i, j) = 0.0;
      }
      if (std::abs(P_.row(i).sum() - 1.0) > 1e-12)
        throw DomainError("row " + std::to_string(i + 1) + " sums to " + std::to_string(P_.row(i).sum()));
    }
  }

  Index n() const { return P_.rows(); }
  const Eigen::MatrixXd& matrix() const { return P_; }
  double operator()(Index i, Index j) const { return P_(i, j); }

  friend StochasticMatrix operator*(const StochasticMatrix& a, const StochasticMatrix& b) {
    Eigen::MatrixXd M = a.P_ * b.P_;
    for (Index i = 0; i < M.rows(); ++i) M.row(i) /= M.row(i).sum();
    return StochasticMatrix(M);
  }

 private:
  Eigen::MatrixXd P_;
};

inline constexpr double kSupportThreshold = 1e-12;

struct CommuteResult {
  bool commute;
  double residual;  // max |(PQ - QP)_ij|
};

inline CommuteResult commute_check(const StochasticMatrix& P, const StochasticMatrix& Q) {
  if (P.n() != Q.n()) throw DimensionError("stochastic matrices of different sizes");
  double r = (P.matrix() * Q.matrix() - Q.matrix() * P.matrix()).cwiseAbs().maxCoeff();
  return {r <= 1e-12, r};
}

struct StrongCommuteWitness {
  Index i, k;                  // 1-based
  Index count_qp, count_pq;    // |{j : q_kj p_ji != 0}|, |{j : p_kj q_ji != 0}|
};

struct StrongCommuteResult {
  bool commute;
  bool strong;
  double commute_residual;
  std::vector<StrongCommuteWitness> witness;
};

inline Index support_count(const StochasticMatrix& A, const StochasticMatrix& B, Index i, Index k) {
  Index c = 0;
  for (Index j = 0; j < A.n(); ++j)
    if (A(k, j) * B(j, i) > kSupportThreshold) ++c;
  return c;
}

// Strong commutation of stochastic matrices: equal support counts
// |{j : q_kj p_ji != 0}| = |{j : p_kj q_ji != 0}| at every (i, k).
inline StrongCommuteResult strong_commute_stochastic(const StochasticMatrix& P, const StochasticMatrix& Q) {
  auto c = commute_check(P, Q);
  StrongCommuteResult out{c.commute, false, c.residual, {}};
  if (!c.commute) return out;
  for (Index i = 0; i < P.n(); ++i)
    for (Index k = 0; k < P.n(); ++k) {
      Index qp = support_count(Q, P, i, k);
      Index pq = support_count(P, Q, i, k);
      if (qp != pq) out.witness.push_back({i + 1, k + 1, qp, pq});
    }
  out.strong = out.witness.empty();
  return out;
}

// Dimensions of V_ik = span{e_i ⊗_P e_j ⊗_Q e_k}_j and
// W_ik = span{e_i ⊗_Q e_j ⊗_P e_k}_j as Gram-matrix ranks. The inner
// product <e_i ⊗_P e_j ⊗_Q e_k, e_m ⊗_P e_p ⊗_Q e_q> = <e_k, Q(e_j^* P(e_i^* e_m) e_p) e_q>
// is evaluated on the diagonal algebra C^n, where P acts on functions by
// (P f)(x) = sum_y p_xy f(y) and e_i are indicator functions.
inline std::pair<Index, Index> gram_dim_oracle(const StochasticMatrix& P, const StochasticMatrix& Q,
                                               Index i, Index k) {
  const Index n = P.n();
  auto indicator = [n](Index x) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    f(x) = 1.0;
    return f;
  };
  auto gram = [&](const StochasticMatrix& A, const StochasticMatrix& B) {
    Eigen::MatrixXd G(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index p = 0; p < n; ++p) {
        Eigen::VectorXd inner = A.matrix() * indicator(i).cwiseProduct(indicator(i));  // A(e_i^* e_i)
        Eigen::VectorXd mid = indicator(j).cwiseProduct(inner).cwiseProduct(indicator(p));
        Eigen::VectorXd outer = B.matrix() * mid;
        G(j, p) = outer(k);
      }
    return G;
  };
  auto rank = [](const Eigen::MatrixXd& G) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
    Index r = 0;
    for (Index t = 0; t < es.eigenvalues().size(); ++t)
      if (es.eigenvalues()(t) > kSupportThreshold) ++r;
    return r;
  };
  return {rank(gram(P, Q)), rank(gram(Q, P))};
}

// e^{-t} e^{tP}, row-stochastic for stochastic P.
inline StochasticMatrix exponential_semigroup(const StochasticMatrix& P, double t) {
  const Index n = P.n();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n), sum = term;
  for (int k = 1; k < 200; ++k) {
    term = term * (t * P.matrix()) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  Eigen::MatrixXd M = std::exp(-t) * sum;
  for (Index r = 0; r < n; ++r) M.row(r) /= M.row(r).sum();
  return StochasticMatrix(M);
}

}  // namespace spsys
