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

// Dense complex linear algebra used throughout the library: matrices,
// Kronecker products, spectral norms and numerically certified subspaces.
//
// A Subspace keeps an orthonormal frame of its vectors together with the
// singular-value cutoff used when it was built, so that every downstream
// residual can be traced back to the tolerance that produced the frame.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "spsys/error.hpp"

namespace spsys {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultRelTol = 1e-9;
inline constexpr double kAbsoluteFloor = 1e-12;

// Kronecker product with row-major pair indexing: (i, k) -> i * B.rows() + k.
inline CMatrix kron(const CMatrix& A, const CMatrix& B) {
  CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// (A ⊗ I_h) M without forming the Kronecker product.
inline CMatrix apply_kron_id(const CMatrix& A, Index h, const CMatrix& M) {
  if (M.rows() != A.cols() * h) throw DimensionError("apply_kron_id: shape mismatch");
  CMatrix out(A.rows() * h, M.cols());
  const CMatrix At = A.transpose();
  for (Index c = 0; c < M.cols(); ++c) {
    Eigen::Map<const CMatrix> in(M.col(c).data(), h, A.cols());
    Eigen::Map<CMatrix> res(out.col(c).data(), h, A.rows());
    res.noalias() = in * At;
  }
  return out;
}

// (I_n ⊗ B) M, with n = M.rows() / B.cols().
inline CMatrix apply_id_kron(const CMatrix& B, const CMatrix& M) {
  if (B.cols() == 0 || M.rows() % B.cols() != 0) throw DimensionError("apply_id_kron: shape mismatch");
  const Index n = M.rows() / B.cols();
  CMatrix out(n * B.rows(), M.cols());
  for (Index c = 0; c < M.cols(); ++c) {
    Eigen::Map<const CMatrix> in(M.col(c).data(), B.cols(), n);
    Eigen::Map<CMatrix> res(out.col(c).data(), B.rows(), n);
    res.noalias() = B * in;
  }
  return out;
}

// W (R ⊗ I_h) without forming the Kronecker product.
inline CMatrix times_kron_id(const CMatrix& W, const CMatrix& R, Index h) {
  if (W.cols() != R.rows() * h) throw DimensionError("times_kron_id: shape mismatch");
  CMatrix out = CMatrix::Zero(W.rows(), R.cols() * h);
  for (Index j = 0; j < R.cols(); ++j)
    for (Index i = 0; i < R.rows(); ++i)
      if (R(i, j) != Complex(0.0)) out.middleCols(j * h, h) += R(i, j) * W.middleCols(i * h, h);
  return out;
}

inline CMatrix tensor(const CMatrix& A, const CMatrix& B) { return kron(A, B); }

inline CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

// Largest singular value. Computed from the smaller Gram matrix; the top
// eigenvalue of M*M is accurate relative to its own size.
inline double opnorm(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  CMatrix gram = M.rows() <= M.cols() ? CMatrix(M * M.adjoint()) : CMatrix(M.adjoint() * M);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

inline Eigen::VectorXd singular_values(const CMatrix& M) {
  if (M.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<CMatrix> svd(M);
  return svd.singularValues();
}

// Rank with cutoff rel_tol * sigma_max and an absolute floor.
inline Index numerical_rank(const CMatrix& M, double rel_tol = kDefaultRelTol) {
  if (M.size() == 0) return 0;
  Eigen::VectorXd s = singular_values(M);
  if (s.size() == 0) return 0;
  double cut = std::max(rel_tol * s(0), kAbsoluteFloor);
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

// Orthonormal basis of {x : M x = 0} using the absolute cutoff `abs_tol`
// on singular values. Columns of M are expected to be of unit scale.
inline CMatrix null_space(const CMatrix& M, double abs_tol) {
  const Index n = M.cols();
  if (n == 0) return CMatrix(0, 0);
  if (M.rows() == 0) return identity(n);
  Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index keep = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > abs_tol) ++keep;
  return svd.matrixV().rightCols(n - keep);
}

// A subspace of C^D represented by an orthonormal frame (D x dim).
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(Index ambient_dim) : frame_(ambient_dim, 0) {}

  // The caller guarantees orthonormal columns.
  Subspace(CMatrix frame, double tol_used) : frame_(std::move(frame)), tol_used_(tol_used) {}

  Index ambient_dim() const { return frame_.rows(); }
  Index dim() const { return frame_.cols(); }
  const CMatrix& frame() const { return frame_; }
  double tol_used() const { return tol_used_; }

  static Subspace full(Index ambient_dim) { return Subspace(identity(ambient_dim), 0.0); }

  static Subspace coordinate(Index ambient_dim, const std::vector<Index>& indices) {
    CMatrix f = CMatrix::Zero(ambient_dim, static_cast<Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) f(indices[k], static_cast<Index>(k)) = 1.0;
    return Subspace(std::move(f), 0.0);
  }

 private:
  CMatrix frame_;
  double tol_used_ = 0.0;
};

inline void require_same_ambient(const Subspace& A, const Subspace& B, const char* op) {
  if (A.ambient_dim() != B.ambient_dim())
    throw DimensionError(std::string(op) + ": ambient dimensions differ (" +
                         std::to_string(A.ambient_dim()) + " vs " +
                         std::to_string(B.ambient_dim()) + ")");
}

// Span of the columns of M.
inline Subspace span_columns(const CMatrix& M, double rel_tol = kDefaultRelTol) {
  const Index D = M.rows();
  if (M.cols() == 0 || D == 0) return Subspace(D);
  Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cut = std::max(rel_tol * (s.size() ? s(0) : 0.0), kAbsoluteFloor);
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return Subspace(svd.matrixU().leftCols(r), cut);
}

inline Subspace span(const std::vector<CVector>& vectors, Index ambient_dim,
                     double rel_tol = kDefaultRelTol) {
  CMatrix M(ambient_dim, static_cast<Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != ambient_dim)
      throw DimensionError("span: vector " + std::to_string(k) + " has length " +
                           std::to_string(vectors[k].size()) + ", expected " +
                           std::to_string(ambient_dim));
    M.col(static_cast<Index>(k)) = vectors[k];
  }
  return span_columns(M, rel_tol);
}

inline CMatrix projector(const Subspace& S) { return S.frame() * S.frame().adjoint(); }

inline CVector project(const Subspace& S, const CVector& v) {
  if (v.size() != S.ambient_dim()) throw DimensionError("project: vector length mismatch");
  return S.frame() * (S.frame().adjoint() * v);
}

inline Subspace complement(const Subspace& S) {
  const Index D = S.ambient_dim();
  if (S.dim() == 0) return Subspace::full(D);
  Eigen::HouseholderQR<CMatrix> qr(S.frame());
  CMatrix Q = qr.householderQ() * identity(D);
  return Subspace(Q.rightCols(D - S.dim()), S.tol_used());
}

// Residual ||(I - P_A) frame_B||, the distance of B from lying in A.
inline double containment_residual(const Subspace& A, const Subspace& B) {
  require_same_ambient(A, B, "contains");
  if (B.dim() == 0) return 0.0;
  CMatrix R = B.frame() - A.frame() * (A.frame().adjoint() * B.frame());
  return opnorm(R);
}

inline bool contains(const Subspace& A, const Subspace& B, double tol = 1e-9) {
  return containment_residual(A, B) <= tol;
}

inline double projector_distance(const Subspace& A, const Subspace& B) {
  require_same_ambient(A, B, "projector_distance");
  return opnorm(projector(A) - projector(B));
}

// A ∩ B as the complement of span(A^⊥ ∪ B^⊥).
inline Subspace intersect(const Subspace& A, const Subspace& B, double rel_tol = kDefaultRelTol) {
  require_same_ambient(A, B, "intersect");
  Subspace Ac = complement(A), Bc = complement(B);
  CMatrix stacked(A.ambient_dim(), Ac.dim() + Bc.dim());
  stacked << Ac.frame(), Bc.frame();
  return complement(span_columns(stacked, rel_tol));
}

// Left-to-right fold.
inline Subspace intersect(const std::vector<Subspace>& parts, double rel_tol = kDefaultRelTol) {
  if (parts.empty()) throw DimensionError("intersect: empty list");
  Subspace acc = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) acc = intersect(acc, parts[k], rel_tol);
  return acc;
}

// Hermitian square root with negative eigenvalues clamped to zero.
inline CMatrix psd_sqrt(const CMatrix& H, double clamp = 1e-12) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) {
      if (ev(i) < -clamp)
        throw DomainError("psd_sqrt: eigenvalue " + std::to_string(ev(i)) + " below -" +
                          std::to_string(clamp));
      ev(i) = 0.0;
    }
    ev(i) = std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline double min_hermitian_eigenvalue(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_abs(const CMatrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace spsys
