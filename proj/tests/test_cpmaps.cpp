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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "support.hpp"

namespace spsys {
namespace {

using testing::Rng;

std::vector<CMatrix> paulis() {
  CMatrix X(2, 2), Y(2, 2), Z(2, 2);
  X << 0.0, 1.0, 1.0, 0.0;
  Y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  Z << 1.0, 0.0, 0.0, -1.0;
  return {X, Y, Z};
}

KrausChannel depolarizing(double p) {
  std::vector<CMatrix> K{std::sqrt(1.0 - 0.75 * p) * identity(2)};
  for (const auto& s : paulis()) K.push_back(std::sqrt(p / 4.0) * s);
  return KrausChannel(K);
}

Eigen::MatrixXd random_stochastic(Rng& rng, Index n, double density) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      if (rng.uniform() < density) M(i, j) = rng.uniform(0.1, 1.0);
    if (M.row(i).sum() == 0.0) M(i, rng.integer(0, static_cast<int>(n) - 1)) = 1.0;
    M.row(i) /= M.row(i).sum();
  }
  return M;
}

// Convex combination of I, M, M^2: stochastic and commuting with M.
StochasticMatrix partner(Rng& rng, const Eigen::MatrixXd& M) {
  double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
  if (rng.uniform() < 0.3) a = 0.0;
  if (rng.uniform() < 0.3) c = 0.0;
  const double s = a + b + c;
  const Index n = M.rows();
  return StochasticMatrix((a * Eigen::MatrixXd::Identity(n, n) + b * M + c * M * M) / s);
}

TEST(Channel, ApplyAndContractive) {
  KrausChannel D = depolarizing(0.4);
  EXPECT_LE((D.apply(identity(2)) - identity(2)).norm(), 1e-14);
  EXPECT_TRUE(D.contractive());
  KrausChannel big({2.0 * identity(2)});
  EXPECT_FALSE(big.contractive());
}

TEST(Channel, RejectsBadKraus) {
  EXPECT_THROW(KrausChannel({}), DimensionError);
  EXPECT_THROW(KrausChannel({identity(2), identity(3)}), DimensionError);
  EXPECT_THROW(KrausChannel({CMatrix::Zero(2, 3)}), DimensionError);
}

TEST(Choi, KnownRanks) {
  EXPECT_EQ(choi_rank(KrausChannel({identity(3)})), 1);
  EXPECT_EQ(choi_rank(depolarizing(0.5)), 4);
  EXPECT_EQ(choi_rank(depolarizing(0.0)), 1);
  Rng rng(61);
  EXPECT_EQ(choi_rank(KrausChannel({rng.gaussian(3, 3), rng.gaussian(3, 3)})), 2);
  // Parallel Kraus operators collapse.
  CMatrix A = rng.gaussian(3, 3);
  EXPECT_EQ(choi_rank(KrausChannel({A, 2.0 * A})), 1);
}

TEST(Choi, PositiveAndMatchesDefinition) {
  Rng rng(62);
  const Index h = 3;
  KrausChannel C({rng.gaussian(h, h), rng.gaussian(h, h), rng.gaussian(h, h)});
  CMatrix Ch = choi_matrix(C);
  EXPECT_GE(min_hermitian_eigenvalue(Ch), -1e-10 * Ch.norm());
  CMatrix direct = CMatrix::Zero(h * h, h * h);
  for (Index a = 0; a < h; ++a)
    for (Index b = 0; b < h; ++b) {
      CMatrix E = CMatrix::Zero(h, h);
      E(a, b) = 1.0;
      direct += kron(E, C.apply(E));
    }
  EXPECT_LE((Ch - direct).norm(), 1e-12 * direct.norm());
}

TEST(Choi, InvariantUnderKrausMixing) {
  Rng rng(63);
  for (int t = 0; t < 10; ++t) {
    const Index h = rng.integer(2, 3), m = rng.integer(1, 4);
    std::vector<CMatrix> K;
    for (Index i = 0; i < m; ++i) K.push_back(rng.gaussian(h, h));
    CMatrix U = rng.unitary(m);
    std::vector<CMatrix> L;
    for (Index i = 0; i < m; ++i) {
      CMatrix s = CMatrix::Zero(h, h);
      for (Index j = 0; j < m; ++j) s += U(i, j) * K[static_cast<std::size_t>(j)];
      L.push_back(s);
    }
    KrausChannel A(K), B(L);
    EXPECT_LE((A.superoperator() - B.superoperator()).norm(), 1e-10 * A.superoperator().norm());
    EXPECT_EQ(choi_rank(A), choi_rank(B));
    EXPECT_EQ(choi_rank(A), std::min(m, h * h));
  }
}

TEST(FiberDims, IdentityAndNilpotent) {
  auto id = as_fiber_dims(KrausChannel({identity(2)}), 5);
  ASSERT_EQ(id.dims.size(), 5u);
  for (auto x : id.dims) EXPECT_EQ(x, 1);
  EXPECT_TRUE(id.submultiplicative);

  CMatrix N = CMatrix::Zero(2, 2);
  N(0, 1) = 1.0;
  auto nil = as_fiber_dims(KrausChannel({N}), 3);
  EXPECT_EQ(nil.dims, (std::vector<Index>{1, 0, 0}));
}

// The n-th iterate has Kraus operators K_{i_1} ... K_{i_n}; its Choi rank is
// the dimension of their span.
TEST(FiberDims, MatchesKrausWordSpan) {
  Rng rng(64);
  for (int t = 0; t < 5; ++t) {
    const Index h = rng.integer(2, 3);
    std::vector<CMatrix> K{rng.gaussian(h, h), rng.gaussian(h, h)};
    if (t % 2) K[1] = K[0] * K[0];
    auto fd = as_fiber_dims(KrausChannel(K), 4);
    std::vector<CMatrix> words{identity(h)};
    for (std::size_t n = 1; n <= 4; ++n) {
      std::vector<CMatrix> next;
      for (const auto& W : words)
        for (const auto& Ki : K) next.push_back(Ki * W);
      words = next;
      CMatrix V(h * h, static_cast<Index>(words.size()));
      for (std::size_t c = 0; c < words.size(); ++c)
        V.col(static_cast<Index>(c)) = Eigen::Map<const CVector>(words[c].data(), h * h);
      EXPECT_EQ(fd.dims[n - 1], numerical_rank(V)) << "t=" << t << " n=" << n;
    }
    EXPECT_TRUE(fd.submultiplicative);
  }
}

TEST(Stochastic, Validation) {
  Eigen::MatrixXd neg(2, 2);
  neg << 1.5, -0.5, 0.5, 0.5;
  EXPECT_THROW(StochasticMatrix{neg}, DomainError);
  Eigen::MatrixXd sum(2, 2);
  sum << 0.5, 0.4, 0.5, 0.5;
  EXPECT_THROW(StochasticMatrix{sum}, DomainError);
  EXPECT_THROW(StochasticMatrix{Eigen::MatrixXd::Constant(2, 3, 0.5)}, DimensionError);
  Eigen::MatrixXd nan = Eigen::MatrixXd::Constant(2, 2, 0.5);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(StochasticMatrix{nan}, DomainError);
  EXPECT_THROW(commute_check(StochasticMatrix(Eigen::MatrixXd::Identity(2, 2)),
                             StochasticMatrix(Eigen::MatrixXd::Identity(3, 3))),
               DimensionError);
}

TEST(StrongCommute, ReferencePair) {
  StochasticMatrix P(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0));
  Eigen::MatrixXd q(3, 3);
  q << 0.5, 0.0, 0.5, 0.25, 0.5, 0.25, 0.25, 0.5, 0.25;
  StochasticMatrix Q(q);
  auto r = strong_commute_stochastic(P, Q);
  EXPECT_TRUE(r.commute);
  EXPECT_FALSE(r.strong);
  ASSERT_FALSE(r.witness.empty());
  // Row 1 of Q has a zero in column 2, so some (i, k = 1) count differs.
  bool row_one = false;
  for (const auto& w : r.witness) {
    EXPECT_NE(w.count_qp, w.count_pq);
    row_one = row_one || w.k == 1;
  }
  EXPECT_TRUE(row_one);

  auto qq = strong_commute_stochastic(Q, Q * Q);
  EXPECT_TRUE(qq.commute);
  EXPECT_FALSE(qq.strong);
}

TEST(StrongCommute, ExponentialSemigroupsArePositive) {
  StochasticMatrix P(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0));
  Eigen::MatrixXd q(3, 3);
  q << 0.5, 0.0, 0.5, 0.25, 0.5, 0.25, 0.25, 0.5, 0.25;
  StochasticMatrix Q(q);
  for (double t : {0.1, 0.7, 2.0}) {
    StochasticMatrix Pt = exponential_semigroup(P, t), Qt = exponential_semigroup(Q, 1.3 * t);
    EXPECT_GT(Qt.matrix().minCoeff(), 0.0);
    auto r = strong_commute_stochastic(Pt, Qt);
    EXPECT_TRUE(r.commute);
    EXPECT_TRUE(r.strong);
  }
  EXPECT_LE((exponential_semigroup(Q, 0.0).matrix() - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
}

TEST(StrongCommute, NonCommutingHasNoWitnesses) {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1.0, 0.0, 1.0, 0.0;
  b << 0.0, 1.0, 0.0, 1.0;
  auto r = strong_commute_stochastic(StochasticMatrix(a), StochasticMatrix(b));
  EXPECT_FALSE(r.commute);
  EXPECT_FALSE(r.strong);
  EXPECT_NEAR(r.commute_residual, 1.0, 1e-15);
}

TEST(StrongCommute, AgreesWithGramOracle) {
  Rng rng(65);
  int strong = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = rng.integer(2, 5);
    Eigen::MatrixXd M = random_stochastic(rng, n, 0.4);
    StochasticMatrix A = partner(rng, M), B = partner(rng, M);
    auto r = strong_commute_stochastic(A, B);
    ASSERT_TRUE(r.commute);
    bool oracle = true;
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < n; ++k) {
        auto [v, w] = gram_dim_oracle(A, B, i, k);
        EXPECT_EQ(v, support_count(B, A, i, k));
        EXPECT_EQ(w, support_count(A, B, i, k));
        oracle = oracle && v == w;
      }
    EXPECT_EQ(oracle, r.strong) << "t=" << t;
    strong += r.strong;
  }
  EXPECT_GT(strong, 0);
  EXPECT_LT(strong, 100);
}

TEST(StrongCommute, GramZeroDimensions) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, 1.0;
  StochasticMatrix I(a);
  auto [v, w] = gram_dim_oracle(I, I, 0, 1);
  EXPECT_EQ(v, 0);
  EXPECT_EQ(w, 0);
}

}  // namespace
}  // namespace spsys
