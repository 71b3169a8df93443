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

#include "support.hpp"

namespace spsys {
namespace {

using testing::binomial;
using testing::ideal_fiber_oracle;
using testing::legal_count_oracle;
using testing::Rng;

std::vector<Index> expected(std::initializer_list<Index> v) { return v; }

Letters two_ones_two(std::size_t k) {
  Letters w{2};
  w.insert(w.end(), k, 1);
  w.push_back(2);
  return w;
}

TEST(FromIdeal, SymmetricDimensions) {
  for (int d = 2; d <= 3; ++d) {
    auto X = from_ideal(symmetric_ideal(d), d == 2 ? 8 : 6);
    for (std::size_t n = 0; n <= X.depth(); ++n)
      EXPECT_EQ(X.dim(n), binomial(static_cast<Index>(n) + d - 1, static_cast<Index>(n))) << "d=" << d << " n=" << n;
  }
}

TEST(FromIdeal, SquareOfSecondVariable) {
  IdealGens I(2, {NCPoly::monomial(2, {2, 2})});
  EXPECT_EQ(from_ideal(I, 6).dims(), expected({1, 2, 3, 5, 8, 13, 21}));
}

TEST(FromIdeal, MatchesAmbientOracle) {
  Rng rng(41);
  for (int t = 0; t < 12; ++t) {
    const int d = t < 8 ? 2 : 3;
    IdealGens I(d);
    const int gens = rng.integer(1, 3);
    for (int g = 0; g < gens; ++g)
      I.add(rng.homogeneous(d, static_cast<std::size_t>(rng.integer(2, 3)), rng.integer(1, 4)));
    const std::size_t N = d == 2 ? 6 : 4;
    auto X = from_ideal(I, N);
    for (std::size_t n = 1; n <= N; ++n) {
      Subspace O = ideal_fiber_oracle(I, n);
      ASSERT_EQ(X.dim(n), O.dim()) << "trial " << t << " n=" << n;
      EXPECT_LE(projector_distance(X.fiber(n), O), 1e-8);
    }
  }
}

TEST(FromIdeal, ZeroFibersPropagate) {
  IdealGens I(2, {NCPoly::variable(2, 1), NCPoly::variable(2, 2)});
  EXPECT_EQ(from_ideal(I, 4).dims(), expected({1, 0, 0, 0, 0}));
  IdealGens J(2);
  for (const auto& w : all_words(2, 2)) J.add(NCPoly::monomial(2, w));
  EXPECT_EQ(from_ideal(J, 4).dims(), expected({1, 2, 0, 0, 0}));
}

TEST(FromIdeal, RedundantGeneratorsOfHigherDegree) {
  // Generators implied by lower degrees must not cut the fibers further.
  IdealGens I(2, {NCPoly::monomial(2, {1, 2}) - NCPoly::monomial(2, {2, 1})});
  IdealGens J = I;
  J.add(NCPoly::monomial(2, {1, 1, 2}) - NCPoly::monomial(2, {1, 2, 1}));
  J.add(NCPoly::monomial(2, {2, 1, 2}) - NCPoly::monomial(2, {2, 2, 1}));
  auto X = from_ideal(I, 6), Y = from_ideal(J, 6);
  EXPECT_EQ(X.dims(), Y.dims());
}

TEST(FromSubshift, KnownFamilies) {
  EXPECT_EQ(from_subshift(SubshiftSpec(2, {{2, 2}}), 7).dims(), expected({1, 2, 3, 5, 8, 13, 21, 34}));
  auto c = from_subshift(SubshiftSpec(2, {{1, 2}, {2, 2}}), 7).dims();
  for (std::size_t n = 1; n < c.size(); ++n) EXPECT_EQ(c[n], 2);
}

TEST(FromSubshift, TwoOnesTwoFamilyGivesLinearGrowth) {
  const std::size_t N = 7;
  std::vector<Letters> words;
  for (std::size_t k = 0; k + 2 <= N; ++k) words.push_back(two_ones_two(k));
  auto X = from_subshift(SubshiftSpec(2, words), N);
  for (std::size_t n = 0; n <= N; ++n) EXPECT_EQ(X.dim(n), static_cast<Index>(n) + 1);
}

// Only four words of the family forbidden: 211112 remains legal at n = 6.
TEST(FromSubshift, TruncatedFamilyFollowsOracle) {
  std::vector<Letters> words{{2, 2}, {2, 1, 2}, {2, 1, 1, 2}, {2, 1, 1, 1, 2}};
  auto X = from_subshift(SubshiftSpec(2, words), 6);
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(X.dim(n), static_cast<Index>(n) + 1);
  EXPECT_EQ(X.dim(6), legal_count_oracle(2, words, 6));
  EXPECT_EQ(X.dim(6), 8);
}

TEST(FromSubshift, RandomSetsMatchEnumeration) {
  Rng rng(42);
  for (int t = 0; t < 25; ++t) {
    const int d = rng.integer(2, 3);
    std::vector<Letters> words;
    const int k = rng.integer(1, 4);
    for (int i = 0; i < k; ++i) words.push_back(rng.word(d, static_cast<std::size_t>(rng.integer(2, 3))));
    auto X = from_subshift(SubshiftSpec(d, words), 6);
    for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(X.dim(n), legal_count_oracle(d, words, n));
  }
}

TEST(FromSubshift, CoordinateFibers) {
  auto X = from_subshift(SubshiftSpec(3, {{1, 2}, {3, 3, 1}}), 4);
  for (std::size_t n = 1; n <= 4; ++n) {
    CMatrix P = projector(X.fiber(n));
    for (Index i = 0; i < P.rows(); ++i)
      for (Index j = 0; j < P.cols(); ++j) {
        const double a = std::abs(P(i, j));
        EXPECT_TRUE(a <= 1e-12 || std::abs(a - 1.0) <= 1e-12);
      }
  }
}

TEST(FromSubshift, ShortWordsRejected) {
  EXPECT_THROW(SubshiftSpec(2, {{1}}), DomainError);
  EXPECT_THROW(SubshiftSpec(2, {{1, 3}}), Error);
}

TEST(FromQMatrix, Dimensions) {
  CMatrix ones = CMatrix::Ones(2, 2);
  auto S = from_qmatrix(ones, 6), T = from_ideal(symmetric_ideal(2), 6);
  for (std::size_t n = 0; n <= 6; ++n) {
    EXPECT_EQ(S.dim(n), static_cast<Index>(n) + 1);
    if (n) {
      EXPECT_LE(projector_distance(S.fiber(n), T.fiber(n)), 1e-9);
    }
  }
  CMatrix q(2, 2);
  q << 1.0, 2.0, 0.5, 1.0;
  auto X = from_qmatrix(q, 6);
  for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(X.dim(n), static_cast<Index>(n) + 1);
  CMatrix one = CMatrix::Ones(1, 1);
  for (Index n : from_qmatrix(one, 5).dims()) EXPECT_EQ(n, 1);
}

TEST(FromQMatrix, AgreesWithIdealConstruction) {
  Rng rng(43);
  for (int t = 0; t < 6; ++t) {
    const int d = rng.integer(2, 3);
    CMatrix q = CMatrix::Ones(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        q(i, j) = std::polar(rng.uniform(0.3, 3.0), rng.uniform(0.0, 6.28));
        q(j, i) = 1.0 / q(i, j);
      }
    const std::size_t N = d == 2 ? 6 : 4;
    auto X = from_qmatrix(q, N), Y = from_ideal(q_commuting_ideal(q), N);
    for (std::size_t n = 1; n <= N; ++n) EXPECT_LE(projector_distance(X.fiber(n), Y.fiber(n)), 1e-9);
  }
}

TEST(FromQMatrix, RejectsInadmissible) {
  CMatrix q(2, 2);
  q << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(from_qmatrix(q, 3), DomainError);
  q << 1.0, 0.0, 0.0, 1.0;
  EXPECT_THROW(from_qmatrix(q, 3), DomainError);
}

TEST(FromQuadratic, Examples) {
  CMatrix A(2, 2);
  A << 0.0, 1.0, -1.0, 0.0;
  auto X = from_quadratic(A, 6), S = from_ideal(symmetric_ideal(2), 6);
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_EQ(X.dim(n), static_cast<Index>(n) + 1);
    EXPECT_LE(projector_distance(X.fiber(n), S.fiber(n)), 1e-9);
  }
  for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(from_quadratic(CMatrix::Zero(2, 2), 6).dim(n), ipow(2, n));
  A << 1.0, 0.0, 0.0, 0.0;
  EXPECT_EQ(from_quadratic(A, 6).dims(), expected({1, 2, 3, 5, 8, 13, 21}));
}

TEST(FromQuadratic, GenericRelationGivesLinearGrowth) {
  CMatrix A(2, 2);
  A << 1.0, 0.5, -0.5, 0.0;
  auto X = from_quadratic(A, 6);
  for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(X.dim(n), static_cast<Index>(n) + 1);
}

TEST(FromQuadratic, MatchesIdealOracle) {
  Rng rng(44);
  for (int t = 0; t < 8; ++t) {
    const int d = rng.integer(2, 3);
    CMatrix A = rng.gaussian(d, d);
    NCPoly g(d);
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) g.add_term({i, j}, A(i - 1, j - 1));
    IdealGens I(d, {g});
    const std::size_t N = d == 2 ? 6 : 4;
    auto X = from_quadratic(A, N);
    for (std::size_t n = 1; n <= N; ++n)
      EXPECT_LE(projector_distance(X.fiber(n), ideal_fiber_oracle(I, n)), 1e-8) << "trial " << t << " n=" << n;
  }
}

TEST(MaximalWithFibers, PrescribedSecondLevel) {
  Subspace X2 = Subspace::coordinate(4, {0, 1, 2});
  auto X = maximal_with_fibers(2, {Subspace::full(2), X2}, 5);
  EXPECT_EQ(X.dim(3), 5);
  EXPECT_EQ(X.dims(), expected({1, 2, 3, 5, 8, 13}));
}

TEST(MaximalWithFibers, InclusionViolationNamesLevel) {
  Subspace X1 = Subspace::coordinate(2, {0});
  Subspace X2 = Subspace::coordinate(4, {1});
  try {
    maximal_with_fibers(2, {X1, X2}, 3);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("(1, 1, 2)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("residual"), std::string::npos) << msg;
  }
}

TEST(RecoverIdeal, Examples) {
  auto S = from_ideal(symmetric_ideal(2), 4);
  Subspace J = recover_ideal(S, 2);
  ASSERT_EQ(J.dim(), 1);
  CVector v(4);
  v << 0.0, 1.0, -1.0, 0.0;
  EXPECT_LE(projector_distance(J, span({v}, 4)), 1e-12);
  EXPECT_EQ(recover_ideal(full_system(2, 4), 3).dim(), 0);
  auto G = from_subshift(SubshiftSpec(2, {{2, 2}}), 4);
  Subspace K = recover_ideal(G, 3);
  std::vector<Index> coords{word_index({2, 2, 1}, 2), word_index({1, 2, 2}, 2), word_index({2, 2, 2}, 2)};
  EXPECT_LE(projector_distance(K, Subspace::coordinate(8, coords)), 1e-12);
}

TEST(RecoverIdeal, RoundTripAcrossConstructors) {
  Rng rng(45);
  std::vector<SubproductSystem> systems{from_ideal(symmetric_ideal(2), 5), from_subshift(SubshiftSpec(2, {{2, 2}}), 5),
                                        full_system(2, 5)};
  CMatrix q(2, 2);
  q << 1.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 1.0;
  systems.push_back(from_qmatrix(q, 5));
  systems.push_back(from_quadratic(rng.gaussian(2, 2), 5));
  for (const auto& X : systems) {
    auto Y = from_ideal(recovered_generators(X), 5);
    for (std::size_t n = 1; n <= 5; ++n) EXPECT_LE(projector_distance(X.fiber(n), Y.fiber(n)), 1e-8);
  }
}

TEST(Axioms, HoldForConstructedSystems) {
  Rng rng(46);
  for (int t = 0; t < 6; ++t) {
    IdealGens I(2);
    I.add(rng.homogeneous(2, 2, 3));
    if (t % 2) I.add(rng.homogeneous(2, 3, 2));
    auto X = from_ideal(I, 6);
    auto rep = verify_axioms(X);
    EXPECT_TRUE(rep.pass) << rep.max_residual;
    EXPECT_LE(rep.max_residual, 1e-9);
    auto dims = X.dims();
    for (std::size_t m = 1; m <= 6; ++m)
      for (std::size_t n = 1; m + n <= 6; ++n) EXPECT_LE(dims[m + n], dims[m] * dims[n]);
  }
}

TEST(Units, SymmetricAndGolden) {
  auto S = from_ideal(symmetric_ideal(2), 5);
  Rng rng(47);
  CVector v = rng.gaussian_vector(2);
  auto u = verify_unit(S, v);
  EXPECT_TRUE(u.is_unit);
  EXPECT_FALSE(u.unital);
  auto w = verify_unit(S, v / v.norm());
  EXPECT_TRUE(w.is_unit && w.unital);

  auto G = from_subshift(SubshiftSpec(2, {{2, 2}}), 5);
  CVector e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  EXPECT_TRUE(verify_unit(G, e1).is_unit);
  auto bad = verify_unit(G, e2);
  EXPECT_FALSE(bad.is_unit);
  ASSERT_TRUE(bad.first_failure);
  EXPECT_EQ(*bad.first_failure, 2u);
}

TEST(Budget, FiberGuard) {
  auto X = full_system(2, 6);
  EXPECT_THROW(X.fiber(6, 1024), BudgetError);
  EXPECT_NO_THROW(X.fiber(6));
}

}  // namespace
}  // namespace spsys
