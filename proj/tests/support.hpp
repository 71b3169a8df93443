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

// Random inputs and brute-force oracles shared by the test binaries. The
// oracles work in the ambient space C^(d^n) and never call the level
// recursion they are checking.

#include <random>
#include <string>
#include <vector>

#include "spsys/spsys.hpp"

namespace spsys::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double normal() { return n_(eng_); }
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  Complex cnormal() { return {normal(), normal()}; }

  CMatrix gaussian(Index r, Index c) {
    CMatrix M(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) M(i, j) = cnormal();
    return M;
  }

  CVector gaussian_vector(Index n) { return gaussian(n, 1).col(0); }

  CMatrix unitary(Index n) {
    Eigen::HouseholderQR<CMatrix> qr(gaussian(n, n));
    CMatrix Q = qr.householderQ() * identity(n);
    CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) Q.col(j) *= std::polar(1.0, std::arg(R(j, j)));
    return Q;
  }

  Letters word(int d, std::size_t len) {
    Letters w;
    for (std::size_t k = 0; k < len; ++k) w.push_back(integer(1, d));
    return w;
  }

  // Homogeneous polynomial with `terms` random monomials of degree n.
  NCPoly homogeneous(int d, std::size_t n, int terms) {
    NCPoly p(d);
    while (p.is_zero())
      for (int t = 0; t < terms; ++t) p = p + NCPoly::monomial(d, word(d, n), cnormal());
    return p;
  }

  // Polynomial with terms of degree 0..max_deg.
  NCPoly polynomial(int d, std::size_t max_deg, int terms) {
    NCPoly p(d);
    for (int t = 0; t < terms; ++t)
      p = p + NCPoly::monomial(d, word(d, static_cast<std::size_t>(integer(0, static_cast<int>(max_deg)))), cnormal());
    return p;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> n_{0.0, 1.0};
};

// Commuting pair p_1(M), p_2(M) on C^h scaled to row norm `target`.
inline RepTuple commuting_pair(Rng& rng, Index h, double target) {
  CMatrix M = rng.gaussian(h, h) / std::sqrt(static_cast<double>(h));
  std::vector<CMatrix> T;
  for (int i = 0; i < 2; ++i) {
    CMatrix A = rng.cnormal() * identity(h) + rng.cnormal() * M + rng.cnormal() * M * M;
    T.push_back(A);
  }
  RepTuple R(T);
  return R.scaled(target / R.row_norm());
}

// Compression of the truncated X-shift to the co-invariant hull of `k`
// random vectors, scaled to row norm `target`. A representation of X.
inline RepTuple random_representation(Rng& rng, const SubproductSystem& X, Index k, double target) {
  TruncatedFock F(X);
  ShiftSet S = build_shifts(F);
  RepTuple T = shifts_as_rep(S);
  Subspace K = coinvariant_hull(T, rng.gaussian(F.total_dim(), k));
  RepTuple C = compress(T, K);
  return C.scaled(target / C.row_norm());
}

// Brute force: legal words of length n avoid every forbidden word as a factor.
inline Index legal_count_oracle(int d, const std::vector<Letters>& forbidden, std::size_t n) {
  Index count = 0;
  for (const auto& w : all_words(d, n)) {
    std::string s;
    for (int a : w) s.push_back(static_cast<char>('0' + a));
    bool ok = true;
    for (const auto& f : forbidden) {
      std::string t;
      for (int a : f) t.push_back(static_cast<char>('0' + a));
      if (s.find(t) != std::string::npos) ok = false;
    }
    if (ok) ++count;
  }
  return count;
}

// Brute force: X(n) = (I^(n))^⊥ with I^(n) spanned by all e_α ⊗ g ⊗ e_β.
inline Subspace ideal_fiber_oracle(const IdealGens& I, std::size_t n) {
  const Index D = ipow(I.d(), n);
  std::vector<CVector> vs;
  for (const auto& g : I.generators()) {
    const std::size_t m = *g.degree();
    if (m > n) continue;
    CVector gv = eval_on_basis(g);
    for (std::size_t a = 0; a + m <= n; ++a) {
      const std::size_t b = n - m - a;
      for (Index ia = 0; ia < ipow(I.d(), a); ++ia)
        for (Index ib = 0; ib < ipow(I.d(), b); ++ib) {
          CVector ea = CVector::Zero(ipow(I.d(), a)), eb = CVector::Zero(ipow(I.d(), b));
          ea(ia) = 1.0;
          eb(ib) = 1.0;
          vs.push_back(kron(kron(ea, gv), eb));
        }
    }
  }
  if (vs.empty()) return Subspace::full(D);
  return complement(span(vs, D));
}

inline Index binomial(Index n, Index k) {
  Index r = 1;
  for (Index i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace spsys::testing
