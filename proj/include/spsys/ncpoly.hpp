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

// Words over {1..d} and noncommutative polynomials with complex
// coefficients.
//
// The degree-n words are ordered lexicographically; the word a_1 ... a_n
// has coordinate index sum_j (a_j - 1) d^(n-j) in C^(d^n). This is the same
// index the Kronecker product assigns to e_{a_1} ⊗ ... ⊗ e_{a_n}, so
// concatenating words corresponds to tensoring coordinate vectors.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spsys/error.hpp"
#include "spsys/linalg.hpp"

namespace spsys {

using Letters = std::vector<int>;

inline Index ipow(Index base, std::size_t exp) {
  Index r = 1;
  for (std::size_t k = 0; k < exp; ++k) r *= base;
  return r;
}

inline void check_letters(const Letters& w, int d) {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] < 1 || w[k] > d)
      throw DimensionError("letter " + std::to_string(w[k]) + " at position " +
                           std::to_string(k) + " outside alphabet {1.." + std::to_string(d) + "}");
}

// Coordinate index of a word in C^(d^|w|).
inline Index word_index(const Letters& w, int d) {
  Index idx = 0;
  for (int a : w) idx = idx * d + (a - 1);
  return idx;
}

inline Letters word_from_index(Index idx, std::size_t length, int d) {
  Letters w(length);
  for (std::size_t k = length; k-- > 0;) {
    w[k] = static_cast<int>(idx % d) + 1;
    idx /= d;
  }
  return w;
}

// All words of the given length in lexicographic order.
inline std::vector<Letters> all_words(int d, std::size_t length) {
  std::vector<Letters> out;
  const Index n = ipow(d, length);
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.push_back(word_from_index(i, length, d));
  return out;
}

inline std::string word_to_string(const Letters& w) {
  if (w.empty()) return "∅";
  std::string s;
  for (int a : w) {
    if (!s.empty() && a >= 10) s += '.';
    s += std::to_string(a);
  }
  return s;
}

// A word together with its alphabet size.
class Word {
 public:
  Word(int d, Letters letters) : d_(d), letters_(std::move(letters)) { check_letters(letters_, d_); }

  int d() const { return d_; }
  const Letters& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  Index index() const { return word_index(letters_, d_); }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  int d_;
  Letters letters_;
};

class NCPoly {
 public:
  using Terms = std::map<Letters, Complex>;

  explicit NCPoly(int d) : d_(d) {
    if (d < 1) throw DimensionError("alphabet size must be >= 1");
  }

  static NCPoly monomial(int d, const Letters& w, Complex c = 1.0) {
    NCPoly p(d);
    p.add_term(w, c);
    return p;
  }

  // x_i as a polynomial.
  static NCPoly variable(int d, int i) { return monomial(d, {i}, 1.0); }

  static NCPoly constant(int d, Complex c) { return monomial(d, {}, c); }

  int d() const { return d_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  NCPoly& add_term(const Letters& w, Complex c) {
    check_letters(w, d_);
    auto it = terms_.find(w);
    if (it == terms_.end()) {
      if (c != Complex(0.0)) terms_.emplace(w, c);
    } else {
      it->second += c;
      if (it->second == Complex(0.0)) terms_.erase(it);
    }
    return *this;
  }

  // Common word length; nullopt for the zero polynomial or mixed lengths.
  std::optional<std::size_t> degree() const {
    if (terms_.empty()) return std::nullopt;
    std::size_t n = terms_.begin()->first.size();
    for (const auto& [w, c] : terms_)
      if (w.size() != n) return std::nullopt;
    return n;
  }

  bool is_homogeneous() const { return degree().has_value(); }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, w.size());
    return m;
  }

  double coefficient_norm() const {
    double s = 0.0;
    for (const auto& [w, c] : terms_) s += std::norm(c);
    return std::sqrt(s);
  }

  NCPoly& operator+=(const NCPoly& o) {
    require_same_d(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NCPoly& operator-=(const NCPoly& o) {
    require_same_d(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NCPoly& operator*=(Complex s) {
    if (s == Complex(0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(Complex s, NCPoly a) { return a *= s; }
  friend NCPoly operator*(NCPoly a, Complex s) { return a *= s; }

  // Product in the free algebra: words concatenate.
  friend NCPoly operator*(const NCPoly& a, const NCPoly& b) {
    a.require_same_d(b);
    NCPoly out(a.d_);
    for (const auto& [u, cu] : a.terms_)
      for (const auto& [v, cv] : b.terms_) {
        Letters w = u;
        w.insert(w.end(), v.begin(), v.end());
        out.add_term(w, cu * cv);
      }
    return out;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(c.real()) + (c.imag() < 0 ? "-" : "+") +
           std::to_string(std::abs(c.imag())) + "i)";
      s += w.empty() ? "1" : "x" + word_to_string(w);
    }
    return s;
  }

 private:
  void require_same_d(const NCPoly& o) const {
    if (o.d_ != d_)
      throw DimensionError("polynomials over different alphabets (" + std::to_string(d_) +
                           " vs " + std::to_string(o.d_) + ")");
  }

  int d_;
  Terms terms_;
};

namespace detail {

inline Index check_tuple(int d, std::span<const CMatrix> T) {
  if (static_cast<int>(T.size()) != d)
    throw DimensionError("tuple has " + std::to_string(T.size()) + " matrices, polynomial expects " +
                         std::to_string(d));
  if (T.empty()) throw DimensionError("empty operator tuple");
  const Index h = T[0].rows();
  for (std::size_t i = 0; i < T.size(); ++i)
    if (T[i].rows() != h || T[i].cols() != h)
      throw DimensionError("matrix " + std::to_string(i + 1) + " is " + std::to_string(T[i].rows()) +
                           "x" + std::to_string(T[i].cols()) + ", expected " + std::to_string(h) +
                           "x" + std::to_string(h));
  return h;
}

}  // namespace detail

// p(T) = sum_w c_w T_{w_1} ... T_{w_n}, with the empty word giving the identity.
inline CMatrix eval_on_tuple(const NCPoly& p, std::span<const CMatrix> T) {
  const Index h = detail::check_tuple(p.d(), T);
  CMatrix out = CMatrix::Zero(h, h);
  for (const auto& [w, c] : p.terms()) {
    CMatrix prod = identity(h);
    for (int a : w) prod = prod * T[a - 1];
    out += c * prod;
  }
  return out;
}

// p(T) v without forming p(T).
inline CVector apply_on_vector(const NCPoly& p, std::span<const CMatrix> T, const CVector& v) {
  const Index h = detail::check_tuple(p.d(), T);
  if (v.size() != h) throw DimensionError("apply_on_vector: vector length mismatch");
  CVector out = CVector::Zero(h);
  for (const auto& [w, c] : p.terms()) {
    CVector x = v;
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = T[*it - 1] * x;
    out += c * x;
  }
  return out;
}

// Coordinates of p(e) = sum c_w e_w in C^(d^n).
inline CVector eval_on_basis(const NCPoly& p) {
  auto n = p.degree();
  if (!n) throw DomainError("eval_on_basis: polynomial is zero or inhomogeneous");
  if (*n == 0) throw DomainError("eval_on_basis: degree must be >= 1");
  CVector v = CVector::Zero(ipow(p.d(), *n));
  for (const auto& [w, c] : p.terms()) v(word_index(w, p.d())) += c;
  return v;
}

// Generators of a homogeneous two-sided ideal of the free algebra.
class IdealGens {
 public:
  explicit IdealGens(int d) : d_(d) {}
  IdealGens(int d, std::vector<NCPoly> gens) : d_(d) {
    for (auto& g : gens) add(std::move(g));
  }

  IdealGens& add(NCPoly g) {
    if (g.d() != d_) throw DimensionError("generator alphabet differs from ideal alphabet");
    if (g.is_zero()) throw DomainError("zero generator");
    auto n = g.degree();
    if (!n) throw DomainError("generator " + g.to_string() + " is not homogeneous");
    if (*n == 0) throw DomainError("generators must have degree >= 1");
    gens_.push_back(std::move(g));
    return *this;
  }

  int d() const { return d_; }
  const std::vector<NCPoly>& generators() const { return gens_; }

  std::vector<const NCPoly*> of_degree(std::size_t n) const {
    std::vector<const NCPoly*> out;
    for (const auto& g : gens_)
      if (*g.degree() == n) out.push_back(&g);
    return out;
  }

 private:
  int d_;
  std::vector<NCPoly> gens_;
};

// Spanning set {e_α ⊗ g(e) ⊗ e_β : |α| + deg g + |β| = n} of the degree-n
// part of the ideal. Linearly dependent in general.
inline std::vector<CVector> homogeneous_component(const IdealGens& I, std::size_t n) {
  std::vector<CVector> out;
  if (n == 0) return out;
  const int d = I.d();
  const Index D = ipow(d, n);
  for (const auto& g : I.generators()) {
    const std::size_t k = *g.degree();
    if (k > n) continue;
    for (std::size_t a = 0; a + k <= n; ++a) {
      const std::size_t b = n - k - a;
      const Index na = ipow(d, a), nb = ipow(d, b), ng = ipow(d, k);
      for (Index ia = 0; ia < na; ++ia)
        for (Index ib = 0; ib < nb; ++ib) {
          CVector v = CVector::Zero(D);
          for (const auto& [w, c] : g.terms()) v((ia * ng + word_index(w, d)) * nb + ib) += c;
          out.push_back(std::move(v));
        }
    }
  }
  return out;
}

}  // namespace spsys
