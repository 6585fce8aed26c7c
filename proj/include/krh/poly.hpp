#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "krh/ints.hpp"

namespace krh {

// Exponent vector with trailing zeros trimmed; compare is degree-free lex
// (earlier variable indices dominate).
struct Monomial {
  std::vector<uint16_t> e;

  Monomial() = default;
  explicit Monomial(std::vector<uint16_t> exps) : e(std::move(exps)) { trim(); }

  void trim() {
    while (!e.empty() && e.back() == 0) e.pop_back();
  }
  uint16_t exp(size_t v) const { return v < e.size() ? e[v] : 0; }
  bool is_one() const { return e.empty(); }
  long total_degree() const {
    long d = 0;
    for (auto x : e) d += x;
    return d;
  }

  static Monomial var(size_t v, uint16_t k = 1) {
    std::vector<uint16_t> ee(v + 1, 0);
    ee[v] = k;
    return Monomial(std::move(ee));
  }

  Monomial operator*(const Monomial& o) const {
    std::vector<uint16_t> ee(std::max(e.size(), o.e.size()), 0);
    for (size_t i = 0; i < ee.size(); i++) {
      long s = (long)exp(i) + (long)o.exp(i);
      if (s > 0xffff) throw EngineError("monomial exponent overflow");
      ee[i] = (uint16_t)s;
    }
    return Monomial(std::move(ee));
  }

  // Componentwise divisibility; quotient if divisible.
  std::optional<Monomial> divide(const Monomial& d) const {
    std::vector<uint16_t> ee(std::max(e.size(), d.e.size()), 0);
    for (size_t i = 0; i < ee.size(); i++) {
      if (exp(i) < d.exp(i)) return std::nullopt;
      ee[i] = exp(i) - d.exp(i);
    }
    return Monomial(std::move(ee));
  }

  bool operator==(const Monomial& o) const { return e == o.e; }
  bool operator!=(const Monomial& o) const { return e != o.e; }
  bool operator<(const Monomial& o) const {
    size_t n = std::max(e.size(), o.e.size());
    for (size_t i = 0; i < n; i++) {
      if (exp(i) != o.exp(i)) return exp(i) < o.exp(i);
    }
    return false;
  }
};

class Poly {
 public:
  std::map<Monomial, Int> t;

  Poly() = default;
  static Poly zero() { return Poly(); }
  static Poly constant(Int c) {
    Poly p;
    if (c != 0) p.t[Monomial()] = std::move(c);
    return p;
  }
  static Poly var(size_t v, uint16_t k = 1, Int c = 1) {
    Poly p;
    if (c != 0) p.t[Monomial::var(v, k)] = std::move(c);
    return p;
  }
  static Poly mono(Monomial m, Int c) {
    Poly p;
    if (c != 0) p.t[std::move(m)] = std::move(c);
    return p;
  }

  bool is_zero() const { return t.empty(); }
  void add_term(const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto it = t.find(m);
    if (it == t.end()) {
      t.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) t.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    for (auto& [m, c] : o.t) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (auto& [m, c] : o.t) add_term(m, -c);
    return *this;
  }
  Poly operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
  }
  Poly operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
  }
  Poly operator-() const {
    Poly r;
    for (auto& [m, c] : t) r.t[m] = -c;
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (auto& [m1, c1] : t)
      for (auto& [m2, c2] : o.t) r.add_term(m1 * m2, c1 * c2);
    return r;
  }
  Poly operator*(const Int& c) const {
    Poly r;
    if (c == 0) return r;
    for (auto& [m, cc] : t) r.t[m] = cc * c;
    return r;
  }
  bool operator==(const Poly& o) const { return t == o.t; }
  bool operator!=(const Poly& o) const { return t != o.t; }
  bool operator<(const Poly& o) const { return t < o.t; }

  // Leading term in the lex order (largest monomial).
  std::pair<Monomial, Int> lead() const {
    auto it = std::prev(t.end());
    return {it->first, it->second};
  }

  // Exact division: returns quotient iff *this == q * d with no remainder
  // (single-divisor lex reduction; any reduction failure => nullopt).
  std::optional<Poly> exact_div(const Poly& d) const {
    if (d.is_zero()) throw EngineError("division by zero poly");
    Poly rem = *this, q;
    auto [dm, dc] = d.lead();
    while (!rem.is_zero()) {
      auto [rm, rc] = rem.lead();
      auto mq = rm.divide(dm);
      if (!mq || !divides(dc, rc)) return std::nullopt;
      Int cq = rc / dc;
      q.add_term(*mq, cq);
      rem -= d * Poly::mono(*mq, cq);
    }
    return q;
  }

  // Substitute images[v] for variable v (every variable of *this must have an
  // image). Images live in the caller's target ring.
  Poly compose(const std::vector<Poly>& images) const {
    Poly r;
    for (auto& [m, c] : t) {
      Poly term = Poly::constant(c);
      for (size_t v = 0; v < m.e.size(); v++) {
        for (uint16_t k = 0; k < m.e[v]; k++) {
          if (v >= images.size()) throw EngineError("compose: missing image");
          term = term * images[v];
        }
      }
      r += term;
    }
    return r;
  }

  // Substitute a single variable, keep the others.
  Poly subst(size_t v, const Poly& img) const {
    Poly r;
    for (auto& [m, c] : t) {
      uint16_t k = m.exp(v);
      Monomial rest = m;
      if (v < rest.e.size()) rest.e[v] = 0;
      rest.trim();
      Poly term = Poly::mono(rest, c);
      for (uint16_t i = 0; i < k; i++) term = term * img;
      r += term;
    }
    return r;
  }

  // Swap two variables.
  Poly swap_vars(size_t a, size_t b) const {
    Poly r;
    for (auto& [m, c] : t) {
      std::vector<uint16_t> ee(std::max({m.e.size(), a + 1, b + 1}), 0);
      for (size_t i = 0; i < m.e.size(); i++) ee[i] = m.e[i];
      std::swap(ee[a], ee[b]);
      r.add_term(Monomial(std::move(ee)), c);
    }
    return r;
  }

  // Weighted degree; weights[v] defaults to 2 when absent (generators of
  // polynomial rings here sit in cohomological degree 2 unless stated).
  long degree(const std::vector<int>* weights = nullptr) const {
    if (t.empty()) return 0;  // convention: deg 0 for the zero poly
    long best = 0;
    bool first = true;
    for (auto& [m, c] : t) {
      long d = 0;
      for (size_t v = 0; v < m.e.size(); v++) {
        int w = weights && v < weights->size() ? (*weights)[v] : 2;
        d += (long)m.e[v] * w;
      }
      if (first || d > best) best = d, first = false;
    }
    return best;
  }

  bool is_homogeneous(const std::vector<int>* weights = nullptr) const {
    bool first = true;
    long d0 = 0;
    for (auto& [m, c] : t) {
      long d = 0;
      for (size_t v = 0; v < m.e.size(); v++) {
        int w = weights && v < weights->size() ? (*weights)[v] : 2;
        d += (long)m.e[v] * w;
      }
      if (first) d0 = d, first = false;
      else if (d != d0) return false;
    }
    return true;
  }

  Int content() const {
    Int g = 0;
    for (auto& [m, c] : t) g = igcd(g, c);
    return g;
  }

  std::string str(const std::function<std::string(size_t)>& namer = {}) const;
};

std::string default_var_name(size_t v);

// All exponent vectors in nvars variables of given total degree, in the
// order produced by descending first-variable exponent.
std::vector<Monomial> monomials_of_degree(int nvars, int deg);

}  // namespace krh
