#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace krh {

using Int = boost::multiprecision::cpp_int;

inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int igcd(Int a, Int b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Symmetric remainder: a - q*m with |r| <= |m|/2 (m != 0).
inline Int smod(const Int& a, const Int& m) {
  Int r = a % m;
  Int m2 = iabs(m);
  if (2 * r > m2) r -= m2;
  if (2 * r < -m2) r += m2;
  return r;
}

// Quotient matching smod: a == q*m + smod(a,m).
inline Int sdiv(const Int& a, const Int& m) { return (a - smod(a, m)) / m; }

inline bool divides(const Int& d, const Int& a) {
  if (d == 0) return a == 0;
  return a % d == 0;
}

struct EngineError : std::runtime_error {
  explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace krh
