#include "krh/poly.hpp"

#include <sstream>

namespace krh {

std::string default_var_name(size_t v) {
  std::ostringstream os;
  os << "x" << v;
  return os.str();
}

std::string Poly::str(const std::function<std::string(size_t)>& namer) const {
  if (t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // print highest terms first for readability
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    const auto& [m, c] = *it;
    Int a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    bool unit = (a == 1) && !m.is_one();
    if (!unit) os << a;
    bool firstv = true;
    for (size_t v = 0; v < m.e.size(); v++) {
      if (m.e[v] == 0) continue;
      if (!firstv || !unit) os << "*";
      firstv = false;
      os << (namer ? namer(v) : default_var_name(v));
      if (m.e[v] > 1) os << "^" << (int)m.e[v];
    }
    first = false;
  }
  return os.str();
}

namespace {

void enum_rec(int nvars, int deg, int v, std::vector<uint16_t>& cur,
              std::vector<Monomial>& out) {
  if (v == nvars - 1) {
    cur[v] = (uint16_t)deg;
    out.emplace_back(cur);
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[v] = (uint16_t)e;
    enum_rec(nvars, deg - e, v + 1, cur, out);
  }
  cur[v] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int deg) {
  std::vector<Monomial> out;
  if (deg < 0) return out;
  if (nvars < 1) {
    if (deg == 0) out.emplace_back();
    return out;
  }
  std::vector<uint16_t> cur(nvars, 0);
  enum_rec(nvars, deg, 0, cur, out);
  return out;
}

}  // namespace krh
