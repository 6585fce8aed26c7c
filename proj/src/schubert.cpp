#include "krh/schubert.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace krh {

Perm perm_id(int r) {
  Perm p(r);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm perm_mul(const Perm& a, const Perm& b) {
  Perm p(a.size());
  for (size_t i = 0; i < p.size(); i++) p[i] = a[b[i]];
  return p;
}

Perm perm_inv(const Perm& a) {
  Perm p(a.size());
  for (size_t i = 0; i < p.size(); i++) p[a[i]] = (int)i;
  return p;
}

int perm_len(const Perm& a) {
  int n = 0;
  for (size_t i = 0; i < a.size(); i++)
    for (size_t j = i + 1; j < a.size(); j++)
      if (a[i] > a[j]) n++;
  return n;
}

Perm perm_simple(int r, int i) { return perm_transp(r, i, i + 1); }

Perm perm_transp(int r, int i, int j) {
  if (i < 1 || j < 1 || i > r || j > r || i == j)
    throw EngineError("schubert: bad transposition");
  Perm p = perm_id(r);
  std::swap(p[i - 1], p[j - 1]);
  return p;
}

std::vector<Perm> all_perms(int r) {
  if (r < 1 || r > 6) throw EngineError("schubert: r out of supported range");
  std::vector<Perm> out;
  Perm p = perm_id(r);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> reduced_word(const Perm& w) {
  std::vector<int> word;
  Perm u = w;
  int r = (int)w.size();
  while (perm_len(u) > 0) {
    Perm inv = perm_inv(u);
    for (int i = 1; i < r; i++)
      if (inv[i - 1] > inv[i]) {  // left descent: first letter i is valid
        word.push_back(i);
        u = perm_mul(perm_simple(r, i), u);
        break;
      }
  }
  return word;
}

std::vector<std::vector<int>> all_reduced_words(const Perm& w) {
  int r = (int)w.size();
  if (perm_len(w) == 0) return {{}};
  std::vector<std::vector<int>> out;
  Perm inv = perm_inv(w);
  for (int i = 1; i < r; i++) {
    if (inv[i - 1] <= inv[i]) continue;
    for (auto tail : all_reduced_words(perm_mul(perm_simple(r, i), w))) {
      tail.insert(tail.begin(), i);
      out.push_back(std::move(tail));
    }
  }
  return out;
}

FlagElement FlagElement::unit(int r) {
  FlagElement z(r);
  z.c.emplace(perm_id(r), Poly::constant(1));
  return z;
}

FlagElement FlagElement::schubert(int r, const Perm& w) {
  FlagElement z(r);
  z.c.emplace(w, Poly::constant(1));
  return z;
}

FlagElement FlagElement::from_poly(int r, const Poly& p) {
  for (const auto& [m, cf] : p.t)
    for (size_t v = 0; v < m.e.size(); v++)
      if (m.e[v] && (int)v >= r)
        throw EngineError("schubert: coefficient uses non-x variable");
  FlagElement z(r);
  if (!p.is_zero()) z.c.emplace(perm_id(r), p);
  return z;
}

void FlagElement::add_term(const Perm& w, const Poly& p) {
  if (p.is_zero()) return;
  auto it = c.find(w);
  if (it == c.end()) {
    c.emplace(w, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) c.erase(it);
}

FlagElement FlagElement::operator+(const FlagElement& o) const {
  if (r != o.r) throw EngineError("schubert: rank mismatch");
  FlagElement z = *this;
  for (const auto& [w, p] : o.c) z.add_term(w, p);
  return z;
}

FlagElement FlagElement::operator-(const FlagElement& o) const {
  return *this + (-o);
}

FlagElement FlagElement::operator-() const {
  FlagElement z(r);
  for (const auto& [w, p] : c) z.c.emplace(w, -p);
  return z;
}

FlagElement FlagElement::operator*(const Int& k) const {
  FlagElement z(r);
  if (k == 0) return z;
  for (const auto& [w, p] : c) z.c.emplace(w, p * k);
  return z;
}

FlagElement FlagElement::scale(const Poly& p) const {
  FlagElement z(r);
  for (const auto& [w, q] : c) z.add_term(w, q * p);
  return z;
}

bool FlagElement::operator==(const FlagElement& o) const {
  return r == o.r && c == o.c;
}

long FlagElement::degree() const {
  long d = -1;
  for (const auto& [w, p] : c) d = std::max(d, p.degree() + 2 * perm_len(w));
  return d;
}

bool FlagElement::is_homogeneous() const {
  long d = -1;
  for (const auto& [w, p] : c) {
    if (!p.is_homogeneous()) return false;
    long dd = p.degree() + 2 * perm_len(w);
    if (d == -1)
      d = dd;
    else if (d != dd)
      return false;
  }
  return true;
}

std::string FlagElement::str() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, p] : c) {
    if (!first) os << " + ";
    first = false;
    os << "(" << p.str() << ")*S[";
    auto word = reduced_word(w);
    for (size_t i = 0; i < word.size(); i++) os << (i ? "," : "") << word[i];
    os << "]";
  }
  return os.str();
}

FlagElement schubert_simple(int r, int k) {
  if (k < 1 || k > r - 1) return FlagElement(r);
  return FlagElement::schubert(r, perm_simple(r, k));
}

namespace {

// reps for all w at once, keyed by r
const std::map<Perm, Poly>& rep_table(int r) {
  static std::map<int, std::map<Perm, Poly>> cache;
  auto it = cache.find(r);
  if (it != cache.end()) return it->second;
  std::map<Perm, Poly> reps;
  Perm w0(r);
  for (int i = 0; i < r; i++) w0[i] = r - 1 - i;
  Poly top = Poly::constant(1);
  for (int i = 1; i <= r; i++)
    for (int j = 1; i + j <= r; j++)
      top = top * (Poly::var(r + i - 1) - Poly::var(j - 1));
  reps.emplace(w0, top);
  auto perms = all_perms(r);
  std::sort(perms.begin(), perms.end(), [](const Perm& a, const Perm& b) {
    int la = perm_len(a), lb = perm_len(b);
    return la != lb ? la > lb : a < b;
  });
  for (const auto& w : perms) {
    auto jt = reps.find(w);
    if (jt == reps.end()) throw EngineError("schubert: rep table gap");
    for (int i = 1; i < r; i++) {
      if (w[i - 1] <= w[i]) continue;  // need a right descent
      Perm u = perm_mul(w, perm_simple(r, i));
      if (!reps.count(u)) reps.emplace(u, divided_difference(r, i, jt->second));
    }
  }
  return cache.emplace(r, std::move(reps)).first->second;
}

Poly sub_y_eq_x(int r, const Poly& f) {
  std::vector<Poly> images(2 * r);
  for (int v = 0; v < r; v++) images[v] = images[r + v] = Poly::var(v);
  return f.compose(images);
}

}  // namespace

Poly schubert_rep(int r, const Perm& w) {
  const auto& tab = rep_table(r);
  auto it = tab.find(w);
  if (it == tab.end()) throw EngineError("schubert: unknown permutation");
  return it->second;
}

Poly flag_rep(const FlagElement& z) {
  Poly f;
  for (const auto& [w, p] : z.c) f += p * schubert_rep(z.r, w);
  return f;
}

Poly divided_difference(int r, int i, const Poly& f) {
  if (i < 1 || i > r - 1) throw EngineError("schubert: bad difference index");
  Poly num = f - f.swap_vars(r + i - 1, r + i);
  if (num.is_zero()) return Poly();
  auto q = num.exact_div(Poly::var(r + i - 1) - Poly::var(r + i));
  if (!q) throw EngineError("schubert: divided difference not exact");
  return *q;
}

Poly divided_difference_word(int r, const std::vector<int>& word, const Poly& f) {
  Poly g = f;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    g = divided_difference(r, *it, g);
  return g;
}

FlagElement newton_interpolate(int r, const Poly& f) {
  FlagElement out(r);
  long d = f.degree();
  for (const auto& w : all_perms(r)) {
    if (2 * perm_len(w) > d) continue;
    Poly g = divided_difference_word(r, reduced_word(w), f);
    out.add_term(w, sub_y_eq_x(r, g));
  }
  return out;
}

FlagElement multiply_flag(const FlagElement& a, const FlagElement& b) {
  if (a.r != b.r) throw EngineError("schubert: rank mismatch");
  return newton_interpolate(a.r, flag_rep(a) * flag_rep(b));
}

LocalizationTuple localize(int r, const Poly& f) {
  LocalizationTuple t;
  for (const auto& w : all_perms(r)) {
    std::vector<Poly> images(2 * r);
    for (int v = 0; v < r; v++) {
      images[v] = Poly::var(v);
      images[r + v] = Poly::var(w[v]);  // y_i -> x_{w(i)}
    }
    t.emplace(w, f.compose(images));
  }
  return t;
}

LocalizationTuple localize_flag(const FlagElement& z) {
  return localize(z.r, flag_rep(z));
}

bool gkm_check(int r, const LocalizationTuple& t) {
  for (const auto& [v, hv] : t)
    for (int i = 1; i <= r; i++)
      for (int j = i + 1; j <= r; j++) {
        Perm v2 = perm_mul(perm_transp(r, i, j), v);
        if (!(v < v2)) continue;
        auto it = t.find(v2);
        if (it == t.end()) return false;
        Poly diff = hv - it->second;
        if (diff.is_zero()) continue;
        if (!diff.exact_div(Poly::var(i - 1) - Poly::var(j - 1))) return false;
      }
  return true;
}

bool schubert_conditions_check(int r, const Perm& w) {
  auto t = localize_flag(FlagElement::schubert(r, w));
  int lw = perm_len(w);
  for (const auto& [v, hv] : t) {
    if (!hv.is_zero() && (!hv.is_homogeneous() || hv.degree() != 2 * lw))
      return false;
    int lv = perm_len(v);
    if ((lv < lw || (lv == lw && v != w)) && !hv.is_zero()) return false;
  }
  if (!gkm_check(r, t)) return false;
  Poly prod = Poly::constant(1);
  for (int i = 1; i <= r; i++)
    for (int j = i + 1; j <= r; j++) {
      if (perm_len(perm_mul(perm_transp(r, i, j), w)) < lw)
        prod = prod * (Poly::var(j - 1) - Poly::var(i - 1));  // -(x_i - x_j)
    }
  return t.at(w) == prod;
}

bool summation_identities(int r) {
  if (r < 2) throw EngineError("schubert: need r >= 2");
  auto S = [&](int k) { return schubert_simple(r, k); };
  FlagElement l1(r), r1(r), l2(r), r2(r);
  for (int k = 1; k <= r - 1; k++) {
    l1 = l1 + S(k).scale(Poly::var(k) - Poly::var(k - 1));
    r1 = r1 + multiply_flag(S(k), S(k) - S(k + 1));
    l2 = l2 + S(k).scale(Poly::var(k, 2) - Poly::var(k - 1, 2));
  }
  for (int k = 0; k <= r - 1; k++) {
    FlagElement dk = S(k) - S(k + 1);
    FlagElement inner = dk.scale(Poly::var(k)) + multiply_flag(S(k), S(k + 1));
    r2 = r2 + multiply_flag(inner, dk);
  }
  return l1 == r1 && l2 == r2;
}

SoergelElement flag_unit(const Ctx& ctx, const FlagElement& z) {
  if (ctx->r != z.r) throw EngineError("schubert: rank mismatch");
  return act_xy(ctx, flag_rep(z));
}

void FlagCHElement::add_term(uint32_t mask, const FlagElement& z) {
  if (z.is_zero()) return;
  auto it = c.find(mask);
  if (it == c.end()) {
    c.emplace(mask, z);
    return;
  }
  it->second = it->second + z;
  if (it->second.is_zero()) c.erase(it);
}

FlagCHElement FlagCHElement::operator+(const FlagCHElement& o) const {
  if (r != o.r) throw EngineError("schubert: rank mismatch");
  FlagCHElement z = *this;
  for (const auto& [m, f] : o.c) z.add_term(m, f);
  return z;
}

FlagCHElement FlagCHElement::operator-(const FlagCHElement& o) const {
  if (r != o.r) throw EngineError("schubert: rank mismatch");
  FlagCHElement z = *this;
  for (const auto& [m, f] : o.c) z.add_term(m, -f);
  return z;
}

bool FlagCHElement::operator==(const FlagCHElement& o) const {
  return (*this - o).is_zero();
}

namespace {

// (S_{i-1} - S_i) * S_w, cached; the d_H coefficient for xhat_i.
const FlagElement& dh_coeff(int r, int i, const Perm& w) {
  static std::map<std::tuple<int, int, Perm>, FlagElement> cache;
  auto key = std::make_tuple(r, i, w);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FlagElement v = multiply_flag(schubert_simple(r, i - 1) - schubert_simple(r, i),
                                FlagElement::schubert(r, w));
  return cache.emplace(key, std::move(v)).first->second;
}

}  // namespace

FlagCHElement flag_dh(const FlagCHElement& z) {
  FlagCHElement out(z.r);
  for (const auto& [mask, f] : z.c)
    for (int i = 1; i <= z.r; i++) {
      if (!((mask >> (i - 1)) & 1u)) continue;
      int sg = std::popcount(mask & ((1u << (i - 1)) - 1)) % 2 ? -1 : 1;
      uint32_t rest = mask & ~(1u << (i - 1));
      for (const auto& [w, p] : f.c) {
        FlagElement term = dh_coeff(z.r, i, w).scale(p) * Int(sg);
        out.add_term(rest, term);
      }
    }
  return out;
}

FlagCHBasis flagch_slice(int r, int h, int q) {
  FlagCHBasis b;
  b.r = r, b.h = h, b.q = q;
  if (h < 0 || h > r || q < 0) return b;
  auto perms = all_perms(r);
  for (uint32_t mask = 0; mask < (1u << r); ++mask) {
    if (std::popcount(mask) != h) continue;
    for (const auto& w : perms) {
      int rest = q - h - 2 * perm_len(w);
      if (rest < 0 || rest % 2) continue;
      for (auto& m : monomials_of_degree(r, rest / 2)) {
        auto key = std::make_tuple(mask, w, m);
        b.index.emplace(key, (int)b.elems.size());
        b.elems.push_back(key);
      }
    }
  }
  return b;
}

std::vector<Int> flagch_to_vec(const FlagCHBasis& b, const FlagCHElement& z) {
  std::vector<Int> v(b.size(), 0);
  for (const auto& [mask, f] : z.c)
    for (const auto& [w, p] : f.c)
      for (const auto& [m, cf] : p.t) {
        auto it = b.index.find(std::make_tuple(mask, w, m));
        if (it == b.index.end())
          throw EngineError("schubert: element outside slice");
        v[it->second] = cf;
      }
  return v;
}

FlagCHElement flagch_from_vec(const FlagCHBasis& b, const std::vector<Int>& v) {
  FlagCHElement z(b.r);
  for (int i = 0; i < b.size(); i++) {
    if (v[i] == 0) continue;
    auto& [mask, w, m] = b.elems[i];
    FlagElement f(b.r);
    f.add_term(w, Poly::mono(m, v[i]));
    z.add_term(mask, f);
  }
  return z;
}

SMat flagch_dh_matrix(int r, int h, int q) {
  auto src = flagch_slice(r, h, q);
  auto dst = flagch_slice(r, h - 1, q + 1);
  SMat d(dst.size(), src.size());
  for (int j = 0; j < src.size(); j++) {
    std::vector<Int> e(src.size(), 0);
    e[j] = 1;
    auto col = flagch_to_vec(dst, flag_dh(flagch_from_vec(src, e)));
    for (int i = 0; i < dst.size(); i++)
      if (col[i] != 0) d.set(i, j, col[i]);
  }
  return d;
}

std::map<std::pair<int, int>, AbGroup> hochschild_of_flag(int r, int q_max) {
  std::map<std::pair<int, int>, AbGroup> out;
  for (int h = 0; h <= r; h++)
    for (int q = 0; q <= q_max; q++) {
      auto g = subquotient(flagch_dh_matrix(r, h + 1, q - 1),
                           flagch_dh_matrix(r, h, q))
                   .group();
      out.emplace(std::make_pair(h, q), std::move(g));
    }
  return out;
}

}  // namespace krh
