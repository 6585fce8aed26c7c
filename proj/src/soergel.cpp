#include "krh/soergel.hpp"

#include <bit>
#include <numeric>
#include <sstream>

namespace krh {

namespace {

inline int pk_get(uint64_t key, int t) { return (int)((key >> (4 * t)) & 15); }
inline uint64_t pk_set(uint64_t key, int t, int e) {
  return (key & ~(15ull << (4 * t))) | ((uint64_t)e << (4 * t));
}

void check_ctx(const Ctx& a, const Ctx& b) {
  if (!a || !b || !(*a == *b)) throw ContextMismatch("soergel: context mismatch");
}

}  // namespace

Ctx make_ctx(int r, std::vector<int> idx) {
  if (r < 1) throw EngineError("soergel: need r >= 1");
  if (idx.size() > 15) throw EngineError("soergel: word too long");
  auto c = std::make_shared<SoergelCtx>();
  c->r = r;
  for (int i : idx)
    if (i < 1 || i >= r) throw EngineError("soergel: strand index out of range");
  c->idx = std::move(idx);
  c->layers.resize(c->idx.size());
  std::iota(c->layers.begin(), c->layers.end(), 1);
  c->nlayers = c->k();
  return c;
}

Ctx subword_ctx(const BraidWord& I, uint32_t J) {
  auto c = std::make_shared<SoergelCtx>();
  c->r = I.strands;
  c->nlayers = I.length();
  for (int j = 1; j <= I.length(); ++j)
    if ((J >> (j - 1)) & 1u) {
      c->idx.push_back(std::abs(I.letters[j - 1]));
      c->layers.push_back(j);
    }
  if (c->idx.size() > 15) throw EngineError("soergel: word too long");
  return c;
}

SoergelElement SoergelElement::unit(const Ctx& c) {
  SoergelElement z(c);
  z.t.emplace(0u, Poly::constant(1));
  return z;
}

SoergelElement SoergelElement::from_poly(const Ctx& c, const Poly& p) {
  for (const auto& [m, cf] : p.t)
    for (size_t v = 0; v < m.e.size(); ++v)
      if (m.e[v] && (int)v >= c->r)
        throw EngineError("soergel: coefficient uses non-x variable");
  SoergelElement z(c);
  if (!p.is_zero()) z.t.emplace(0u, p);
  return z;
}

SoergelElement SoergelElement::delta(const Ctx& c, int t1) {
  if (t1 < 1 || t1 > c->k()) throw EngineError("soergel: delta index out of range");
  SoergelElement z(c);
  z.t.emplace(1u << (t1 - 1), Poly::constant(1));
  return z;
}

void SoergelElement::add_term(uint32_t mask, const Poly& p) {
  if (p.is_zero()) return;
  auto it = t.find(mask);
  if (it == t.end()) {
    t.emplace(mask, p);
    return;
  }
  it->second = it->second + p;
  if (it->second.is_zero()) t.erase(it);
}

SoergelElement SoergelElement::operator+(const SoergelElement& o) const {
  check_ctx(ctx, o.ctx);
  SoergelElement z = *this;
  for (const auto& [m, p] : o.t) z.add_term(m, p);
  return z;
}

SoergelElement SoergelElement::operator-(const SoergelElement& o) const {
  return *this + (-o);
}

SoergelElement SoergelElement::operator-() const {
  SoergelElement z(ctx);
  for (const auto& [m, p] : t) z.t.emplace(m, -p);
  return z;
}

SoergelElement SoergelElement::operator*(const Int& c) const {
  SoergelElement z(ctx);
  if (c == 0) return z;
  for (const auto& [m, p] : t) z.t.emplace(m, p * Poly::constant(c));
  return z;
}

SoergelElement SoergelElement::operator*(const SoergelElement& o) const {
  check_ctx(ctx, o.ctx);
  int k = ctx->k();
  // Expand into delta-exponent vectors (4 bits per t), then rewrite
  // delta_t^2 -> -[alpha_{i_t}]_t delta_t at the largest offending t.
  std::map<uint64_t, Poly> work;
  for (const auto& [ma, pa] : t)
    for (const auto& [mb, pb] : o.t) {
      uint64_t key = 0;
      for (int s = 0; s < k; ++s)
        key = pk_set(key, s, ((ma >> s) & 1u) + ((mb >> s) & 1u));
      Poly pq = pa * pb;
      auto it = work.find(key);
      if (it == work.end())
        work.emplace(key, pq);
      else
        it->second = it->second + pq;
    }
  std::vector<SoergelElement> alpha(k);
  std::vector<bool> have(k, false);
  SoergelElement out(ctx);
  while (!work.empty()) {
    auto it = std::prev(work.end());
    uint64_t key = it->first;
    Poly coeff = it->second;
    work.erase(it);
    if (coeff.is_zero()) continue;
    int bad = -1;
    for (int s = k - 1; s >= 0; --s)
      if (pk_get(key, s) >= 2) {
        bad = s;
        break;
      }
    if (bad < 0) {
      uint32_t mask = 0;
      for (int s = 0; s < k; ++s)
        if (pk_get(key, s)) mask |= 1u << s;
      out.add_term(mask, coeff);
      continue;
    }
    if (!have[bad]) {
      alpha[bad] = alpha_bracket(ctx, bad + 1);
      have[bad] = true;
    }
    uint64_t base = pk_set(key, bad, pk_get(key, bad) - 1);
    for (const auto& [am, ap] : alpha[bad].t) {
      uint64_t nk = base;
      for (int s = 0; s < k; ++s)
        if ((am >> s) & 1u) nk = pk_set(nk, s, pk_get(nk, s) + 1);
      Poly add = -(coeff * ap);
      auto jt = work.find(nk);
      if (jt == work.end())
        work.emplace(nk, add);
      else
        jt->second = jt->second + add;
    }
  }
  return out;
}

bool SoergelElement::operator==(const SoergelElement& o) const {
  return (*this - o).is_zero();
}

int SoergelElement::degree() const {
  long d = -1;
  for (const auto& [m, p] : t)
    d = std::max(d, p.degree() + 2 * std::popcount(m));
  return (int)d;
}

bool SoergelElement::is_homogeneous() const {
  long d = -2;
  for (const auto& [m, p] : t) {
    if (!p.is_homogeneous()) return false;
    long dd = p.degree() + 2 * std::popcount(m);
    if (d == -2)
      d = dd;
    else if (d != dd)
      return false;
  }
  return true;
}

std::string SoergelElement::str() const {
  if (t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, p] : t) {
    if (!first) os << " + ";
    first = false;
    os << "(" << p.str() << ")";
    for (int s = 0; s < 32; ++s)
      if ((m >> s) & 1u) os << "*d" << (s + 1);
  }
  return os.str();
}

SoergelElement alpha_bracket(const Ctx& c, int t1) {
  if (t1 < 1 || t1 > c->k()) throw EngineError("soergel: alpha index out of range");
  int i = c->idx[t1 - 1];
  SoergelElement z(c);
  z.add_term(0u, Poly::var(i - 1) - Poly::var(i));
  for (int s = 0; s < t1 - 1; ++s) {
    if (c->idx[s] == i)
      z.add_term(1u << s, Poly::constant(2));
    else if (std::abs(c->idx[s] - i) == 1)
      z.add_term(1u << s, Poly::constant(-1));
  }
  return z;
}

SoergelElement delta_hat(const Ctx& c, int i) {
  SoergelElement z(c);
  for (int s = 0; s < c->k(); ++s)
    if (c->idx[s] == i) z.add_term(1u << s, Poly::constant(1));
  return z;
}

SoergelElement y_gen(const Ctx& c, int i) {
  if (i < 1 || i > c->r) throw EngineError("soergel: y index out of range");
  SoergelElement z = delta_hat(c, i) - delta_hat(c, i - 1);
  z.add_term(0u, Poly::var(i - 1));
  return z;
}

SoergelElement right_action(const SoergelElement& z, int i) {
  return y_gen(z.ctx, i) * z;
}

SoergelElement eval_poly(const Ctx& c, const Poly& f,
                         const std::function<SoergelElement(int)>& image) {
  SoergelElement out = SoergelElement::zero(c);
  std::map<int, std::vector<SoergelElement>> pows;  // pows[v][e] = image^e
  for (const auto& [m, cf] : f.t) {
    SoergelElement acc = SoergelElement::unit(c) * cf;
    for (size_t v = 0; v < m.e.size(); ++v) {
      int e = m.e[v];
      if (!e) continue;
      auto& pv = pows[(int)v];
      if (pv.empty()) pv.push_back(SoergelElement::unit(c));
      while ((int)pv.size() <= e) {
        if (pv.size() == 1)
          pv.push_back(image((int)v));
        else
          pv.push_back(pv.back() * pv[1]);
      }
      acc = acc * pv[e];
    }
    out = out + acc;
  }
  return out;
}

SoergelElement act_xy(const Ctx& c, const Poly& f) {
  return eval_poly(c, f, [&](int v) {
    if (v < c->r) return SoergelElement::from_poly(c, Poly::var(v));
    if (v < 2 * c->r) return y_gen(c, v - c->r + 1);
    throw EngineError("soergel: act_xy variable out of range");
  });
}

Poly x_form_map(const SoergelElement& z) {
  const auto& c = *z.ctx;
  Poly out;
  for (const auto& [mask, p] : z.t) {
    Poly term = p;  // x_l already has the X_{0,l} variable id
    for (int s = 0; s < c.k(); ++s)
      if ((mask >> s) & 1u) {
        int j = c.layers[s], i = c.idx[s];
        term = term * (Poly::var(arcvar(z.ctx, j, i)) - Poly::var(arcvar(z.ctx, j - 1, i)));
      }
    out = out + term;
  }
  return out;
}

SoergelElement eliminate_arcs(const Ctx& c, const Poly& f) {
  auto dhat_upto = [&](int i, int j) {  // delta-hat_i^{<=j}
    SoergelElement z(c);
    if (i >= 1 && i < c->r)
      for (int s = 0; s < c->k(); ++s)
        if (c->idx[s] == i && c->layers[s] <= j) z.add_term(1u << s, Poly::constant(1));
    return z;
  };
  return eval_poly(c, f, [&](int v) {
    int j = v / c->r, l = v % c->r + 1;
    if (j > c->nlayers) throw EngineError("soergel: arc variable out of range");
    SoergelElement z = dhat_upto(l, j) - dhat_upto(l - 1, j);
    z.add_term(0u, Poly::var(l - 1));
    return z;
  });
}

SoergelBasis soergel_slice(const Ctx& c, int q) {
  SoergelBasis b;
  b.ctx = c;
  if (q < 0 || q % 2) return b;
  for (uint32_t mask = 0; mask < (1u << c->k()); ++mask) {
    int rest = q / 2 - std::popcount(mask);
    if (rest < 0) continue;
    for (auto& m : monomials_of_degree(c->r, rest)) {
      b.index.emplace(std::make_pair(mask, m), (int)b.elems.size());
      b.elems.emplace_back(mask, m);
    }
  }
  return b;
}

std::vector<Int> soergel_to_vec(const SoergelBasis& b, const SoergelElement& z) {
  check_ctx(b.ctx, z.ctx);
  std::vector<Int> v(b.size(), 0);
  for (const auto& [mask, p] : z.t)
    for (const auto& [m, cf] : p.t) {
      auto it = b.index.find(std::make_pair(mask, m));
      if (it == b.index.end()) throw EngineError("soergel: element outside slice");
      v[it->second] = cf;
    }
  return v;
}

SoergelElement soergel_from_vec(const SoergelBasis& b, const std::vector<Int>& v) {
  SoergelElement z(b.ctx);
  for (int i = 0; i < b.size(); ++i) {
    if (v[i] == 0) continue;
    z.add_term(b.elems[i].first, Poly::mono(b.elems[i].second, v[i]));
  }
  return z;
}

}  // namespace krh
