#include "krh/khr.hpp"

#include <bit>
#include <cstdlib>
#include <functional>

namespace krh {

namespace {

int par_below(uint32_t mask, int slot) {
  return std::popcount(mask & ((1u << slot) - 1u)) & 1;
}

// Parity of moving the generators of b past those of a into one ascending word.
int wedge_par(uint32_t a, uint32_t b) {
  int p = 0;
  for (uint32_t m = b; m; m &= m - 1) {
    int t = std::countr_zero(m);
    p ^= std::popcount(a >> (t + 1)) & 1;
  }
  return p;
}

const Poly& pow_of(std::vector<Poly>& cache, const Poly& base, int e) {
  if (cache.empty()) cache.push_back(Poly::constant(1));
  while ((int)cache.size() <= e) cache.push_back(cache.back() * base);
  return cache[e];
}

}  // namespace

Potential potential_data(const Poly& p) {
  int deg = 0;
  for (const auto& [m, c] : p.t) {
    if (m.e.size() > 1) throw EngineError("khr: potential must be univariate");
    deg = std::max(deg, (int)m.exp(0));
  }
  Potential P;
  P.p = p;
  P.degp = deg;
  const Poly X = Poly::var(0), Y = Poly::var(1), Z = Poly::var(2), W = Poly::var(3);
  for (const auto& [m, c] : p.t) {
    int d = m.exp(0);
    for (int s = 0; s + 1 <= d; s++)
      P.pi.add_term(Monomial({(uint16_t)s, (uint16_t)(d - 1 - s)}), c);
  }
  // p(X) + p(Y) = g(e1, e2) via power sums
  std::vector<Poly> ps = {Poly::constant(2), Poly::var(0)};
  Poly g;
  for (const auto& [m, c] : p.t) {
    int d = m.exp(0);
    while ((int)ps.size() <= d)
      ps.push_back(Poly::var(0) * ps[ps.size() - 1] - Poly::var(1) * ps[ps.size() - 2]);
    g += ps[d] * c;
  }
  const Poly A = X + Y, B = Z + W, C = X * Y, D = Z * W;
  std::vector<Poly> pa, pb, pc, pd;
  for (const auto& [m, c] : g.t) {
    int a = m.exp(0), b = m.exp(1);
    for (int s = 0; s + 1 <= a; s++)
      P.u1 += pow_of(pa, A, s) * pow_of(pb, B, a - 1 - s) * pow_of(pc, C, b) * c;
    for (int s = 0; s + 1 <= b; s++)
      P.u2 += pow_of(pb, B, a) * pow_of(pc, C, s) * pow_of(pd, D, b - 1 - s) * c;
  }
  Poly py = p.compose({Y}), pz = p.compose({Z}), pw = p.compose({W});
  if ((X - Y) * P.pi != p - py) throw EngineError("khr: pi identity failed");
  if ((A - B) * P.u1 + (C - D) * P.u2 != p + py - pz - pw)
    throw EngineError("khr: u identity failed");
  return P;
}

KRElement KRElement::gen(int slot) {
  KRElement z;
  z.t.emplace(1u << slot, Poly::constant(1));
  return z;
}

KRElement KRElement::from_poly(const Poly& p) {
  KRElement z;
  if (!p.is_zero()) z.t.emplace(0u, p);
  return z;
}

void KRElement::add_term(uint32_t mask, const Poly& p) {
  if (p.is_zero()) return;
  auto it = t.find(mask);
  if (it == t.end()) {
    t.emplace(mask, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) t.erase(it);
}

KRElement KRElement::operator+(const KRElement& o) const {
  KRElement r = *this;
  for (const auto& [m, p] : o.t) r.add_term(m, p);
  return r;
}

KRElement KRElement::operator-(const KRElement& o) const {
  KRElement r = *this;
  for (const auto& [m, p] : o.t) r.add_term(m, -p);
  return r;
}

KRElement KRElement::operator-() const {
  KRElement r;
  for (const auto& [m, p] : t) r.t.emplace(m, -p);
  return r;
}

KRElement kr_wedge(const KRElement& a, const KRElement& b) {
  KRElement out;
  for (const auto& [ma, pa] : a.t)
    for (const auto& [mb, pb] : b.t) {
      if (ma & mb) continue;
      Poly p = pa * pb;
      if (wedge_par(ma, mb)) p = -p;
      out.add_term(ma | mb, p);
    }
  return out;
}

KRVertexComplex kr_vertex(const SingularDiagram& d, const Potential& P) {
  int r = d.strands, n = d.nlayers;
  if (r + 2 * n > 28) throw EngineError("khr: diagram too large");
  KRVertexComplex K;
  K.dia = d;
  K.pot = P;
  auto V = [&](int j, int l) { return Poly::var(d.arc(j, l)); };
  for (int i = 1; i <= r; i++)
    K.gens.push_back({KRGenKind::closing_gamma, 0, i, 1, V(0, i) - V(n, i)});
  for (int j = 1; j <= n; j++) {
    int c = d.crossing_strand[j - 1];
    Poly i1 = V(j - 1, c), i2 = V(j - 1, c + 1), o1 = V(j, c), o2 = V(j, c + 1);
    if (d.has_crossing(j)) {
      K.gens.push_back({KRGenKind::upsilon, j, c, 1, o1 + o2 - i1 - i2});
      K.gens.push_back({KRGenKind::xi, j, c, 3, o1 * o2 - i1 * i2});
    } else {
      K.gens.push_back({KRGenKind::mark_gamma, j, c, 1, o1 - i1});
      K.gens.push_back({KRGenKind::mark_gamma, j, c + 1, 1, o2 - i2});
    }
  }
  for (int i = 1; i <= r; i++)
    K.kappa.add_term(1u << (i - 1), P.pi.compose({V(0, i), V(n, i)}));
  for (int j = 1; j <= n; j++) {
    int c = d.crossing_strand[j - 1];
    int s0 = r + 2 * (j - 1);
    if (d.has_crossing(j)) {
      std::vector<Poly> im = {V(j, c), V(j, c + 1), V(j - 1, c), V(j - 1, c + 1)};
      K.kappa.add_term(1u << s0, P.u1.compose(im));
      K.kappa.add_term(1u << (s0 + 1), P.u2.compose(im));
    } else {
      K.kappa.add_term(1u << s0, P.pi.compose({V(j, c), V(j - 1, c)}));
      K.kappa.add_term(1u << (s0 + 1), P.pi.compose({V(j, c + 1), V(j - 1, c + 1)}));
    }
  }
  return K;
}

KRElement kr_kappa(const SingularDiagram& d, const Potential& P) {
  return kr_vertex(d, P).kappa;
}

KRElement kr_dplus(const KRVertexComplex& K, const KRElement& z) {
  KRElement out;
  for (const auto& [mask, p] : z.t)
    for (uint32_t m = mask; m; m &= m - 1) {
      int t = std::countr_zero(m);
      Poly term = K.gens[t].dplus * p;
      if (par_below(mask, t)) term = -term;
      out.add_term(mask ^ (1u << t), term);
    }
  return out;
}

KRElement kr_dminus(const KRVertexComplex& K, const KRElement& z) {
  return kr_wedge(K.kappa, z);
}

KRBasis kr_slice(const KRVertexComplex& K, int h, int q) {
  KRBasis b;
  b.h = h;
  b.q = q;
  if (h < 0 || h > K.ngens() || q < 0) return b;
  for (uint32_t mask = 0; mask < (1u << K.ngens()); mask++) {
    if (std::popcount(mask) != h) continue;
    int qw = 0;
    for (uint32_t m = mask; m; m &= m - 1) qw += K.gens[std::countr_zero(m)].qw;
    int rest = q - qw;
    if (rest < 0 || rest % 2) continue;
    for (auto& mono : monomials_of_degree(K.dia.narcs, rest / 2)) {
      b.index.emplace(std::make_pair(mask, mono), (int)b.elems.size());
      b.elems.emplace_back(mask, mono);
    }
  }
  return b;
}

std::vector<Int> kr_to_vec(const KRBasis& b, const KRElement& z) {
  std::vector<Int> v(b.size(), 0);
  for (const auto& [mask, p] : z.t)
    for (const auto& [m, cf] : p.t) {
      auto it = b.index.find(std::make_pair(mask, m));
      if (it == b.index.end()) throw EngineError("khr: element outside slice");
      v[it->second] = cf;
    }
  return v;
}

KRElement kr_from_vec(const KRBasis& b, const std::vector<Int>& v) {
  KRElement z;
  for (int i = 0; i < b.size(); i++) {
    if (v[i] == 0) continue;
    z.add_term(b.elems[i].first, Poly::mono(b.elems[i].second, v[i]));
  }
  return z;
}

SMat kr_dplus_matrix(const KRVertexComplex& K, int h, int q) {
  auto src = kr_slice(K, h, q);
  auto dst = kr_slice(K, h - 1, q + 1);
  SMat d(dst.size(), src.size());
  for (int j = 0; j < src.size(); j++) {
    KRElement z;
    z.add_term(src.elems[j].first, Poly::mono(src.elems[j].second, 1));
    auto col = kr_to_vec(dst, kr_dplus(K, z));
    for (int i = 0; i < dst.size(); i++)
      if (col[i] != 0) d.set(i, j, col[i]);
  }
  return d;
}

SMat kr_dminus_matrix(const KRVertexComplex& K, int h, int q) {
  auto src = kr_slice(K, h, q);
  auto dst = kr_slice(K, h + 1, q + 2 * K.pot.degp - 1);
  SMat d(dst.size(), src.size());
  for (int j = 0; j < src.size(); j++) {
    KRElement z;
    z.add_term(src.elems[j].first, Poly::mono(src.elems[j].second, 1));
    auto col = kr_to_vec(dst, kr_dminus(K, z));
    for (int i = 0; i < dst.size(); i++)
      if (col[i] != 0) d.set(i, j, col[i]);
  }
  return d;
}

AbGroup kr_hplus(const KRVertexComplex& K, int h, int q) {
  return subquotient(kr_dplus_matrix(K, h + 1, q - 1), kr_dplus_matrix(K, h, q)).group();
}

KREdgeMap kr_edge_map(const BraidWord& I, const CubeEdge& e, const Potential& P) {
  KREdgeMap em;
  em.layer = e.pos + 1;
  em.positive = e.positive;
  auto dhi = resolution_diagram(I, e.hi);
  auto dlo = resolution_diagram(I, e.lo);
  if (dhi.arcid != dlo.arcid) throw EngineError("khr: edge arc labelings differ");
  em.src = kr_vertex(dhi, P);
  em.dst = kr_vertex(dlo, P);
  int c = std::abs(I.letters[e.pos]), j = em.layer;
  int s0 = dhi.strands + 2 * (j - 1);
  KRGenKind want = em.positive ? KRGenKind::upsilon : KRGenKind::mark_gamma;
  if (em.src.gens[s0].kind != want) throw EngineError("khr: edge orientation mismatch");
  Poly P1 = Poly::var(dhi.arc(j - 1, c)), P2 = Poly::var(dhi.arc(j - 1, c + 1));
  Poly P3 = Poly::var(dhi.arc(j, c)), P4 = Poly::var(dhi.arc(j, c + 1));
  Poly u1c = P.u1.compose({P3, P4, P1, P2});
  Poly u2c = P.u2.compose({P3, P4, P1, P2});
  Poly num = u1c + P1 * u2c - P.pi.compose({P2, P4});
  auto qq = num.exact_div(P3 - P1);
  if (!qq) throw DivisibilityFailure("khr: edge correction not divisible by X3 - X1");
  em.Q = *qq;
  if (em.positive) {
    em.img[0] = {{0u, Poly::constant(1)}, {3u, em.Q}};
    em.img[1] = {{1u, Poly::constant(1)}, {2u, Poly::constant(1)}};
    em.img[2] = {{1u, P4}, {2u, P1}};
    em.img[3] = {{3u, P1 - P4}};
  } else {
    em.img[0] = {{0u, P1 - P4}, {3u, -em.Q}};
    em.img[1] = {{1u, P1}, {2u, Poly::constant(-1)}};
    em.img[2] = {{1u, -P4}, {2u, Poly::constant(1)}};
    em.img[3] = {{3u, Poly::constant(1)}};
  }
  return em;
}

KRElement kr_edge_apply(const KREdgeMap& m, const KRElement& z) {
  int s0 = m.src.r() + 2 * (m.layer - 1);
  KRElement out;
  for (const auto& [mask, p] : z.t) {
    uint32_t b = (mask >> s0) & 3u;
    uint32_t outer = mask & ~(3u << s0);
    int par = 0;
    if (b & 1) par ^= std::popcount(outer >> (s0 + 1)) & 1;
    if (b & 2) par ^= std::popcount(outer >> (s0 + 2)) & 1;
    for (const auto& [bl, cf] : m.img[b]) {
      int par2 = par;
      if (bl & 1) par2 ^= std::popcount(outer >> (s0 + 1)) & 1;
      if (bl & 2) par2 ^= std::popcount(outer >> (s0 + 2)) & 1;
      Poly q = p * cf;
      if (par2) q = -q;
      out.add_term(outer | (bl << s0), q);
    }
  }
  return out;
}

KRReduction kr_reduction(const KRVertexComplex& K) {
  const auto& d = K.dia;
  auto c = std::make_shared<SoergelCtx>();
  c->r = d.strands;
  c->nlayers = d.nlayers;
  for (int j = 1; j <= d.nlayers; j++)
    if (d.has_crossing(j)) {
      c->idx.push_back(d.crossing_strand[j - 1]);
      c->layers.push_back(j);
    }
  if (c->idx.size() > 15) throw EngineError("khr: word too long");
  KRReduction R;
  R.ctx = c;
  R.r = d.strands;
  R.narcs = d.narcs;
  R.arc_img.assign(d.narcs, SoergelElement());
  std::vector<char> seen(d.narcs, 0);
  for (int j = 0; j <= d.nlayers; j++)
    for (int l = 1; l <= d.strands; l++) {
      int a = d.arc(j, l);
      if (seen[a]) continue;
      seen[a] = 1;
      R.arc_img[a] = eliminate_arcs(R.ctx, Poly::var(arcvar(R.ctx, j, l)));
    }
  return R;
}

HochschildElement kr_reduce(const KRReduction& R, const KRElement& z) {
  HochschildElement out(R.ctx);
  uint32_t closing = (1u << R.r) - 1u;
  for (const auto& [mask, p] : z.t) {
    if (mask & ~closing) continue;
    SoergelElement s = eval_poly(R.ctx, p, [&](int v) {
      if (v < 0 || v >= R.narcs) throw EngineError("khr: arc variable out of range");
      return R.arc_img[v];
    });
    if (!s.is_zero()) out.add_term(mask, s);
  }
  return out;
}

}  // namespace krh
