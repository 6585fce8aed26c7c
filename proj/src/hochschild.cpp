#include "krh/hochschild.hpp"

#include <algorithm>
#include <bit>

namespace krh {

namespace {

void check_ctx(const Ctx& a, const Ctx& b) {
  if (!a || !b || !(*a == *b))
    throw ContextMismatch("hochschild: context mismatch");
}

}  // namespace

HochschildElement HochschildElement::from_soergel(const SoergelElement& z) {
  HochschildElement h(z.ctx);
  h.add_term(0u, z);
  return h;
}

HochschildElement HochschildElement::xhat(const Ctx& c, int i) {
  if (i < 1 || i > c->r) throw EngineError("hochschild: xhat index out of range");
  HochschildElement h(c);
  h.add_term(1u << (i - 1), SoergelElement::unit(c));
  return h;
}

void HochschildElement::add_term(uint32_t mask, const SoergelElement& z) {
  if (z.is_zero()) return;
  auto it = c.find(mask);
  if (it == c.end()) {
    c.emplace(mask, z);
    return;
  }
  it->second = it->second + z;
  if (it->second.is_zero()) c.erase(it);
}

HochschildElement HochschildElement::operator+(const HochschildElement& o) const {
  check_ctx(ctx, o.ctx);
  HochschildElement z = *this;
  for (const auto& [m, s] : o.c) z.add_term(m, s);
  return z;
}

HochschildElement HochschildElement::operator-(const HochschildElement& o) const {
  return *this + (-o);
}

HochschildElement HochschildElement::operator-() const {
  HochschildElement z(ctx);
  for (const auto& [m, s] : c) z.c.emplace(m, -s);
  return z;
}

bool HochschildElement::operator==(const HochschildElement& o) const {
  return (*this - o).is_zero();
}

HochschildElement ch_mul(const HochschildElement& a, const HochschildElement& b) {
  check_ctx(a.ctx, b.ctx);
  HochschildElement z(a.ctx);
  for (const auto& [ma, sa] : a.c)
    for (const auto& [mb, sb] : b.c) {
      if (ma & mb) continue;
      // count transpositions: pairs s in ma, t in mb with s > t
      int sg = 0;
      for (int s = 0; s < 32; s++)
        if ((ma >> s) & 1u) sg += std::popcount(mb & ((1u << s) - 1));
      SoergelElement prod = sa * sb;
      z.add_term(ma | mb, sg % 2 ? -prod : prod);
    }
  return z;
}

HochschildElement hoch_dh(const HochschildElement& z) {
  const Ctx& c = z.ctx;
  HochschildElement out(c);
  for (const auto& [mask, s] : z.c)
    for (int i = 1; i <= c->r; i++) {
      if (!((mask >> (i - 1)) & 1u)) continue;
      int sg = std::popcount(mask & ((1u << (i - 1)) - 1)) % 2 ? -1 : 1;
      // x_i - y_i = -(delta-hat_i - delta-hat_{i-1})
      SoergelElement coeff = delta_hat(c, i - 1) - delta_hat(c, i);
      SoergelElement term = coeff * s;
      if (sg < 0) term = -term;
      out.add_term(mask & ~(1u << (i - 1)), term);
    }
  return out;
}

CHBasis ch_slice(const Ctx& c, int h, int q) {
  CHBasis b;
  b.ctx = c;
  b.h = h;
  b.q = q;
  if (h < 0 || h > c->r || q < h) {
    b.sb = soergel_slice(c, -1);
    return b;
  }
  for (uint32_t m = 0; m < (1u << c->r); m++)
    if (std::popcount(m) == h) b.xmasks.push_back(m);
  b.sb = soergel_slice(c, q - h);
  return b;
}

std::vector<Int> ch_to_vec(const CHBasis& b, const HochschildElement& z) {
  std::vector<Int> v(b.size(), 0);
  for (const auto& [mask, s] : z.c) {
    auto it = std::find(b.xmasks.begin(), b.xmasks.end(), mask);
    if (it == b.xmasks.end()) throw EngineError("hochschild: element outside slice");
    int off = (int)(it - b.xmasks.begin()) * b.sb.size();
    auto sv = soergel_to_vec(b.sb, s);
    for (int i = 0; i < b.sb.size(); i++) v[off + i] = sv[i];
  }
  return v;
}

HochschildElement ch_from_vec(const CHBasis& b, const std::vector<Int>& v) {
  HochschildElement z(b.ctx);
  for (size_t x = 0; x < b.xmasks.size(); x++) {
    std::vector<Int> sv(v.begin() + x * b.sb.size(),
                        v.begin() + (x + 1) * b.sb.size());
    z.add_term(b.xmasks[x], soergel_from_vec(b.sb, sv));
  }
  return z;
}

SMat dh_matrix(const Ctx& c, int h, int q) {
  auto src = ch_slice(c, h, q);
  auto dst = ch_slice(c, h - 1, q + 1);
  SMat d(dst.size(), src.size());
  for (int j = 0; j < src.size(); j++) {
    std::vector<Int> e(src.size(), 0);
    e[j] = 1;
    auto col = ch_to_vec(dst, hoch_dh(ch_from_vec(src, e)));
    for (int i = 0; i < dst.size(); i++)
      if (col[i] != 0) d.set(i, j, col[i]);
  }
  return d;
}

SMat ch_mult_matrix(const Ctx& c, const SoergelElement& a, int h, int q) {
  int da = a.is_zero() ? 0 : a.degree();
  auto src = ch_slice(c, h, q);
  auto dst = ch_slice(c, h, q + da);
  auto am = HochschildElement::from_soergel(a);
  SMat d(dst.size(), src.size());
  for (int j = 0; j < src.size(); j++) {
    std::vector<Int> e(src.size(), 0);
    e[j] = 1;
    auto col = ch_to_vec(dst, ch_mul(am, ch_from_vec(src, e)));
    for (int i = 0; i < dst.size(); i++)
      if (col[i] != 0) d.set(i, j, col[i]);
  }
  return d;
}

const HHSlice& HHGroup::at(int h, int q) const {
  auto it = slices.find({h, q});
  if (it == slices.end()) throw EngineError("hochschild: slice not computed");
  return it->second;
}

HHGroup hochschild_homology(const Ctx& c, int q_max) {
  HHGroup g;
  g.ctx = c;
  g.q_max = q_max;
  for (int h = 0; h <= c->r; h++)
    for (int q = 0; q <= q_max; q++) {
      HHSlice s;
      s.basis = ch_slice(c, h, q);
      s.sq = subquotient(dh_matrix(c, h + 1, q - 1), dh_matrix(c, h, q));
      s.group = s.sq.group();
      g.slices.emplace(std::make_pair(h, q), std::move(s));
    }
  return g;
}

SMat hh_induced_map(const HHGroup& src, const HHGroup& dst, int h, int q,
                    int dq, const std::function<SMat(int, int)>& f) {
  // cycles: d f = f d leaving (h, q); boundaries: entering from (h+1, q-1)
  SMat out_low = dh_matrix(dst.ctx, h, q + dq) * f(h, q);
  SMat low_out = f(h - 1, q + 1) * dh_matrix(src.ctx, h, q);
  if (!(out_low - low_out).is_zero())
    throw NotChainMap("hochschild: map does not commute with d_H");
  SMat in_mid = f(h, q) * dh_matrix(src.ctx, h + 1, q - 1);
  SMat mid_in = dh_matrix(dst.ctx, h + 1, q - 1 + dq) * f(h + 1, q - 1);
  if (!(in_mid - mid_in).is_zero())
    throw NotChainMap("hochschild: map does not commute with d_H");
  return induced_map(src.at(h, q).sq, dst.at(h, q + dq).sq, f(h, q));
}

}  // namespace krh
