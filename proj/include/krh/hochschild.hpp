#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "krh/smat.hpp"
#include "krh/soergel.hpp"

namespace krh {

// CH(B) = B (x) Lambda(xhat_1..xhat_r); exterior monomials stored as sorted
// bitmasks, ascending index order positive. xhat_i has (h, q) = (1, 1).
struct HochschildElement {
  Ctx ctx;
  std::map<uint32_t, SoergelElement> c;

  HochschildElement() = default;
  explicit HochschildElement(Ctx cc) : ctx(std::move(cc)) {}

  static HochschildElement from_soergel(const SoergelElement& z);
  static HochschildElement xhat(const Ctx& c, int i);  // 1-based strand

  void add_term(uint32_t mask, const SoergelElement& z);
  HochschildElement operator+(const HochschildElement& o) const;
  HochschildElement operator-(const HochschildElement& o) const;
  HochschildElement operator-() const;
  bool operator==(const HochschildElement& o) const;
  bool is_zero() const { return c.empty(); }
};

// Graded product of CH(B); Koszul sign from moving generators past each
// other, zero on overlapping masks.
HochschildElement ch_mul(const HochschildElement& a, const HochschildElement& b);

// d_H(xhat_i) = x_i - y_i extended by the graded Leibniz rule.
HochschildElement hoch_dh(const HochschildElement& z);

struct CHBasis {
  Ctx ctx;
  int h = 0, q = 0;
  std::vector<uint32_t> xmasks;  // ascending, popcount == h
  SoergelBasis sb;               // soergel slice of degree q - h
  int size() const { return (int)xmasks.size() * sb.size(); }
};

CHBasis ch_slice(const Ctx& c, int h, int q);
std::vector<Int> ch_to_vec(const CHBasis& b, const HochschildElement& z);
HochschildElement ch_from_vec(const CHBasis& b, const std::vector<Int>& v);

SMat dh_matrix(const Ctx& c, int h, int q);  // slice (h,q) -> (h-1, q+1)
// Left multiplication by a (degree deg a) : (h,q) -> (h, q + deg a).
SMat ch_mult_matrix(const Ctx& c, const SoergelElement& a, int h, int q);

struct HHSlice {
  CHBasis basis;
  Subquotient sq;
  AbGroup group;
};

struct HHGroup {
  Ctx ctx;
  int q_max = 0;
  std::map<std::pair<int, int>, HHSlice> slices;  // (h, q), complete q <= q_max
  const HHSlice& at(int h, int q) const;
};

HHGroup hochschild_homology(const Ctx& c, int q_max);

struct NotChainMap : EngineError {
  using EngineError::EngineError;
};

// Matrix induced on homology at slice (h, q) by a chain map whose
// (h', q') component f(h', q') maps the source slice to the target slice
// (h', q' + dq); commutation with d_H is checked on the adjacent slices.
SMat hh_induced_map(const HHGroup& src, const HHGroup& dst, int h, int q,
                    int dq, const std::function<SMat(int, int)>& f);

}  // namespace krh
