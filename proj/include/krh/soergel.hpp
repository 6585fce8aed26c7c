#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "krh/braid.hpp"
#include "krh/poly.hpp"

namespace krh {

// Context (r, J): strand indices i_t of the selected crossings in layer
// order, with parent layers j_t retained for the arc-variable presentation.
struct SoergelCtx {
  int r = 1;
  std::vector<int> idx;     // i_t, 1-based strand indices
  std::vector<int> layers;  // j_t, 1-based increasing parent layers
  int nlayers = 0;          // parent word length
  int k() const { return (int)idx.size(); }
  bool operator==(const SoergelCtx&) const = default;
};

using Ctx = std::shared_ptr<const SoergelCtx>;

Ctx make_ctx(int r, std::vector<int> idx);  // standalone word: layers 1..k
Ctx subword_ctx(const BraidWord& I, uint32_t J);

struct ContextMismatch : EngineError {
  using EngineError::EngineError;
};

// Element of B_J in delta normal form: squarefree delta monomials (bitmask
// over t = 0..k-1) with polynomial coefficients in x_1..x_r (vars 0..r-1).
// deg x_i = deg delta_t = 2.
class SoergelElement {
 public:
  Ctx ctx;
  std::map<uint32_t, Poly> t;

  SoergelElement() = default;
  explicit SoergelElement(Ctx c) : ctx(std::move(c)) {}

  static SoergelElement zero(Ctx c) { return SoergelElement(std::move(c)); }
  static SoergelElement unit(const Ctx& c);
  static SoergelElement from_poly(const Ctx& c, const Poly& p);  // x-polynomial
  static SoergelElement delta(const Ctx& c, int t1);             // 1-based t

  void add_term(uint32_t mask, const Poly& p);
  SoergelElement operator+(const SoergelElement& o) const;
  SoergelElement operator-(const SoergelElement& o) const;
  SoergelElement operator-() const;
  SoergelElement operator*(const SoergelElement& o) const;  // with reduction
  SoergelElement operator*(const Int& c) const;
  bool operator==(const SoergelElement& o) const;
  bool is_zero() const { return t.empty(); }

  int degree() const;  // max over terms; -1 for zero
  bool is_homogeneous() const;
  std::string str() const;
};

// [alpha_{i_t}]_t = x_{i_t} - x_{i_t+1} + 2 sum_{s<t, i_s=i_t} delta_s
//                 - sum_{s<t, |i_s-i_t|=1} delta_s   (t 1-based)
SoergelElement alpha_bracket(const Ctx& c, int t1);

// delta-hat_i = sum over t with i_t = i of delta_t (zero out of range).
SoergelElement delta_hat(const Ctx& c, int i);

// Right action generator y_i = x_i + delta-hat_i - delta-hat_{i-1}.
SoergelElement y_gen(const Ctx& c, int i);
SoergelElement right_action(const SoergelElement& z, int i);  // y_i * z

// Evaluate f(x_1..x_r, y_1..y_r) in B_J; vars 0..r-1 are x, r..2r-1 are y.
SoergelElement act_xy(const Ctx& c, const Poly& f);

// Evaluate a polynomial with arbitrary variable images.
SoergelElement eval_poly(const Ctx& c, const Poly& f,
                         const std::function<SoergelElement(int)>& image);

// Arc-variable presentation: X_{j,l} gets polynomial variable j*r + (l-1),
// j = 0..nlayers, l = 1..r; so x_l = X_{0,l} keeps its variable id.
inline int arcvar(const Ctx& c, int j, int l) { return j * c->r + (l - 1); }

// delta_t |-> X_{j_t, i_t} - X_{j_t - 1, i_t}, coefficients to layer 0.
Poly x_form_map(const SoergelElement& z);

// Inverse: X_{j,l} |-> x_l + delta-hat_l^{<=j} - delta-hat_{l-1}^{<=j};
// kills the mark and crossing relations of the arc presentation.
SoergelElement eliminate_arcs(const Ctx& c, const Poly& f);

// Monomial basis of the degree-q slice of B_J: (delta mask, x-monomial).
struct SoergelBasis {
  Ctx ctx;
  std::vector<std::pair<uint32_t, Monomial>> elems;
  std::map<std::pair<uint32_t, Monomial>, int> index;
  int size() const { return (int)elems.size(); }
};

SoergelBasis soergel_slice(const Ctx& c, int q);
std::vector<Int> soergel_to_vec(const SoergelBasis& b, const SoergelElement& z);
SoergelElement soergel_from_vec(const SoergelBasis& b, const std::vector<Int>& v);

}  // namespace krh
