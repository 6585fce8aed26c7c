#pragma once
#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "krh/poly.hpp"
#include "krh/smat.hpp"
#include "krh/soergel.hpp"

namespace krh {

// Permutations in one-line notation, 0-based: w sends i to p[i].
using Perm = std::vector<int>;

Perm perm_id(int r);
Perm perm_mul(const Perm& a, const Perm& b);  // (ab)(i) = a(b(i))
Perm perm_inv(const Perm& a);
int perm_len(const Perm& a);  // inversion count
Perm perm_simple(int r, int i);  // sigma_i, 1-based, swaps i, i+1
Perm perm_transp(int r, int i, int j);  // (i j), 1-based
std::vector<Perm> all_perms(int r);  // guarded r <= 6

// Lexicographically least reduced word (1-based letters, left-to-right
// product sigma_{i_1}...sigma_{i_k}); all_reduced_words for small lengths.
std::vector<int> reduced_word(const Perm& w);
std::vector<std::vector<int>> all_reduced_words(const Perm& w);

// Free Z[x_1..x_r]-module on Schubert classes S_w, deg S_w = 2 l(w).
struct FlagElement {
  int r = 1;
  std::map<Perm, Poly> c;

  explicit FlagElement(int rr = 1) : r(rr) {}
  static FlagElement unit(int r);
  static FlagElement schubert(int r, const Perm& w);
  static FlagElement from_poly(int r, const Poly& p);  // p in x only

  void add_term(const Perm& w, const Poly& p);
  FlagElement operator+(const FlagElement& o) const;
  FlagElement operator-(const FlagElement& o) const;
  FlagElement operator-() const;
  FlagElement operator*(const Int& k) const;
  FlagElement scale(const Poly& p) const;  // left Z[x]-module structure
  bool operator==(const FlagElement& o) const;
  bool is_zero() const { return c.empty(); }
  long degree() const;
  bool is_homogeneous() const;
  std::string str() const;
};

// S_{sigma_k}; zero for k < 1 or k > r-1.
FlagElement schubert_simple(int r, int k);

// Borel representative: polynomial in x (vars 0..r-1) and y (vars r..2r-1).
Poly schubert_rep(int r, const Perm& w);
Poly flag_rep(const FlagElement& z);

// Right divided difference (f - f|y_i<->y_{i+1}) / (y_i - y_{i+1}).
Poly divided_difference(int r, int i, const Poly& f);
Poly divided_difference_word(int r, const std::vector<int>& word, const Poly& f);

FlagElement newton_interpolate(int r, const Poly& f);
FlagElement multiply_flag(const FlagElement& a, const FlagElement& b);

// GKM description: w-component substitutes y_i -> x_{w(i)}.
using LocalizationTuple = std::map<Perm, Poly>;
LocalizationTuple localize(int r, const Poly& f);
LocalizationTuple localize_flag(const FlagElement& z);
bool gkm_check(int r, const LocalizationTuple& t);
// Characterization of localize(S_w) by vanishing, degree, and the signed
// product of roots at w itself.
bool schubert_conditions_check(int r, const Perm& w);

bool summation_identities(int r);

// Borel evaluation into B_J: image of z under the unit 𝔉 -> B_J.
SoergelElement flag_unit(const Ctx& ctx, const FlagElement& z);

// CH(𝔉) = 𝔉 (x) Lambda(xhat_1..xhat_r); xhat has (h, q) = (1, 1) and
// d_H(xhat_i) = x_i - y_i = S_{i-1} - S_i.
struct FlagCHElement {
  int r = 1;
  std::map<uint32_t, FlagElement> c;

  explicit FlagCHElement(int rr = 1) : r(rr) {}
  void add_term(uint32_t mask, const FlagElement& z);
  FlagCHElement operator+(const FlagCHElement& o) const;
  FlagCHElement operator-(const FlagCHElement& o) const;
  bool operator==(const FlagCHElement& o) const;
  bool is_zero() const { return c.empty(); }
};

FlagCHElement flag_dh(const FlagCHElement& z);

struct FlagCHBasis {
  int r = 1, h = 0, q = 0;
  std::vector<std::tuple<uint32_t, Perm, Monomial>> elems;
  std::map<std::tuple<uint32_t, Perm, Monomial>, int> index;
  int size() const { return (int)elems.size(); }
};

FlagCHBasis flagch_slice(int r, int h, int q);
std::vector<Int> flagch_to_vec(const FlagCHBasis& b, const FlagCHElement& z);
FlagCHElement flagch_from_vec(const FlagCHBasis& b, const std::vector<Int>& v);
SMat flagch_dh_matrix(int r, int h, int q);  // slice (h,q) -> (h-1, q+1)

// HH(𝔉) per slice (h, q) for 0 <= h <= r, q <= q_max.
std::map<std::pair<int, int>, AbGroup> hochschild_of_flag(int r, int q_max);

}  // namespace krh
