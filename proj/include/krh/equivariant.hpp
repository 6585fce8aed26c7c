#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "krh/braid.hpp"
#include "krh/hochschild.hpp"
#include "krh/schubert.hpp"

namespace krh {

// Coefficient ring Z[b_1..b_k] truncated at b-degree B; |b_i| = -2i.
struct TruncatedCoeffs {
  int k = 2;
  int B = 4;
  TruncatedCoeffs() = default;
  TruncatedCoeffs(int kk, int BB);
};

struct BetaUnavailable : EngineError {
  using EngineError::EngineError;
};
struct LiftNotFound : EngineError {
  using EngineError::EngineError;
};
struct WindowTooSmall : EngineError {
  using EngineError::EngineError;
};

enum class BetaProvenance { closed_form, lifted, universal };

// Odd class in CH(𝔉): a d_H-cycle of Hochschild degree 1 whose localization
// is sum_i x_i^n xhat_i.  The universal flavor stores the coefficient of each
// b_i (i = 1..k) separately; n then holds k.
struct BetaClass {
  int n = 0;
  int r = 1;
  BetaProvenance prov = BetaProvenance::closed_form;
  FlagCHElement rep;
  std::vector<FlagCHElement> b_comp;

  // Cohomological degree 2n+1 (per component for the universal class).
  int degree() const { return 2 * n + 1; }
};

// Localization of a CH(𝔉) element, coefficientwise through the GKM map;
// only the identity component survives on Schubert classes.
std::map<uint32_t, Poly> flagch_localize(const FlagCHElement& z);

// d_H-cycle and localization-image checks for a candidate class.
bool beta_class_valid(const BetaClass& b);

BetaClass beta_closed_form(int n, int r);  // n <= 2
// Integer lift in the degree-(2n+1) slice; window must reach 2n+1.
// The representative is reduced to the canonical coset representative
// modulo d_H-boundaries, so repeated runs agree.
BetaClass beta_lift(int n, int r, int window);
// sum b_i beta_i for 1 <= i <= k, closed forms below 3 and lifts above.
BetaClass beta_universal(int k, int r);

// Pull back along the unit 𝔉 -> B_J, coefficientwise.
HochschildElement flagch_unit(const Ctx& c, const FlagCHElement& z);

// Matrix of left wedge by a on CH(B_J): slice (h, q) -> (h + ha, q + qa)
// where a is homogeneous of bidegree (ha, qa).
SMat ch_wedge_matrix(const Ctx& c, const HochschildElement& a, int ha, int qa,
                     int h, int q);

// Matrix induced by wedging with the pullback of b.rep on HH slices:
// (h, q) -> (h + 1, q + 2n + 1).
SMat beta_hh_matrix(const Ctx& c, const HHGroup& hh, const BetaClass& b, int h,
                    int q);

// H(HH(B_J), beta_n) per slice (h, q), q <= q_max.  Slices are final for
// q <= q_max - (2n + 1).
struct TwistedSlice {
  Subquotient sq;  // ambient = live HH generators at (h, q)
  AbGroup group;
};
struct TwistedHomology {
  Ctx ctx;
  BetaClass beta;
  int q_max = 0;
  std::map<std::pair<int, int>, TwistedSlice> slices;
  const TwistedSlice& at(int h, int q) const;
};
TwistedHomology beta_twisted_homology(const Ctx& c, const BetaClass& b,
                                      int q_max);

// Homology of (HH(B_J) (x) Z[b_1..b_k], beta_u) per (b-degree M, h, t) with
// t the total cohomological degree q - 2 sum i*m_i.  Groups are exact for
// M <= B - 1; the b-degree-B layer only feeds differentials.
struct UnivWordHomology {
  int k = 2, B = 4, r = 1;
  int t_max = 0;
  std::map<std::tuple<int, int, int>, AbGroup> groups;  // (M, h, t), nonzero
};
UnivWordHomology universal_word_homology(const Ctx& c, const BetaClass& bu,
                                         int B, int t_max);

// Parity / collapse certificate for a single positive word: every nonzero
// slice of the b-truncated twisted homology sits in top Hochschild degree r
// and total degree congruent to r mod 2, which leaves no room for d_{>=2}.
struct DegenerationReport {
  bool parity_ok = true;
  bool concentrated_top = true;
  bool collapse_forced = true;
  UnivWordHomology slices;
};
DegenerationReport degeneration_check(const BraidWord& w, int k, int B,
                                      int t_max);

}  // namespace krh
