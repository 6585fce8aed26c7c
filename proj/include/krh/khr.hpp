#pragma once
#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "krh/braid.hpp"
#include "krh/hochschild.hpp"
#include "krh/poly.hpp"
#include "krh/smat.hpp"
#include "krh/soergel.hpp"

namespace krh {

struct DivisibilityFailure : EngineError {
  using EngineError::EngineError;
};

// One-variable potential p with its divided-difference data, all exact:
// (X - Y) pi = p(X) - p(Y) and
// p(X) + p(Y) - p(Z) - p(W) = (X+Y-Z-W) u1 + (XY-ZW) u2.
// pi lives in vars (0,1) = (X,Y); u1, u2 in vars (0..3) = (X,Y,Z,W).
struct Potential {
  Poly p;
  Poly pi;
  Poly u1;
  Poly u2;
  int degp = 0;  // univariate degree; kappa has q-degree 2*degp - 1
};

// Canonical u-choice: write p(X) + p(Y) = g(X+Y, XY) through power sums,
// then u1 = (g(X+Y,XY) - g(Z+W,XY)) / (X+Y-Z-W) and
// u2 = (g(Z+W,XY) - g(Z+W,ZW)) / (XY-ZW); both quotients are polynomial.
Potential potential_data(const Poly& p);

enum class KRGenKind { closing_gamma, mark_gamma, upsilon, xi };

struct KRGen {
  KRGenKind kind = KRGenKind::closing_gamma;
  int layer = 0;   // 0 for closing marks
  int strand = 0;  // marked strand; c for upsilon/xi
  int qw = 1;      // q-weight: gamma, upsilon 1; xi 3
  Poly dplus;      // Gamma_m / Upsilon_c / Xi_c in the arc variables
};

// Exterior monomials are bitmasks over the generator slots, ascending slot
// order positive; coefficients are polynomials in the arc variables.
struct KRElement {
  std::map<uint32_t, Poly> t;

  static KRElement unit() { return from_poly(Poly::constant(1)); }
  static KRElement gen(int slot);
  static KRElement from_poly(const Poly& p);

  void add_term(uint32_t mask, const Poly& p);
  KRElement operator+(const KRElement& o) const;
  KRElement operator-(const KRElement& o) const;
  KRElement operator-() const;
  bool operator==(const KRElement& o) const { return t == o.t; }
  bool is_zero() const { return t.empty(); }
};

KRElement kr_wedge(const KRElement& a, const KRElement& b);

// K_p(D_J) = Z[X_e] (x) Lambda(gens). Slot layout: closing marks 0..r-1,
// then two slots per layer carrying the mark gammas of strands c, c+1 when
// the layer is resolved and upsilon/xi when it is singular, so slots align
// across all resolutions of one word.
struct KRVertexComplex {
  SingularDiagram dia;
  Potential pot;
  std::vector<KRGen> gens;
  KRElement kappa;  // d_- = kappa ^ -
  int r() const { return dia.strands; }
  int ngens() const { return (int)gens.size(); }
};

KRVertexComplex kr_vertex(const SingularDiagram& d, const Potential& P);
KRElement kr_kappa(const SingularDiagram& d, const Potential& P);

KRElement kr_dplus(const KRVertexComplex& K, const KRElement& z);
KRElement kr_dminus(const KRVertexComplex& K, const KRElement& z);

// Monomial basis of the (Hochschild degree, q-degree) slice.
struct KRBasis {
  int h = 0, q = 0;
  std::vector<std::pair<uint32_t, Monomial>> elems;
  std::map<std::pair<uint32_t, Monomial>, int> index;
  int size() const { return (int)elems.size(); }
};

KRBasis kr_slice(const KRVertexComplex& K, int h, int q);
std::vector<Int> kr_to_vec(const KRBasis& b, const KRElement& z);
KRElement kr_from_vec(const KRBasis& b, const std::vector<Int>& v);

SMat kr_dplus_matrix(const KRVertexComplex& K, int h, int q);   // -> (h-1, q+1)
SMat kr_dminus_matrix(const KRVertexComplex& K, int h, int q);  // -> (h+1, q+2degp-1)

AbGroup kr_hplus(const KRVertexComplex& K, int h, int q);

// Chain map from the hi vertex of a cube edge to the lo vertex, matching the
// direction of the cube differential. A-linear over everything away from the
// crossing layer; Q = (u1 + X1 u2 - pi(X2,X4)) / (X3 - X1) exactly.
struct KREdgeMap {
  KRVertexComplex src, dst;
  int layer = 0;
  bool positive = true;
  Poly Q;
  std::array<std::vector<std::pair<uint32_t, Poly>>, 4> img;  // local images
};

KREdgeMap kr_edge_map(const BraidWord& I, const CubeEdge& e, const Potential& P);
KRElement kr_edge_apply(const KREdgeMap& m, const KRElement& z);

// Quotient chain map K_p(D_J) -> CH(B_J): closing gamma_i -> xhat_i, every
// other exterior generator -> 0, arc variables -> their B_J images.
struct KRReduction {
  Ctx ctx;
  int r = 1;
  int narcs = 0;
  std::vector<SoergelElement> arc_img;  // per arc id
};

KRReduction kr_reduction(const KRVertexComplex& K);
HochschildElement kr_reduce(const KRReduction& R, const KRElement& z);

}  // namespace krh
