#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "krh/ints.hpp"

namespace krh {

struct BraidWord {
  int strands = 1;
  std::vector<int> letters;  // nonzero, |l| <= strands-1
  int length() const { return (int)letters.size(); }
};

struct ParseError : EngineError {
  using EngineError::EngineError;
};
struct RangeError : EngineError {
  using EngineError::EngineError;
};

// Accepts whitespace- or comma-separated signed integers, optionally wrapped
// in [...]. Empty input is the trivial word.
BraidWord parse_braid(const std::string& text, int strands);

// Vertices of the resolution cube are bitmasks over word positions: bit j set
// means position j keeps its crossing. Partial order per position is
// sgn(l_j)J1(j) <= sgn(l_j)J2(j), so the all-positive subword is the maximum.
struct CubeEdge {
  uint32_t lo, hi;  // lo <= hi in the poset; the cube differential maps hi -> lo
  int pos;          // 0-based position where the two selectors differ
  bool positive;    // sign of the letter at pos
  int sign_exp;     // |e| = number of selected positions strictly left of pos
};

struct Cube {
  BraidWord word;
  uint32_t top = 0;        // I_+
  std::vector<int> grv;    // per mask: edge distance from top
  std::vector<int> shift;  // per mask: n_J = 2 * (# selected negative letters)
  std::vector<CubeEdge> edges;
  int nverts() const { return 1 << word.length(); }
};

Cube cube(const BraidWord& I);

// Layered closed singular diagram D_J. Layer j in 1..n touches the strands
// c, c+1 of letter j (c = |l_j|): a singular crossing merging them when
// J(j)=1, one mark on each when J(j)=0. Bystander strands pass through every
// layer unmarked, so the arc labeling is the same for all J over a fixed
// word. Closing marks (one per strand) connect the top of the braid back to
// the bottom, so x_i = X_{0,i} and y_i = X_{n,i}.
struct SingularDiagram {
  int strands = 1;
  int nlayers = 0;
  uint32_t selector = 0;
  std::vector<int> crossing_strand;  // per layer: c = |l_j|
  std::vector<int> arcid;            // (nlayers+1)*strands flat ids
  int narcs = 0;
  int arc(int j, int l) const { return arcid[j * strands + (l - 1)]; }
  bool has_crossing(int j) const { return (selector >> (j - 1)) & 1u; }
};

SingularDiagram resolution_diagram(const BraidWord& I, uint32_t J);

}  // namespace krh
