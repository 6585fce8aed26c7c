#pragma once

#include "krh/braid.hpp"
#include "krh/hochschild.hpp"
#include "krh/equivariant.hpp"
#include "krh/khr.hpp"

#include <map>
#include <tuple>
#include <optional>
#include <vector>
#include <string>

namespace krh {

// One vertex of the resolution cube, carrying the Hochschild homology of its
// Bott-Samelson bimodule computed up to q_cap.
struct CubeVertexCH {
  uint32_t mask = 0;
  Ctx ctx;
  int grv = 0;      // vertical degree: distance below the wide resolution
  int n_shift = 0;  // internal q-shift at this vertex
  int q_cap = 0;
  HHGroup hh;
};

struct CubeComplexCH {
  BraidWord word;
  Cube shape;
  int q_window = 0;
  std::map<uint32_t, CubeVertexCH> verts;

  const CubeVertexCH& at(uint32_t mask) const;
};

// Resolve every vertex of the cube of `w` and compute Hochschild homology at
// each, with per-vertex cap q_window + n_shift + q_slack.  Honors KRH_JOBS.
CubeComplexCH build_cube_ch(const BraidWord& w, int q_window, int q_slack = 0);

// The edge map on Hochschild chains (positive: delta-kill, q-degree 0;
// negative: lift then multiply, q-degree +2).
HochschildElement cube_edge_apply(const CubeComplexCH& cc, const CubeEdge& e,
                                  const HochschildElement& z);
SMat cube_edge_matrix(const CubeComplexCH& cc, const CubeEdge& e, int h, int q);

// The wedge class kappa for the potential P at a cube vertex.
HochschildElement cube_kappa(const Ctx& c, const Potential& P);

struct LinkHomologyReport {
  std::string theory;
  int n = 0;  // sl(n) rank parameter; 0 for homfly
  int strands = 0;
  int writhe = 0;
  int n_neg = 0;
  int q_max = 0;
  bool window_warning = false;
  bool torsion_free = false;
  bool orders_agree = true;
  bool top_concentrated = false;
  bool xn_annihilated = false;
  // (gr_v, gr_h, gr_q) -> group; only nonzero groups with gr_q <= q_max.
  std::map<std::tuple<int, int, int>, AbGroup> groups;
};

// Compare two reports up to an overall shift of (gr_v, gr_h, gr_q),
// window-aware on both sides.  On success stores the shift applied to `a`.
bool report_shift_match(const LinkHomologyReport& a, const LinkHomologyReport& b,
                        std::tuple<int, int, int>* shift = nullptr);

LinkHomologyReport homfly_homology(const BraidWord& w, int q_max);
LinkHomologyReport sln_unnormalized(const BraidWord& w, int n, int q_max);
LinkHomologyReport sln_normalized(const BraidWord& w, int n, int q_max);
LinkHomologyReport rational_sln(const BraidWord& w, int n, int q_max);

enum class InsKind { positive_injective, negative_surjective, u3_multiplication };

struct InsSlice {
  int h = 0;
  int q = 0;
  int src_rank = 0;
  int dst_rank = 0;
  bool ok = false;
};

struct InsWordReport {
  BraidWord base;
  bool ok = true;
  bool split_ok = true;  // u3 only: the two-piece decomposition exists
  std::vector<InsSlice> slices;
};

struct InsReport {
  InsKind kind;
  int n = 0;
  int q_max = 0;
  bool all_ok = true;
  std::vector<InsWordReport> words;
};

// Stability checks for the three insertion moves, run over a family of base
// words on a fixed number of strands.
InsReport check_ins(const std::vector<BraidWord>& family, InsKind kind, int n,
                    int q_max);

}  // namespace krh
