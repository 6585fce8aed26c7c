#include "krh/cube.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <thread>

namespace krh {
namespace {

int edge_tb(const CubeEdge& e) {
  uint32_t wide = e.positive ? e.hi : e.lo;
  return std::popcount(wide & ((1u << e.pos) - 1u));
}
int edge_dq(const CubeEdge& e) { return e.positive ? 0 : 2; }

// Forget delta_{tb+1} (positions above tb shift down).
SoergelElement drop_delta(const Ctx& dst, const SoergelElement& z, int tb) {
  SoergelElement out(dst);
  for (auto& [m, p] : z.t) {
    if ((m >> tb) & 1u) continue;
    uint32_t low = m & ((1u << tb) - 1u), high = m >> (tb + 1);
    out.add_term(low | (high << tb), p);
  }
  return out;
}

// Reindex into a word with one more letter at position tb+1.
SoergelElement lift_delta(const Ctx& dst, const SoergelElement& z, int tb) {
  SoergelElement out(dst);
  for (auto& [m, p] : z.t) {
    uint32_t low = m & ((1u << tb) - 1u), high = m >> tb;
    out.add_term(low | (high << (tb + 1)), p);
  }
  return out;
}

HochschildElement edge_apply(const Ctx& cdst, bool positive, int tb,
                             const HochschildElement& z) {
  HochschildElement out(cdst);
  if (positive) {
    for (auto& [xm, cf] : z.c) out.add_term(xm, drop_delta(cdst, cf, tb));
  } else {
    SoergelElement mul =
        SoergelElement::delta(cdst, tb + 1) + alpha_bracket(cdst, tb + 1);
    for (auto& [xm, cf] : z.c) out.add_term(xm, mul * lift_delta(cdst, cf, tb));
  }
  return out;
}

SMat edge_slice_matrix(const Ctx& csrc, const Ctx& cdst, bool positive, int tb,
                       int h, int q) {
  CHBasis bs = ch_slice(csrc, h, q);
  CHBasis bd = ch_slice(cdst, h, q + (positive ? 0 : 2));
  SMat f((int)bd.size(), (int)bs.size());
  for (int j = 0; j < (int)bs.size(); j++) {
    std::vector<Int> e((size_t)bs.size(), Int(0));
    e[(size_t)j] = 1;
    f.set_col(j, ch_to_vec(bd, edge_apply(cdst, positive, tb, ch_from_vec(bs, e))));
  }
  return f;
}

AbGroup ab_sum(const AbGroup& a, const AbGroup& b) {
  std::map<Int, std::vector<int>> pe;  // prime -> exponents
  auto absorb = [&](const std::vector<Int>& tor) {
    for (const Int& t0 : tor) {
      Int t = t0;
      for (Int p = 2; p * p <= t; p++) {
        int e = 0;
        while (t % p == 0) {
          t /= p;
          e++;
        }
        if (e) pe[p].push_back(e);
      }
      if (t > 1) pe[t].push_back(1);
    }
  };
  absorb(a.torsion);
  absorb(b.torsion);
  size_t k = 0;
  for (auto& [p, es] : pe) {
    std::sort(es.begin(), es.end(), std::greater<int>());
    k = std::max(k, es.size());
  }
  std::vector<Int> inv(k, Int(1));  // inv[0] = largest invariant factor
  for (auto& [p, es] : pe)
    for (size_t i = 0; i < es.size(); i++) {
      Int pw = 1;
      for (int j = 0; j < es[i]; j++) pw *= p;
      inv[i] *= pw;
    }
  std::reverse(inv.begin(), inv.end());
  return AbGroup{a.free_rank + b.free_rank, std::move(inv)};
}

void add_group(std::map<std::tuple<int, int, int>, AbGroup>& gs,
               std::tuple<int, int, int> key, const AbGroup& g) {
  if (g.is_trivial()) return;
  auto it = gs.find(key);
  if (it == gs.end())
    gs.emplace(key, g);
  else
    it->second = ab_sum(it->second, g);
}

const Subquotient* find_sq(const HHGroup& hh, int h, int q) {
  if (h < 0 || q < 0) return nullptr;
  auto it = hh.slices.find({h, q});
  return it == hh.slices.end() ? nullptr : &it->second.sq;
}
const Subquotient* hh_sq(const CubeVertexCH& v, int h, int q) {
  return find_sq(v.hh, h, q);
}

// ---- block complexes over layers of subquotients ----

struct Layer {
  std::vector<uint32_t> ids;
  std::vector<const Subquotient*> sqs;
  std::map<uint32_t, int> off;
  int total = 0;
  SMat rel{0, 0};
};

Layer make_layer(const std::vector<std::pair<uint32_t, const Subquotient*>>& nodes) {
  Layer L;
  for (auto& [id, sq] : nodes) {
    L.off[id] = L.total;
    L.ids.push_back(id);
    L.sqs.push_back(sq);
    L.total += sq ? (int)sq->live.size() : 0;
  }
  std::vector<std::pair<int, SMat>> blocks;
  int rc = 0;
  for (size_t i = 0; i < L.ids.size(); i++) {
    if (!L.sqs[i]) continue;
    SMat r = L.sqs[i]->live_relations();
    if (r.nc == 0) continue;
    rc += r.nc;
    blocks.emplace_back(L.off.at(L.ids[i]), std::move(r));
  }
  L.rel = SMat(L.total, rc);
  int co = 0;
  for (auto& [ro, r] : blocks) {
    for (int i = 0; i < r.nr; i++)
      for (auto& [j, v] : r.rows[i]) L.rel.set(ro + i, co + j, v);
    co += r.nc;
  }
  return L;
}

void put_block(SMat& D, int ro, int co, const SMat& B, const Int& scale) {
  for (int i = 0; i < B.nr; i++)
    for (auto& [j, v] : B.rows[i]) D.add_at(ro + i, co + j, v * scale);
}

std::map<int, Subquotient> run_complex(const std::map<int, Layer>& layers,
                                       const std::map<int, SMat>& diff) {
  std::map<int, Subquotient> out;
  for (auto& [t, L] : layers) {
    auto nxt = layers.find(t + 1);
    auto dit = diff.find(t);
    SMat d_out = dit != diff.end() ? dit->second : SMat(0, L.total);
    SMat rel_next = nxt != layers.end() ? nxt->second.rel : SMat(d_out.nr, 0);
    auto din = diff.find(t - 1);
    SMat d_in = din != diff.end() ? din->second : SMat(L.total, 0);
    out.emplace(t, homology_presented(d_in, L.rel, d_out, rel_next));
  }
  return out;
}

// ---- memoized induced maps on vertex Hochschild homology ----

struct CubeOps {
  const CubeComplexCH& cc;
  int wedge_dq = 0;
  std::map<uint32_t, HochschildElement> wedge_elt;
  std::map<std::tuple<size_t, int, int>, SMat> edge_memo;
  std::map<std::tuple<uint32_t, int, int>, SMat> wedge_memo;

  const SMat& edge(size_t ei, int h, int q) {
    auto key = std::make_tuple(ei, h, q);
    auto it = edge_memo.find(key);
    if (it != edge_memo.end()) return it->second;
    const CubeEdge& e = cc.shape.edges[ei];
    const CubeVertexCH& vh = cc.at(e.hi);
    const CubeVertexCH& vl = cc.at(e.lo);
    int tb = edge_tb(e);
    SMat m = hh_induced_map(vh.hh, vl.hh, h, q, edge_dq(e), [&](int h2, int q2) {
      return edge_slice_matrix(vh.ctx, vl.ctx, e.positive, tb, h2, q2);
    });
    return edge_memo.emplace(key, std::move(m)).first->second;
  }

  const SMat& wedge(uint32_t mask, int h, int q) {
    auto key = std::make_tuple(mask, h, q);
    auto it = wedge_memo.find(key);
    if (it != wedge_memo.end()) return it->second;
    const CubeVertexCH& v = cc.at(mask);
    SMat amb = ch_wedge_matrix(v.ctx, wedge_elt.at(mask), 1, wedge_dq, h, q);
    SMat m = induced_map(v.hh.at(h, q).sq, v.hh.at(h + 1, q + wedge_dq).sq, amb);
    return wedge_memo.emplace(key, std::move(m)).first->second;
  }
};

// ---- wedge towers (homology in the Hochschild direction) ----

struct Tower {
  std::map<std::pair<int, int>, TwistedSlice> slices;
  const TwistedSlice* at(int h, int q) const {
    auto it = slices.find({h, q});
    return it == slices.end() ? nullptr : &it->second;
  }
};

struct TowerSrc {
  int r = 0;
  int dq = 0;
  std::function<const Subquotient*(int, int)> sq;
  std::function<SMat(int, int)> w;  // live coords, (h,q) -> (h+1,q+dq)
};

Tower make_tower(const TowerSrc& S, int q_hi) {
  Tower tw;
  for (int h = 0; h <= S.r; h++) {
    for (int q = h & 1; q <= q_hi; q += 2) {
      const Subquotient* cur = S.sq(h, q);
      if (!cur) continue;
      int g = (int)cur->live.size();
      SMat d_out(0, g), rel_next(0, 0), d_in(g, 0);
      if (h + 1 <= S.r && S.sq(h + 1, q + S.dq)) {
        d_out = S.w(h, q);
        rel_next = S.sq(h + 1, q + S.dq)->live_relations();
      }
      if (h >= 1 && q - S.dq >= 0 && S.sq(h - 1, q - S.dq)) d_in = S.w(h - 1, q - S.dq);
      Subquotient hq = homology_presented(d_in, cur->live_relations(), d_out, rel_next);
      AbGroup grp = hq.group();
      tw.slices.emplace(std::pair{h, q}, TwistedSlice{std::move(hq), std::move(grp)});
    }
  }
  return tw;
}

// ---- vertical (cube-direction) complexes at fixed (h, q_eff) ----

struct GrvComplex {
  std::map<int, Layer> layers;
  std::map<int, SMat> diff;
  std::map<int, Subquotient> hv;
};

GrvComplex grv_complex(
    const CubeComplexCH& cc, CubeOps& ops,
    const std::function<const Subquotient*(uint32_t, int, int)>& node_sq,
    const std::function<SMat(size_t, int, int)>& edge_live, int h, int qe) {
  GrvComplex X;
  int L = (int)cc.word.length();
  for (int g = 0; g <= L; g++) {
    std::vector<std::pair<uint32_t, const Subquotient*>> nodes;
    for (auto& [m, v] : cc.verts)
      if (v.grv == g) nodes.emplace_back(m, node_sq(m, h, qe + v.n_shift));
    X.layers.emplace(g, make_layer(nodes));
  }
  for (int g = 0; g < L; g++)
    X.diff.emplace(g, SMat(X.layers.at(g + 1).total, X.layers.at(g).total));
  for (size_t ei = 0; ei < cc.shape.edges.size(); ei++) {
    const CubeEdge& e = cc.shape.edges[ei];
    const CubeVertexCH& vh = cc.at(e.hi);
    int qh = qe + vh.n_shift;
    const Subquotient* s = node_sq(e.hi, h, qh);
    const Subquotient* d = node_sq(e.lo, h, qh + edge_dq(e));
    if (!s || !d || s->live.empty() || d->live.empty()) continue;
    Int sgn = (e.sign_exp & 1) ? -1 : 1;
    put_block(X.diff.at(vh.grv), X.layers.at(vh.grv + 1).off.at(e.lo),
              X.layers.at(vh.grv).off.at(e.hi), edge_live(ei, h, qh), sgn);
  }
  X.hv = run_complex(X.layers, X.diff);
  return X;
}

// ---- totals of the twisted double complex at fixed sigma ----

std::map<std::pair<int, int>, AbGroup> run_totals(const CubeComplexCH& cc,
                                                  CubeOps& ops, int q_max) {
  std::map<std::pair<int, int>, AbGroup> out;  // (t, sigma)
  int L = (int)cc.word.length();
  int r = cc.word.strands;
  int dq = ops.wedge_dq;
  int n_neg = 0;
  for (int l : cc.word.letters)
    if (l < 0) n_neg++;
  std::vector<std::vector<size_t>> efrom(cc.shape.nverts());
  for (size_t ei = 0; ei < cc.shape.edges.size(); ei++)
    efrom[cc.shape.edges[ei].hi].push_back(ei);
  int smin = -(dq * r + 2 * n_neg);
  if (smin & 1) smin--;
  for (int sig = smin; sig <= q_max; sig += 2) {
    int tmax_rep = (q_max - sig) / dq;
    int tlim = std::min(L + r, tmax_rep + 1);
    std::map<int, Layer> layers;
    for (int t = 0; t <= tlim; t++) {
      std::vector<std::pair<uint32_t, const Subquotient*>> nodes;
      for (auto& [m, v] : cc.verts) {
        int h = t - v.grv;
        if (h < 0 || h > r) continue;
        const Subquotient* s = hh_sq(v, h, sig + dq * h + v.n_shift);
        if (!s) continue;
        nodes.emplace_back(m * (uint32_t)(r + 1) + (uint32_t)h, s);
      }
      layers.emplace(t, make_layer(nodes));
    }
    std::map<int, SMat> diff;
    for (int t = 0; t < tlim; t++)
      diff.emplace(t, SMat(layers.at(t + 1).total, layers.at(t).total));
    for (int t = 0; t < tlim; t++) {
      const Layer& Ls = layers.at(t);
      const Layer& Ld = layers.at(t + 1);
      SMat& D = diff.at(t);
      for (size_t i = 0; i < Ls.ids.size(); i++) {
        if (!Ls.sqs[i] || Ls.sqs[i]->live.empty()) continue;
        uint32_t id = Ls.ids[i];
        uint32_t m = id / (uint32_t)(r + 1);
        int h = (int)(id % (uint32_t)(r + 1));
        const CubeVertexCH& v = cc.at(m);
        int q = sig + dq * h + v.n_shift;
        uint32_t wid = m * (uint32_t)(r + 1) + (uint32_t)(h + 1);
        if (h + 1 <= r && Ld.off.count(wid) && hh_sq(v, h + 1, q + dq))
          put_block(D, Ld.off.at(wid), Ls.off.at(id), ops.wedge(m, h, q), 1);
        for (size_t ei : efrom[m]) {
          const CubeEdge& e = cc.shape.edges[ei];
          uint32_t did = e.lo * (uint32_t)(r + 1) + (uint32_t)h;
          if (!Ld.off.count(did)) continue;
          Int sgn = ((e.sign_exp + h) & 1) ? -1 : 1;
          put_block(D, Ld.off.at(did), Ls.off.at(id), ops.edge(ei, h, q), sgn);
        }
      }
    }
    auto hs = run_complex(layers, diff);
    for (auto& [t, sq] : hs) {
      if (t > tmax_rep) continue;
      AbGroup g = sq.group();
      if (!g.is_trivial()) out[{t, sig}] = std::move(g);
    }
  }
  return out;
}

// ---- pipeline: towers first, then the cube direction ----

struct APipe {
  int dq = 0;
  std::map<uint32_t, Tower> towers;
  std::map<std::pair<int, int>, GrvComplex> outer;  // (h, q_eff)
};

APipe run_pipeline_a(const CubeComplexCH& cc, CubeOps& ops, int q_max) {
  APipe P;
  P.dq = ops.wedge_dq;
  int r = cc.word.strands;
  int n_neg = 0;
  for (int l : cc.word.letters)
    if (l < 0) n_neg++;
  for (auto& [m, v] : cc.verts) {
    TowerSrc S;
    S.r = r;
    S.dq = P.dq;
    const CubeVertexCH* vp = &v;
    S.sq = [vp](int h, int q) { return hh_sq(*vp, h, q); };
    CubeOps* op = &ops;
    uint32_t mm = m;
    S.w = [op, mm](int h, int q) { return op->wedge(mm, h, q); };
    P.towers.emplace(m, make_tower(S, v.q_cap - P.dq));
  }
  auto node_sq = [&P](uint32_t m, int h, int q) -> const Subquotient* {
    const TwistedSlice* t = P.towers.at(m).at(h, q);
    return t ? &t->sq : nullptr;
  };
  auto edge_live = [&cc, &P, &ops](size_t ei, int h, int qh) {
    const CubeEdge& e = cc.shape.edges[ei];
    const TwistedSlice* s = P.towers.at(e.hi).at(h, qh);
    const TwistedSlice* d = P.towers.at(e.lo).at(h, qh + edge_dq(e));
    return induced_map(s->sq, d->sq, ops.edge(ei, h, qh));
  };
  int qlo = -2 * n_neg;
  for (int h = 0; h <= r; h++) {
    int q0 = qlo + (((qlo & 1) != (h & 1)) ? 1 : 0);
    for (int qe = q0; qe <= q_max; qe += 2)
      P.outer.emplace(std::pair{h, qe},
                      grv_complex(cc, ops, node_sq, edge_live, h, qe));
  }
  return P;
}

bool towers_top_concentrated(const APipe& P, int r) {
  for (auto& [m, tw] : P.towers)
    for (auto& [hq, sl] : tw.slices)
      if (hq.first < r && !sl.group.is_trivial()) return false;
  return true;
}

// Blockdiagonal vertexwise map between two grv layers (same g, aligned ids).
SMat layer_block(const Layer& Ls, const Layer& Ld,
                 const std::function<const SMat*(uint32_t)>& blk) {
  SMat W(Ld.total, Ls.total);
  for (size_t i = 0; i < Ls.ids.size(); i++) {
    if (!Ls.sqs[i] || Ls.sqs[i]->live.empty()) continue;
    uint32_t m = Ls.ids[i];
    auto dit = Ld.off.find(m);
    if (dit == Ld.off.end()) continue;
    const SMat* B = blk(m);
    if (B) put_block(W, dit->second, Ls.off.at(m), *B, 1);
  }
  return W;
}

// x_i^n multiplication vanishes on every reported slice of the pipeline.
bool xn_annihilated_check(const CubeComplexCH& cc, CubeOps& ops, APipe& P,
                          int n, int q_max, bool rational) {
  int r = cc.word.strands;
  int dqm = 2 * n;
  std::map<std::tuple<uint32_t, int, int, int>, SMat> memo;
  auto mult_hh = [&](uint32_t m, int i, int h, int q) -> const SMat& {
    auto key = std::make_tuple(m, i, h, q);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const CubeVertexCH& v = cc.at(m);
    SoergelElement xin =
        n == 0 ? SoergelElement::unit(v.ctx)
               : SoergelElement::from_poly(
                     v.ctx, Poly::var((size_t)(i - 1), (uint16_t)n));
    SMat f = hh_induced_map(v.hh, v.hh, h, q, dqm, [&](int h2, int q2) {
      return ch_mult_matrix(v.ctx, xin, h2, q2);
    });
    return memo.emplace(key, std::move(f)).first->second;
  };
  for (auto& [key, X] : P.outer) {
    auto [h, qe] = key;
    if (qe + dqm > q_max) continue;
    auto dit = P.outer.find(std::pair{h, qe + dqm});
    if (dit == P.outer.end()) continue;
    GrvComplex& D = dit->second;
    for (auto& [g, sq] : X.hv) {
      if (sq.live.empty()) continue;
      if (qe + P.dq * g > q_max) continue;
      for (int i = 1; i <= r; i++) {
        std::map<uint32_t, SMat> vblk;
        auto blk = [&](uint32_t m) -> const SMat* {
          const CubeVertexCH& v = cc.at(m);
          int q = qe + v.n_shift;
          const TwistedSlice* ts = P.towers.at(m).at(h, q);
          const TwistedSlice* td = P.towers.at(m).at(h, q + dqm);
          if (!ts || !td) return nullptr;
          auto it = vblk.emplace(m, induced_map(ts->sq, td->sq, mult_hh(m, i, h, q)));
          return &it.first->second;
        };
        SMat W = layer_block(X.layers.at(g), D.layers.at(g), blk);
        const Subquotient& dsq = D.hv.at(g);
        SMat F = induced_map(sq, dsq, W);
        SMat rel = dsq.live_relations();
        AbGroup c = quotient_of_spans((int)dsq.live.size(), rel.hcat(F), rel).group();
        if (rational ? c.free_rank != 0 : !c.is_trivial()) return false;
      }
    }
  }
  return true;
}

LinkHomologyReport base_report(const char* theory, int n, const BraidWord& w,
                               int q_max) {
  LinkHomologyReport rep;
  rep.theory = theory;
  rep.n = n;
  rep.strands = w.strands;
  rep.q_max = q_max;
  for (int l : w.letters) {
    rep.writhe += l > 0 ? 1 : -1;
    if (l < 0) rep.n_neg++;
  }
  return rep;
}

void scan_torsion(LinkHomologyReport& rep) {
  rep.torsion_free = true;
  for (auto& [k, g] : rep.groups)
    if (!g.torsion.empty()) rep.torsion_free = false;
}

BetaClass beta_for(int n, int r, int q_max) {
  if (n <= 2) return beta_closed_form(n, r);
  try {
    return beta_lift(n, r, std::max(q_max, 2 * n + 2));
  } catch (const LiftNotFound& e) {
    throw BetaUnavailable(std::string("no suitable class in window: ") + e.what());
  }
}

Potential sln_potential(int n) { return potential_data(Poly::var(0, (uint16_t)(n + 1))); }

void load_kappa(const CubeComplexCH& cc, CubeOps& ops, int n) {
  Potential P = sln_potential(n);
  ops.wedge_dq = 2 * n + 1;
  for (auto& [m, v] : cc.verts) ops.wedge_elt.emplace(m, cube_kappa(v.ctx, P));
}

void load_beta(const CubeComplexCH& cc, CubeOps& ops, const BetaClass& b, int n) {
  ops.wedge_dq = 2 * n + 1;
  for (auto& [m, v] : cc.verts)
    ops.wedge_elt.emplace(m, flagch_unit(v.ctx, b.rep));
}

// Free ranks of the mixed-order pipeline: cube homology of Hochschild
// homology first, wedge in the middle, Hochschild-degree homology last.
std::map<std::pair<int, int>, long> run_pipeline_b(const CubeComplexCH& cc,
                                                   CubeOps& ops, int q_max) {
  int r = cc.word.strands;
  int L = (int)cc.word.length();
  int dq = ops.wedge_dq;
  int n_neg = 0;
  for (int l : cc.word.letters)
    if (l < 0) n_neg++;
  std::map<std::pair<int, int>, GrvComplex> hvm;
  auto node_sq = [&cc](uint32_t m, int h, int q) { return hh_sq(cc.at(m), h, q); };
  auto edge_live = [&ops](size_t ei, int h, int qh) -> SMat {
    return ops.edge(ei, h, qh);
  };
  auto hv_at = [&](int h, int qe) -> GrvComplex& {
    auto key = std::pair{h, qe};
    auto it = hvm.find(key);
    if (it == hvm.end())
      it = hvm.emplace(key, grv_complex(cc, ops, node_sq, edge_live, h, qe)).first;
    return it->second;
  };
  auto wblock = [&](GrvComplex& S, GrvComplex& D, int g, int h, int qe) {
    auto blk = [&](uint32_t m) -> const SMat* {
      const CubeVertexCH& v = cc.at(m);
      int q = qe + v.n_shift;
      if (!hh_sq(v, h + 1, q + dq)) return nullptr;
      return &ops.wedge(m, h, q);
    };
    return layer_block(S.layers.at(g), D.layers.at(g), blk);
  };
  std::map<std::pair<int, int>, long> out;  // (t, gr_q)
  int smin = -(dq * r + 2 * n_neg);
  if (smin & 1) smin--;
  for (int sig = smin; sig <= q_max; sig += 2) {
    for (int g = 0; g <= L; g++) {
      for (int h = 0; h <= r; h++) {
        if (sig + dq * (g + h) > q_max) continue;
        GrvComplex& cur = hv_at(h, sig + dq * h);
        const Subquotient& csq = cur.hv.at(g);
        int gdim = (int)csq.live.size();
        SMat dout(0, gdim), relnext(0, 0), din(gdim, 0);
        if (h + 1 <= r) {
          GrvComplex& nx = hv_at(h + 1, sig + dq * (h + 1));
          const Subquotient& nsq = nx.hv.at(g);
          dout = induced_map(csq, nsq, wblock(cur, nx, g, h, sig + dq * h));
          relnext = nsq.live_relations();
        }
        if (h >= 1) {
          GrvComplex& pv = hv_at(h - 1, sig + dq * (h - 1));
          din = induced_map(pv.hv.at(g), csq,
                            wblock(pv, cur, g, h - 1, sig + dq * (h - 1)));
        }
        AbGroup grp = homology_presented(din, csq.live_relations(), dout, relnext).group();
        if (grp.free_rank) out[{g + h, sig + dq * (g + h)}] += grp.free_rank;
      }
    }
  }
  return out;
}

}  // namespace

const CubeVertexCH& CubeComplexCH::at(uint32_t mask) const {
  auto it = verts.find(mask);
  if (it == verts.end()) throw EngineError("cube vertex out of range");
  return it->second;
}

CubeComplexCH build_cube_ch(const BraidWord& w, int q_window, int q_slack) {
  CubeComplexCH cc;
  cc.word = w;
  cc.shape = cube(w);
  cc.q_window = q_window;
  uint32_t nv = cc.shape.nverts();
  for (uint32_t m = 0; m < nv; m++) {
    CubeVertexCH v;
    v.mask = m;
    v.ctx = subword_ctx(w, m);
    v.grv = cc.shape.grv[m];
    v.n_shift = cc.shape.shift[m];
    v.q_cap = std::max(0, q_window + v.n_shift + q_slack);
    cc.verts.emplace(m, std::move(v));
  }
  std::vector<CubeVertexCH*> slot;
  slot.reserve(nv);
  for (auto& [m, v] : cc.verts) slot.push_back(&v);
  int jobs = 1;
  if (const char* e = std::getenv("KRH_JOBS")) jobs = std::clamp(std::atoi(e), 1, 16);
  jobs = std::min<int>(jobs, (int)nv);
  auto work = [&](int tid) {
    for (uint32_t i = (uint32_t)tid; i < nv; i += (uint32_t)jobs) {
      CubeVertexCH* v = slot[i];
      v->hh = hochschild_homology(v->ctx, v->q_cap);
    }
  };
  if (jobs <= 1) {
    work(0);
  } else {
    std::vector<std::thread> ts;
    for (int t = 0; t < jobs; t++) ts.emplace_back(work, t);
    for (auto& t : ts) t.join();
  }
  return cc;
}

HochschildElement cube_edge_apply(const CubeComplexCH& cc, const CubeEdge& e,
                                  const HochschildElement& z) {
  return edge_apply(cc.at(e.lo).ctx, e.positive, edge_tb(e), z);
}

SMat cube_edge_matrix(const CubeComplexCH& cc, const CubeEdge& e, int h, int q) {
  return edge_slice_matrix(cc.at(e.hi).ctx, cc.at(e.lo).ctx, e.positive,
                           edge_tb(e), h, q);
}

HochschildElement cube_kappa(const Ctx& c, const Potential& P) {
  HochschildElement out(c);
  for (int j = 1; j <= c->r; j++) {
    SoergelElement cf = eval_poly(c, P.pi, [&](int v) {
      return v == 0 ? SoergelElement::from_poly(c, Poly::var((size_t)(j - 1)))
                    : y_gen(c, j);
    });
    out.add_term(1u << (j - 1), cf);
  }
  return out;
}

LinkHomologyReport homfly_homology(const BraidWord& w, int q_max) {
  CubeComplexCH cc = build_cube_ch(w, q_max, 0);
  CubeOps ops{cc};
  LinkHomologyReport rep = base_report("homfly", 0, w, q_max);
  int r = w.strands;
  auto node_sq = [&cc](uint32_t m, int h, int q) { return hh_sq(cc.at(m), h, q); };
  auto edge_live = [&ops](size_t ei, int h, int qh) -> SMat {
    return ops.edge(ei, h, qh);
  };
  int qlo = -2 * rep.n_neg;
  for (int h = 0; h <= r; h++) {
    int q0 = qlo + (((qlo & 1) != (h & 1)) ? 1 : 0);
    for (int qe = q0; qe <= q_max; qe += 2) {
      GrvComplex X = grv_complex(cc, ops, node_sq, edge_live, h, qe);
      for (auto& [g, sq] : X.hv) add_group(rep.groups, {g, h, qe}, sq.group());
    }
  }
  scan_torsion(rep);
  return rep;
}

LinkHomologyReport sln_unnormalized(const BraidWord& w, int n, int q_max) {
  if (n < 1) throw RangeError("sl(n) needs n >= 1");
  if (q_max < 2 * n + 1) throw WindowTooSmall("q_max below the wedge degree");
  CubeComplexCH cc = build_cube_ch(w, q_max, 2 * n + 1);
  CubeOps ops{cc};
  load_kappa(cc, ops, n);
  LinkHomologyReport rep = base_report("sln_unnormalized", n, w, q_max);
  rep.window_warning = q_max < 4 * n + 2;
  for (auto& [ts, g] : run_totals(cc, ops, q_max))
    add_group(rep.groups, {0, ts.first, ts.second + (2 * n + 1) * ts.first}, g);
  scan_torsion(rep);
  return rep;
}

LinkHomologyReport sln_normalized(const BraidWord& w, int n, int q_max) {
  if (n < 0) throw RangeError("sl(n) normalization needs n >= 0");
  if (q_max < 2 * n + 1) throw WindowTooSmall("q_max below the wedge degree");
  int dq = 2 * n + 1;
  BetaClass b = beta_for(n, w.strands, q_max);
  CubeComplexCH cc = build_cube_ch(w, q_max, dq);
  CubeOps ops{cc};
  load_beta(cc, ops, b, n);
  LinkHomologyReport rep = base_report("sln_normalized", n, w, q_max);
  rep.window_warning = q_max < 4 * n + 2;

  APipe A = run_pipeline_a(cc, ops, q_max);
  for (auto& [key, X] : A.outer) {
    auto [h, qe] = key;
    for (auto& [g, sq] : X.hv) {
      if (qe + dq * g > q_max) continue;
      add_group(rep.groups, {0, g + h, qe + dq * g}, sq.group());
    }
  }
  rep.top_concentrated = towers_top_concentrated(A, w.strands);
  rep.xn_annihilated = xn_annihilated_check(cc, ops, A, n, q_max, false);

  std::map<std::pair<int, int>, AbGroup> asum;
  for (auto& [k3, g] : rep.groups) {
    auto key = std::pair{std::get<1>(k3), std::get<2>(k3)};
    auto it = asum.find(key);
    if (it == asum.end())
      asum.emplace(key, g);
    else
      it->second = ab_sum(it->second, g);
  }
  std::map<std::pair<int, int>, AbGroup> bsum;
  for (auto& [ts, g] : run_totals(cc, ops, q_max))
    bsum[{ts.first, ts.second + dq * ts.first}] = g;
  rep.orders_agree = asum == bsum;
  scan_torsion(rep);
  return rep;
}

LinkHomologyReport rational_sln(const BraidWord& w, int n, int q_max) {
  if (n < 1) throw RangeError("sl(n) needs n >= 1");
  if (q_max < 2 * n + 1) throw WindowTooSmall("q_max below the wedge degree");
  int dq = 2 * n + 1;
  CubeComplexCH cc = build_cube_ch(w, q_max, dq);
  CubeOps ops{cc};
  load_kappa(cc, ops, n);
  LinkHomologyReport rep = base_report("rational_sln", n, w, q_max);
  rep.window_warning = q_max < 4 * n + 2;

  APipe A = run_pipeline_a(cc, ops, q_max);
  std::map<std::pair<int, int>, long> ra;
  for (auto& [key, X] : A.outer) {
    auto [h, qe] = key;
    for (auto& [g, sq] : X.hv) {
      if (qe + dq * g > q_max) continue;
      AbGroup grp = sq.group();
      if (grp.free_rank) {
        add_group(rep.groups, {0, g + h, qe + dq * g}, AbGroup{grp.free_rank, {}});
        ra[{g + h, qe + dq * g}] += grp.free_rank;
      }
    }
  }
  rep.top_concentrated = towers_top_concentrated(A, w.strands);
  rep.xn_annihilated = xn_annihilated_check(cc, ops, A, n, q_max, true);

  std::map<std::pair<int, int>, long> rb = run_pipeline_b(cc, ops, q_max);
  std::map<std::pair<int, int>, long> rc;
  for (auto& [ts, g] : run_totals(cc, ops, q_max))
    if (g.free_rank) rc[{ts.first, ts.second + dq * ts.first}] = g.free_rank;
  rep.orders_agree = ra == rb && ra == rc;
  rep.torsion_free = true;
  return rep;
}

bool report_shift_match(const LinkHomologyReport& a, const LinkHomologyReport& b,
                        std::tuple<int, int, int>* shift) {
  if (a.groups.empty() || b.groups.empty()) {
    if (shift) *shift = {0, 0, 0};
    return a.groups.empty() && b.groups.empty();
  }
  auto ka = a.groups.begin()->first;
  for (auto& [kb, gb] : b.groups) {
    int dv = std::get<0>(kb) - std::get<0>(ka);
    int dh = std::get<1>(kb) - std::get<1>(ka);
    int dqq = std::get<2>(kb) - std::get<2>(ka);
    bool ok = true;
    for (auto& [k, g] : a.groups) {
      if (std::get<2>(k) + dqq > b.q_max) continue;
      auto it = b.groups.find({std::get<0>(k) + dv, std::get<1>(k) + dh,
                               std::get<2>(k) + dqq});
      if (it == b.groups.end() || !(it->second == g)) {
        ok = false;
        break;
      }
    }
    if (ok)
      for (auto& [k, g] : b.groups) {
        if (std::get<2>(k) - dqq > a.q_max) continue;
        auto it = a.groups.find({std::get<0>(k) - dv, std::get<1>(k) - dh,
                                 std::get<2>(k) - dqq});
        if (it == a.groups.end() || !(it->second == g)) {
          ok = false;
          break;
        }
      }
    if (ok) {
      if (shift) *shift = {dv, dh, dqq};
      return true;
    }
  }
  return false;
}

namespace {

// ---- insertion checks ----

InsWordReport ins_edge(const BraidWord& base, InsKind kind, int n, int q_max) {
  int r = base.strands;
  if (r < 2) throw RangeError("insertion checks need at least 2 strands");
  for (int l : base.letters)
    if (std::abs(l) > r - 2)
      throw RangeError("base word must avoid the insertion strand");
  int dq = 2 * n + 1;
  std::vector<int> idx;
  for (int l : base.letters) idx.push_back(std::abs(l));
  Ctx c0 = make_ctx(r, idx);
  idx.push_back(r - 1);
  Ctx c1 = make_ctx(r, idx);
  int tb = (int)base.letters.size();
  BetaClass b = beta_for(n, r, q_max);
  int cap = q_max + dq;
  HHGroup hh0 = hochschild_homology(c0, cap);
  HHGroup hh1 = hochschild_homology(c1, cap);
  auto tower_of = [&](const Ctx& c, const HHGroup& hh) {
    HochschildElement be = flagch_unit(c, b.rep);
    auto wm = std::make_shared<std::map<std::pair<int, int>, SMat>>();
    TowerSrc S;
    S.r = r;
    S.dq = dq;
    S.sq = [&hh](int h, int q) { return find_sq(hh, h, q); };
    S.w = [&c, &hh, be, dq, wm](int h, int q) {
      auto it = wm->find({h, q});
      if (it == wm->end())
        it = wm->emplace(std::pair{h, q},
                         induced_map(hh.at(h, q).sq, hh.at(h + 1, q + dq).sq,
                                     ch_wedge_matrix(c, be, 1, dq, h, q)))
                 .first;
      return it->second;
    };
    return make_tower(S, q_max);
  };
  Tower t0 = tower_of(c0, hh0);
  Tower t1 = tower_of(c1, hh1);

  InsWordReport wr;
  wr.base = base;
  bool positive = kind == InsKind::positive_injective;
  const Ctx& cs = positive ? c1 : c0;
  const Ctx& cd = positive ? c0 : c1;
  const HHGroup& hs = positive ? hh1 : hh0;
  const HHGroup& hd = positive ? hh0 : hh1;
  const Tower& ts = positive ? t1 : t0;
  const Tower& td = positive ? t0 : t1;
  int dqe = positive ? 0 : 2;
  for (int h = 0; h <= r; h++) {
    for (int q = h & 1; q + dqe <= q_max; q += 2) {
      const TwistedSlice* s = ts.at(h, q);
      const TwistedSlice* d = td.at(h, q + dqe);
      InsSlice sl;
      sl.h = h;
      sl.q = q;
      sl.src_rank = s ? (int)s->sq.live.size() : 0;
      sl.dst_rank = d ? (int)d->sq.live.size() : 0;
      if (!s && !d) continue;
      if (!s) {
        sl.ok = positive ? true : d->group.is_trivial();
      } else if (!d) {
        sl.ok = positive ? s->group.is_trivial() : true;
      } else {
        SMat fh = hh_induced_map(hs, hd, h, q, dqe, [&](int h2, int q2) {
          return edge_slice_matrix(cs, cd, positive, tb, h2, q2);
        });
        SMat ft = induced_map(s->sq, d->sq, fh);
        sl.ok = positive ? hom_injective(s->sq, d->sq, ft) : hom_surjective(d->sq, ft);
      }
      wr.ok = wr.ok && sl.ok;
      wr.slices.push_back(sl);
    }
  }
  return wr;
}

InsWordReport ins_u3(const BraidWord& base, int n, int q_max) {
  int r = base.strands;
  if (r < 3) throw RangeError("the braid-move check needs at least 3 strands");
  for (int l : base.letters)
    if (std::abs(l) > r - 3)
      throw RangeError("base word must avoid the braid-move strands");
  int dq = 2 * n + 1;
  int s = r - 1;
  std::vector<int> idx;
  for (int l : base.letters) idx.push_back(std::abs(l));
  int lpre = (int)idx.size();
  idx.push_back(s);
  idx.push_back(s - 1);
  idx.push_back(s);
  Ctx c = make_ctx(r, idx);
  int lJ = lpre + 3;
  int capA = q_max + dq + 2;

  // The candidate summand: subalgebra generated in degree 2, and the
  // degree-2 class lambda spanning the complement.
  std::vector<SoergelElement> gens;
  for (int i = 1; i <= r; i++)
    gens.push_back(SoergelElement::from_poly(c, Poly::var((size_t)(i - 1))));
  for (int t = 1; t <= lpre; t++) gens.push_back(SoergelElement::delta(c, t));
  gens.push_back(SoergelElement::delta(c, lJ - 2) + SoergelElement::delta(c, lJ));
  gens.push_back(SoergelElement::delta(c, lJ - 1));
  SoergelElement lam = SoergelElement::delta(c, lJ - 1) +
                       SoergelElement::from_poly(c, Poly::var((size_t)(s - 2))) -
                       SoergelElement::from_poly(c, Poly::var((size_t)(s - 1)));
  for (int k = 1; k <= lJ - 2; k++) {
    if (idx[(size_t)(k - 1)] == s - 1)
      lam = lam + SoergelElement::delta(c, k) * Int(2);
    if (std::abs(s - 1 - idx[(size_t)(k - 1)]) == 1)
      lam = lam - SoergelElement::delta(c, k);
  }

  InsWordReport wr;
  wr.base = base;

  std::map<int, std::vector<SoergelElement>> Aq;
  Aq[0] = {SoergelElement::unit(c)};
  for (int q = 2; q <= capA; q += 2) {
    SoergelBasis sb = soergel_slice(c, q);
    std::vector<std::vector<Int>> rows;
    for (const SoergelElement& g : gens)
      for (const SoergelElement& a : Aq.at(q - 2))
        rows.push_back(soergel_to_vec(sb, g * a));
    SMat M((int)rows.size(), (int)sb.size());
    for (size_t i = 0; i < rows.size(); i++)
      for (size_t j = 0; j < rows[i].size(); j++) M.set((int)i, (int)j, rows[i][j]);
    SMat H = hnf_rows(M);
    std::vector<SoergelElement> bas;
    for (int i = 0; i < H.nr; i++) {
      if (H.rows[i].empty()) continue;
      std::vector<Int> v((size_t)H.nc, Int(0));
      for (auto& [j, x] : H.rows[i]) v[(size_t)j] = x;
      bas.push_back(soergel_from_vec(sb, v));
    }
    Aq[q] = std::move(bas);
  }

  // Integral splitting B = A (+) lambda A in each degree of the window.
  // Multiplication by lambda is not injective on A (it kills delta_{l-1} A),
  // so rank the image lattice first; the complement must match the two-letter
  // deletion of the word, shifted by 2.
  std::vector<int> idxp(idx.begin(), idx.begin() + lpre);
  idxp.push_back(s);
  Ctx cp = make_ctx(r, idxp);
  for (int q = 0; q <= q_max; q += 2) {
    SoergelBasis sb = soergel_slice(c, q);
    std::vector<std::vector<Int>> rows;
    for (const SoergelElement& a : Aq.at(q)) rows.push_back(soergel_to_vec(sb, a));
    int ra = (int)rows.size();
    int rl = 0;
    if (q >= 2) {
      std::vector<std::vector<Int>> lrows;
      for (const SoergelElement& a : Aq.at(q - 2))
        lrows.push_back(soergel_to_vec(sb, lam * a));
      SMat L((int)lrows.size(), (int)sb.size());
      for (size_t i = 0; i < lrows.size(); i++)
        for (size_t j = 0; j < lrows[i].size(); j++)
          L.set((int)i, (int)j, lrows[i][j]);
      rl = snf(L, false, false).rank;
      for (auto& v : lrows) rows.push_back(std::move(v));
    }
    SMat M((int)rows.size(), (int)sb.size());
    for (size_t i = 0; i < rows.size(); i++)
      for (size_t j = 0; j < rows[i].size(); j++) M.set((int)i, (int)j, rows[i][j]);
    SNFResult sr = snf(M, false, false);
    bool ok = ra + rl == (int)sb.size() && sr.rank == (int)sb.size();
    for (const Int& x : sr.diag) ok = ok && x == 1;
    int rp = q >= 2 ? (int)soergel_slice(cp, q - 2).size() : 0;
    ok = ok && rl == rp;
    if (!ok) wr.split_ok = false;
  }

  // CH slices of the subalgebra, embedded in the ambient slices.
  struct ASlice {
    CHBasis amb;
    SMat coords;  // ambient x dim
    std::vector<HochschildElement> elems;
  };
  std::map<std::pair<int, int>, ASlice> asl;
  std::function<const ASlice*(int, int)> a_slice = [&](int h, int q) -> const ASlice* {
    if (h < 0 || h > r || q < h || q - h > capA || ((q - h) & 1)) return nullptr;
    auto it = asl.find({h, q});
    if (it != asl.end()) return &it->second;
    ASlice S{ch_slice(c, h, q), SMat(0, 0), {}};
    std::vector<std::vector<Int>> cols;
    for (uint32_t xm = 0; xm < (1u << r); xm++) {
      if (std::popcount(xm) != h) continue;
      for (const SoergelElement& a : Aq.at(q - h)) {
        HochschildElement z(c);
        z.add_term(xm, a);
        cols.push_back(ch_to_vec(S.amb, z));
        S.elems.push_back(std::move(z));
      }
    }
    S.coords = SMat((int)S.amb.size(), (int)cols.size());
    for (size_t j = 0; j < cols.size(); j++) S.coords.set_col((int)j, cols[j]);
    return &asl.emplace(std::pair{h, q}, std::move(S)).first->second;
  };

  BetaClass b = beta_for(n, r, q_max);
  HochschildElement be = flagch_unit(c, b.rep);
  bool closed = true;

  // Images of the restricted operators in subalgebra coordinates.
  auto restrict_op = [&](const ASlice* S, const ASlice* D,
                         const std::function<HochschildElement(
                             const HochschildElement&)>& op) -> SMat {
    int sd = S ? S->coords.nc : 0;
    int dd = D ? D->coords.nc : 0;
    SMat out(dd, sd);
    if (!S || !D || sd == 0) return out;
    SMat img((int)D->amb.size(), sd);
    for (int j = 0; j < sd; j++) img.set_col(j, ch_to_vec(D->amb, op(S->elems[(size_t)j])));
    auto X = solve_mat(D->coords, img);
    if (!X) {
      closed = false;
      return out;
    }
    return *X;
  };
  std::map<std::pair<int, int>, SMat> dhm;
  std::function<const SMat&(int, int)> dhA = [&](int h, int q) -> const SMat& {
    auto it = dhm.find({h, q});
    if (it != dhm.end()) return it->second;
    SMat m = restrict_op(a_slice(h, q), a_slice(h - 1, q + 1),
                         [](const HochschildElement& z) { return hoch_dh(z); });
    return dhm.emplace(std::pair{h, q}, std::move(m)).first->second;
  };
  std::map<std::pair<int, int>, Subquotient> hhA;
  std::function<const Subquotient*(int, int)> hhA_sq =
      [&](int h, int q) -> const Subquotient* {
    if (!a_slice(h, q)) return nullptr;
    auto it = hhA.find({h, q});
    if (it == hhA.end())
      it = hhA.emplace(std::pair{h, q}, subquotient(dhA(h + 1, q - 1), dhA(h, q)))
               .first;
    return &it->second;
  };
  std::map<std::pair<int, int>, SMat> wam;
  auto WA = [&](int h, int q) -> SMat {
    auto it = wam.find({h, q});
    if (it == wam.end()) {
      SMat amb = restrict_op(a_slice(h, q), a_slice(h + 1, q + dq),
                             [&](const HochschildElement& z) { return ch_mul(be, z); });
      it = wam.emplace(std::pair{h, q},
                       induced_map(*hhA_sq(h, q), *hhA_sq(h + 1, q + dq), amb))
               .first;
    }
    return it->second;
  };

  TowerSrc SA;
  SA.r = r;
  SA.dq = dq;
  SA.sq = hhA_sq;
  SA.w = WA;
  Tower twA = make_tower(SA, q_max);

  HHGroup hh = hochschild_homology(c, q_max + dq);
  std::map<std::pair<int, int>, SMat> wm;
  TowerSrc SB;
  SB.r = r;
  SB.dq = dq;
  SB.sq = [&hh](int h, int q) { return find_sq(hh, h, q); };
  SB.w = [&](int h, int q) -> SMat {
    auto it = wm.find({h, q});
    if (it == wm.end())
      it = wm.emplace(std::pair{h, q},
                      induced_map(hh.at(h, q).sq, hh.at(h + 1, q + dq).sq,
                                  ch_wedge_matrix(c, be, 1, dq, h, q)))
               .first;
    return it->second;
  };
  Tower tw = make_tower(SB, q_max);

  if (!closed) {
    wr.ok = false;
    return wr;
  }
  for (int h = 0; h <= r; h++) {
    for (int q = h & 1; q <= q_max; q += 2) {
      const TwistedSlice* sa = twA.at(h, q);
      const TwistedSlice* sb = tw.at(h, q);
      if (!sa && !sb) continue;
      InsSlice sl;
      sl.h = h;
      sl.q = q;
      sl.src_rank = sa ? (int)sa->sq.live.size() : 0;
      sl.dst_rank = sb ? (int)sb->sq.live.size() : 0;
      if (!sa) {
        sl.ok = true;
      } else if (!sb) {
        sl.ok = sa->group.is_trivial();
      } else {
        SMat f_hh = induced_map(*hhA_sq(h, q), hh.at(h, q).sq, a_slice(h, q)->coords);
        SMat ft = induced_map(sa->sq, sb->sq, f_hh);
        sl.ok = hom_injective(sa->sq, sb->sq, ft);
      }
      wr.ok = wr.ok && sl.ok;
      wr.slices.push_back(sl);
    }
  }
  if (!closed) wr.ok = false;
  return wr;
}

}  // namespace

InsReport check_ins(const std::vector<BraidWord>& family, InsKind kind, int n,
                    int q_max) {
  if (n < 0) throw RangeError("insertion checks need n >= 0");
  InsReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.q_max = q_max;
  for (const BraidWord& base : family) {
    rep.words.push_back(kind == InsKind::u3_multiplication
                            ? ins_u3(base, n, q_max)
                            : ins_edge(base, kind, n, q_max));
    rep.all_ok = rep.all_ok && rep.words.back().ok && rep.words.back().split_ok;
  }
  return rep;
}

}  // namespace krh
