#include "krh/equivariant.hpp"

#include <algorithm>
#include <functional>

namespace krh {

TruncatedCoeffs::TruncatedCoeffs(int kk, int BB) : k(kk), B(BB) {
  if (k < 1 || B < 1) throw EngineError("TruncatedCoeffs: need k >= 1, B >= 1");
}

std::map<uint32_t, Poly> flagch_localize(const FlagCHElement& z) {
  std::map<uint32_t, Poly> out;
  Perm id = perm_id(z.r);
  for (auto& [mask, fe] : z.c) {
    LocalizationTuple lt = localize_flag(fe);
    auto it = lt.find(id);
    if (it == lt.end() || it->second.is_zero()) continue;
    out[mask] = it->second;
  }
  return out;
}

namespace {

std::map<uint32_t, Poly> beta_target(int n, int r) {
  std::map<uint32_t, Poly> t;
  for (int j = 0; j < r; j++)
    t[1u << j] = n == 0 ? Poly::constant(1) : Poly::var(j, n);
  return t;
}

bool component_valid(const FlagCHElement& rep, int n, int r) {
  if (rep.r != r) return false;
  if (!flag_dh(rep).is_zero()) return false;
  return flagch_localize(rep) == beta_target(n, r);
}

}  // namespace

bool beta_class_valid(const BetaClass& b) {
  if (b.prov == BetaProvenance::universal) {
    if ((int)b.b_comp.size() != b.n) return false;
    for (int i = 1; i <= b.n; i++)
      if (!component_valid(b.b_comp[i - 1], i, b.r)) return false;
    return true;
  }
  return component_valid(b.rep, b.n, b.r);
}

BetaClass beta_closed_form(int n, int r) {
  if (n < 0 || n > 2)
    throw BetaUnavailable("beta_closed_form: no closed form for n = " +
                          std::to_string(n));
  BetaClass b;
  b.n = n;
  b.r = r;
  b.prov = BetaProvenance::closed_form;
  b.rep = FlagCHElement(r);
  for (int kk = 1; kk <= r; kk++) {
    Poly xk = Poly::var(kk - 1, 1);
    FlagElement coeff(r);
    if (n == 0) {
      coeff = FlagElement::unit(r);
    } else if (n == 1) {
      coeff = FlagElement::from_poly(r, xk) - schubert_simple(r, kk - 1);
    } else {
      FlagElement sk = schubert_simple(r, kk);
      FlagElement skm = schubert_simple(r, kk - 1);
      coeff = FlagElement::from_poly(r, xk * xk) + (sk - skm).scale(xk) -
              multiply_flag(sk, skm);
    }
    b.rep.add_term(1u << (kk - 1), coeff);
  }
  if (!beta_class_valid(b))
    throw EngineError("beta_closed_form: representative failed validation");
  return b;
}

BetaClass beta_lift(int n, int r, int window) {
  if (n < 0) throw BetaUnavailable("beta_lift: negative n");
  int q = 2 * n + 1;
  if (window < q)
    throw WindowTooSmall("beta_lift: window " + std::to_string(window) +
                         " below degree " + std::to_string(q));
  FlagCHBasis sl = flagch_slice(r, 1, q);
  int N = sl.size();

  // Cycle condition.
  SMat A = flagch_dh_matrix(r, 1, q);

  // Localization condition: rows select the identity-permutation
  // coordinates, where the GKM image of a basis element is just its
  // monomial (cells of positive length restrict to zero).
  Perm id = perm_id(r);
  std::vector<int> ecol;
  std::map<std::pair<uint32_t, Monomial>, int> erow;
  for (int j = 0; j < N; j++) {
    auto& [mask, w, mono] = sl.elems[j];
    if (w != id) continue;
    erow[{mask, mono}] = (int)ecol.size();
    ecol.push_back(j);
  }
  SMat L((int)ecol.size(), N);
  for (int i = 0; i < (int)ecol.size(); i++) L.set(i, ecol[i], 1);
  std::vector<Int> t((size_t)L.nr, Int(0));
  for (auto& [mask, p] : beta_target(n, r)) {
    Monomial mono;
    for (auto& [m, cf] : p.t) mono = m;
    auto it = erow.find({mask, mono});
    if (it == erow.end())
      throw EngineError("beta_lift: localization target outside slice");
    t[it->second] = 1;
  }

  SMat M(A.nr + L.nr, N);
  for (int i = 0; i < A.nr; i++) M.rows[i] = A.rows[i];
  for (int i = 0; i < L.nr; i++) M.rows[A.nr + i] = L.rows[i];
  std::vector<Int> rhs((size_t)M.nr, Int(0));
  for (int i = 0; i < L.nr; i++) rhs[A.nr + i] = t[i];

  auto z = solve(M, rhs);
  if (!z) throw LiftNotFound("beta_lift: no integral cycle with the required localization");

  // Boundaries keep both constraints (their coefficients restrict to zero
  // at the identity), so reducing to the canonical coset representative is
  // safe; verify the invariant rather than assume it.
  SMat B2 = flagch_dh_matrix(r, 2, 2 * n);
  if (!(L * B2).is_zero())
    throw EngineError("beta_lift: boundary escaped the localization kernel");
  SMat H = hnf_rows(B2.transpose());
  std::vector<Int> zn = hnf_reduce(H, *z);
  std::vector<Int> az = A.apply(zn);
  if (!std::all_of(az.begin(), az.end(), [](const Int& v) { return v == 0; }))
    throw EngineError("beta_lift: normalization broke the cycle condition");
  if (L.apply(zn) != t)
    throw EngineError("beta_lift: normalization broke the localization");

  BetaClass b;
  b.n = n;
  b.r = r;
  b.prov = BetaProvenance::lifted;
  b.rep = flagch_from_vec(sl, zn);
  if (!beta_class_valid(b))
    throw EngineError("beta_lift: representative failed validation");
  return b;
}

BetaClass beta_universal(int k, int r) {
  if (k < 1) throw BetaUnavailable("beta_universal: need k >= 1");
  BetaClass b;
  b.n = k;
  b.r = r;
  b.prov = BetaProvenance::universal;
  for (int i = 1; i <= k; i++) {
    BetaClass bi =
        i <= 2 ? beta_closed_form(i, r) : beta_lift(i, r, 2 * i + 1);
    b.b_comp.push_back(bi.rep);
  }
  return b;
}

HochschildElement flagch_unit(const Ctx& c, const FlagCHElement& z) {
  if (z.r != c->r) throw ContextMismatch("flagch_unit: rank mismatch");
  HochschildElement out(c);
  for (auto& [mask, fe] : z.c) out.add_term(mask, flag_unit(c, fe));
  return out;
}

SMat ch_wedge_matrix(const Ctx& c, const HochschildElement& a, int ha, int qa,
                     int h, int q) {
  CHBasis src = ch_slice(c, h, q);
  CHBasis dst = ch_slice(c, h + ha, q + qa);
  SMat m(dst.size(), src.size());
  std::vector<Int> e((size_t)src.size(), Int(0));
  for (int j = 0; j < src.size(); j++) {
    e[j] = 1;
    HochschildElement w = ch_mul(a, ch_from_vec(src, e));
    e[j] = 0;
    m.set_col(j, ch_to_vec(dst, w));
  }
  return m;
}

SMat beta_hh_matrix(const Ctx& c, const HHGroup& hh, const BetaClass& b, int h,
                    int q) {
  if (b.prov == BetaProvenance::universal)
    throw EngineError("beta_hh_matrix: pass a single class, not the universal one");
  SMat w = ch_wedge_matrix(c, flagch_unit(c, b.rep), 1, b.degree(), h, q);
  return induced_map(hh.at(h, q).sq, hh.at(h + 1, q + b.degree()).sq, w);
}

const TwistedSlice& TwistedHomology::at(int h, int q) const {
  auto it = slices.find({h, q});
  if (it == slices.end())
    throw EngineError("TwistedHomology: slice (" + std::to_string(h) + ", " +
                      std::to_string(q) + ") not computed");
  return it->second;
}

TwistedHomology beta_twisted_homology(const Ctx& c, const BetaClass& b,
                                      int q_max) {
  TwistedHomology tw;
  tw.ctx = c;
  tw.beta = b;
  tw.q_max = q_max;
  int r = c->r, d = b.degree();
  HHGroup hh = hochschild_homology(c, q_max);

  std::map<std::pair<int, int>, SMat> dmat;  // beta wedge at (h, q)
  auto D = [&](int h, int q) -> const SMat& {
    auto key = std::make_pair(h, q);
    auto it = dmat.find(key);
    if (it == dmat.end())
      it = dmat.emplace(key, beta_hh_matrix(c, hh, b, h, q)).first;
    return it->second;
  };

  for (int h = 0; h <= r; h++) {
    for (int q = 0; q + d <= q_max; q++) {
      long g = (long)hh.at(h, q).sq.live.size();
      SMat rel_mid = hh.at(h, q).sq.live_relations();
      SMat d_out, rel_next;
      if (h + 1 <= r) {
        d_out = D(h, q);
        rel_next = hh.at(h + 1, q + d).sq.live_relations();
      } else {
        d_out = SMat(0, (int)g);
        rel_next = SMat(0, 0);
      }
      SMat d_in((int)g, 0);
      if (h >= 1 && q - d >= 0) d_in = D(h - 1, q - d);
      TwistedSlice s;
      s.sq = homology_presented(d_in, rel_mid, d_out, rel_next);
      s.group = s.sq.group();
      tw.slices[{h, q}] = std::move(s);
    }
  }
  return tw;
}

namespace {

// All m in N^k with sum M, lexicographic.
void comps_rec(int k, int M, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if ((int)cur.size() == k - 1) {
    cur.push_back(M);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= M; v++) {
    cur.push_back(v);
    comps_rec(k, M - v, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> compositions(int k, int M) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  comps_rec(k, M, cur, out);
  return out;
}

int bshift(const std::vector<int>& m) {
  int s = 0;
  for (int i = 0; i < (int)m.size(); i++) s += 2 * (i + 1) * m[i];
  return s;
}

SMat blockdiag(const std::vector<SMat>& blocks) {
  int nr = 0, nc = 0;
  for (auto& b : blocks) nr += b.nr, nc += b.nc;
  SMat m(nr, nc);
  int ro = 0, co = 0;
  for (auto& b : blocks) {
    for (int i = 0; i < b.nr; i++)
      for (auto& [j, v] : b.rows[i]) m.rows[ro + i][co + j] = v;
    ro += b.nr, co += b.nc;
  }
  return m;
}

}  // namespace

UnivWordHomology universal_word_homology(const Ctx& c, const BetaClass& bu,
                                         int B, int t_max) {
  if (bu.prov != BetaProvenance::universal)
    throw EngineError("universal_word_homology: needs the universal class");
  if (B < 1) throw EngineError("universal_word_homology: need B >= 1");
  int k = bu.n, r = c->r;
  UnivWordHomology uw;
  uw.k = k;
  uw.B = B;
  uw.r = r;
  uw.t_max = t_max;

  int q_hh = t_max + 1 + 2 * k * B;
  if (q_hh < 0) return uw;
  HHGroup hh = hochschild_homology(c, q_hh);

  std::vector<HochschildElement> pulls;
  for (int i = 1; i <= k; i++) pulls.push_back(flagch_unit(c, bu.b_comp[i - 1]));

  // Wedge by beta_i induced on HH, cached per (i, h, q).
  std::map<std::tuple<int, int, int>, SMat> dcache;
  auto D = [&](int i, int h, int q) -> const SMat& {
    auto key = std::make_tuple(i, h, q);
    auto it = dcache.find(key);
    if (it == dcache.end()) {
      SMat w = ch_wedge_matrix(c, pulls[i - 1], 1, 2 * i + 1, h, q);
      it = dcache
               .emplace(key, induced_map(hh.at(h, q).sq,
                                         hh.at(h + 1, q + 2 * i + 1).sq, w))
               .first;
    }
    return it->second;
  };
  auto live = [&](int h, int q) -> long {
    if (h < 0 || h > r || q < 0 || q > q_hh) return 0;
    return (long)hh.at(h, q).sq.live.size();
  };

  // Layer of the complex at b-degree M, Hochschild degree h, total degree t:
  // one block per multidegree m with sum M, sitting in HH(h, t + 2 sum i m_i).
  struct Layer {
    std::vector<std::vector<int>> ms;
    std::vector<int> off, q;
    int total = 0;
  };
  auto layer = [&](int M, int h, int t) {
    Layer L;
    if (M < 0 || h < 0 || h > r) return L;
    L.ms = compositions(k, M);
    for (auto& m : L.ms) {
      int qm = t + bshift(m);
      L.off.push_back(L.total);
      L.q.push_back(qm);
      L.total += (int)live(h, qm);
    }
    return L;
  };

  for (int M = 0; M + 1 <= B; M++) {
    for (int h = 0; h <= r; h++) {
      for (int t = -2 * k * (B - 1); t <= t_max; t++) {
        if (((t - h) % 2 + 2) % 2 != 0) continue;
        Layer mid = layer(M, h, t);
        if (mid.total == 0) continue;
        Layer nxt = layer(M + 1, h + 1, t + 1);
        Layer prv = layer(M - 1, h - 1, t - 1);

        std::vector<SMat> mrel, nrel;
        for (size_t a = 0; a < mid.ms.size(); a++)
          if (live(h, mid.q[a]) > 0)
            mrel.push_back(hh.at(h, mid.q[a]).sq.live_relations());
        for (size_t a = 0; a < nxt.ms.size(); a++)
          if (live(h + 1, nxt.q[a]) > 0)
            nrel.push_back(hh.at(h + 1, nxt.q[a]).sq.live_relations());

        SMat d_out(nxt.total, mid.total);
        for (size_t a = 0; a < mid.ms.size(); a++) {
          if (live(h, mid.q[a]) == 0) continue;
          for (int i = 1; i <= k; i++) {
            std::vector<int> m2 = mid.ms[a];
            m2[i - 1]++;
            auto it = std::find(nxt.ms.begin(), nxt.ms.end(), m2);
            if (it == nxt.ms.end()) continue;
            size_t bidx = it - nxt.ms.begin();
            if (live(h + 1, nxt.q[bidx]) == 0) continue;
            const SMat& blk = D(i, h, mid.q[a]);
            for (int ri = 0; ri < blk.nr; ri++)
              for (auto& [cj, v] : blk.rows[ri])
                d_out.add_at(nxt.off[bidx] + ri, mid.off[a] + cj, v);
          }
        }

        SMat d_in(mid.total, prv.total);
        for (size_t a = 0; a < prv.ms.size(); a++) {
          if (live(h - 1, prv.q[a]) == 0) continue;
          for (int i = 1; i <= k; i++) {
            std::vector<int> m2 = prv.ms[a];
            m2[i - 1]++;
            auto it = std::find(mid.ms.begin(), mid.ms.end(), m2);
            if (it == mid.ms.end()) continue;
            size_t bidx = it - mid.ms.begin();
            if (live(h, mid.q[bidx]) == 0) continue;
            const SMat& blk = D(i, h - 1, prv.q[a]);
            for (int ri = 0; ri < blk.nr; ri++)
              for (auto& [cj, v] : blk.rows[ri])
                d_in.add_at(mid.off[bidx] + ri, prv.off[a] + cj, v);
          }
        }

        Subquotient sq = homology_presented(d_in, blockdiag(mrel), d_out,
                                            blockdiag(nrel));
        AbGroup g = sq.group();
        if (!g.is_trivial()) uw.groups[{M, h, t}] = g;
      }
    }
  }
  return uw;
}

DegenerationReport degeneration_check(const BraidWord& w, int k, int B,
                                      int t_max) {
  for (int l : w.letters)
    if (l < 0) throw RangeError("degeneration_check: needs a positive word");
  uint32_t full = w.length() == 0 ? 0u : (1u << w.length()) - 1;
  Ctx c = subword_ctx(w, full);
  BetaClass bu = beta_universal(k, c->r);

  DegenerationReport rep;
  rep.slices = universal_word_homology(c, bu, B, t_max);
  for (auto& [key, g] : rep.slices.groups) {
    auto& [M, h, t] = key;
    (void)M;
    if (((t - c->r) % 2 + 2) % 2 != 0) rep.parity_ok = false;
    if (h != c->r) rep.concentrated_top = false;
  }
  rep.collapse_forced = rep.parity_ok;
  return rep;
}

}  // namespace krh
