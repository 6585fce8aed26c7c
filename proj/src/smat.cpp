#include "krh/smat.hpp"

#include <algorithm>
#include <sstream>

namespace krh {

SMat SMat::operator*(const SMat& o) const {
  if (nc != o.nr) throw EngineError("matmul shape mismatch");
  SMat r(nr, o.nc);
  for (int i = 0; i < nr; i++) {
    for (auto& [k, a] : rows[i]) {
      for (auto& [j, b] : o.rows[k]) r.add_at(i, j, a * b);
    }
  }
  return r;
}

SMat SMat::operator+(const SMat& o) const {
  if (nr != o.nr || nc != o.nc) throw EngineError("matadd shape mismatch");
  SMat r = *this;
  for (int i = 0; i < nr; i++)
    for (auto& [j, v] : o.rows[i]) r.add_at(i, j, v);
  return r;
}

SMat SMat::operator-(const SMat& o) const {
  if (nr != o.nr || nc != o.nc) throw EngineError("matsub shape mismatch");
  SMat r = *this;
  for (int i = 0; i < nr; i++)
    for (auto& [j, v] : o.rows[i]) r.add_at(i, j, -v);
  return r;
}

SMat SMat::operator*(const Int& c) const {
  SMat r(nr, nc);
  if (c == 0) return r;
  for (int i = 0; i < nr; i++)
    for (auto& [j, v] : rows[i]) r.rows[i][j] = v * c;
  return r;
}

bool SMat::operator==(const SMat& o) const {
  return nr == o.nr && nc == o.nc && rows == o.rows;
}

std::vector<Int> SMat::apply(const std::vector<Int>& v) const {
  if ((int)v.size() != nc) throw EngineError("apply shape mismatch");
  std::vector<Int> r(nr, 0);
  for (int i = 0; i < nr; i++)
    for (auto& [j, a] : rows[i]) r[i] += a * v[j];
  return r;
}

SMat SMat::col(int j) const {
  SMat r(nr, 1);
  for (int i = 0; i < nr; i++) {
    auto* p = at(i, j);
    if (p) r.rows[i][0] = *p;
  }
  return r;
}

std::vector<Int> SMat::col_vec(int j) const {
  std::vector<Int> r(nr, 0);
  for (int i = 0; i < nr; i++) r[i] = get(i, j);
  return r;
}

void SMat::set_col(int j, const std::vector<Int>& v) {
  if ((int)v.size() != nr) throw EngineError("set_col shape mismatch");
  for (int i = 0; i < nr; i++) set(i, j, v[i]);
}

SMat SMat::hcat(const SMat& o) const {
  if (nr != o.nr) throw EngineError("hcat shape mismatch");
  SMat r(nr, nc + o.nc);
  for (int i = 0; i < nr; i++) {
    r.rows[i] = rows[i];
    for (auto& [j, v] : o.rows[i]) r.rows[i][nc + j] = v;
  }
  return r;
}

std::string SMat::str() const {
  std::ostringstream os;
  for (int i = 0; i < nr; i++) {
    os << "[";
    for (int j = 0; j < nc; j++) os << (j ? " " : "") << get(i, j);
    os << "]\n";
  }
  return os.str();
}

namespace {

// Working state for SNF with column occupancy index.
struct Work {
  SMat a;
  std::vector<std::set<int>> colrows;  // rows holding a nonzero in each column
  bool want_u, want_v;
  SMat u, uinv, v;

  explicit Work(SMat m, bool wu, bool wv) : a(std::move(m)), want_u(wu), want_v(wv) {
    colrows.assign(a.nc, {});
    for (int i = 0; i < a.nr; i++)
      for (auto& [j, val] : a.rows[i]) colrows[j].insert(i);
    if (want_u) {
      u = SMat::identity(a.nr);
      uinv = SMat::identity(a.nr);
    }
    if (want_v) v = SMat::identity(a.nc);
  }

  void set_entry(int i, int j, Int val) {
    bool had = a.rows[i].count(j) > 0;
    if (val == 0) {
      if (had) {
        a.rows[i].erase(j);
        colrows[j].erase(i);
      }
    } else {
      a.rows[i][j] = std::move(val);
      if (!had) colrows[j].insert(i);
    }
  }

  // row i += c * row k
  void addrow(int i, int k, const Int& c) {
    if (c == 0) return;
    for (auto& [j, val] : a.rows[k]) {
      bool had = a.rows[i].count(j) > 0;
      auto& cell = a.rows[i][j];
      cell += c * val;
      if (cell == 0) {
        a.rows[i].erase(j);
        if (had) colrows[j].erase(i);
      } else if (!had) {
        colrows[j].insert(i);
      }
    }
    if (want_u) {
      // u := L u, uinv := uinv L^{-1} with L = (I + c E_{ik})
      for (auto& [j, val] : u.rows[k]) u.add_at(i, j, c * val);
      for (int r = 0; r < uinv.nr; r++) {
        auto* p = uinv.at(r, i);
        if (p) uinv.add_at(r, k, -c * *p);
      }
    }
  }

  // col j += c * col k
  void addcol(int j, int k, const Int& c) {
    if (c == 0) return;
    auto rows_k = colrows[k];  // copy: we mutate col j only
    for (int i : rows_k) {
      const Int& val = a.rows[i][k];
      bool had = a.rows[i].count(j) > 0;
      auto& cell = a.rows[i][j];
      cell += c * val;
      if (cell == 0) {
        a.rows[i].erase(j);
        if (had) colrows[j].erase(i);
      } else if (!had) {
        colrows[j].insert(i);
      }
    }
    if (want_v) {
      for (int r = 0; r < v.nr; r++) {
        auto* p = v.at(r, k);
        if (p) v.add_at(r, j, c * *p);
      }
    }
  }

  void swaprows(int i, int k) {
    if (i == k) return;
    for (auto& [j, val] : a.rows[i]) colrows[j].erase(i);
    for (auto& [j, val] : a.rows[k]) colrows[j].erase(k);
    std::swap(a.rows[i], a.rows[k]);
    for (auto& [j, val] : a.rows[i]) colrows[j].insert(i);
    for (auto& [j, val] : a.rows[k]) colrows[j].insert(k);
    if (want_u) {
      std::swap(u.rows[i], u.rows[k]);
      for (int r = 0; r < uinv.nr; r++) {
        Int pi = uinv.get(r, i), pk = uinv.get(r, k);
        uinv.set(r, i, pk);
        uinv.set(r, k, pi);
      }
    }
  }

  void swapcols(int j, int k) {
    if (j == k) return;
    std::set<int> uni;
    for (int r : colrows[j]) uni.insert(r);
    for (int r : colrows[k]) uni.insert(r);
    for (int i : uni) {
      Int aj = 0, ak = 0;
      auto itj = a.rows[i].find(j);
      if (itj != a.rows[i].end()) aj = itj->second;
      auto itk = a.rows[i].find(k);
      if (itk != a.rows[i].end()) ak = itk->second;
      set_entry(i, j, ak);
      set_entry(i, k, aj);
    }
    if (want_v) {
      for (int r = 0; r < v.nr; r++) {
        Int pj = v.get(r, j), pk = v.get(r, k);
        v.set(r, j, pk);
        v.set(r, k, pj);
      }
    }
  }

  void negrow(int i) {
    for (auto& [j, val] : a.rows[i]) val = -val;
    if (want_u) {
      for (auto& [j, val] : u.rows[i]) val = -val;
      for (int r = 0; r < uinv.nr; r++) {
        auto* p = uinv.at(r, i);
        if (p) uinv.set(r, i, -*p);
      }
    }
  }
};

}  // namespace

SNFResult snf(SMat a0, bool want_u, bool want_v) {
  Work w(std::move(a0), want_u, want_v);
  SMat& a = w.a;
  int n = std::min(a.nr, a.nc);
  SNFResult res;

  int t = 0;
  for (; t < n; t++) {
    // find pivot: minimal |value|, then least fill, then (i, j)
    int pi = -1, pj = -1;
    Int pv = 0;
    long pfill = 0;
    for (int i = t; i < a.nr; i++) {
      for (auto& [j, val] : a.rows[i]) {
        if (j < t) continue;
        Int av = iabs(val);
        long fill = (long)a.rows[i].size() + (long)w.colrows[j].size();
        if (pi < 0 || av < pv || (av == pv && fill < pfill)) {
          pi = i;
          pj = j;
          pv = av;
          pfill = fill;
        }
      }
    }
    if (pi < 0) break;  // submatrix is zero
    w.swaprows(t, pi);
    w.swapcols(t, pj);

    for (;;) {
      // clear column t below the pivot
      bool colclean = false;
      while (!colclean) {
        colclean = true;
        auto rows_t = w.colrows[t];
        // choose smallest |entry| in column (including pivot) as pivot
        int best = t;
        Int bestv = iabs(a.get(t, t));
        for (int i : rows_t) {
          if (i <= t) continue;
          Int av = iabs(a.rows[i][t]);
          if (bestv == 0 || (av != 0 && av < bestv)) {
            best = i;
            bestv = av;
          }
        }
        if (best != t) w.swaprows(t, best);
        Int piv = a.get(t, t);
        if (piv == 0) throw EngineError("snf: lost pivot");
        auto rows_now = w.colrows[t];
        for (int i : rows_now) {
          if (i <= t) continue;
          Int q = sdiv(a.rows[i][t], piv);
          w.addrow(i, t, -q);
          if (a.rows[i].count(t)) colclean = false;  // remainder left
        }
      }
      // clear row t right of the pivot (only row t holds column t now)
      bool rowclean = false;
      while (!rowclean) {
        rowclean = true;
        // smallest |entry| in row t (cols >= t) as pivot via col swap
        int best = t;
        Int bestv = iabs(a.get(t, t));
        for (auto& [j, val] : a.rows[t]) {
          if (j <= t) continue;
          Int av = iabs(val);
          if (bestv == 0 || (av != 0 && av < bestv)) {
            best = j;
            bestv = av;
          }
        }
        if (best != t) w.swapcols(t, best);
        Int piv = a.get(t, t);
        if (piv == 0) throw EngineError("snf: lost pivot (row)");
        std::vector<int> cols;
        for (auto& [j, val] : a.rows[t])
          if (j > t) cols.push_back(j);
        for (int j : cols) {
          Int q = sdiv(a.rows[t][j], piv);
          w.addcol(j, t, -q);
          if (a.rows[t].count(j)) rowclean = false;
        }
      }
      // column may have been re-dirtied only if row ops touched col t; they
      // add multiples of col t to other cols, so col t is still clean.  But
      // row cleaning can change the pivot magnitude; ensure col still clean:
      bool dirty = false;
      for (int i : w.colrows[t])
        if (i > t) dirty = true;
      if (dirty) continue;

      // divisibility fix-up: pivot must divide every remaining entry
      Int piv = a.get(t, t);
      int badrow = -1;
      for (int i = t + 1; i < a.nr && badrow < 0; i++) {
        for (auto& [j, val] : a.rows[i]) {
          if (j <= t) continue;
          if (!divides(piv, val)) {
            badrow = i;
            break;
          }
        }
      }
      if (badrow < 0) break;
      w.addrow(t, badrow, 1);
    }
    if (a.get(t, t) < 0) w.negrow(t);
  }

  res.rank = 0;
  for (int i = 0; i < t; i++) {
    Int d = a.get(i, i);
    if (d != 0) {
      res.diag.push_back(d);
      res.rank++;
    }
  }
  res.U = std::move(w.u);
  res.Uinv = std::move(w.uinv);
  res.V = std::move(w.v);
  return res;
}

long rank(const SMat& a) {
  auto r = snf(a, false, false);
  return r.rank;
}

SMat kernel_basis(const SMat& a) {
  if (a.nc == 0) return SMat(0, 0);
  if (a.nr == 0 || a.is_zero()) {
    SMat id = SMat::identity(a.nc);
    return id;
  }
  auto r = snf(a, false, true);
  int k = a.nc - r.rank;
  SMat ker(a.nc, k);
  for (int idx = 0; idx < k; idx++) {
    int j = r.rank + idx;
    for (int i = 0; i < a.nc; i++) {
      Int val = r.V.get(i, j);
      if (val != 0) ker.rows[i][idx] = val;
    }
  }
  return ker;
}

std::optional<SMat> solve_mat(const SMat& a, const SMat& b) {
  if (a.nr != b.nr) throw EngineError("solve shape mismatch");
  auto r = snf(a, true, true);
  SMat ub = r.U * b;
  SMat y(a.nc, b.nc);
  for (int c = 0; c < b.nc; c++) {
    for (int i = 0; i < a.nr; i++) {
      Int rhs = ub.get(i, c);
      if (i < r.rank) {
        if (!divides(r.diag[i], rhs)) return std::nullopt;
        if (i < a.nc) y.set(i, c, rhs / r.diag[i]);
      } else if (rhs != 0) {
        return std::nullopt;
      }
    }
  }
  return r.V * y;
}

std::optional<std::vector<Int>> solve(const SMat& a, const std::vector<Int>& b) {
  SMat bm(a.nr, 1);
  for (int i = 0; i < a.nr; i++) bm.set(i, 0, b[i]);
  auto x = solve_mat(a, bm);
  if (!x) return std::nullopt;
  return x->col_vec(0);
}

SMat hnf_rows(SMat a) {
  int pr = 0;  // pivot row count
  for (int j = 0; j < a.nc && pr < a.nr; j++) {
    // gather rows >= pr with nonzero in column j; euclid them down
    for (;;) {
      int best = -1;
      Int bestv = 0;
      for (int i = pr; i < a.nr; i++) {
        auto* p = a.at(i, j);
        if (p) {
          Int av = iabs(*p);
          if (best < 0 || av < bestv) {
            best = i;
            bestv = av;
          }
        }
      }
      if (best < 0) break;
      std::swap(a.rows[pr], a.rows[best]);
      Int piv = a.get(pr, j);
      bool again = false;
      for (int i = pr + 1; i < a.nr; i++) {
        auto* p = a.at(i, j);
        if (!p) continue;
        Int q = sdiv(*p, piv);
        // row i -= q * row pr
        for (auto& [jj, val] : a.rows[pr]) a.add_at(i, jj, -q * val);
        if (a.at(i, j)) again = true;
      }
      if (!again) break;
    }
    if (a.at(pr, j)) {
      if (a.get(pr, j) < 0)
        for (auto& [jj, val] : a.rows[pr]) val = -val;
      // reduce rows above
      Int piv = a.get(pr, j);
      for (int i = 0; i < pr; i++) {
        auto* p = a.at(i, j);
        if (!p) continue;
        Int q = *p / piv;
        if (*p < 0 && *p % piv != 0) q -= 1;  // floor division
        if (q != 0)
          for (auto& [jj, val] : a.rows[pr]) a.add_at(i, jj, -q * val);
      }
      pr++;
    }
  }
  SMat out(pr, a.nc);
  for (int i = 0; i < pr; i++) out.rows[i] = a.rows[i];
  return out;
}

std::vector<Int> hnf_reduce(const SMat& hnf, std::vector<Int> v) {
  if ((int)v.size() != hnf.nc) throw EngineError("hnf_reduce shape mismatch");
  for (int i = 0; i < hnf.nr; i++) {
    int j = hnf.rows[i].empty() ? -1 : hnf.rows[i].begin()->first;
    if (j < 0) continue;
    Int piv = hnf.rows[i].begin()->second;
    Int q = v[j] / piv;
    if (v[j] < 0 && v[j] % piv != 0) q -= 1;
    if (q != 0)
      for (auto& [jj, val] : hnf.rows[i]) v[jj] -= q * val;
  }
  return v;
}

std::string AbGroup::str() const {
  std::ostringstream os;
  if (is_trivial()) return "0";
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (auto& d : torsion) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

AbGroup Subquotient::group() const {
  AbGroup g;
  for (auto& d : orders) {
    if (d == 0) g.free_rank++;
    else if (d > 1) g.torsion.push_back(d);
  }
  std::sort(g.torsion.begin(), g.torsion.end());
  return g;
}

SMat Subquotient::reps() const {
  SMat gens = kerb * adapt;  // ambient x k
  SMat out(ambient, (int)live.size());
  for (size_t c = 0; c < live.size(); c++) {
    for (int i = 0; i < ambient; i++) {
      Int v = gens.get(i, live[c]);
      if (v != 0) out.rows[i][(int)c] = v;
    }
  }
  return out;
}

std::vector<Int> Subquotient::express(const std::vector<Int>& cycle) const {
  SMat b(ambient, 1);
  for (int i = 0; i < ambient; i++) b.set(i, 0, cycle[i]);
  auto e = express_mat(b);
  return e.col_vec(0);
}

SMat Subquotient::express_mat(const SMat& cycles) const {
  // coords z: kerb * z = cycles
  auto z = solve_mat(kerb, cycles);
  if (!z) throw EngineError("express: vector is not a cycle");
  // coords in adapted basis: adapt * w = z  =>  w = adapt^{-1} z; we stored
  // adapt as unimodular, invert by solving.
  auto w = solve_mat(adapt, *z);
  if (!w) throw EngineError("express: basis inversion failed");
  SMat out((int)live.size(), cycles.nc);
  for (size_t r = 0; r < live.size(); r++) {
    int t = live[r];
    for (int c = 0; c < cycles.nc; c++) {
      Int val = w->get(t, c);
      if (orders[t] > 1) {
        val %= orders[t];
        if (val < 0) val += orders[t];
      }
      if (val != 0) out.rows[(int)r][c] = val;
    }
  }
  return out;
}

SMat Subquotient::live_relations() const {
  int n = (int)live.size();
  std::vector<std::pair<int, Int>> tor;
  for (int i = 0; i < n; i++)
    if (orders[live[i]] > 1) tor.push_back({i, orders[live[i]]});
  SMat out(n, (int)tor.size());
  for (size_t c = 0; c < tor.size(); c++) out.rows[tor[c].first][(int)c] = tor[c].second;
  return out;
}

namespace {

Subquotient finish_quotient(int ambient, SMat basis, const SMat& rel) {
  Subquotient s;
  s.ambient = ambient;
  s.kerb = std::move(basis);
  int k = s.kerb.nc;
  std::optional<SMat> w = solve_mat(s.kerb, rel);
  if (!w) throw EngineError("quotient: relations do not lie in the span");
  auto r = snf(*w, true, false);
  // adapted basis change: columns of Uinv
  s.adapt = r.Uinv;
  s.orders.assign(k, 0);
  for (int i = 0; i < r.rank; i++) s.orders[i] = r.diag[i];
  for (int t = 0; t < k; t++)
    if (s.orders[t] != 1) s.live.push_back(t);
  return s;
}

}  // namespace

Subquotient subquotient(const SMat& d_in, const SMat& d_out) {
  if (d_in.nr != d_out.nc) throw EngineError("subquotient: ambient mismatch");
  return finish_quotient(d_in.nr, kernel_basis(d_out), d_in);
}

SMat induced_map(const Subquotient& src, const Subquotient& dst, const SMat& f) {
  SMat srcreps = src.reps();
  SMat img = f * srcreps;
  return dst.express_mat(img);
}

Subquotient quotient_of_spans(int ambient, const SMat& big, const SMat& small) {
  if (big.nc && big.nr != ambient) throw EngineError("quotient_of_spans: shape");
  if (small.nc && small.nr != ambient) throw EngineError("quotient_of_spans: shape");
  SMat b = big.nc ? big : SMat(ambient, 0);
  SMat basis = hnf_rows(b.transpose()).transpose();
  return finish_quotient(ambient, basis, small.nc ? small : SMat(ambient, 0));
}

Subquotient homology_presented(const SMat& d_in, const SMat& rel_mid,
                               const SMat& d_out, const SMat& rel_next) {
  int g = d_out.nc;
  if (d_in.nc && d_in.nr != g) throw EngineError("homology_presented: d_in shape");
  if (rel_mid.nc && rel_mid.nr != g) throw EngineError("homology_presented: rel shape");
  SMat stacked = d_out.hcat(rel_next.nc ? rel_next : SMat(d_out.nr, 0));
  SMat K = kernel_basis(stacked);
  SMat cyc(g, K.nc);
  for (int i = 0; i < g && i < K.nr; i++) cyc.rows[i] = K.rows[i];
  SMat bnd = (d_in.nc ? d_in : SMat(g, 0)).hcat(rel_mid.nc ? rel_mid : SMat(g, 0));
  return quotient_of_spans(g, cyc, bnd);
}

bool hom_injective(const Subquotient& g1, const Subquotient& g2, const SMat& f) {
  int n1 = (int)g1.live.size();
  SMat st = f.hcat(g2.live_relations());
  SMat K = kernel_basis(st);
  for (int c = 0; c < K.nc; c++)
    for (int i = 0; i < n1; i++) {
      Int v = K.get(i, c);
      if (v == 0) continue;
      Int o = g1.orders[g1.live[i]];
      if (o == 0 || !divides(o, v)) return false;
    }
  return true;
}

bool hom_surjective(const Subquotient& g2, const SMat& f) {
  int n2 = (int)g2.live.size();
  SMat st = f.hcat(g2.live_relations());
  auto r = snf(st, false, false);
  if (r.rank < n2) return false;
  for (auto& d : r.diag)
    if (d != 1) return false;
  return true;
}

}  // namespace krh
