#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "krh/ints.hpp"

namespace krh {

// Sparse integer matrix, row-major.
class SMat {
 public:
  int nr = 0, nc = 0;
  std::vector<std::map<int, Int>> rows;

  SMat() = default;
  SMat(int r, int c) : nr(r), nc(c), rows(r) {}

  static SMat identity(int n) {
    SMat m(n, n);
    for (int i = 0; i < n; i++) m.rows[i][i] = 1;
    return m;
  }

  const Int* at(int i, int j) const {
    auto it = rows[i].find(j);
    return it == rows[i].end() ? nullptr : &it->second;
  }
  Int get(int i, int j) const {
    auto* p = at(i, j);
    return p ? *p : Int(0);
  }
  void set(int i, int j, Int v) {
    if (v == 0)
      rows[i].erase(j);
    else
      rows[i][j] = std::move(v);
  }
  void add_at(int i, int j, const Int& v) {
    if (v == 0) return;
    auto it = rows[i].find(j);
    if (it == rows[i].end()) {
      rows[i][j] = v;
    } else {
      it->second += v;
      if (it->second == 0) rows[i].erase(it);
    }
  }

  long nnz() const {
    long n = 0;
    for (auto& r : rows) n += (long)r.size();
    return n;
  }
  bool is_zero() const { return nnz() == 0; }

  SMat transpose() const {
    SMat m(nc, nr);
    for (int i = 0; i < nr; i++)
      for (auto& [j, v] : rows[i]) m.rows[j][i] = v;
    return m;
  }

  SMat operator*(const SMat& o) const;
  SMat operator+(const SMat& o) const;
  SMat operator-(const SMat& o) const;
  SMat operator*(const Int& c) const;
  bool operator==(const SMat& o) const;

  std::vector<Int> apply(const std::vector<Int>& v) const;  // this * v
  SMat col(int j) const;                                    // nr x 1 slice
  void set_col(int j, const std::vector<Int>& v);
  std::vector<Int> col_vec(int j) const;

  // Horizontal concatenation [this | o].
  SMat hcat(const SMat& o) const;

  std::string str() const;
};

// U * A * V == D, with U (nr x nr) and V (nc x nc) unimodular.  diag holds the
// nonzero invariant factors d_1 | d_2 | ... (positive).  Uinv is maintained so
// A == Uinv * D * Vinv but only Uinv is kept (Vinv unused downstream).
struct SNFResult {
  std::vector<Int> diag;
  int rank = 0;
  SMat U, Uinv, V;
};

// Smith normal form; pivoting picks the minimal |entry| with least fill,
// deterministic tie-break by (row, col).
SNFResult snf(SMat a, bool want_u = true, bool want_v = true);

long rank(const SMat& a);

// Columns form a basis of ker(a) (a pure sublattice of Z^nc).
SMat kernel_basis(const SMat& a);

// One integer solution x of a*x = b, if any.
std::optional<std::vector<Int>> solve(const SMat& a, const std::vector<Int>& b);
// Solve for all columns of B at once: a*X = B.
std::optional<SMat> solve_mat(const SMat& a, const SMat& b);

// Row-style Hermite normal form: returns a matrix whose rows are the unique
// HNF basis of the row lattice of a (zero rows dropped).  Pivot entries
// positive, entries above pivots reduced to [0, pivot).
SMat hnf_rows(SMat a);

// Reduce v modulo the row lattice of hnf (must be in hnf_rows form); the
// result is the canonical coset representative.
std::vector<Int> hnf_reduce(const SMat& hnf, std::vector<Int> v);

// Finitely generated abelian group: Z^free_rank + sum Z/torsion[i],
// torsion in ascending divisibility order, each > 1.
struct AbGroup {
  long free_rank = 0;
  std::vector<Int> torsion;
  bool operator==(const AbGroup& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  long total_rank() const { return free_rank; }
  std::string str() const;
};

// Homology-style subquotient ker(d_out)/im(d_in) of a based free lattice.
// Remembers enough to express arbitrary cycles in terms of the chosen
// generators, which drives all induced-map computations.
class Subquotient {
 public:
  int ambient = 0;
  SMat kerb;                // ambient x k, columns = basis of ker(d_out)
  SMat adapt;               // k x k unimodular; adapted gens = kerb * adapt
  std::vector<Int> orders;  // size k: 0 free, 1 dead, d>1 torsion
  std::vector<int> live;    // indices t with orders[t] != 1

  AbGroup group() const;
  // Ambient coordinates of the live generators, as columns.
  SMat reps() const;
  // Express an ambient cycle in live-generator coordinates (torsion coords
  // normalized to [0, d)).  Throws EngineError if not a cycle.
  std::vector<Int> express(const std::vector<Int>& cycle) const;
  SMat express_mat(const SMat& cycles) const;  // columnwise express
  // Relation columns on live generators: o * e_t for each torsion generator.
  SMat live_relations() const;
};

// d_in: ambient x m (image generators), d_out: p x ambient.
// Requires d_out * d_in == 0.
Subquotient subquotient(const SMat& d_in, const SMat& d_out);

// Matrix of the map induced on subquotients by the ambient chain map f
// (f maps src ambient to dst ambient; must send cycles to cycles and
// boundaries to boundaries).  Result: dst live x src live.
SMat induced_map(const Subquotient& src, const Subquotient& dst, const SMat& f);

// Quotient span(big)/span(small) of column-generated sublattices of
// Z^ambient; requires span(small) inside span(big).
Subquotient quotient_of_spans(int ambient, const SMat& big, const SMat& small);

// Homology ker(d_out)/im(d_in) where the middle group is presented as
// Z^g / span(rel_mid) and the target of d_out as Z^{g'} / span(rel_next);
// maps given on generator coordinates.  The result's ambient is g.
Subquotient homology_presented(const SMat& d_in, const SMat& rel_mid,
                               const SMat& d_out, const SMat& rel_next);

// Properties of the group hom G1 -> G2 given by f on live generators.
bool hom_injective(const Subquotient& g1, const Subquotient& g2, const SMat& f);
bool hom_surjective(const Subquotient& g2, const SMat& f);

}  // namespace krh
