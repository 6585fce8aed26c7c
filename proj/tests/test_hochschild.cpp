#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "krh/hochschild.hpp"
#include "krh/schubert.hpp"

using namespace krh;

TEST_CASE("differential on generators") {
  // r = 1, empty word: x = y so d_H vanishes
  auto c0 = make_ctx(1, {});
  CHECK(hoch_dh(HochschildElement::xhat(c0, 1)).is_zero());

  // d_H(xhat_1) = -delta_1 in CH(B_(1))
  auto c = make_ctx(2, {1});
  auto d1 = hoch_dh(HochschildElement::xhat(c, 1));
  CHECK(d1 ==
        HochschildElement::from_soergel(-SoergelElement::delta(c, 1)));

  // d_H(xhat_1 ^ xhat_2) = -delta_1 xhat_2 - delta_1 xhat_1
  auto x1 = HochschildElement::xhat(c, 1), x2 = HochschildElement::xhat(c, 2);
  auto w = ch_mul(x1, x2);
  auto dw = hoch_dh(w);
  HochschildElement want(c);
  want.add_term(2u, -SoergelElement::delta(c, 1));
  want.add_term(1u, -SoergelElement::delta(c, 1));
  CHECK(dw == want);

  // antisymmetry of the product
  CHECK(ch_mul(x2, x1) == -w);
  CHECK(ch_mul(x1, x1).is_zero());
}

TEST_CASE("d_H squares to zero") {
  auto c = make_ctx(2, {1, 1});
  auto x1 = HochschildElement::xhat(c, 1), x2 = HochschildElement::xhat(c, 2);
  auto d = SoergelElement::delta(c, 2);
  std::vector<HochschildElement> zs = {
      x1,
      x2,
      ch_mul(x1, x2),
      ch_mul(HochschildElement::from_soergel(d), x1),
      ch_mul(HochschildElement::from_soergel(right_action(d, 1)),
             ch_mul(x1, x2)),
  };
  for (const auto& z : zs) CHECK(hoch_dh(hoch_dh(z)).is_zero());

  for (int h = 1; h <= 2; h++)
    for (int q = h; q <= 8; q++)
      CHECK((dh_matrix(c, h - 1, q + 1) * dh_matrix(c, h, q)).is_zero());

  // graded Leibniz rule
  auto a = HochschildElement::from_soergel(right_action(d, 2));
  auto z = ch_mul(x1, x2);
  CHECK(hoch_dh(ch_mul(a, z)) == ch_mul(a, hoch_dh(z)));
  auto odd = ch_mul(HochschildElement::from_soergel(d), x1);
  // deg-1 left factor flips the sign on the right term
  CHECK(hoch_dh(ch_mul(odd, x2)) ==
        ch_mul(hoch_dh(odd), x2) - ch_mul(odd, hoch_dh(x2)));
}

TEST_CASE("homology slices") {
  // B_empty at r = 1: HH = Z[x] (x) Lambda(xhat)
  auto c0 = make_ctx(1, {});
  auto hh0 = hochschild_homology(c0, 5);
  for (int q = 0; q <= 5; q++) {
    CHECK(hh0.at(0, q).group == AbGroup{q % 2 ? 0 : 1, {}});
    CHECK(hh0.at(1, q).group == AbGroup{q % 2 ? 1 : 0, {}});
  }
  CHECK(hh0.at(1, 3).group.free_rank == 1);

  // B_(1) at r = 2, slice (0,0) is free of rank 1
  auto c = make_ctx(2, {1});
  auto hh = hochschild_homology(c, 8);
  CHECK(hh.at(0, 0).group == AbGroup{1, {}});

  // negative q slices are empty
  CHECK(ch_slice(c, 0, -2).size() == 0);

  // all computed slices are torsion-free
  for (const auto& [key, s] : hh.slices) CHECK(s.group.torsion.empty());
  auto c2 = make_ctx(2, {1, 1});
  auto hh2 = hochschild_homology(c2, 8);
  for (const auto& [key, s] : hh2.slices) CHECK(s.group.torsion.empty());
  auto c3 = make_ctx(3, {1, 2});
  auto hh3 = hochschild_homology(c3, 6);
  for (const auto& [key, s] : hh3.slices) CHECK(s.group.torsion.empty());

  // d_H preserves q + h, so Euler characteristics match along that diagonal
  for (int u = 0; u <= 8; u++) {
    long chi_ch = 0, chi_hh = 0;
    for (int h = 0; h <= 2 && h <= u; h++) {
      int sg = h % 2 ? -1 : 1;
      chi_ch += sg * ch_slice(c2, h, u - h).size();
      chi_hh += sg * hh2.at(h, u - h).group.free_rank;
    }
    CHECK(chi_ch == chi_hh);
  }
}

TEST_CASE("flag linearity of d_H") {
  // multiplication by the image of S_1 commutes with d_H
  auto c = make_ctx(2, {1, 1});
  auto s1 = flag_unit(c, schubert_simple(2, 1));
  for (int h = 1; h <= 2; h++)
    for (int q = h; q <= 6; q++) {
      SMat a = ch_mult_matrix(c, s1, h - 1, q + 1) * dh_matrix(c, h, q);
      SMat b = dh_matrix(c, h, q + 2) * ch_mult_matrix(c, s1, h, q);
      CHECK((a - b).is_zero());
    }
}

TEST_CASE("induced maps on homology") {
  auto c = make_ctx(2, {1});
  auto hh = hochschild_homology(c, 8);

  // identity induces identity
  auto idf = [&](int h, int q) {
    return SMat::identity(ch_slice(c, h, q).size());
  };
  for (int h = 0; h <= 2; h++) {
    auto m = hh_induced_map(hh, hh, h, 4, 0, idf);
    CHECK(m == SMat::identity((int)hh.at(h, 4).sq.live.size()));
  }

  // zero map induces zero
  auto zf = [&](int h, int q) {
    auto s = ch_slice(c, h, q).size();
    return SMat(s, s);
  };
  CHECK(hh_induced_map(hh, hh, 1, 5, 0, zf).is_zero());

  // multiplication by x_1 - y_1 = -delta_1 is zero on homology
  auto mdel = -SoergelElement::delta(c, 1);
  auto mf = [&](int h, int q) { return ch_mult_matrix(c, mdel, h, q); };
  for (int h = 0; h <= 2; h++)
    for (int q = h; q <= 6; q++) {
      if (hh.at(h, q).group.is_trivial()) continue;
      CHECK(hh_induced_map(hh, hh, h, q, 2, mf).is_zero());
    }

  // a random non-chain matrix is rejected
  auto bad = [&](int h, int q) {
    auto s = ch_slice(c, h, q).size();
    SMat m(s, s);
    for (int i = 0; i < s; i++)
      for (int j = 0; j < s; j++) m.set(i, j, 1 + ((i + j) % 2));
    return m;
  };
  CHECK_THROWS_AS(hh_induced_map(hh, hh, 1, 3, 0, bad), NotChainMap);
}
