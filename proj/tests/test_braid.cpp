#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>

#include "doctest.h"
#include "krh/braid.hpp"

using namespace krh;

TEST_CASE("parse braid words") {
  auto w = parse_braid("1 1 1", 2);
  CHECK(w.letters == std::vector<int>({1, 1, 1}));
  auto v = parse_braid("[1,-2,1]", 3);
  CHECK(v.letters == std::vector<int>({1, -2, 1}));
  CHECK(parse_braid("", 1).length() == 0);
  CHECK_THROWS_AS(parse_braid("3", 2), RangeError);
  CHECK_THROWS_AS(parse_braid("0", 2), RangeError);
  CHECK_THROWS_AS(parse_braid("1x", 2), ParseError);
  CHECK_THROWS_AS(parse_braid("foo", 2), ParseError);
}

TEST_CASE("cube of a single positive crossing") {
  auto c = cube(parse_braid("1", 2));
  CHECK(c.nverts() == 2);
  CHECK(c.top == 1);
  REQUIRE(c.edges.size() == 1);
  CHECK(c.edges[0].positive);
  CHECK(c.edges[0].lo == 0);
  CHECK(c.edges[0].hi == 1);
  CHECK(c.shift[0] == 0);
  CHECK(c.shift[1] == 0);
  CHECK(c.grv[1] == 0);  // I_+ itself
  CHECK(c.grv[0] == 1);
}

TEST_CASE("cube of a single negative crossing") {
  auto c = cube(parse_braid("-1", 2));
  CHECK(c.top == 0);
  REQUIRE(c.edges.size() == 1);
  CHECK(!c.edges[0].positive);
  CHECK(c.edges[0].lo == 1);  // selected negative crossing is below
  CHECK(c.edges[0].hi == 0);
  CHECK(c.shift[1] == 2);
  CHECK(c.shift[0] == 0);
  CHECK(c.grv[0] == 0);
  CHECK(c.grv[1] == 1);
}

TEST_CASE("sign exponents on (1,2)") {
  auto c = cube(parse_braid("1 2", 3));
  std::map<std::pair<uint32_t, uint32_t>, int> se;
  for (auto& e : c.edges) se[{e.lo, e.hi}] = e.sign_exp;
  // edge (2) <= (1,2): differ at position 1 (mask 1), nothing selected left
  CHECK(se[{2u, 3u}] == 0);
  // edge (1) <= (1,2): differ at position 2 (mask 2), position 1 selected
  CHECK(se[{1u, 3u}] == 1);
  CHECK(se[{0u, 1u}] == 0);
  CHECK(se[{0u, 2u}] == 0);
}

TEST_CASE("cube is a boolean lattice with anticommuting faces") {
  for (const char* txt : {"1", "1 1", "1 -1", "1 2 1", "-1 2 -1 2", "1 1 1 1"}) {
    auto c = cube(parse_braid(txt, 3));
    int n = c.word.length();
    CHECK((int)c.edges.size() == n * (1 << (n - 1)));
    std::map<std::pair<uint32_t, uint32_t>, int> se;
    for (auto& e : c.edges) se[{e.lo & e.hi, e.lo | e.hi}] = e.sign_exp;
    // every square face: product of the four (-1)^{|e|} factors is -1
    for (uint32_t m = 0; m < (uint32_t)c.nverts(); m++)
      for (int a = 0; a < n; a++) {
        if (m >> a & 1) continue;
        for (int b = a + 1; b < n; b++) {
          if (m >> b & 1) continue;
          uint32_t A = 1u << a, B = 1u << b;
          int s = se[{m, m | A}] + se[{m | B, m | A | B}] + se[{m, m | B}] +
                  se[{m | A, m | A | B}];
          CHECK(s % 2 == 1);
        }
      }
    // n_J drops by 2 along negative edges toward larger J, constant on positive
    for (auto& e : c.edges) {
      if (e.positive)
        CHECK(c.shift[e.lo] == c.shift[e.hi]);
      else
        CHECK(c.shift[e.lo] == c.shift[e.hi] + 2);
      CHECK(c.grv[e.lo] == c.grv[e.hi] + 1);
    }
  }
}

TEST_CASE("resolution diagrams") {
  // trivial word, one strand: a single arc through one closing mark
  auto d0 = resolution_diagram(parse_braid("", 1), 0);
  CHECK(d0.narcs == 1);
  CHECK(d0.arc(0, 1) == 0);

  // one crossing in Br(2), full selector
  auto d1 = resolution_diagram(parse_braid("1", 2), 1);
  CHECK(d1.has_crossing(1));
  CHECK(d1.narcs == 4);
  CHECK(d1.arc(0, 1) != d1.arc(1, 1));

  // same word, empty selector: two strands of marks
  auto d2 = resolution_diagram(parse_braid("1", 2), 0);
  CHECK(!d2.has_crossing(1));
  CHECK(d2.narcs == 4);

  // (3,1,2) in Br(4), full: 3 crossings + 4 closing marks, 10 arcs by Euler count
  auto d3 = resolution_diagram(parse_braid("3 1 2", 4), 7);
  CHECK(d3.narcs == 10);
  // bystanders pass through: strand 1 at layer 1 (crossing on 3,4)
  CHECK(d3.arc(1, 1) == d3.arc(0, 1));
  CHECK(d3.arc(1, 3) != d3.arc(0, 3));
}
