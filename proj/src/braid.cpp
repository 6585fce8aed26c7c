#include "krh/braid.hpp"

#include <sstream>

namespace krh {

BraidWord parse_braid(const std::string& text, int strands) {
  if (strands < 1) throw RangeError("strands must be >= 1");
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (c == '[' || c == ']' || c == ',') c = ' ';
    s += c;
  }
  BraidWord w;
  w.strands = strands;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    size_t used = 0;
    long v;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("bad braid token '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError("bad braid token '" + tok + "'");
    if (v == 0 || std::abs(v) >= strands)
      throw RangeError("letter " + std::to_string(v) + " out of range for " +
                       std::to_string(strands) + " strands");
    w.letters.push_back((int)v);
  }
  if (w.length() > 20) throw RangeError("braid word too long");
  return w;
}

Cube cube(const BraidWord& I) {
  Cube c;
  c.word = I;
  int n = I.length();
  c.top = 0;
  for (int j = 0; j < n; j++)
    if (I.letters[j] > 0) c.top |= (1u << j);
  int nv = 1 << n;
  c.grv.resize(nv);
  c.shift.resize(nv);
  for (uint32_t m = 0; m < (uint32_t)nv; m++) {
    c.grv[m] = __builtin_popcount(m ^ c.top);
    int neg = 0;
    for (int j = 0; j < n; j++)
      if ((m >> j & 1) && I.letters[j] < 0) neg++;
    c.shift[m] = 2 * neg;
  }
  for (uint32_t m = 0; m < (uint32_t)nv; m++)
    for (int j = 0; j < n; j++) {
      if (m >> j & 1) continue;
      uint32_t with = m | (1u << j);
      CubeEdge e;
      e.pos = j;
      e.positive = I.letters[j] > 0;
      e.lo = e.positive ? m : with;
      e.hi = e.positive ? with : m;
      e.sign_exp = __builtin_popcount(m & ((1u << j) - 1));
      c.edges.push_back(e);
    }
  return c;
}

SingularDiagram resolution_diagram(const BraidWord& I, uint32_t J) {
  SingularDiagram d;
  d.strands = I.strands;
  d.nlayers = I.length();
  d.selector = J;
  int r = I.strands, n = I.length();
  d.crossing_strand.assign(n, 0);
  for (int j = 1; j <= n; j++) d.crossing_strand[j - 1] = std::abs(I.letters[j - 1]);
  d.arcid.assign((n + 1) * r, -1);
  int next = 0;
  for (int l = 0; l < r; l++) d.arcid[l] = next++;
  for (int j = 1; j <= n; j++)
    for (int l = 1; l <= r; l++) {
      int c = d.crossing_strand[j - 1];
      bool bystander = l != c && l != c + 1;
      d.arcid[j * r + (l - 1)] = bystander ? d.arcid[(j - 1) * r + (l - 1)] : next++;
    }
  d.narcs = next;
  return d;
}

}  // namespace krh
