#include "siegel3/hilbert.hpp"

#include <stdexcept>
#include <string>

#include "siegel3/error.hpp"

namespace siegel3 {

namespace {

IntPoly mul_one_minus(const IntPoly& p, int d) {
  IntPoly out(p.size() + d, 0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] += p[k];
    out[k + d] -= p[k];
  }
  return out;
}

// Divides by (1 - T^d) in place; returns false on a nonzero remainder.
bool div_one_minus(IntPoly& p, int d) {
  // q_k = p_k + q_{k-d}, and the quotient has degree deg p - d.
  trim(p);
  if (p.empty()) return true;
  if (static_cast<int>(p.size()) - 1 < d) return false;
  std::size_t qdeg = p.size() - 1 - d;
  IntPoly q(qdeg + 1, 0);
  for (std::size_t k = 0; k <= qdeg; ++k) q[k] = p[k] + (k >= static_cast<std::size_t>(d) ? q[k - d] : 0);
  // check q (1 - T^d) == p
  IntPoly back = mul_one_minus(q, d);
  back.resize(std::max(back.size(), p.size()), 0);
  IntPoly pp = p;
  pp.resize(back.size(), 0);
  if (back != pp) return false;
  p = std::move(q);
  return true;
}

}  // namespace

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

std::size_t nonzero_count(const IntPoly& p) {
  std::size_t n = 0;
  for (auto c : p) n += c != 0;
  return n;
}

const IntPoly& printed_numerator() {
  static const IntPoly n = [] {
    const std::pair<int, int> terms[] = {
        {0, 1},   {2, -1},  {4, 1},   {10, 1},  {16, 3},  {18, -1}, {20, 3},  {22, 2},  {24, 2},  {26, 3},
        {28, 4},  {30, 2},  {32, 7},  {34, 3},  {36, 7},  {38, 5},  {40, 9},  {42, 6},  {44, 10}, {46, 8},
        {48, 10}, {50, 9},  {52, 12}, {54, 7},  {56, 14}, {58, 7},  {60, 12}, {62, 9},  {64, 10}, {66, 8},
        {68, 10}, {70, 6},  {72, 9},  {74, 5},  {76, 7},  {78, 3},  {80, 7},  {82, 2},  {84, 4},  {86, 3},
        {88, 2},  {90, 2},  {92, 3},  {94, -1}, {96, 3},  {102, 1}, {108, 1}, {110, -1}, {112, 1}};
    IntPoly p(113, 0);
    for (auto [k, c] : terms) p[k] = c;
    return p;
  }();
  return n;
}

IntPoly hsop_numerator() {
  const IntPoly& n = printed_numerator();
  IntPoly p(n.size() + 2, 0);
  for (std::size_t k = 0; k < n.size(); ++k) {
    p[k] += n[k];
    p[k + 2] += n[k];
  }
  trim(p);
  return p;
}

const std::vector<int>& hsop_degrees() {
  static const std::vector<int> d = {4, 12, 12, 14, 18, 20, 30};
  return d;
}

std::int64_t hilbert_dim(int h) {
  if (h < 0 || h > 400) throw std::out_of_range("hilbert_dim needs 0 <= h <= 400");
  if (h % 2) return 0;
  IntPoly s = hsop_numerator();
  s.resize(h + 1, 0);
  for (int d : hsop_degrees())
    for (int k = d; k <= h; ++k) s[k] += s[k - d];
  return s[h];
}

IntPoly hilbert_numerator(std::span<const int> degrees) {
  if (degrees.empty()) throw std::invalid_argument("degree list is empty");
  IntPoly p = hsop_numerator();
  for (int d : degrees) {
    if (d <= 0) throw std::invalid_argument("degrees must be positive");
    p = mul_one_minus(p, d);
  }
  for (int d : hsop_degrees())
    if (!div_one_minus(p, d)) throw NonPolynomial("series times the given factors is not a polynomial");
  trim(p);
  return p;
}

bool hsop_numerator_check(std::span<const int> degrees) {
  try {
    IntPoly p = hilbert_numerator(degrees);
    for (auto c : p)
      if (c < 0) return false;
    return true;
  } catch (const NonPolynomial&) {
    return false;
  }
}

}  // namespace siegel3
