// Hilbert-Poincare series of the ring of genus-3 Siegel modular forms, exact
// integer arithmetic throughout.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace siegel3 {

/// Dense integer polynomial, coefficient k multiplies T^k.
using IntPoly = std::vector<std::int64_t>;

/// N(T) exactly as printed (degree 112).
const IntPoly& printed_numerator();
/// (1 + T^2) N(T).
IntPoly hsop_numerator();
/// Denominator degrees of the printed series.
const std::vector<int>& hsop_degrees();

/// Coefficient of T^h of the series; 0 for odd h.  Requires 0 <= h <= 400.
std::int64_t hilbert_dim(int h);

/// Series times prod (1 - T^d) over `degrees`, computed by exact division.
/// Throws NonPolynomial if the division leaves a remainder.
IntPoly hilbert_numerator(std::span<const int> degrees);

/// Polynomial numerator with no negative coefficient.
bool hsop_numerator_check(std::span<const int> degrees);

std::size_t nonzero_count(const IntPoly& p);
/// Drops trailing zero coefficients.
void trim(IntPoly& p);

}  // namespace siegel3
