// Genus-3 theta characteristics and theta constants.
//
// A characteristic is stored as its 6-bit index d0 d1 d2 e0 e1 e2 (d0 most
// significant); eps1 = (d0, d1, d2) pairs with the lattice vector n and eps2 =
// (e0, e1, e2) with z.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "siegel3/mp.hpp"
#include "siegel3/symplectic.hpp"

namespace siegel3 {

enum class Parity { Even, Odd };

class Characteristic {
 public:
  constexpr Characteristic() = default;
  /// Throws std::out_of_range outside [0, 64).
  explicit Characteristic(int index);
  static Characteristic from_vectors(const std::array<int, 3>& eps1, const std::array<int, 3>& eps2);

  constexpr int index() const { return index_; }
  std::array<int, 3> eps1() const;
  std::array<int, 3> eps2() const;

  friend constexpr bool operator==(Characteristic, Characteristic) = default;

 private:
  int index_ = 0;
};

Parity parity(Characteristic c);

/// The 36 even indices in increasing order.
const std::array<int, 36>& even_indices();

/// Tsuyumine's numbering: k in 1..36 to the binary characteristic, and back.
/// Throws std::out_of_range for k outside 1..36.
Characteristic tsuyumine_to_binary(int k);
/// Throws NotEven for odd characteristics.
int binary_to_tsuyumine(Characteristic c);

struct CharTransformResult {
  Characteristic target;
  int eq2_sign = 1;        // sign from reducing the image to {0,1} entries
  std::int64_t sigma = 0;  // exponent in exp(-i pi sigma / 4)
};

/// Image of c under M together with the sign and sigma needed to write
/// theta[c](M.tau) in terms of theta[target](tau).
CharTransformResult act_on_characteristic(const SymplecticMatrix& m, Characteristic c);

struct ThetaOptions {
  /// Refuse to sum when the enumeration would visit more than this many
  /// lattice points per coset.
  double max_points = 4.0e6;
  /// Multiplies the certified truncation level (tests use 2 or 4).
  double truncation_scale = 1.0;
};

/// theta[c](0, tau) with absolute error below 2^(1-prec_bits) (1 + sum |terms|).
/// Throws PrecisionUnreachable when the enumeration is too large.
mp::Complex eval_theta_constant(Characteristic c, const SiegelPoint& tau, mp::Bits prec_bits,
                                const ThetaOptions& opt = {});

/// All 64 theta constants at once (odd entries are numerically zero).
std::array<mp::Complex, 64> eval_theta_constants(const SiegelPoint& tau, mp::Bits prec_bits,
                                                 const ThetaOptions& opt = {});

}  // namespace siegel3
