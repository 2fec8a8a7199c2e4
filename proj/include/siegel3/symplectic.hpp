// Integer symplectic group Sp6(Z): membership, the action on the Siegel upper
// half-space H3, the automorphy factor det(C tau + D), the sign zeta_M^4, a
// generating set, and closure of that set modulo 2.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "siegel3/mp.hpp"

namespace siegel3 {

using IntMat3 = std::array<std::array<std::int64_t, 3>, 3>;
using IntMat6 = std::array<std::array<std::int64_t, 6>, 6>;
using ComplexMat3 = std::array<mp::Complex, 9>;  // row-major

/// M * J * M^T == J exactly, with J = [[0, I3], [-I3, 0]].
bool is_symplectic(const IntMat6& m);

class SymplecticMatrix {
 public:
  /// Throws NotSymplectic.
  explicit SymplecticMatrix(const IntMat6& m);

  static SymplecticMatrix identity();
  static SymplecticMatrix J();
  /// [[I, B], [0, I]] for symmetric integer B.
  static SymplecticMatrix translation(const IntMat3& b);
  /// [[U, 0], [0, U^-T]] for U in GL3(Z).
  static SymplecticMatrix embedding(const IntMat3& u);

  const IntMat6& entries() const { return m_; }
  std::int64_t operator()(int i, int j) const { return m_[i][j]; }

  IntMat3 A() const { return block(0, 0); }
  IntMat3 B() const { return block(0, 3); }
  IntMat3 C() const { return block(3, 0); }
  IntMat3 D() const { return block(3, 3); }

  SymplecticMatrix operator*(const SymplecticMatrix& o) const;
  /// J^-1 M^T J = [[D^T, -B^T], [-C^T, A^T]].
  SymplecticMatrix inverse() const;
  std::int64_t max_abs_entry() const;

  friend bool operator==(const SymplecticMatrix&, const SymplecticMatrix&) = default;

 private:
  struct Unchecked {};
  SymplecticMatrix(const IntMat6& m, Unchecked) : m_(m) {}
  IntMat3 block(int r, int c) const;

  IntMat6 m_;
};

/// A point of H3.  Only the upper triangle is stored, so symmetry holds by
/// construction; construction checks that Im(tau) is positive definite.
class SiegelPoint {
 public:
  /// Entries (0,0) (0,1) (0,2) (1,1) (1,2) (2,2).  Throws NotPositiveDefinite.
  SiegelPoint(std::array<mp::Complex, 6> upper, mp::Bits prec);
  /// Symmetrizes (M + M^T)/2 first.
  static SiegelPoint from_matrix(const ComplexMat3& m, mp::Bits prec);
  /// i * t * I3.
  static SiegelPoint scalar_imaginary(double t, mp::Bits prec);

  const mp::Complex& operator()(int i, int j) const { return upper_[slot(i, j)]; }
  mp::Bits precision() const { return prec_; }
  ComplexMat3 matrix() const;
  /// Im(tau) rounded to double.
  std::array<std::array<double, 3>, 3> imag_double() const;
  /// Lower bound for the smallest eigenvalue of Im(tau).
  double min_imag_eigenvalue() const;
  /// Same point at another precision (entries rounded).
  SiegelPoint with_precision(mp::Bits prec) const;

 private:
  static int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int kSlot[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return kSlot[i][j];
  }

  std::array<mp::Complex, 6> upper_;
  mp::Bits prec_;
};

/// det(C tau + D).  Throws NearSingularCocycle when it is numerically zero.
mp::Complex cocycle(const SymplecticMatrix& m, const SiegelPoint& tau);
/// (A tau + B)(C tau + D)^-1.
SiegelPoint act_on_tau(const SymplecticMatrix& m, const SiegelPoint& tau);

/// zeta_M^4 = (-1)^tr(B C^T).
int zeta4(const SymplecticMatrix& m);

/// J, the six elementary symmetric translations, and the six transvection
/// embeddings diag(I + E_ij, (I + E_ij)^-T), in that order.
std::vector<SymplecticMatrix> standard_generators();
inline constexpr std::size_t kStandardGeneratorCount = 13;

/// Order of the subgroup of Sp6(F2) generated by the reductions mod 2.
std::uint64_t group_order_mod2(std::span<const SymplecticMatrix> gens);

/// M = I mod level; with `igusa`, additionally diag(A^T C) = diag(B^T D) = 0 mod 2 level.
bool congruence_membership(const SymplecticMatrix& m, int level, bool igusa);

/// Product of `length` generators or their inverses, chosen uniformly.
SymplecticMatrix random_word(std::span<const SymplecticMatrix> gens, int length, std::mt19937_64& rng);

/// Reproducible sampler: tau = X + iY with X symmetric, entries uniform in
/// [-1/2, 1/2], and Y = R^T R + I/2 with R uniform in [-1, 1].
class TauSampler {
 public:
  explicit TauSampler(std::uint64_t seed) : rng_(seed) {}
  SiegelPoint next(mp::Bits prec);

 private:
  double uniform(double lo, double hi);
  std::mt19937_64 rng_;
};

/// tau-sample file: JSON array of 3x3 matrices of ["re", "im"] decimal strings.
std::vector<SiegelPoint> read_tau_file(const std::filesystem::path& path, mp::Bits prec);
void write_tau_file(const std::filesystem::path& path, std::span<const SiegelPoint> taus, int digits);

// 3x3 complex helpers shared with the period-matrix bridge.
namespace mat3 {
mp::Complex det(const ComplexMat3& m);
ComplexMat3 inverse(const ComplexMat3& m);
ComplexMat3 mul(const ComplexMat3& a, const ComplexMat3& b);
ComplexMat3 from_int(const IntMat3& m, mp::Bits prec);
}  // namespace mat3

}  // namespace siegel3
