// Dense complex linear algebra at arbitrary precision: one-sided Jacobi SVD
// for rank and kernels, Householder least squares, and continued-fraction
// rational reconstruction.
#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <vector>

#include "siegel3/mp.hpp"

namespace siegel3 {

/// Column-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, mp::Bits prec);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mp::Complex& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const mp::Complex& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  mp::Complex* column(std::size_t j) { return data_.data() + j * rows_; }
  const mp::Complex* column(std::size_t j) const { return data_.data() + j * rows_; }

  CMatrix transpose() const;
  /// Appends a copy of column j of `other` (same row count).
  void append_column(const CMatrix& other, std::size_t j);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mp::Complex> data_;
};

struct RankOptions {
  /// Singular values below 2^-threshold_bits * sigma_max count as zero.
  long threshold_bits = 0;  // 0: prec / 2
  /// Required ratio 2^gap_bits between the last kept and first dropped value.
  long gap_bits = 0;  // 0: prec / 4
};

struct RankResult {
  std::size_t rank = 0;
  std::vector<mp::Real> singular_values;  // descending
  /// Orthonormal basis of {v : A v = 0}, one column per kernel vector.
  CMatrix kernel;
  /// log2(sigma_rank / sigma_{rank+1}); infinity when nothing was dropped.
  double gap_log2 = 0;
};

/// Throws IllConditioned when the spectral gap is too small.
RankResult numeric_rank(const CMatrix& a, mp::Bits prec, const RankOptions& opt = {});

/// Right singular values and vectors of A by one-sided Jacobi.  Returns the
/// singular values sorted descending and V with matching column order.
std::pair<std::vector<mp::Real>, CMatrix> jacobi_svd(const CMatrix& a, mp::Bits prec);

/// Minimizes |A x - b| (A has at least as many rows as columns).
std::vector<mp::Complex> least_squares(const CMatrix& a, std::span<const mp::Complex> b, mp::Bits prec);

/// Best continued-fraction convergent p/q of x with q <= max_den and
/// |x - p/q| <= tol; nullopt when none qualifies.
std::optional<mpq_class> rational_reconstruct(const mp::Real& x, const mpz_class& max_den, const mp::Real& tol);

}  // namespace siegel3
