#include "siegel3/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "siegel3/error.hpp"

namespace siegel3 {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, mp::Bits prec)
    : rows_(rows), cols_(cols), data_(rows * cols, mp::Complex(prec)) {}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_, data_.empty() ? 64 : data_[0].precision());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void CMatrix::append_column(const CMatrix& other, std::size_t j) {
  if (cols_ == 0) rows_ = other.rows();
  if (other.rows() != rows_) throw std::invalid_argument("row count mismatch");
  data_.insert(data_.end(), other.column(j), other.column(j) + rows_);
  ++cols_;
}

namespace {

// |x|^2 summed over a column.
void column_norm2(mp::Real& out, const mp::Complex* x, std::size_t n) {
  mpfr_set_zero(out.raw(), 1);
  for (std::size_t i = 0; i < n; ++i) {
    mpfr_fma(out.raw(), x[i].re.raw(), x[i].re.raw(), out.raw(), MPFR_RNDN);
    mpfr_fma(out.raw(), x[i].im.raw(), x[i].im.raw(), out.raw(), MPFR_RNDN);
  }
}

// Applies [x y] <- [x y] [[c, s e^{i phi}], [-s e^{-i phi}, c]] with
// e^{i phi} = (ur, ui).
void rotate(mp::Complex* x, mp::Complex* y, std::size_t n, const mp::Real& c, const mp::Real& sr, const mp::Real& si,
            mp::Complex& tmp, mp::Complex& nx, mp::fast::Scratch& s) {
  // s e^{-i phi} = (sr, -si), s e^{i phi} = (sr, si)
  mp::Complex sp{mp::Real(sr), mp::Real(si)};
  mp::Complex sm{mp::Real(sr), -si};
  for (std::size_t i = 0; i < n; ++i) {
    // tmp = c x - sm y
    mp::fast::mul(tmp, sm, y[i], s);
    mpfr_fms(nx.re.raw(), c.raw(), x[i].re.raw(), tmp.re.raw(), MPFR_RNDN);
    mpfr_fms(nx.im.raw(), c.raw(), x[i].im.raw(), tmp.im.raw(), MPFR_RNDN);
    // y = sp x + c y
    mp::fast::mul(tmp, sp, x[i], s);
    mpfr_fma(y[i].re.raw(), c.raw(), y[i].re.raw(), tmp.re.raw(), MPFR_RNDN);
    mpfr_fma(y[i].im.raw(), c.raw(), y[i].im.raw(), tmp.im.raw(), MPFR_RNDN);
    std::swap(x[i], nx);
  }
}

// Householder QR in place: returns R (n x n) of an m x n matrix, m >= n.
CMatrix householder_r(CMatrix a, mp::Bits prec, std::vector<mp::Complex>* rhs = nullptr) {
  const std::size_t m = a.rows(), n = a.cols();
  mp::fast::Scratch s(prec);
  mp::Real nrm(prec);
  for (std::size_t k = 0; k < n && k < m; ++k) {
    mp::Complex* col = a.column(k);
    column_norm2(nrm, col + k, m - k);
    if (nrm.is_zero()) continue;
    mp::Real alpha = mp::sqrt(nrm);
    // v = x + e^{i arg x_k} |x| e_k
    mp::Real ak = mp::abs(col[k]);
    mp::Complex phase = ak.is_zero() ? mp::Complex(1.0, 0.0, prec) : mp::Complex(col[k].re / ak, col[k].im / ak);
    std::vector<mp::Complex> v(col + k, col + m);
    v[0] += phase * alpha;
    mp::Real vn(prec);
    column_norm2(vn, v.data(), v.size());
    // H = I - 2 v v^H / (v^H v)
    auto apply = [&](mp::Complex* x) {
      mp::Complex dot(prec);
      for (std::size_t i = 0; i < v.size(); ++i) mp::fast::fma_conj(dot, v[i], x[k + i], s);
      dot *= mp::Real(2.0, prec) / vn;
      mp::Complex t(prec);
      for (std::size_t i = 0; i < v.size(); ++i) {
        mp::fast::mul(t, v[i], dot, s);
        x[k + i] -= t;
      }
    };
    for (std::size_t j = k; j < n; ++j) apply(a.column(j));
    if (rhs) apply(rhs->data());
  }
  CMatrix r(n, n, prec);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j && i < m; ++i) r(i, j) = a(i, j);
  return r;
}

}  // namespace

std::pair<std::vector<mp::Real>, CMatrix> jacobi_svd(const CMatrix& input, mp::Bits prec) {
  // Reduce tall matrices to their triangular factor first: same singular
  // values and right singular vectors, fewer rows to rotate.
  CMatrix a = input.rows() > input.cols() ? householder_r(input, prec) : input;
  const std::size_t m = a.rows(), n = a.cols();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) a(i, j).set_precision(prec);
  CMatrix v(n, n, prec);
  for (std::size_t j = 0; j < n; ++j) v(j, j) = mp::Complex(1.0, 0.0, prec);

  mp::fast::Scratch s(prec);
  mp::Complex tmp(prec), nx(prec), gamma(prec);
  mp::Real alpha(prec), beta(prec), g(prec), zeta(prec), t(prec), c(prec), sr(prec), si(prec);
  const mp::Real eps = mp::Real::pow2(-static_cast<long>(prec) + 8, prec);
  std::vector<mp::Real> norms(n, mp::Real(prec));
  for (std::size_t j = 0; j < n; ++j) column_norm2(norms[j], a.column(j), m);

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        column_norm2(alpha, a.column(p), m);
        column_norm2(beta, a.column(q), m);
        if (alpha.is_zero() || beta.is_zero()) continue;
        gamma = mp::Complex(prec);
        const mp::Complex* xp = a.column(p);
        const mp::Complex* xq = a.column(q);
        for (std::size_t i = 0; i < m; ++i) mp::fast::fma_conj(gamma, xp[i], xq[i], s);
        g = mp::abs(gamma);
        if (g <= eps * mp::sqrt(alpha * beta)) continue;
        rotated = true;
        zeta = (beta - alpha) / (g * 2L);
        t = mp::Real(1.0, prec) / (mp::abs(zeta) + mp::sqrt(mp::Real(1.0, prec) + zeta * zeta));
        if (zeta.sign() < 0) t = -t;
        c = mp::Real(1.0, prec) / mp::sqrt(mp::Real(1.0, prec) + t * t);
        mp::Real sn = c * t;
        sr = sn * gamma.re / g;
        si = sn * gamma.im / g;
        rotate(a.column(p), a.column(q), m, c, sr, si, tmp, nx, s);
        rotate(v.column(p), v.column(q), n, c, sr, si, tmp, nx, s);
      }
    if (!rotated) break;
  }

  std::vector<mp::Real> sigma(n, mp::Real(prec));
  for (std::size_t j = 0; j < n; ++j) {
    column_norm2(sigma[j], a.column(j), m);
    sigma[j] = mp::sqrt(sigma[j]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[y] < sigma[x]; });
  std::vector<mp::Real> sorted;
  CMatrix vs(n, n, prec);
  for (std::size_t k = 0; k < n; ++k) {
    sorted.push_back(sigma[order[k]]);
    for (std::size_t i = 0; i < n; ++i) vs(i, k) = v(i, order[k]);
  }
  return {std::move(sorted), std::move(vs)};
}

RankResult numeric_rank(const CMatrix& a, mp::Bits prec, const RankOptions& opt) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (!a(i, j).is_finite()) throw IllConditioned("matrix has non-finite entries");
  long thr = opt.threshold_bits ? opt.threshold_bits : static_cast<long>(prec / 2);
  long gap = opt.gap_bits ? opt.gap_bits : static_cast<long>(prec / 4);
  auto [sigma, v] = jacobi_svd(a, prec);
  RankResult r;
  r.singular_values = sigma;
  const std::size_t n = sigma.size();
  if (n == 0 || sigma[0].is_zero()) {
    r.rank = 0;
    r.gap_log2 = std::numeric_limits<double>::infinity();
  } else {
    mp::Real cut = sigma[0] * mp::Real::pow2(-thr, prec);
    std::size_t k = 0;
    while (k < n && sigma[k] > cut) ++k;
    r.rank = k;
    if (k == n) {
      r.gap_log2 = std::numeric_limits<double>::infinity();
    } else if (sigma[k].is_zero()) {
      r.gap_log2 = std::numeric_limits<double>::infinity();
    } else {
      r.gap_log2 = mp::log2(sigma[k - 1] / sigma[k]).to_double();
    }
    if (r.gap_log2 < static_cast<double>(gap))
      throw IllConditioned("spectral gap 2^" + std::to_string(r.gap_log2) + " below 2^" + std::to_string(gap) +
                           " at rank " + std::to_string(k));
  }
  r.kernel = CMatrix(n, 0, prec);
  for (std::size_t k = r.rank; k < n; ++k) r.kernel.append_column(v, k);
  return r;
}

std::vector<mp::Complex> least_squares(const CMatrix& a, std::span<const mp::Complex> b, mp::Bits prec) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw std::invalid_argument("least squares needs rows >= cols");
  std::vector<mp::Complex> rhs(b.begin(), b.end());
  for (auto& z : rhs) z.set_precision(prec);
  CMatrix w = a;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) w(i, j).set_precision(prec);
  CMatrix r = householder_r(std::move(w), prec, &rhs);
  std::vector<mp::Complex> x(n, mp::Complex(prec));
  mp::fast::Scratch s(prec);
  for (std::size_t ii = n; ii-- > 0;) {
    mp::Complex acc = rhs[ii];
    mp::Complex t(prec);
    for (std::size_t j = ii + 1; j < n; ++j) {
      mp::fast::mul(t, r(ii, j), x[j], s);
      acc -= t;
    }
    if (r(ii, ii).re.is_zero() && r(ii, ii).im.is_zero()) throw IllConditioned("rank-deficient least squares");
    x[ii] = acc / r(ii, ii);
  }
  return x;
}

std::optional<mpq_class> rational_reconstruct(const mp::Real& x, const mpz_class& max_den, const mp::Real& tol) {
  const mp::Bits p = x.precision();
  mp::Real rest(x);
  // convergents h/k
  mpz_class h = 1, h_prev = 0, k = 0, k_prev = 1;
  for (int iter = 0; iter < 4096; ++iter) {
    mp::Real a = mp::floor(rest);
    mpz_class ai;
    mpfr_get_z(ai.get_mpz_t(), a.raw(), MPFR_RNDN);
    mpz_class hn = ai * h + h_prev;
    mpz_class kn = ai * k + k_prev;
    if (kn > max_den) return std::nullopt;
    h_prev = h;
    h = hn;
    k_prev = k;
    k = kn;
    // |x - h/k|
    mp::Real hk(p), kk(p);
    mpfr_set_z(hk.raw(), h.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(kk.raw(), k.get_mpz_t(), MPFR_RNDN);
    if (mp::abs(x - hk / kk) <= tol) {
      mpq_class q(h, k);
      q.canonicalize();
      return q;
    }
    mp::Real frac = rest - a;
    if (frac.is_zero()) return std::nullopt;
    rest = mp::Real(1.0, p) / frac;
  }
  return std::nullopt;
}

}  // namespace siegel3
