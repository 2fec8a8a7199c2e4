#include "siegel3/theta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "siegel3/error.hpp"

namespace siegel3 {

Characteristic::Characteristic(int index) : index_(index) {
  if (index < 0 || index >= 64) throw std::out_of_range("characteristic index " + std::to_string(index));
}

Characteristic Characteristic::from_vectors(const std::array<int, 3>& eps1, const std::array<int, 3>& eps2) {
  int idx = 0;
  for (int i = 0; i < 3; ++i) {
    idx |= (eps1[i] & 1) << (5 - i);
    idx |= (eps2[i] & 1) << (2 - i);
  }
  return Characteristic(idx);
}

std::array<int, 3> Characteristic::eps1() const {
  return {(index_ >> 5) & 1, (index_ >> 4) & 1, (index_ >> 3) & 1};
}

std::array<int, 3> Characteristic::eps2() const {
  return {(index_ >> 2) & 1, (index_ >> 1) & 1, index_ & 1};
}

Parity parity(Characteristic c) {
  int dot = __builtin_popcount(static_cast<unsigned>((c.index() >> 3) & c.index() & 7));
  return dot % 2 == 0 ? Parity::Even : Parity::Odd;
}

const std::array<int, 36>& even_indices() {
  static const std::array<int, 36> table = [] {
    std::array<int, 36> t{};
    int k = 0;
    for (int i = 0; i < 64; ++i)
      if (parity(Characteristic(i)) == Parity::Even) t[k++] = i;
    return t;
  }();
  return table;
}

namespace {

constexpr std::array<int, 36> kTsuyumine = {31, 27, 56, 48, 49, 59, 24, 16, 17, 28, 20, 21,
                                            55, 54, 62, 47, 12, 4,  5,  8,  0,  1,  35, 34,
                                            42, 40, 32, 33, 3,  2,  10, 7,  6,  14, 45, 61};

}  // namespace

Characteristic tsuyumine_to_binary(int k) {
  if (k < 1 || k > 36) throw std::out_of_range("Tsuyumine number must be in 1..36");
  return Characteristic(kTsuyumine[k - 1]);
}

int binary_to_tsuyumine(Characteristic c) {
  if (parity(c) != Parity::Even) throw NotEven("theta_" + std::to_string(c.index()) + " is odd");
  for (int k = 0; k < 36; ++k)
    if (kTsuyumine[k] == c.index()) return k + 1;
  throw NotEven("theta_" + std::to_string(c.index()) + " missing from table");
}

CharTransformResult act_on_characteristic(const SymplecticMatrix& m, Characteristic c) {
  const auto e1 = c.eps1();
  const auto e2 = c.eps2();
  const IntMat3 a = m.A(), b = m.B(), cc = m.C(), d = m.D();

  std::array<std::int64_t, 3> atc{}, btd{};  // diagonals of A^T C and B^T D
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      atc[i] += a[k][i] * cc[k][i];
      btd[i] += b[k][i] * d[k][i];
    }

  // v = (e1 | e2) M + (diag A^T C | diag B^T D)
  std::array<std::int64_t, 6> v{};
  for (int j = 0; j < 6; ++j) {
    std::int64_t s = 0;
    for (int i = 0; i < 3; ++i) s += e1[i] * m(i, j) + e2[i] * m(i + 3, j);
    v[j] = s + (j < 3 ? atc[j] : btd[j - 3]);
  }

  std::array<int, 3> r1{}, r2{};
  std::int64_t twist = 0;  // red1 . k2, with v = red + 2k
  for (int i = 0; i < 3; ++i) {
    std::int64_t lo = ((v[i] % 2) + 2) % 2;
    std::int64_t hi = ((v[i + 3] % 2) + 2) % 2;
    r1[i] = static_cast<int>(lo);
    r2[i] = static_cast<int>(hi);
    twist += lo * ((v[i + 3] - hi) / 2);
  }

  // sigma on the unreduced input characteristic.
  auto quad = [](const std::array<int, 3>& x, const IntMat3& p, const IntMat3& q, const std::array<int, 3>& y) {
    // x P Q^T y^T
    std::int64_t s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::int64_t pq = 0;
        for (int k = 0; k < 3; ++k) pq += p[i][k] * q[j][k];
        s += x[i] * pq * y[j];
      }
    return s;
  };
  std::int64_t sigma = quad(e1, a, b, e1) + 2 * quad(e1, b, cc, e2) + quad(e2, cc, d, e2);
  for (int j = 0; j < 3; ++j) {
    std::int64_t w = atc[j];
    for (int i = 0; i < 3; ++i) w += 2 * e1[i] * a[i][j] + 2 * e2[i] * cc[i][j];
    sigma += w * btd[j];
  }

  CharTransformResult out;
  out.target = Characteristic::from_vectors(r1, r2);
  out.eq2_sign = (twist % 2 == 0) ? 1 : -1;
  out.sigma = sigma;
  return out;
}

// ---------------------------------------------------------------------------
// Lattice sums

namespace {

struct Ellipsoid {
  // q(x) = d2 x2^2 + d1 (x1 + m12 x2)^2 + d0 (x0 + m01 x1 + m02 x2)^2
  double d0, d1, d2, m01, m02, m12;
  double det;
};

Ellipsoid decompose(const std::array<std::array<double, 3>, 3>& y) {
  Ellipsoid e{};
  e.d0 = y[0][0];
  e.m01 = y[0][1] / y[0][0];
  e.m02 = y[0][2] / y[0][0];
  double s11 = y[1][1] - y[0][1] * e.m01;
  double s12 = y[1][2] - y[0][1] * e.m02;
  double s22 = y[2][2] - y[0][2] * e.m02;
  e.d1 = s11;
  e.m12 = s12 / s11;
  e.d2 = s22 - s12 * e.m12;
  e.det = e.d0 * e.d1 * e.d2;
  return e;
}

// Truncation level T: the terms with x Y x^T > T sum to less than 2^-(p+2).
// With s = 1/4, sum_{q(x) > T} e^{-pi q(x)} <= e^{-pi (1-s) T} sum_x e^{-pi s lambda |x|^2}
// and each one-dimensional factor of the last sum is at most 2 + 1/sqrt(s lambda).
double truncation_level(mp::Bits p, double lambda, double scale) {
  constexpr double s = 0.25;
  double lhs = (static_cast<double>(p) + 2.0) * std::log(2.0) + 3.0 * std::log(2.0 + 1.0 / std::sqrt(s * lambda));
  return scale * lhs / (M_PI * (1.0 - s));
}

class CosetSummer {
 public:
  CosetSummer(const SiegelPoint& tau, mp::Bits prec, const ThetaOptions& opt) : work_(0) {
    double lambda = tau.min_imag_eigenvalue();
    if (!(lambda > 0)) throw PrecisionUnreachable("Im(tau) is numerically singular");
    ell_ = decompose(tau.imag_double());
    if (!(ell_.d0 > 0 && ell_.d1 > 0 && ell_.d2 > 0)) throw PrecisionUnreachable("Im(tau) is numerically singular");
    level_ = truncation_level(prec, lambda, opt.truncation_scale);
    double points = 4.0 / 3.0 * M_PI * std::pow(level_, 1.5) / std::sqrt(ell_.det);
    if (points > opt.max_points)
      throw PrecisionUnreachable("theta series needs about " + std::to_string(static_cast<long>(points)) +
                                 " lattice points per coset");
    work_ = prec + 24 + static_cast<mp::Bits>(std::log2(points + 8.0));
    // pi/4 times the entries of X and Y, off-diagonal ones doubled.
    mp::Real pi4 = mp::Real::pi(work_);
    pi4.mul_2exp(-2);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        mp::Real x(tau(i, j).re, work_), y(tau(i, j).im, work_);
        x *= pi4;
        y *= pi4;
        if (i != j) {
          x.mul_2exp(1);
          y.mul_2exp(1);
        }
        px_.push_back(std::move(x));
        py_.push_back(std::move(y));
      }
  }

  // buckets[n mod 2] += exp(i pi x tau x^T) over x = n + eps1/2 in the ellipsoid.
  void sum(const std::array<int, 3>& eps1, std::array<mp::Complex, 8>& buckets) const {
    for (auto& b : buckets) b = mp::Complex(work_);
    mp::Real qy(work_), qx(work_), t(work_), mod(work_), s(work_), c(work_);
    const double slack = 1e-9 * (level_ + 1.0);
    const double lim = level_ + slack;
    auto range = [](double center, double radius, int half, long& lo, long& hi) {
      // integers n with |n + half/2 - center| <= radius
      double h = 0.5 * half;
      lo = static_cast<long>(std::ceil(center - radius - h));
      hi = static_cast<long>(std::floor(center + radius - h));
    };
    long lo2, hi2;
    range(0.0, std::sqrt(lim / ell_.d2), eps1[2], lo2, hi2);
    for (long n2 = lo2; n2 <= hi2; ++n2) {
      double x2 = n2 + 0.5 * eps1[2];
      double r2 = lim - ell_.d2 * x2 * x2;
      if (r2 < 0) continue;
      long lo1, hi1;
      range(-ell_.m12 * x2, std::sqrt(r2 / ell_.d1), eps1[1], lo1, hi1);
      for (long n1 = lo1; n1 <= hi1; ++n1) {
        double x1 = n1 + 0.5 * eps1[1];
        double u1 = x1 + ell_.m12 * x2;
        double r1 = r2 - ell_.d1 * u1 * u1;
        if (r1 < 0) continue;
        long lo0, hi0;
        range(-ell_.m01 * x1 - ell_.m02 * x2, std::sqrt(r1 / ell_.d0), eps1[0], lo0, hi0);
        for (long n0 = lo0; n0 <= hi0; ++n0) {
          // a = 2x, so x M x^T = (a M a^T) / 4 and the 1/4 sits in px_/py_.
          const long a[3] = {2 * n0 + eps1[0], 2 * n1 + eps1[1], 2 * n2 + eps1[2]};
          const long aa[6] = {a[0] * a[0], a[0] * a[1], a[0] * a[2], a[1] * a[1], a[1] * a[2], a[2] * a[2]};
          mpfr_mul_si(qy.raw(), py_[0].raw(), aa[0], MPFR_RNDN);
          mpfr_mul_si(qx.raw(), px_[0].raw(), aa[0], MPFR_RNDN);
          for (int k = 1; k < 6; ++k) {
            mpfr_mul_si(t.raw(), py_[k].raw(), aa[k], MPFR_RNDN);
            mpfr_add(qy.raw(), qy.raw(), t.raw(), MPFR_RNDN);
            mpfr_mul_si(t.raw(), px_[k].raw(), aa[k], MPFR_RNDN);
            mpfr_add(qx.raw(), qx.raw(), t.raw(), MPFR_RNDN);
          }
          mpfr_neg(qy.raw(), qy.raw(), MPFR_RNDN);
          mpfr_exp(mod.raw(), qy.raw(), MPFR_RNDN);
          mpfr_sin_cos(s.raw(), c.raw(), qx.raw(), MPFR_RNDN);
          int cls = static_cast<int>(((n0 & 1) << 2) | ((n1 & 1) << 1) | (n2 & 1));
          mpfr_fma(buckets[cls].re.raw(), mod.raw(), c.raw(), buckets[cls].re.raw(), MPFR_RNDN);
          mpfr_fma(buckets[cls].im.raw(), mod.raw(), s.raw(), buckets[cls].im.raw(), MPFR_RNDN);
        }
      }
    }
  }

  // theta[eps1, eps2] from the parity buckets of eps1's coset.
  static mp::Complex combine(const std::array<mp::Complex, 8>& buckets, const std::array<int, 3>& eps1, int eps2_bits,
                             mp::Bits prec) {
    mp::Complex acc(buckets[0].precision());
    for (int cls = 0; cls < 8; ++cls) {
      if (__builtin_popcount(static_cast<unsigned>(cls & eps2_bits)) % 2) acc -= buckets[cls];
      else acc += buckets[cls];
    }
    int e1bits = (eps1[0] << 2) | (eps1[1] << 1) | eps1[2];
    int rot = __builtin_popcount(static_cast<unsigned>(e1bits & eps2_bits)) % 4;  // factor i^rot
    mp::Complex out(prec);
    switch (rot) {
      case 0: out = mp::Complex(acc.re, acc.im); break;
      case 1: out = mp::Complex(-acc.im, acc.re); break;
      case 2: out = mp::Complex(-acc.re, -acc.im); break;
      default: out = mp::Complex(acc.im, -acc.re); break;
    }
    out.set_precision(prec);
    return out;
  }

 private:
  mp::Bits work_;
  Ellipsoid ell_{};
  double level_ = 0;
  std::vector<mp::Real> px_, py_;
};

}  // namespace

mp::Complex eval_theta_constant(Characteristic c, const SiegelPoint& tau, mp::Bits prec_bits,
                                const ThetaOptions& opt) {
  CosetSummer summer(tau, prec_bits, opt);
  std::array<mp::Complex, 8> buckets;
  summer.sum(c.eps1(), buckets);
  return CosetSummer::combine(buckets, c.eps1(), c.index() & 7, prec_bits);
}

std::array<mp::Complex, 64> eval_theta_constants(const SiegelPoint& tau, mp::Bits prec_bits, const ThetaOptions& opt) {
  CosetSummer summer(tau, prec_bits, opt);
  std::array<mp::Complex, 64> out;
  std::array<mp::Complex, 8> buckets;
  for (int e1 = 0; e1 < 8; ++e1) {
    std::array<int, 3> eps1 = {(e1 >> 2) & 1, (e1 >> 1) & 1, e1 & 1};
    summer.sum(eps1, buckets);
    for (int e2 = 0; e2 < 8; ++e2) out[(e1 << 3) | e2] = CosetSummer::combine(buckets, eps1, e2, prec_bits);
  }
  return out;
}

}  // namespace siegel3
