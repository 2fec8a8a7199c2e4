// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every value carries its own mantissa precision.  Binary operators produce a
// result at the larger of the two operand precisions; the in-place helpers in
// the `fast` namespace write into preallocated storage and are what the hot
// loops (lattice sums, form evaluation, SVD sweeps) use.
#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace siegel3::mp {

using Bits = mpfr_prec_t;

class Real {
 public:
  explicit Real(Bits prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double x, Bits prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, Bits prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(int x, Bits prec) : Real(static_cast<long>(x), prec) {}
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(const Real& o, Bits prec) {
    mpfr_init2(v_, prec);
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  /// Parses a decimal string ("-1.25e-3") or a rational "p/q".
  static Real parse(std::string_view s, Bits prec);
  static Real pi(Bits prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  /// 2^e at the given precision.
  static Real pow2(long e, Bits prec) {
    Real r(prec);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  Bits precision() const { return mpfr_get_prec(v_); }
  void set_precision(Bits p) { mpfr_prec_round(v_, p, MPFR_RNDN); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long_round() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// Scientific decimal with `digits` significant digits (0 = enough to round-trip).
  std::string to_string(int digits = 0) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  /// Binary exponent e with 0.5 <= |x|/2^e < 1; very negative for zero.
  long exponent2() const { return is_zero() ? -(1L << 40) : mpfr_get_exp(v_); }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
  Real& operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }
  Real& mul_2exp(long e) { mpfr_mul_2si(v_, v_, e, MPFR_RNDN); return *this; }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) { return binop(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binop(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binop(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binop(a, b, mpfr_div); }
  friend Real operator*(const Real& a, long k) {
    Real r(a);
    r *= k;
    return r;
  }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  template <class F>
  static Real binop(const Real& a, const Real& b, F f) {
    Real r(std::max(a.precision(), b.precision()));
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
/// Writes sin(x), cos(x) in one call.
void sin_cos(Real& s, Real& c, const Real& x);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& x);
Real round(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

struct Complex {
  Real re;
  Real im;

  explicit Complex(Bits prec = 64) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r, double i, Bits prec) : re(r, prec), im(i, prec) {}

  static Complex i_unit(Bits prec) { return Complex(0.0, 1.0, prec); }
  /// e^{i*theta}.
  static Complex polar(const Real& modulus, const Real& theta);

  Bits precision() const { return std::max(re.precision(), im.precision()); }
  void set_precision(Bits p) {
    re.set_precision(p);
    im.set_precision(p);
  }

  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o) { return *this = *this / o; }
  Complex& operator*=(const Real& r) {
    re *= r;
    im *= r;
    return *this;
  }
  Complex& operator*=(long k) {
    re *= k;
    im *= k;
    return *this;
  }

  Complex operator-() const { return Complex(-re, -im); }
  Complex conj() const { return Complex(re, -im); }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b);
  friend Complex operator/(const Complex& a, const Complex& b);
  friend Complex operator*(Complex a, const Real& r) { return a *= r; }
  friend Complex operator*(Complex a, long k) { return a *= k; }
};

Real abs(const Complex& z);
/// |z|^2.
Real norm(const Complex& z);
Complex exp(const Complex& z);
/// z^n for integer n (binary powering; negative n inverts).
Complex pow(const Complex& z, long n);
Complex inverse(const Complex& z);

/// Scratch-buffer kernels for hot loops.  None of them allocate.
namespace fast {

struct Scratch {
  Real t1, t2;
  explicit Scratch(Bits prec) : t1(prec), t2(prec) {}
};

/// out = a * b.  `out` must not alias a or b.
inline void mul(Complex& out, const Complex& a, const Complex& b, Scratch&) {
  mpfr_mul(out.re.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_fms(out.re.raw(), a.im.raw(), b.im.raw(), out.re.raw(), MPFR_RNDN);
  mpfr_neg(out.re.raw(), out.re.raw(), MPFR_RNDN);
  mpfr_mul(out.im.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_fma(out.im.raw(), a.im.raw(), b.re.raw(), out.im.raw(), MPFR_RNDN);
}

/// acc += a * b.
inline void fma(Complex& acc, const Complex& a, const Complex& b, Scratch& s) {
  mpfr_mul(s.t1.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_fms(s.t1.raw(), a.im.raw(), b.im.raw(), s.t1.raw(), MPFR_RNDN);
  mpfr_sub(acc.re.raw(), acc.re.raw(), s.t1.raw(), MPFR_RNDN);
  mpfr_mul(s.t2.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_fma(s.t2.raw(), a.im.raw(), b.re.raw(), s.t2.raw(), MPFR_RNDN);
  mpfr_add(acc.im.raw(), acc.im.raw(), s.t2.raw(), MPFR_RNDN);
}

/// acc += conj(a) * b.
inline void fma_conj(Complex& acc, const Complex& a, const Complex& b, Scratch& s) {
  mpfr_mul(s.t1.raw(), a.re.raw(), b.re.raw(), MPFR_RNDN);
  mpfr_fma(s.t1.raw(), a.im.raw(), b.im.raw(), s.t1.raw(), MPFR_RNDN);
  mpfr_add(acc.re.raw(), acc.re.raw(), s.t1.raw(), MPFR_RNDN);
  mpfr_mul(s.t2.raw(), a.re.raw(), b.im.raw(), MPFR_RNDN);
  mpfr_fms(s.t2.raw(), a.im.raw(), b.re.raw(), s.t2.raw(), MPFR_RNDN);
  mpfr_sub(acc.im.raw(), acc.im.raw(), s.t2.raw(), MPFR_RNDN);
}

}  // namespace fast

}  // namespace siegel3::mp
