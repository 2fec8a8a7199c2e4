#include "siegel3/mp.hpp"

#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace siegel3::mp {

Real Real::parse(std::string_view s, Bits prec) {
  std::string str(s);
  Real r(prec);
  if (auto slash = str.find('/'); slash != std::string::npos) {
    Real num = parse(str.substr(0, slash), prec + 16);
    Real den = parse(str.substr(slash + 1), prec + 16);
    if (den.is_zero()) throw std::invalid_argument("zero denominator in '" + str + "'");
    mpfr_div(r.v_, num.v_, den.v_, MPFR_RNDN);
    return r;
  }
  char* end = nullptr;
  if (mpfr_strtofr(r.v_, str.c_str(), &end, 10, MPFR_RNDN), end == str.c_str() || *end != '\0')
    throw std::invalid_argument("not a decimal number: '" + str + "'");
  return r;
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (is_zero()) return "0";
  std::size_t n = digits > 0 ? static_cast<std::size_t>(digits) : 0;
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, n, v_, MPFR_RNDN);
  std::unique_ptr<char, void (*)(char*)> guard(raw, mpfr_free_str);
  std::string mant(raw);
  std::string out;
  if (!mant.empty() && mant[0] == '-') {
    out.push_back('-');
    mant.erase(0, 1);
  }
  out.push_back(mant[0]);
  if (mant.size() > 1) {
    out.push_back('.');
    out.append(mant, 1);
  }
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
Real log2(const Real& x) {
  Real r(x.precision());
  mpfr_log2(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
void sin_cos(Real& s, Real& c, const Real& x) { mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN); }
Real atan2(const Real& y, const Real& x) {
  Real r(std::max(x.precision(), y.precision()));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}
Real floor(const Real& x) {
  Real r(x.precision());
  mpfr_floor(r.raw(), x.raw());
  return r;
}
Real round(const Real& x) {
  Real r(x.precision());
  mpfr_round(r.raw(), x.raw());
  return r;
}
Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Complex Complex::polar(const Real& modulus, const Real& theta) {
  Complex z(modulus.precision());
  sin_cos(z.im, z.re, theta);
  z.re *= modulus;
  z.im *= modulus;
  return z;
}

Complex& Complex::operator*=(const Complex& o) {
  Complex out(precision());
  fast::Scratch s(precision());
  fast::mul(out, *this, o, s);
  *this = std::move(out);
  return *this;
}

Complex operator*(const Complex& a, const Complex& b) {
  Complex out(std::max(a.precision(), b.precision()));
  fast::Scratch s(out.precision());
  fast::mul(out, a, b, s);
  return out;
}

Complex operator/(const Complex& a, const Complex& b) { return a * inverse(b); }

Complex inverse(const Complex& z) {
  Real n = norm(z);
  return Complex(z.re / n, -(z.im / n));
}

Real abs(const Complex& z) {
  Real r(z.precision());
  mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
  return r;
}

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Complex exp(const Complex& z) { return Complex::polar(exp(z.re), z.im); }

Complex pow(const Complex& z, long n) {
  Bits p = z.precision();
  Complex base = n < 0 ? inverse(z) : z;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Complex acc(1.0, 0.0, p);
  while (k) {
    if (k & 1UL) acc *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return acc;
}

}  // namespace siegel3::mp
