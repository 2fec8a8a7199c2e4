#include "siegel3/quartics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "siegel3/error.hpp"

namespace siegel3 {

// ---------------------------------------------------------------- forms

template <class T>
TernaryForm<T>::TernaryForm(int degree, const T& zero)
    : degree_(degree), zero_(zero), c_(static_cast<std::size_t>((degree + 1) * (degree + 2) / 2), zero) {}

template <class T>
std::size_t TernaryForm<T>::index(int d, int i, int j) {
  // rows i = d, d-1, ..., 0 hold d - i + 1 entries each
  std::size_t before = static_cast<std::size_t>((d - i) * (d - i + 1) / 2);
  return before + static_cast<std::size_t>(d - i - j);
}

template <class T>
T& TernaryForm<T>::operator()(int i, int j, int k) {
  if (i < 0 || j < 0 || k < 0 || i + j + k != degree_) throw std::out_of_range("bad exponent");
  return c_[index(degree_, i, j)];
}

template <class T>
const T& TernaryForm<T>::operator()(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i + j + k != degree_) throw std::out_of_range("bad exponent");
  return c_[index(degree_, i, j)];
}

template <class T>
std::array<int, 3> TernaryForm<T>::exponents(std::size_t n) const {
  int i = degree_;
  std::size_t row = static_cast<std::size_t>(degree_ - i + 1);
  while (n >= row) {
    n -= row;
    --i;
    row = static_cast<std::size_t>(degree_ - i + 1);
  }
  int j = degree_ - i - static_cast<int>(n);
  return {i, j, degree_ - i - j};
}

template class TernaryForm<mpq_class>;
template class TernaryForm<mp::Complex>;

namespace {

// Scalar helpers shared by the exact and floating-point paths.
mpq_class lift(const mpq_class& q, const mpq_class&) { return q; }
mp::Complex lift(const mpq_class& q, const mp::Complex& like) {
  mp::Real r(like.precision());
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return mp::Complex(r, mp::Real(like.precision()));
}
bool is_zero(const mpq_class& q) { return q == 0; }
bool is_zero(const mp::Complex& z) { return z.re.is_zero() && z.im.is_zero(); }
double magnitude(const mpq_class& q) { return std::abs(q.get_d()); }
double magnitude(const mp::Complex& z) { return mp::abs(z).to_double(); }

template <class T>
using Form = TernaryForm<T>;

long factorial(int n) {
  long r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

template <class T>
Form<T> mul(const Form<T>& a, const Form<T>& b) {
  Form<T> r(a.degree() + b.degree(), a.zero());
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (is_zero(a.at(p))) continue;
    auto ea = a.exponents(p);
    for (std::size_t q = 0; q < b.size(); ++q) {
      if (is_zero(b.at(q))) continue;
      auto eb = b.exponents(q);
      r(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]) += a.at(p) * b.at(q);
    }
  }
  return r;
}

template <class T>
Form<T> add(Form<T> a, const Form<T>& b, int sign = 1) {
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (sign > 0)
      a.at(p) += b.at(p);
    else
      a.at(p) -= b.at(p);
  }
  return a;
}

template <class T>
Form<T> scale(Form<T> a, const mpq_class& s) {
  T f = lift(s, a.zero());
  for (std::size_t p = 0; p < a.size(); ++p) a.at(p) = a.at(p) * f;
  return a;
}

template <class T>
Form<T> derivative(const Form<T>& a, int var) {
  Form<T> r(a.degree() - 1, a.zero());
  for (std::size_t p = 0; p < a.size(); ++p) {
    auto e = a.exponents(p);
    if (e[var] == 0 || is_zero(a.at(p))) continue;
    long k = e[var];
    --e[var];
    r(e[0], e[1], e[2]) += a.at(p) * lift(mpq_class(k), a.zero());
  }
  return r;
}

// A(d/dx) applied to B, for deg A <= deg B.
template <class T>
Form<T> apply(const Form<T>& a, const Form<T>& b) {
  Form<T> r(b.degree() - a.degree(), a.zero());
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (is_zero(a.at(p))) continue;
    auto ea = a.exponents(p);
    for (std::size_t q = 0; q < b.size(); ++q) {
      if (is_zero(b.at(q))) continue;
      auto eb = b.exponents(q);
      if (eb[0] < ea[0] || eb[1] < ea[1] || eb[2] < ea[2]) continue;
      long f = 1;
      for (int v = 0; v < 3; ++v) f *= factorial(eb[v]) / factorial(eb[v] - ea[v]);
      r(eb[0] - ea[0], eb[1] - ea[1], eb[2] - ea[2]) += a.at(p) * b.at(q) * lift(mpq_class(f), a.zero());
    }
  }
  return r;
}

template <class T>
T scalar(const Form<T>& a) {
  if (a.degree() != 0) throw std::logic_error("not a scalar");
  return a.at(0);
}

template <class T>
T det3(const std::array<std::array<T, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Symmetric matrix M with q = x^T M x.
template <class T>
T quadratic_det(const Form<T>& q) {
  std::array<std::array<T, 3>, 3> m;
  T half = lift(mpq_class(1, 2), q.zero());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::array<int, 3> e{0, 0, 0};
      ++e[i];
      ++e[j];
      m[i][j] = i == j ? q(e[0], e[1], e[2]) : q(e[0], e[1], e[2]) * half;
    }
  return det3(m);
}

template <class T>
Form<T> hessian_det(const Form<T>& f) {
  std::array<std::array<Form<T>, 3>, 3> h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = derivative(derivative(f, i), j);
  auto minor = [&](int r1, int c1, int r2, int c2) {
    return add(mul(h[r1][c1], h[r2][c2]), mul(h[r1][c2], h[r2][c1]), -1);
  };
  Form<T> r = mul(h[0][0], minor(1, 1, 2, 2));
  r = add(r, mul(h[0][1], minor(1, 0, 2, 2)), -1);
  r = add(r, mul(h[0][2], minor(1, 0, 2, 1)));
  return r;
}

// ---------------------------------------------------------------- symbolic method

// Integer polynomial in up to 12 variables, 5 bits per exponent.
using SymPoly = std::unordered_map<std::uint64_t, std::int64_t>;
constexpr int kBits = 5;

std::uint64_t var_key(int v) { return std::uint64_t{1} << (kBits * v); }
int exponent_of(std::uint64_t key, int v) { return static_cast<int>((key >> (kBits * v)) & 31u); }

SymPoly sym_mul(const SymPoly& a, const SymPoly& b) {
  SymPoly r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) r[ka + kb] += ca * cb;
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

// det of the rows (p, q, u) where each row is three consecutive variables.
SymPoly sym_bracket(int p, int q, int u) {
  SymPoly r;
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  for (int s = 0; s < 6; ++s) {
    std::uint64_t key = var_key(p + perms[s][0]) + var_key(q + perms[s][1]) + var_key(u + perms[s][2]);
    r[key] += s < 3 ? 1 : -1;
  }
  return r;
}

SymPoly sym_pow(const SymPoly& a, int e) {
  SymPoly r{{0, 1}};
  for (int k = 0; k < e; ++k) r = sym_mul(r, a);
  return r;
}

// Contraction data: coefficient, symbol slots, and the output slot.
struct SymTerm {
  std::int64_t coeff;
  std::vector<std::size_t> symbols;  // slot in the degree-4 form, one per symbol
  std::size_t out;                   // slot in the contravariant
};

std::vector<SymTerm> sym_terms(const SymPoly& p, int nsym, int out_degree) {
  std::vector<SymTerm> t;
  const int u = 3 * nsym;
  for (const auto& [key, c] : p) {
    SymTerm s{c, {}, 0};
    for (int k = 0; k < nsym; ++k)
      s.symbols.push_back(TernaryForm<int>::index(4, exponent_of(key, 3 * k), exponent_of(key, 3 * k + 1)));
    s.out = TernaryForm<int>::index(out_degree, exponent_of(key, u), exponent_of(key, u + 1));
    t.push_back(std::move(s));
  }
  return t;
}

// sigma = (abu)^4, psi = (abu)^2 (bcu)^2 (cau)^2.
const std::vector<SymTerm>& sigma_terms() {
  static const auto t = sym_terms(sym_pow(sym_bracket(0, 3, 6), 4), 2, 4);
  return t;
}
const std::vector<SymTerm>& psi_terms() {
  static const auto t = [] {
    SymPoly ab = sym_pow(sym_bracket(0, 3, 9), 2);
    SymPoly bc = sym_pow(sym_bracket(3, 6, 9), 2);
    SymPoly ca = sym_pow(sym_bracket(6, 0, 9), 2);
    return sym_terms(sym_mul(sym_mul(ab, bc), ca), 3, 6);
  }();
  return t;
}

// Symbolic coefficients: f = sum 4!/(i! j! k!) a_ijk x^i y^j z^k.
template <class T>
std::vector<T> symbolic_coefficients(const Form<T>& f) {
  std::vector<T> a;
  for (std::size_t p = 0; p < f.size(); ++p) {
    auto e = f.exponents(p);
    long m = factorial(4) / (factorial(e[0]) * factorial(e[1]) * factorial(e[2]));
    a.push_back(f.at(p) * lift(mpq_class(1, m), f.zero()));
  }
  return a;
}

template <class T>
Form<T> contract(const std::vector<SymTerm>& terms, const std::vector<T>& a, int out_degree) {
  Form<T> r(out_degree, a[0] * lift(mpq_class(0), a[0]));
  for (const auto& t : terms) {
    T prod = a[t.symbols[0]];
    for (std::size_t k = 1; k < t.symbols.size(); ++k) prod = prod * a[t.symbols[k]];
    if (is_zero(prod)) continue;
    r.at(t.out) += prod * lift(mpq_class(t.coeff), prod);
  }
  return r;
}

// ---------------------------------------------------------------- resultant

template <class T>
T determinant(std::vector<std::vector<T>> m) {
  const std::size_t n = m.size();
  T det = lift(mpq_class(1), m.empty() ? T{} : m[0][0]);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = magnitude(m[c][c]);
    for (std::size_t r = c + 1; r < n; ++r)
      if (magnitude(m[r][c]) > best) {
        best = magnitude(m[r][c]);
        piv = r;
      }
    if (best == 0.0 && is_zero(m[piv][c])) return lift(mpq_class(0), det);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = lift(mpq_class(-1), det) * det;
    }
    det = det * m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_zero(m[r][c])) continue;
      T f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// Rows are indexed by the degree-7 monomials m; row m holds the
// coefficients of (m / x_i^3) f_i for the first i with x_i^3 | m, so the
// x_i^3 coefficient of f_i sits on the diagonal.
template <class T>
std::pair<std::vector<std::vector<T>>, std::vector<std::size_t>> macaulay_matrix(const std::array<Form<T>, 3>& f) {
  constexpr int D = 7;
  const std::size_t n = static_cast<std::size_t>((D + 1) * (D + 2) / 2);
  Form<T> basis(D, f[0].zero());
  std::vector<std::vector<T>> m(n, std::vector<T>(n, f[0].zero()));
  std::vector<std::size_t> extraneous;
  for (std::size_t row = 0; row < n; ++row) {
    auto e = basis.exponents(row);
    int which = -1, count = 0;
    for (int v = 0; v < 3; ++v)
      if (e[v] >= 3) {
        if (which < 0) which = v;
        ++count;
      }
    if (count > 1) extraneous.push_back(row);
    e[which] -= 3;
    for (std::size_t p = 0; p < f[which].size(); ++p) {
      auto ef = f[which].exponents(p);
      m[row][Form<T>::index(D, e[0] + ef[0], e[1] + ef[1])] = f[which].at(p);
    }
  }
  return {std::move(m), std::move(extraneous)};
}

template <class T>
std::vector<std::vector<T>> submatrix(const std::vector<std::vector<T>>& m, const std::vector<std::size_t>& idx) {
  std::vector<std::vector<T>> out;
  for (auto r : idx) {
    std::vector<T> row;
    for (auto c : idx) row.push_back(m[r][c]);
    out.push_back(std::move(row));
  }
  return out;
}

// Macaulay's formula det M / det M'.  nullopt when the extraneous minor
// vanishes for this coordinate system.
template <class T>
std::optional<T> macaulay_resultant(const std::array<Form<T>, 3>& f, double tiny) {
  auto [m, extraneous] = macaulay_matrix(f);
  T dm = determinant(submatrix(m, extraneous));
  if (magnitude(dm) <= tiny) return std::nullopt;
  return determinant(std::move(m)) / dm;
}

// Coefficients (constant first) of det(A - e I) by exact interpolation.
std::vector<mpq_class> char_poly(const std::vector<std::vector<mpq_class>>& a) {
  const std::size_t n = a.size();
  std::vector<mpq_class> xs, ys;
  for (std::size_t k = 0; k <= n; ++k) {
    auto b = a;
    mpq_class e(static_cast<long>(k));
    for (std::size_t i = 0; i < n; ++i) b[i][i] -= e;
    xs.push_back(e);
    ys.push_back(determinant(std::move(b)));
  }
  // Newton divided differences, then expand to monomial form
  std::vector<mpq_class> c = ys;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t i = n; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
  std::vector<mpq_class> poly(n + 1, mpq_class(0));
  for (std::size_t i = n + 1; i-- > 0;) {
    // poly = poly * (e - xs[i]) + c[i]
    std::vector<mpq_class> next(n + 1, mpq_class(0));
    for (std::size_t k = 0; k < n; ++k) {
      next[k + 1] += poly[k];
      next[k] -= poly[k] * xs[i];
    }
    next[0] += c[i];
    poly = std::move(next);
  }
  return poly;
}

// Canny's generalized characteristic polynomial: det(M - e I) / det(M' - e I')
// is Res(f_1 - e x^3, f_2 - e y^3, f_3 - e z^3), a polynomial in e whose
// value at e = 0 is the resultant.  Exact inputs only.
mpq_class gcp_resultant(const std::array<Form<mpq_class>, 3>& f) {
  auto [m, extraneous] = macaulay_matrix(f);
  auto num = char_poly(m);
  auto den = char_poly(submatrix(m, extraneous));
  while (den.size() > 1 && den.back() == 0) den.pop_back();
  // long division num / den; the quotient's constant term is the answer
  std::vector<mpq_class> rem = num;
  std::vector<mpq_class> quot(num.size() - den.size() + 1, mpq_class(0));
  for (std::size_t k = quot.size(); k-- > 0;) {
    quot[k] = rem[k + den.size() - 1] / den.back();
    for (std::size_t j = 0; j < den.size(); ++j) rem[k + j] -= quot[k] * den[j];
  }
  for (const auto& r : rem)
    if (r != 0) throw std::logic_error("generalized characteristic polynomial: inexact division");
  return quot[0];
}

template <class T>
Form<T> substitute(const Form<T>& q, const std::array<std::array<T, 3>, 3>& g) {
  std::array<Form<T>, 3> lin;
  for (int i = 0; i < 3; ++i) {
    lin[i] = Form<T>(1, q.zero());
    lin[i](1, 0, 0) = g[i][0];
    lin[i](0, 1, 0) = g[i][1];
    lin[i](0, 0, 1) = g[i][2];
  }
  Form<T> r(q.degree(), q.zero());
  for (std::size_t p = 0; p < q.size(); ++p) {
    if (is_zero(q.at(p))) continue;
    auto e = q.exponents(p);
    Form<T> term(0, q.zero());
    term.at(0) = q.at(p);
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < e[v]; ++k) term = mul(term, lin[v]);
    r = add(r, term);
  }
  return r;
}

template <class T>
T i27(const Form<T>& f) {
  // I27 = D27 / 2^40 = Res(f_x, f_y, f_z) / 2^54.  The substitution by a
  // unimodular g leaves I27 unchanged and moves special forms off the
  // locus where the extraneous factor vanishes.
  const double tiny = std::is_same_v<T, mpq_class> ? 0.0 : 1e-30;
  std::mt19937_64 rng(27);
  std::uniform_int_distribution<int> d(-2, 2);
  Form<T> g = f;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::array<Form<T>, 3> partial = {derivative(g, 0), derivative(g, 1), derivative(g, 2)};
    if (auto r = macaulay_resultant(partial, tiny)) return *r * lift(mpq_class(1, mpz_class(1) << 54), f.zero());
    // next: g = f o (I + random strictly upper) o (I + random strictly lower)
    std::array<std::array<T, 3>, 3> u, l;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        u[i][j] = lift(mpq_class(i == j ? 1 : (j > i ? d(rng) : 0)), f.zero());
        l[i][j] = lift(mpq_class(i == j ? 1 : (j < i ? d(rng) : 0)), f.zero());
      }
    g = substitute(substitute(f, u), l);
  }
  if constexpr (std::is_same_v<T, mpq_class>) {
    return gcp_resultant({derivative(f, 0), derivative(f, 1), derivative(f, 2)}) / mpq_class(mpz_class(1) << 54);
  } else {
    throw std::runtime_error("resultant: extraneous factor vanished for every substitution tried");
  }
}

template <class T>
DixmierOhnoVector<T> dixmier_ohno_impl(const Form<T>& f) {
  if (f.degree() != 4) throw std::invalid_argument("not a quartic");
  const auto a = symbolic_coefficients(f);
  const Form<T> sigma = contract(sigma_terms(), a, 4);
  const Form<T> psi = contract(psi_terms(), a, 6);
  const Form<T> he = hessian_det(f);

  const Form<T> rho = scale(apply(f, psi), mpq_class(1, 144));
  const Form<T> tau = scale(apply(rho, f), mpq_class(1, 12));
  const Form<T> xi = scale(apply(sigma, he), mpq_class(1, 72));
  const Form<T> eta = scale(apply(xi, sigma), mpq_class(1, 12));
  const Form<T> nu = scale(apply(eta, apply(rho, he)), mpq_class(1, 8));

  auto j11 = [](const Form<T>& cov, const Form<T>& con) { return scalar(apply(cov, con)); };
  auto j22 = [](const Form<T>& cov, const Form<T>& con) { return scalar(apply(mul(cov, cov), mul(con, con))); };

  // Raw contractions, then the rescalings that match the normalization of the
  // stored dictionary polynomials.  I21 and J21 keep the raw scaling.
  auto c = [&](const mpq_class& q) { return lift(q, f.zero()); };
  const T i3 = scalar(apply(sigma, f)) * c(mpq_class(1, 144));
  const T i6 = scalar(apply(psi, he)) * c(mpq_class(1, 1728)) - i3 * i3 * c(48);
  const T i9 = j11(tau, rho);
  const T j9 = j11(xi, rho);
  const mpq_class two21 = mpq_class(mpz_class(1) << 21);

  DixmierOhnoVector<T> r;
  r[0] = -i3;
  r[1] = i6 * c(mpq_class(1, 27648));
  r[2] = -i9 * c(mpq_class(1, 72));
  r[3] = -j9 * c(mpq_class(1, 41472));
  r[4] = quadratic_det(rho) * c(mpq_class(1, 216));
  r[5] = j11(tau, eta) * c(mpq_class(1, 82944));
  r[6] = -quadratic_det(tau) * c(mpq_class(1, 216));
  r[7] = -quadratic_det(xi) * c(1 / (two21 * 19683));
  r[8] = -(j22(tau, rho) - i9 * i9 * c(6)) * c(mpq_class(1, 41472));
  r[9] = -(j22(xi, rho) - j9 * j9 * c(6)) * c(1 / (two21 * 6561));
  r[10] = quadratic_det(eta);
  r[11] = j11(nu, eta);
  r[12] = i27(f);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- public

const std::array<std::string, kInvariantCount>& invariant_names() {
  static const std::array<std::string, kInvariantCount> n = {"I3",  "I6",  "I9",  "J9",  "I12", "J12", "I15",
                                                             "J15", "I18", "J18", "I21", "J21", "I27"};
  return n;
}

const std::array<int, kInvariantCount>& invariant_degrees() {
  static const std::array<int, kInvariantCount> d = {3, 6, 9, 9, 12, 12, 15, 15, 18, 18, 21, 21, 27};
  return d;
}

int invariant_index(std::string_view name) {
  for (int i = 0; i < kInvariantCount; ++i)
    if (invariant_names()[i] == name) return i;
  throw UnknownForm("'" + std::string(name) + "' is not a Dixmier-Ohno invariant");
}

DixmierOhnoVector<mpq_class> dixmier_ohno(const RationalQuartic& q) { return dixmier_ohno_impl(q); }
DixmierOhnoVector<mp::Complex> dixmier_ohno(const ComplexQuartic& q) { return dixmier_ohno_impl(q); }

mpq_class discriminant_d27(const RationalQuartic& q) { return i27(q) * mpq_class(mpz_class(1) << 40); }

RationalQuartic transform_quartic(const RationalQuartic& q, const RationalMat3& g) {
  if (det3(g) == 0) throw SingularSubstitution("substitution matrix has determinant 0");
  return substitute(q, g);
}

RationalQuartic make_quartic(const std::vector<std::pair<std::array<int, 3>, mpq_class>>& terms) {
  RationalQuartic q(4, mpq_class(0));
  for (const auto& [e, c] : terms) q(e[0], e[1], e[2]) += c;
  return q;
}

RationalQuartic quartic_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("quartic JSON: ") + e.what());
  }
  const auto& c = j.contains("coeffs") ? j.at("coeffs") : j;
  RationalQuartic q(4, mpq_class(0));
  for (auto it = c.begin(); it != c.end(); ++it) {
    const std::string& key = it.key();
    if (key.size() != 3 || !std::all_of(key.begin(), key.end(), ::isdigit))
      throw ParseError("quartic JSON: bad exponent key '" + key + "'");
    int i = key[0] - '0', jj = key[1] - '0', k = key[2] - '0';
    if (i + jj + k != 4) throw ValidationError("quartic JSON: exponents " + key + " do not sum to 4");
    mpq_class v;
    try {
      v = mpq_class(it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
      v.canonicalize();
    } catch (const std::exception&) {
      throw ParseError("quartic JSON: bad rational for " + key);
    }
    q(i, jj, k) = v;
  }
  return q;
}

RationalQuartic read_quartic(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return quartic_from_json_text(ss.str());
}

std::string quartic_to_string(const RationalQuartic& q) {
  std::string out;
  const char* names[3] = {"x", "y", "z"};
  for (std::size_t p = 0; p < q.size(); ++p) {
    if (q.at(p) == 0) continue;
    auto e = q.exponents(p);
    mpq_class c = q.at(p);
    out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    mpq_class a = abs(c);
    bool unit = a == 1;
    if (!unit) out += a.get_str();
    bool first = unit;
    for (int v = 0; v < 3; ++v) {
      if (!e[v]) continue;
      if (!first) out += "*";
      first = false;
      out += names[v];
      if (e[v] > 1) out += "^" + std::to_string(e[v]);
    }
    if (unit && e[0] + e[1] + e[2] == 0) out += "1";
  }
  return out.empty() ? "0" : out;
}

ComplexQuartic to_complex(const RationalQuartic& q, mp::Bits prec) {
  ComplexQuartic c(4, mp::Complex(prec));
  for (std::size_t p = 0; p < q.size(); ++p) c.at(p) = lift(q.at(p), mp::Complex(prec));
  return c;
}

// ---------------------------------------------------------------- dictionary

namespace {

std::vector<DictTerm> parse_dict(std::string_view text, const std::function<int(std::string_view)>& alphabet,
                                 std::size_t letters) {
  std::vector<DictTerm> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    int sign = tok[0] == '-' ? -1 : 1;
    if (tok[0] == '+' || tok[0] == '-') tok.erase(0, 1);
    DictTerm t{mpq_class(0), std::vector<int>(letters, 0)};
    std::stringstream fs(tok);
    std::string factor;
    bool first = true;
    while (std::getline(fs, factor, '*')) {
      if (first && std::isdigit(static_cast<unsigned char>(factor[0]))) {
        t.coeff = mpq_class(factor);
      } else {
        if (first) t.coeff = 1;
        auto caret = factor.find('^');
        int e = caret == std::string::npos ? 1 : std::stoi(factor.substr(caret + 1));
        t.exps[alphabet(factor.substr(0, caret))] += e;
      }
      first = false;
    }
    t.coeff *= sign;
    out.push_back(std::move(t));
  }
  return out;
}

mpq_class pow_q(long base, long e) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return mpq_class(z);
}

struct PfRow {
  const char* name;
  mpq_class scale;
  const char* poly;
};

const std::vector<PfRow>& pf_rows() {
  static const std::vector<PfRow> rows = {
      {"alpha4", pow_q(2, 20) * 27 * 7, "+486*I12 -155520*I6^2 -423*J9*I3 +117*I9*I3 +14418*I6*I3^2 +8*I3^4"},
      {"alpha6", -pow_q(2, 28) * 81 / mpq_class(35),
       "+40415760*J18 -1224720*I18 -2664900*J9^2 -8323560*J9*I9 +2506140*I9^2 -76982400*J12*I6 "
       "-1143538560*I12*I6 +135992908800*I6^3 -40041540*J15*I3 +2143260*I15*I3 +247160160*J9*I6*I3 "
       "+289325520*I9*I6*I3 +400950*J12*I3^2 -6206220*I12*I3^2 -7357573440*I6^2*I3^2 +1527453*J9*I3^3 "
       "-266481*I9*I3^3 -36764280*I6*I3^4 -62720*I3^6"},
      {"alpha12", pow_q(2, 75) * 3, "+495*I27*J9 -261*I27*I9 -14580*I27*I6*I3 +32*I27*I3^3"},
      {"beta14", pow_q(2, 81) * 81,
       "-540*I27*J15 -4860*I27*I15 +285120*I27*J9*I6 -45360*I27*I9*I6 +810*I27*J12*I3 +12204*I27*I12*I3 "
       "-18057600*I27*I6^2*I3 -8541*I27*J9*I3^2 +2961*I27*I9*I3^2 +213912*I27*I6*I3^3 -128*I27*I3^5"},
      {"beta22", -pow_q(2, 135) * 243 / mpq_class(7),
       "+540*I27^2*J12 -4590*I27^2*I12 -151200*I27^2*I6^2 +4005*I27^2*J9*I3 -1683*I27^2*I9*I3 "
       "-143010*I27^2*I6*I3^2 +56*I27^2*I3^4"},
      {"chi18", -pow_q(2, 108), "+1*I27^2"},
      {"chi28", -pow_q(2, 171) * 27, "+1*I27^3*I3"},
  };
  return rows;
}

const std::vector<PfRow>& pi_rows() {
  static const std::vector<PfRow> rows = {
      {"I3", pow_q(2, 171) * 27, "-1*chi28"},
      {"I6", pow_q(2, 344) * pow_q(3, 8) * 5, "+1*chi28^2 -144*chi18^2*gamma20"},
      {"I9", pow_q(2, 515) * pow_q(3, 12) * 5 * pow_q(7, 4),
       "-11735539200*alpha12p*chi18^4 -2920548960*alpha12*chi18^4 -86929920*alpha6^2*chi18^4 "
       "-2027520*alpha4^3*chi18^4 +3259872*beta16*beta14*chi18^3 -4074840*gamma20*alpha10*chi18^3 "
       "+21732480*gamma24*alpha6*chi18^3 -24837120*gamma26*alpha4*chi18^3 +137984*gamma20*alpha6*alpha4*chi18^3 "
       "+153856080*chi28*gamma20*chi18^2 -1764735*chi28^3"},
      {"J9", pow_q(2, 515) * pow_q(3, 12) * 25 * pow_q(7, 4),
       "-30939148800*alpha12p*chi18^4 -2200413600*alpha12*chi18^4 -229178880*alpha6^2*chi18^4 "
       "-5345280*alpha4^3*chi18^4 +8594208*beta16*beta14*chi18^3 -10742760*gamma20*alpha10*chi18^3 "
       "+57294720*gamma24*alpha6*chi18^3 -65479680*gamma26*alpha4*chi18^3 +363776*gamma20*alpha6*alpha4*chi18^3 "
       "+558376560*chi28*gamma20*chi18^2 -5294205*chi28^3"},
      {"I27", pow_q(2, 1512), "+1*chi18^14"},
  };
  return rows;
}

}  // namespace

const std::vector<std::string>& printed_pf_names() {
  static const std::vector<std::string> n = {"alpha4", "alpha6", "alpha12", "beta14", "beta22", "chi18", "chi28"};
  return n;
}
const std::vector<std::string>& printed_pI_names() {
  static const std::vector<std::string> n = {"I3", "I6", "I9", "J9", "I27"};
  return n;
}

DictionaryPolynomial pf_polynomial(std::string_view name) {
  std::string n(name);
  if (!n.empty() && n.back() == '\'') n.back() = 'p';
  for (const auto& row : pf_rows())
    if (n == row.name) {
      DictionaryPolynomial p;
      p.direction = DictionaryPolynomial::Direction::FormToInvariants;
      p.name = row.name;
      p.scale = row.scale;
      p.terms = parse_dict(row.poly, invariant_index, kInvariantCount);
      return p;
    }
  generator_index(n);  // UnknownForm for names outside the 19
  throw NotTabulated("no printed invariant expression for " + n);
}

DictionaryPolynomial pI_polynomial(std::string_view name) {
  for (const auto& row : pi_rows())
    if (name == row.name) {
      DictionaryPolynomial p;
      p.direction = DictionaryPolynomial::Direction::InvariantsToForms;
      p.name = row.name;
      p.scale = row.scale;
      p.i27_power = invariant_degrees()[invariant_index(name)];
      p.terms = parse_dict(row.poly, generator_index, kGeneratorCount);
      return p;
    }
  invariant_index(name);
  throw NotTabulated("no printed modular expression for " + std::string(name));
}

bool degree_audit(const DictionaryPolynomial& p) {
  if (p.direction == DictionaryPolynomial::Direction::FormToInvariants) {
    int h = generator_weights()[generator_index(p.name)];
    for (const auto& t : p.terms) {
      int d = 0;
      for (int i = 0; i < kInvariantCount; ++i) d += t.exps[i] * invariant_degrees()[i];
      if (d != 3 * h) return false;
    }
    return !p.terms.empty();
  }
  const int deg = invariant_degrees()[invariant_index(p.name)];
  if (deg % 3) return false;
  const int k = deg / 3;
  // 27 kappa + 3k = 3 weight and 14 kappa = 3 weight / 2 force kappa = 3k
  if (p.i27_power != 3 * k) return false;
  for (const auto& t : p.terms) {
    int w = 0;
    for (int i = 0; i < kGeneratorCount; ++i) w += t.exps[i] * generator_weights()[i];
    if (w != 28 * k) return false;
  }
  return !p.terms.empty();
}

std::string DictionaryPolynomial::to_string() const {
  const bool inv = direction == Direction::FormToInvariants;
  std::string out;
  for (const auto& t : terms) {
    out += out.empty() ? (t.coeff < 0 ? "-" : "") : (t.coeff < 0 ? " - " : " + ");
    out += mpq_class(abs(t.coeff)).get_str();
    for (std::size_t i = 0; i < t.exps.size(); ++i)
      if (t.exps[i]) {
        out += "*" + (inv ? invariant_names()[i] : generator_names()[i]);
        if (t.exps[i] > 1) out += "^" + std::to_string(t.exps[i]);
      }
  }
  return out;
}

mp::Complex eval_dictionary_terms(const DictionaryPolynomial& p, std::span<const mp::Complex> values, mp::Bits prec) {
  mp::Complex sum(prec);
  for (const auto& t : p.terms) {
    mp::Complex v = lift(t.coeff, mp::Complex(prec));
    for (std::size_t i = 0; i < t.exps.size(); ++i)
      if (t.exps[i]) v *= mp::pow(values[i], t.exps[i]);
    sum += v;
  }
  return sum;
}

mpq_class eval_dictionary_terms(const DictionaryPolynomial& p, std::span<const mpq_class> values) {
  mpq_class sum = 0;
  for (const auto& t : p.terms) {
    mpq_class v = t.coeff;
    for (std::size_t i = 0; i < t.exps.size(); ++i)
      for (int k = 0; k < t.exps[i]; ++k) v *= values[i];
    sum += v;
  }
  return sum;
}

}  // namespace siegel3
