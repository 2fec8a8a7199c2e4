#include "siegel3/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "siegel3/error.hpp"

namespace siegel3 {

namespace {

IntMat6 mul6(const IntMat6& a, const IntMat6& b) {
  IntMat6 c{};
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k) {
      if (a[i][k] == 0) continue;
      for (int j = 0; j < 6; ++j) {
        std::int64_t t = 0;
        if (__builtin_mul_overflow(a[i][k], b[k][j], &t) || __builtin_add_overflow(c[i][j], t, &c[i][j]))
          throw std::overflow_error("symplectic product overflows int64");
      }
    }
  return c;
}

IntMat6 j_matrix() {
  IntMat6 j{};
  for (int i = 0; i < 3; ++i) {
    j[i][i + 3] = 1;
    j[i + 3][i] = -1;
  }
  return j;
}

IntMat6 transpose(const IntMat6& a) {
  IntMat6 t{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) t[i][j] = a[j][i];
  return t;
}

IntMat3 transpose3(const IntMat3& a) {
  IntMat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

IntMat3 mul3(const IntMat3& a, const IntMat3& b) {
  IntMat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

std::int64_t det3(const IntMat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Inverse of a unimodular integer matrix via the adjugate.
IntMat3 unimodular_inverse(const IntMat3& m) {
  std::int64_t d = det3(m);
  if (d != 1 && d != -1) throw NotSymplectic("embedding block is not unimodular");
  IntMat3 inv{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * d;
    }
  return inv;
}

std::uint64_t pack_mod2(const IntMat6& m) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (m[i][j] & 1) bits |= std::uint64_t{1} << (6 * i + j);
  return bits;
}

std::uint64_t mul_mod2(std::uint64_t a, std::uint64_t b) {
  std::uint64_t c = 0;
  for (int i = 0; i < 6; ++i) {
    std::uint64_t row = 0;
    for (int k = 0; k < 6; ++k)
      if ((a >> (6 * i + k)) & 1U) row ^= (b >> (6 * k)) & 0x3FU;
    c |= row << (6 * i);
  }
  return c;
}

}  // namespace

bool is_symplectic(const IntMat6& m) {
  try {
    return mul6(mul6(m, j_matrix()), transpose(m)) == j_matrix();
  } catch (const std::overflow_error&) {
    return false;
  }
}

SymplecticMatrix::SymplecticMatrix(const IntMat6& m) : m_(m) {
  if (!is_symplectic(m)) throw NotSymplectic("M J M^T != J");
}

SymplecticMatrix SymplecticMatrix::identity() {
  IntMat6 m{};
  for (int i = 0; i < 6; ++i) m[i][i] = 1;
  return {m, Unchecked{}};
}

SymplecticMatrix SymplecticMatrix::J() { return {j_matrix(), Unchecked{}}; }

SymplecticMatrix SymplecticMatrix::translation(const IntMat3& b) {
  IntMat6 m = identity().m_;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j + 3] = b[i][j];
  return SymplecticMatrix(m);
}

SymplecticMatrix SymplecticMatrix::embedding(const IntMat3& u) {
  IntMat3 uinv_t = transpose3(unimodular_inverse(u));
  IntMat6 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      m[i][j] = u[i][j];
      m[i + 3][j + 3] = uinv_t[i][j];
    }
  return SymplecticMatrix(m);
}

IntMat3 SymplecticMatrix::block(int r, int c) const {
  IntMat3 b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = m_[r + i][c + j];
  return b;
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
  return {mul6(m_, o.m_), Unchecked{}};
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  IntMat6 inv{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      inv[i][j] = m_[j + 3][i + 3];           // D^T
      inv[i][j + 3] = -m_[j][i + 3];          // -B^T
      inv[i + 3][j] = -m_[j + 3][i];          // -C^T
      inv[i + 3][j + 3] = m_[j][i];           // A^T
    }
  return {inv, Unchecked{}};
}

std::int64_t SymplecticMatrix::max_abs_entry() const {
  std::int64_t best = 0;
  for (const auto& row : m_)
    for (auto v : row) best = std::max(best, v < 0 ? -v : v);
  return best;
}

// ---------------------------------------------------------------------------
// 3x3 complex helpers

namespace mat3 {

mp::Complex det(const ComplexMat3& m) {
  auto at = [&](int i, int j) -> const mp::Complex& { return m[3 * i + j]; };
  return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
         at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
         at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
}

ComplexMat3 inverse(const ComplexMat3& m) {
  mp::Complex inv_det = mp::inverse(det(m));
  auto at = [&](int i, int j) -> const mp::Complex& { return m[3 * i + j]; };
  ComplexMat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      out[3 * i + j] = (at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0)) * inv_det;
    }
  return out;
}

ComplexMat3 mul(const ComplexMat3& a, const ComplexMat3& b) {
  mp::Bits p = std::max(a[0].precision(), b[0].precision());
  ComplexMat3 c;
  mp::fast::Scratch s(p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      mp::Complex acc(p);
      for (int k = 0; k < 3; ++k) mp::fast::fma(acc, a[3 * i + k], b[3 * k + j], s);
      c[3 * i + j] = std::move(acc);
    }
  return c;
}

ComplexMat3 from_int(const IntMat3& m, mp::Bits prec) {
  ComplexMat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = mp::Complex(static_cast<double>(m[i][j]), 0.0, prec);
  return out;
}

}  // namespace mat3

// ---------------------------------------------------------------------------
// SiegelPoint

SiegelPoint::SiegelPoint(std::array<mp::Complex, 6> upper, mp::Bits prec) : upper_(std::move(upper)), prec_(prec) {
  for (auto& z : upper_) z.set_precision(prec);
  // Leading principal minors of Y = Im(tau).
  const mp::Real& y00 = upper_[0].im;
  const mp::Real& y01 = upper_[1].im;
  const mp::Real& y02 = upper_[2].im;
  const mp::Real& y11 = upper_[3].im;
  const mp::Real& y12 = upper_[4].im;
  const mp::Real& y22 = upper_[5].im;
  mp::Real m1 = y00;
  mp::Real m2 = y00 * y11 - y01 * y01;
  mp::Real m3 = y00 * (y11 * y22 - y12 * y12) - y01 * (y01 * y22 - y12 * y02) + y02 * (y01 * y12 - y11 * y02);
  if (!(m1.sign() > 0 && m2.sign() > 0 && m3.sign() > 0))
    throw NotPositiveDefinite("Im(tau) is not positive definite");
}

SiegelPoint SiegelPoint::from_matrix(const ComplexMat3& m, mp::Bits prec) {
  std::array<mp::Complex, 6> up;
  int k = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      mp::Complex z = m[3 * i + j] + m[3 * j + i];
      z.re.mul_2exp(-1);
      z.im.mul_2exp(-1);
      up[k++] = std::move(z);
    }
  return SiegelPoint(std::move(up), prec);
}

SiegelPoint SiegelPoint::scalar_imaginary(double t, mp::Bits prec) {
  std::array<mp::Complex, 6> up = {mp::Complex(0, t, prec), mp::Complex(prec), mp::Complex(prec),
                                   mp::Complex(0, t, prec), mp::Complex(prec), mp::Complex(0, t, prec)};
  return SiegelPoint(std::move(up), prec);
}

ComplexMat3 SiegelPoint::matrix() const {
  ComplexMat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[3 * i + j] = (*this)(i, j);
  return m;
}

std::array<std::array<double, 3>, 3> SiegelPoint::imag_double() const {
  std::array<std::array<double, 3>, 3> y{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) y[i][j] = (*this)(i, j).im.to_double();
  return y;
}

double SiegelPoint::min_imag_eigenvalue() const {
  auto y = imag_double();
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = y[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  double lam = es.eigenvalues()(0);
  // Double rounding of Y and of the eigen solver is far below this margin.
  return lam - 1e-9 * es.eigenvalues()(2);
}

SiegelPoint SiegelPoint::with_precision(mp::Bits prec) const {
  std::array<mp::Complex, 6> up = upper_;
  return SiegelPoint(std::move(up), prec);
}

// ---------------------------------------------------------------------------
// Action and automorphy factor

namespace {

ComplexMat3 affine(const IntMat3& p, const ComplexMat3& tau, const IntMat3& q, mp::Bits prec) {
  ComplexMat3 out = mat3::mul(mat3::from_int(p, prec), tau);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j].re += mp::Real(static_cast<long>(q[i][j]), prec);
  return out;
}

void check_cocycle(const mp::Complex& d, const ComplexMat3& ctd) {
  mp::Bits p = d.precision();
  mp::Real scale(1.0, p);
  for (const auto& z : ctd) scale = mp::max(scale, mp::abs(z));
  mp::Real thresh = mp::Real::pow2(-static_cast<long>(p / 2), p) * scale * scale * scale;
  if (mp::abs(d) < thresh) throw NearSingularCocycle("|det(C tau + D)| below precision threshold");
}

}  // namespace

mp::Complex cocycle(const SymplecticMatrix& m, const SiegelPoint& tau) {
  ComplexMat3 ctd = affine(m.C(), tau.matrix(), m.D(), tau.precision());
  mp::Complex d = mat3::det(ctd);
  check_cocycle(d, ctd);
  return d;
}

SiegelPoint act_on_tau(const SymplecticMatrix& m, const SiegelPoint& tau) {
  mp::Bits p = tau.precision();
  ComplexMat3 t = tau.matrix();
  ComplexMat3 ctd = affine(m.C(), t, m.D(), p);
  check_cocycle(mat3::det(ctd), ctd);
  ComplexMat3 atb = affine(m.A(), t, m.B(), p);
  return SiegelPoint::from_matrix(mat3::mul(atb, mat3::inverse(ctd)), p);
}

int zeta4(const SymplecticMatrix& m) {
  IntMat3 bct = mul3(m.B(), transpose3(m.C()));
  std::int64_t tr = bct[0][0] + bct[1][1] + bct[2][2];
  return (tr % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Generators and the finite quotient

std::vector<SymplecticMatrix> standard_generators() {
  std::vector<SymplecticMatrix> gens;
  gens.reserve(kStandardGeneratorCount);
  gens.push_back(SymplecticMatrix::J());
  for (int i = 0; i < 3; ++i) {
    IntMat3 b{};
    b[i][i] = 1;
    gens.push_back(SymplecticMatrix::translation(b));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      IntMat3 b{};
      b[i][j] = b[j][i] = 1;
      gens.push_back(SymplecticMatrix::translation(b));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      IntMat3 u{};
      for (int k = 0; k < 3; ++k) u[k][k] = 1;
      u[i][j] = 1;
      gens.push_back(SymplecticMatrix::embedding(u));
    }
  return gens;
}

std::uint64_t group_order_mod2(std::span<const SymplecticMatrix> gens) {
  std::vector<std::uint64_t> g;
  for (const auto& m : gens) g.push_back(pack_mod2(m.entries()));
  const std::uint64_t id = pack_mod2(SymplecticMatrix::identity().entries());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(1 << 21);
  seen.insert(id);
  std::vector<std::uint64_t> frontier{id}, next;
  while (!frontier.empty()) {
    next.clear();
    for (std::uint64_t x : frontier)
      for (std::uint64_t s : g) {
        std::uint64_t y = mul_mod2(x, s);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier.swap(next);
  }
  return seen.size();
}

bool congruence_membership(const SymplecticMatrix& m, int level, bool igusa) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  auto mod = [](std::int64_t v, std::int64_t l) { return ((v % l) + l) % l; };
  const auto& e = m.entries();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (mod(e[i][j] - (i == j ? 1 : 0), level) != 0) return false;
  if (!igusa) return true;
  IntMat3 atc = mul3(transpose3(m.A()), m.C());
  IntMat3 btd = mul3(transpose3(m.B()), m.D());
  for (int i = 0; i < 3; ++i)
    if (mod(atc[i][i], 2 * level) != 0 || mod(btd[i][i], 2 * level) != 0) return false;
  return true;
}

SymplecticMatrix random_word(std::span<const SymplecticMatrix> gens, int length, std::mt19937_64& rng) {
  SymplecticMatrix w = SymplecticMatrix::identity();
  std::uniform_int_distribution<std::size_t> pick(0, 2 * gens.size() - 1);
  for (int k = 0; k < length; ++k) {
    std::size_t r = pick(rng);
    const SymplecticMatrix& g = gens[r / 2];
    w = w * ((r & 1U) ? g.inverse() : g);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Sampling and files

double TauSampler::uniform(double lo, double hi) {
  double u = static_cast<double>(rng_() >> 11) * 0x1p-53;
  return lo + (hi - lo) * u;
}

SiegelPoint TauSampler::next(mp::Bits prec) {
  double x[3][3], r[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) x[i][j] = x[j][i] = uniform(-0.5, 0.5);
  for (auto& row : r)
    for (double& v : row) v = uniform(-1.0, 1.0);
  std::array<mp::Complex, 6> up;
  int k = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      // (R^T R)_ij accumulated in exact rational arithmetic at the target precision.
      mp::Real y(i == j ? 0.5 : 0.0, prec);
      for (int l = 0; l < 3; ++l) y += mp::Real(r[l][i], prec) * mp::Real(r[l][j], prec);
      up[k++] = mp::Complex(mp::Real(x[i][j], prec), std::move(y));
    }
  return SiegelPoint(std::move(up), prec);
}

std::vector<SiegelPoint> read_tau_file(const std::filesystem::path& path, mp::Bits prec) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tau file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError("tau file must hold a JSON array");
  std::vector<SiegelPoint> out;
  for (const auto& m : doc) {
    if (!m.is_array() || m.size() != 3) throw ParseError("each tau must be a 3x3 matrix");
    ComplexMat3 t;
    for (int i = 0; i < 3; ++i) {
      if (!m[i].is_array() || m[i].size() != 3) throw ParseError("each tau row must have 3 entries");
      for (int j = 0; j < 3; ++j) {
        const auto& e = m[i][j];
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
          throw ParseError("tau entries must be [\"re\", \"im\"] string pairs");
        t[3 * i + j] = mp::Complex(mp::Real::parse(e[0].get<std::string>(), prec),
                                   mp::Real::parse(e[1].get<std::string>(), prec));
      }
    }
    out.push_back(SiegelPoint::from_matrix(t, prec));
  }
  return out;
}

void write_tau_file(const std::filesystem::path& path, std::span<const SiegelPoint> taus, int digits) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& t : taus) {
    nlohmann::json m = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < 3; ++j) row.push_back({t(i, j).re.to_string(digits), t(i, j).im.to_string(digits)});
      m.push_back(row);
    }
    doc.push_back(m);
  }
  std::ofstream out(path);
  out << doc.dump(1) << '\n';
}

}  // namespace siegel3
