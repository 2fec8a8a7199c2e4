#include <gtest/gtest.h>

#include <random>
#include <set>

#include "siegel3/error.hpp"
#include "siegel3/theta.hpp"

using namespace siegel3;

namespace {

constexpr mp::Bits kPrec = 200;

double log2_rel(const mp::Complex& a, const mp::Complex& b) {
  mp::Real den = mp::max(mp::abs(b), mp::Real::pow2(-1000, a.precision()));
  mp::Real d = mp::abs(a - b);
  if (d.is_zero()) return -1e9;
  return mp::log2(d / den).to_double();
}

}  // namespace

TEST(Theta, Parity) {
  EXPECT_EQ(parity(Characteristic(0)), Parity::Even);
  EXPECT_EQ(parity(Characteristic(61)), Parity::Even);
  EXPECT_EQ(parity(Characteristic(63)), Parity::Odd);
  EXPECT_EQ(even_indices().size(), 36U);
  auto c = Characteristic(61);
  EXPECT_EQ(c.eps1(), (std::array<int, 3>{1, 1, 1}));
  EXPECT_EQ(c.eps2(), (std::array<int, 3>{1, 0, 1}));
  for (int i = 0; i < 64; ++i) {
    Characteristic x(i);
    EXPECT_EQ(Characteristic::from_vectors(x.eps1(), x.eps2()), x);
  }
}

TEST(Theta, TsuyumineTable) {
  EXPECT_EQ(tsuyumine_to_binary(1).index(), 31);
  EXPECT_EQ(tsuyumine_to_binary(21).index(), 0);
  EXPECT_EQ(tsuyumine_to_binary(36).index(), 61);
  std::set<int> seen;
  for (int k = 1; k <= 36; ++k) {
    Characteristic c = tsuyumine_to_binary(k);
    EXPECT_EQ(parity(c), Parity::Even);
    EXPECT_EQ(binary_to_tsuyumine(c), k);
    seen.insert(c.index());
  }
  EXPECT_EQ(seen.size(), 36U);
  EXPECT_THROW(binary_to_tsuyumine(Characteristic(63)), NotEven);
}

TEST(Theta, CharacteristicActionExamples) {
  for (int i : even_indices()) {
    auto r = act_on_characteristic(SymplecticMatrix::identity(), Characteristic(i));
    EXPECT_EQ(r.target.index(), i);
    EXPECT_EQ(r.eq2_sign, 1);
    EXPECT_EQ(r.sigma, 0);
  }
  for (int i = 0; i < 64; ++i) {
    Characteristic c(i);
    auto r = act_on_characteristic(SymplecticMatrix::J(), c);
    EXPECT_EQ(r.target, Characteristic::from_vectors(c.eps2(), c.eps1()));
    EXPECT_EQ(r.eq2_sign, 1);
    int dot = 0;
    for (int k = 0; k < 3; ++k) dot += c.eps1()[k] * c.eps2()[k];
    EXPECT_EQ(r.sigma, -2 * dot);
  }
}

TEST(Theta, ParityPreserved) {
  auto gens = standard_generators();
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    SymplecticMatrix m = random_word(gens, 8, rng);
    for (int i = 0; i < 64; ++i)
      EXPECT_EQ(parity(act_on_characteristic(m, Characteristic(i)).target), parity(Characteristic(i)));
  }
}

TEST(Theta, OddVanish) {
  TauSampler s(1);
  SiegelPoint tau = s.next(kPrec);
  auto all = eval_theta_constants(tau, kPrec);
  for (int i = 0; i < 64; ++i) {
    if (parity(Characteristic(i)) == Parity::Odd) {
      EXPECT_LT(mp::abs(all[i]).to_double(), 1e-55) << i;
      EXPECT_LT(mp::abs(eval_theta_constant(Characteristic(i), tau, kPrec)).to_double(), 1e-55) << i;
    } else {
      EXPECT_LT(log2_rel(eval_theta_constant(Characteristic(i), tau, kPrec), all[i]), -190) << i;
    }
  }
}

TEST(Theta, LargeImaginaryLimit) {
  SiegelPoint tau = SiegelPoint::scalar_imaginary(40.0, kPrec);
  mp::Complex v = eval_theta_constant(Characteristic(0), tau, kPrec);
  // Next terms are 6 e^{-40 pi}.
  EXPECT_NEAR(v.re.to_double(), 1.0, 1e-50);
  EXPECT_NEAR(v.im.to_double(), 0.0, 1e-50);
}

TEST(Theta, BruteForceAtI) {
  // Independent oracle: the theta series at i I3 factors as a cube of the
  // one-dimensional sum, taken over |k| <= 20.
  mp::Real one_dim(1.0, kPrec);
  mp::Real pi = mp::Real::pi(kPrec);
  for (long k = 1; k <= 20; ++k) {
    mp::Real e = mp::exp(-(pi * (k * k)));
    one_dim += e * 2L;
  }
  mp::Real expect = one_dim * one_dim * one_dim;
  mp::Complex v = eval_theta_constant(Characteristic(0), SiegelPoint::scalar_imaginary(1.0, kPrec), kPrec);
  EXPECT_LT(log2_rel(v, mp::Complex(expect, mp::Real(kPrec))), -195);
  EXPECT_LT(mp::abs(v.im).to_double(), 1e-58);
}

TEST(Theta, TailCertification) {
  TauSampler s(99);
  ThetaOptions wide;
  wide.truncation_scale = 4.0;  // doubles the radius
  for (int t = 0; t < 50; ++t) {
    SiegelPoint tau = s.next(kPrec);
    auto base = eval_theta_constants(tau, kPrec);
    auto more = eval_theta_constants(tau, kPrec, wide);
    for (int i : even_indices()) {
      mp::Real d = mp::abs(base[i] - more[i]);
      // claimed bound 2^(1-p) (1 + sum |terms|); sum |terms| < 200 for these samples
      EXPECT_LT(d, mp::Real::pow2(1 - static_cast<long>(kPrec), kPrec) * mp::Real(201.0, kPrec)) << i;
    }
  }
}

TEST(Theta, PrecisionUnreachable) {
  std::array<mp::Complex, 6> up = {mp::Complex(0, 1e-7, kPrec), mp::Complex(kPrec), mp::Complex(kPrec),
                                   mp::Complex(0, 1, kPrec),    mp::Complex(kPrec), mp::Complex(0, 1, kPrec)};
  SiegelPoint tau(up, kPrec);
  EXPECT_THROW(eval_theta_constant(Characteristic(0), tau, kPrec), PrecisionUnreachable);
}

// theta_c(M.tau)^4 = zeta^4 det(C tau + D)^2 (-1)^sigma theta_{M.c}(tau)^4
TEST(Theta, FourthPowerTransformation) {
  auto gens = standard_generators();
  std::mt19937_64 rng(17);
  TauSampler s(18);
  constexpr mp::Bits p = 160;
  std::vector<SymplecticMatrix> ms(gens.begin(), gens.end());
  for (int t = 0; t < 12; ++t) ms.push_back(random_word(gens, 4, rng));
  for (const auto& m : ms) {
    SiegelPoint tau = s.next(p);
    SiegelPoint mt = act_on_tau(m, tau);
    if (mt.min_imag_eigenvalue() < 0.02) continue;
    auto at_mt = eval_theta_constants(mt, p);
    auto at_t = eval_theta_constants(tau, p);
    mp::Complex det = cocycle(m, tau);
    for (int i : even_indices()) {
      auto r = act_on_characteristic(m, Characteristic(i));
      mp::Complex lhs = mp::pow(at_mt[i], 4);
      mp::Complex rhs = det * det * mp::pow(at_t[r.target.index()], 4);
      long sgn = zeta4(m) * ((r.sigma % 2 == 0) ? 1 : -1);
      rhs *= sgn;
      EXPECT_LT(log2_rel(lhs, rhs), -p / 2.0) << "char " << i;
    }
  }
}
