#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "siegel3/bridge.hpp"
#include "siegel3/error.hpp"

using namespace siegel3;

namespace {

const std::filesystem::path kData = std::filesystem::path(SIEGEL3_SOURCE_DIR) / "tests/data";
const std::filesystem::path kCache = std::filesystem::path(SIEGEL3_BINARY_DIR) / "forms-cache";
constexpr mp::Bits kPrec = 128;

RationalQuartic fermat() { return make_quartic({{{4, 0, 0}, 1}, {{0, 4, 0}, 1}, {{0, 0, 4}, 1}}); }

// Omega_2 a fixed invertible matrix, Omega_1 = tau0 * Omega_2.
PeriodFixture constructed(const ComplexMat3& tau0) {
  PeriodFixture fx;
  fx.quartic = fermat();
  fx.digits = 40;
  fx.label = "constructed";
  const double o2[3][3] = {{2, 1, 0}, {-1, 3, 1}, {0.5, 0, 1}};
  ComplexMat3 m2;
  for (int i = 0; i < 9; ++i) m2[i] = mp::Complex(o2[i / 3][i % 3], 0.25 * (i % 4), kPrec);
  ComplexMat3 m1 = mat3::mul(tau0, m2);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      fx.omega[r][c] = m1[3 * r + c];
      fx.omega[r + 3][c] = m2[3 * r + c];
    }
  return fx;
}

ComplexMat3 scalar(double re, double im) {
  ComplexMat3 t;
  for (int i = 0; i < 9; ++i) t[i] = mp::Complex(0.0, 0.0, kPrec);
  for (int i = 0; i < 3; ++i) t[4 * i] = mp::Complex(re, im, kPrec);
  return t;
}

const PeriodFixture& small_fixture() {
  static const PeriodFixture fx = read_fixture(kData / "quartic_a_40.json", kPrec);
  return fx;
}

double tol() { return std::ldexp(1.0, -static_cast<int>(kPrec) / 3); }

}  // namespace

TEST(Bridge, ConstructedImaginaryIdentity) {
  auto rep = tau_from_periods(constructed(scalar(0, 1)), kPrec);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_LT(std::abs(rep.tau(i, j).re.to_double()), 1e-30);
      EXPECT_NEAR(rep.tau(i, j).im.to_double(), i == j ? 1.0 : 0.0, 1e-30);
    }
}

TEST(Bridge, AsymmetryIsRejected) {
  auto t = scalar(0, 1);
  t[1] = mp::Complex(1e-3, 0.0, kPrec);
  auto fx = constructed(t);
  fx.digits = 80;
  EXPECT_THROW(tau_from_periods(fx, kPrec), RiemannRelationViolation);
  // the same defect is tolerated when the data only carry 4 digits
  fx.digits = 4;
  EXPECT_NO_THROW(tau_from_periods(fx, kPrec));
}

TEST(Bridge, NegativeImaginaryPartIsRejected) {
  EXPECT_THROW(tau_from_periods(constructed(scalar(0, -1)), kPrec), RiemannRelationViolation);
}

TEST(Bridge, FixtureParsing) {
  const auto& fx = small_fixture();
  EXPECT_EQ(fx.digits, 40);
  EXPECT_FALSE(fx.source.empty());
  EXPECT_THROW(fixture_from_json_text("{\"omega\": []}", kPrec), ParseError);
  EXPECT_THROW(fixture_from_json_text("not json", kPrec), ParseError);
}

TEST(Bridge, OracleFixtureGivesSiegelPoint) {
  auto rep = tau_from_periods(small_fixture(), kPrec);
  EXPECT_GT(rep.tau.min_imag_eigenvalue(), 0.0);
  EXPECT_LT(rep.asymmetry_log2, -100);
}

TEST(Bridge, KleinFormula) {
  Phi3Evaluator ev(small_fixture(), kPrec, kCache);
  EXPECT_LT(dictionary_check(ev, "chi18"), tol());
}

TEST(Bridge, PrintedDictionaryEntries) {
  Phi3Evaluator ev(small_fixture(), kPrec, kCache);
  for (const auto& name : printed_pf_names()) EXPECT_LT(dictionary_check(ev, name), tol()) << name;
  for (const auto& name : printed_pI_names()) EXPECT_LT(inverse_dictionary_check(ev, name), tol()) << name;
}

TEST(Bridge, DictionaryDetectsSignOfI3) {
  // chi28 is odd in I3, so the opposite sign convention must fail
  Phi3Evaluator ev(small_fixture(), kPrec, kCache);
  auto p = pf_polynomial("chi28");
  auto inv = ev.invariants();
  const double good = mpq_class(p.scale * eval_dictionary_terms(p, std::span<const mpq_class>(inv.v))).get_d();
  inv[invariant_index("I3")] *= -1;
  const double bad = mpq_class(p.scale * eval_dictionary_terms(p, std::span<const mpq_class>(inv.v))).get_d();
  const double phi = ev.phi3("chi28").re.to_double();
  EXPECT_NEAR(phi / good, 1.0, 1e-12);
  EXPECT_NEAR(phi / bad, -1.0, 1e-12);
}

TEST(Bridge, SymplecticBasisChange) {
  const auto& fx = small_fixture();
  Phi3Evaluator base(fx, kPrec, kCache);
  auto gens = standard_generators();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    auto m = random_word(gens, 6, rng);
    Phi3Evaluator moved(change_basis(m, fx), kPrec, kCache);
    for (const char* name : {"alpha4", "alpha6", "chi18"}) {
      EXPECT_LT(relative_residual(base.phi3(name), moved.phi3(name)), tol()) << name << " trial " << trial;
    }
  }
}

TEST(Bridge, SingularQuarticRejected) {
  auto fx = small_fixture();
  // (x^2 + y^2 + z^2)^2 has I27 = 0
  fx.quartic = make_quartic({{{4, 0, 0}, 1}, {{0, 4, 0}, 1}, {{0, 0, 4}, 1},
                             {{2, 2, 0}, 2}, {{2, 0, 2}, 2}, {{0, 2, 2}, 2}});
  EXPECT_THROW(Phi3Evaluator(fx, kPrec, kCache), ValidationError);
}
