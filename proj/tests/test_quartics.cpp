#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "siegel3/error.hpp"
#include "siegel3/quartics.hpp"

using namespace siegel3;

namespace {

const RationalQuartic kFermat = make_quartic({{{4, 0, 0}, 1}, {{0, 4, 0}, 1}, {{0, 0, 4}, 1}});
const RationalQuartic kKlein = make_quartic({{{3, 1, 0}, 1}, {{0, 3, 1}, 1}, {{1, 0, 3}, 1}});

RationalQuartic random_quartic(std::mt19937_64& g, int range = 3) {
  std::uniform_int_distribution<int> d(-range, range);
  RationalQuartic q(4, mpq_class(0));
  for (std::size_t p = 0; p < q.size(); ++p) q.at(p) = d(g);
  return q;
}

mpq_class det(const RationalMat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

RationalMat3 random_unimodular(std::mt19937_64& g) {
  std::uniform_int_distribution<int> d(-3, 3);
  for (;;) {
    RationalMat3 m;
    for (auto& row : m)
      for (auto& x : row) x = d(g);
    if (det(m) == 1) return m;
  }
}

RationalQuartic scaled(RationalQuartic q, const mpq_class& s) {
  for (std::size_t p = 0; p < q.size(); ++p) q.at(p) *= s;
  return q;
}

mpq_class power(const mpq_class& x, int e) {
  mpq_class r = 1;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

TEST(Quartics, SlotLayout) {
  RationalQuartic q(4, mpq_class(0));
  EXPECT_EQ(q.size(), 15u);
  for (std::size_t p = 0; p < q.size(); ++p) {
    auto e = q.exponents(p);
    EXPECT_EQ(e[0] + e[1] + e[2], 4);
    EXPECT_EQ(RationalQuartic::index(4, e[0], e[1]), p);
  }
  EXPECT_EQ(q.exponents(0), (std::array<int, 3>{4, 0, 0}));
  EXPECT_EQ(q.exponents(14), (std::array<int, 3>{0, 0, 4}));
  EXPECT_THROW(q(3, 0, 0), std::out_of_range);
}

TEST(Quartics, FermatAndKleinDiscriminant) {
  auto f = dixmier_ohno(kFermat);
  EXPECT_EQ(f.get("I27"), 1);  // Res(4x^3, 4y^3, 4z^3) = 4^27 = 2^54
  EXPECT_EQ(discriminant_d27(kFermat), mpq_class(mpz_class(1) << 40));
  auto k = dixmier_ohno(kKlein);
  EXPECT_NE(k.get("I27"), 0);
  // x^3y + y^3z + z^3x has discriminant 7^7 up to the power of 2
  EXPECT_EQ(k.get("I27") * mpq_class(mpz_class(1) << 40), mpq_class(823543));
  // with the dictionary normalization I3 changes sign and I6 vanishes on x^4 + y^4 + z^4
  EXPECT_EQ(f.get("I3"), -1);
  EXPECT_EQ(f.get("I6"), 0);
}

TEST(Quartics, SL3Invariance) {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto q = random_quartic(g);
    auto m = random_unimodular(g);
    auto a = dixmier_ohno(q);
    auto b = dixmier_ohno(transform_quartic(q, m));
    for (int i = 0; i < kInvariantCount; ++i) EXPECT_EQ(a[i], b[i]) << invariant_names()[i] << " trial " << trial;
  }
}

TEST(Quartics, Homogeneity) {
  std::mt19937_64 g(5);
  for (const mpq_class& s : {mpq_class(2), mpq_class(-3, 2)}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto q = random_quartic(g);
      auto a = dixmier_ohno(q);
      auto b = dixmier_ohno(scaled(q, s));
      for (int i = 0; i < kInvariantCount; ++i)
        EXPECT_EQ(b[i], power(s, invariant_degrees()[i]) * a[i]) << invariant_names()[i];
    }
  }
  auto two = dixmier_ohno(scaled(kKlein, 2));
  EXPECT_EQ(two.get("I3"), 8 * dixmier_ohno(kKlein).get("I3"));
}

TEST(Quartics, DiagonalScalingWeights) {
  // det diag(l, 1, 1) = l, so a degree-d invariant picks up l^(4d/3)
  std::mt19937_64 g(6);
  auto q = random_quartic(g);
  RationalMat3 m{{{mpq_class(8), 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  auto a = dixmier_ohno(q);
  auto b = dixmier_ohno(transform_quartic(q, m));
  for (int i = 0; i < kInvariantCount; ++i)
    EXPECT_EQ(b[i], power(mpq_class(16), invariant_degrees()[i]) * a[i]) << invariant_names()[i];
}

TEST(Quartics, SingularQuarticsHaveZeroDiscriminant) {
  std::mt19937_64 g(9);
  std::uniform_int_distribution<int> d(1, 5);
  int checked = 0;
  for (int k = 0; k < 5; ++k) {
    // (a x^2 + b y^2 + c z^2)^2 is a double conic
    int a = d(g), b = -d(g), c = d(g);
    auto q = make_quartic({{{4, 0, 0}, a * a},
                           {{0, 4, 0}, b * b},
                           {{0, 0, 4}, c * c},
                           {{2, 2, 0}, 2 * a * b},
                           {{2, 0, 2}, 2 * a * c},
                           {{0, 2, 2}, 2 * b * c}});
    EXPECT_EQ(dixmier_ohno(q).get("I27"), 0);
    ++checked;
  }
  for (int k = 0; k < 5; ++k) {
    // no x^4, x^3 y, x^3 z terms: Q and its gradient vanish at (1:0:0);
    // a unimodular change of variables moves the node elsewhere
    auto q = random_quartic(g);
    q(4, 0, 0) = 0;
    q(3, 1, 0) = 0;
    q(3, 0, 1) = 0;
    auto moved = transform_quartic(q, random_unimodular(g));
    EXPECT_EQ(dixmier_ohno(moved).get("I27"), 0);
    EXPECT_EQ(discriminant_d27(moved), 0);
    ++checked;
  }
  EXPECT_EQ(checked, 10);
}

TEST(Quartics, DiscriminantRegression) {
  std::ifstream in(std::string(SIEGEL3_SOURCE_DIR) + "/tests/data/d27_regression.json");
  ASSERT_TRUE(in.good());
  auto doc = nlohmann::json::parse(in);
  ASSERT_EQ(doc["cases"].size(), 10u);
  for (const auto& c : doc["cases"]) {
    auto q = quartic_from_json_text(c["quartic"].dump());
    mpq_class want(c["d27"].get<std::string>());
    EXPECT_EQ(discriminant_d27(q), want) << quartic_to_string(q);
    EXPECT_EQ(dixmier_ohno(q).get("I27") * mpq_class(mpz_class(1) << 40), want);
  }
}

TEST(Quartics, ComplexPathMatchesExact) {
  std::mt19937_64 g(11);
  auto q = random_quartic(g);
  auto exact = dixmier_ohno(q);
  auto approx = dixmier_ohno(to_complex(q, 160));
  for (int i = 0; i < kInvariantCount; ++i) {
    mp::Real want(160);
    mpfr_set_q(want.raw(), exact[i].get_mpq_t(), MPFR_RNDN);
    mp::Complex diff = approx[i] - mp::Complex(want, mp::Real(160));
    mp::Real bound = mp::Real::pow2(-120, 160) * (mp::Real(1.0, 160) + mp::abs(want));
    EXPECT_TRUE(mp::abs(diff) < bound) << invariant_names()[i];
  }
}

TEST(Quartics, TransformBasics) {
  std::mt19937_64 g(12);
  auto q = random_quartic(g);
  RationalMat3 id{{{mpq_class(1), 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  auto t = transform_quartic(q, id);
  for (std::size_t p = 0; p < q.size(); ++p) EXPECT_EQ(t.at(p), q.at(p));
  RationalMat3 sing{{{mpq_class(1), 2, 3}, {2, 4, 6}, {0, 0, 1}}};
  EXPECT_THROW(transform_quartic(q, sing), SingularSubstitution);
  // x -> x + y sends x^4 to (x + y)^4
  RationalMat3 shear{{{mpq_class(1), 1, 0}, {0, 1, 0}, {0, 0, 1}}};
  auto s = transform_quartic(make_quartic({{{4, 0, 0}, 1}}), shear);
  EXPECT_EQ(s(4, 0, 0), 1);
  EXPECT_EQ(s(3, 1, 0), 4);
  EXPECT_EQ(s(2, 2, 0), 6);
  EXPECT_EQ(s(0, 4, 0), 1);
}

TEST(Quartics, JsonRoundTrip) {
  auto q = quartic_from_json_text(R"({"coeffs": {"400": "1", "310": "-2/3", "004": 5}})");
  EXPECT_EQ(q(4, 0, 0), 1);
  EXPECT_EQ(q(3, 1, 0), mpq_class(-2, 3));
  EXPECT_EQ(q(0, 0, 4), 5);
  EXPECT_EQ(quartic_to_string(q), "x^4 - 2/3*x^3*y + 5*z^4");
  EXPECT_THROW(quartic_from_json_text(R"({"coeffs": {"40": "1"}})"), ParseError);
  EXPECT_THROW(quartic_from_json_text(R"({"coeffs": {"401": "1"}})"), ValidationError);
  EXPECT_THROW(quartic_from_json_text(R"({"coeffs": {"400": "x"}})"), ParseError);
  EXPECT_THROW(quartic_from_json_text("{"), ParseError);
}

TEST(Dictionary, PrintedFormEntries) {
  const std::map<std::string, std::size_t> terms = {{"alpha4", 6}, {"alpha6", 19}, {"alpha12", 4}, {"beta14", 11},
                                                    {"beta22", 7}, {"chi18", 1},   {"chi28", 1}};
  ASSERT_EQ(printed_pf_names().size(), terms.size());
  for (const auto& name : printed_pf_names()) {
    auto p = pf_polynomial(name);
    EXPECT_EQ(p.terms.size(), terms.at(name)) << name;
    EXPECT_TRUE(degree_audit(p)) << name;
  }
  EXPECT_EQ(pf_polynomial("alpha4").scale, mpq_class(mpz_class(1) << 20) * 27 * 7);
  EXPECT_EQ(pf_polynomial("chi18").scale, -mpq_class(mpz_class(1) << 108));
  EXPECT_EQ(pf_polynomial("beta22").scale, -mpq_class(mpz_class(1) << 135) * 243 / 7);
  EXPECT_EQ(pf_polynomial("alpha4").to_string(),
            "486*I12 - 155520*I6^2 - 423*I3*J9 + 117*I3*I9 + 14418*I3^2*I6 + 8*I3^4");
  EXPECT_THROW(pf_polynomial("alpha10"), NotTabulated);
  EXPECT_THROW(pf_polynomial("delta30"), UnknownForm);
}

TEST(Dictionary, PrintedInvariantEntries) {
  const std::map<std::string, std::pair<std::size_t, int>> shape = {
      {"I3", {1, 3}}, {"I6", {2, 6}}, {"I9", {11, 9}}, {"J9", {11, 9}}, {"I27", {1, 27}}};
  for (const auto& name : printed_pI_names()) {
    auto p = pI_polynomial(name);
    EXPECT_EQ(p.terms.size(), shape.at(name).first) << name;
    EXPECT_EQ(p.i27_power, shape.at(name).second) << name;
    EXPECT_TRUE(degree_audit(p)) << name;
  }
  auto i6 = pI_polynomial("I6");
  // 2^344, not 2^144: the identity fails by exactly 2^200 with the smaller power
  EXPECT_EQ(i6.scale, mpq_class(mpz_class(1) << 344) * 6561 * 5);
  EXPECT_EQ(i6.to_string(), "1*chi28^2 - 144*chi18^2*gamma20");
  EXPECT_THROW(pI_polynomial("J12"), NotTabulated);
  EXPECT_THROW(pI_polynomial("K5"), UnknownForm);
}

TEST(Dictionary, AuditRejectsCorruption) {
  auto p = pf_polynomial("alpha4");
  p.terms[2].exps[invariant_index("J9")] += 1;
  EXPECT_FALSE(degree_audit(p));
  auto q = pI_polynomial("I6");
  q.terms[1].exps[generator_index("gamma20")] += 1;
  EXPECT_FALSE(degree_audit(q));
  auto r = pI_polynomial("I9");
  r.i27_power = 8;
  EXPECT_FALSE(degree_audit(r));
}

TEST(Dictionary, ExactEvaluation) {
  auto p = pf_polynomial("alpha4");
  std::array<mpq_class, kInvariantCount> v;
  v.fill(0);
  v[invariant_index("I3")] = 2;
  // only 8 I3^4 survives
  EXPECT_EQ(eval_dictionary_terms(p, v), 128);
}
