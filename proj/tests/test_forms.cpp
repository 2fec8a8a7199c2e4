#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "siegel3/error.hpp"
#include "siegel3/forms.hpp"

using namespace siegel3;

namespace {

const std::vector<std::string> kGenerators = {"alpha4",  "alpha6",  "alpha10", "alpha12", "alpha12p",
                                              "beta14",  "alpha16", "beta16",  "chi18",   "alpha18",
                                              "alpha20", "gamma20", "beta22",  "beta22p", "alpha24",
                                              "gamma24", "gamma26", "chi28",   "alpha30"};

const ExpandedForm& form(const std::string& name) {
  static std::map<std::string, ExpandedForm> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, expand_named(name)).first;
  return it->second;
}

std::filesystem::path tmp_path(const std::string& leaf) {
  return std::filesystem::temp_directory_path() / ("siegel3_test_" + leaf);
}

}  // namespace

TEST(Forms, SyzygeticExamples) {
  ThetaMonomial m1 = syzygetic_monomial(1);
  EXPECT_EQ(m1.sign, 1);
  for (int t : {3, 28, 31, 33, 34, 61, 62, 0}) EXPECT_EQ(m1.exponent(t), 1);
  EXPECT_EQ(m1.degree(), 8);
  ThetaMonomial m2 = syzygetic_monomial(2);
  EXPECT_EQ(m2.sign, -1);
  for (int t : {1, 2, 28, 31, 32, 35, 61, 62}) EXPECT_EQ(m2.exponent(t), 1);
  ThetaMonomial m131 = syzygetic_monomial(131);
  EXPECT_EQ(m131.sign, 1);
  for (int t = 0; t < 8; ++t) EXPECT_EQ(m131.exponent(t), 1);
  EXPECT_EQ(syzygetic_indices().size(), 33U);
  EXPECT_THROW(syzygetic_monomial(6), UnknownSyzygeticIndex);
  for (int i : syzygetic_indices()) EXPECT_EQ(syzygetic_monomial(i).degree(), 8);
}

TEST(Forms, SeedExamples) {
  ThetaMonomial chi = build_seed("chi18");
  EXPECT_EQ(chi.degree(), 36);
  for (auto e : chi.exps) EXPECT_EQ(e, 1);

  ThetaMonomial a4 = build_seed("alpha4");
  EXPECT_EQ(a4.degree(), 8);
  for (int t : {4, 5, 6, 7}) EXPECT_EQ(a4.exponent(t), 2);

  ThetaMonomial chi28 = build_seed("chi28");
  EXPECT_EQ(chi28.degree(), 56);
  for (int i : even_indices()) EXPECT_EQ(chi28.exponent(i), i < 8 ? 0 : 2);

  EXPECT_THROW(reduce_recipe("s131 / t61^4"), NegativeExponent);
  EXPECT_THROW(build_seed("alpha5"), UnknownForm);
  EXPECT_EQ(find_recipe("gamma32'").name, "c32p");
}

TEST(Forms, SeedDegreeBookkeeping) {
  EXPECT_EQ(seed_recipes().size(), 34U);
  for (const auto& r : seed_recipes()) {
    ThetaMonomial s = build_seed(r.name);
    EXPECT_EQ(s.degree(), 2 * r.weight) << r.name;
    EXPECT_EQ(s.degree() % 4, 0) << r.name;
  }
}

TEST(Forms, TransformExamples) {
  ThetaMonomial m = build_seed("beta16");
  EXPECT_EQ(transform_monomial(SymplecticMatrix::identity(), m), m);

  ThetaMonomial t0;
  t0.exps[even_slot(0)] = 4;
  ThetaMonomial j = transform_monomial(SymplecticMatrix::J(), t0);
  EXPECT_EQ(j.exps, t0.exps);
  EXPECT_EQ(j.sign, -1);

  // chi18 under T_E11 against the numeric transformation.
  IntMat3 e11{};
  e11[0][0] = 1;
  SymplecticMatrix t = SymplecticMatrix::translation(e11);
  ThetaMonomial chi = build_seed("chi18");
  ThetaMonomial img = transform_monomial(t, chi);
  EXPECT_EQ(img.exps, chi.exps);
  TauSampler s(4);
  SiegelPoint tau = s.next(128);
  ExpandedForm single{"x", 18, {{chi.exps, 1}}};
  mp::Complex lhs = eval_form(single, act_on_tau(t, tau), 128);
  mp::Complex rhs = eval_form(single, tau, 128) * static_cast<long>(img.sign);
  EXPECT_LT(mp::abs(lhs - rhs).to_double(), 1e-25 * mp::abs(rhs).to_double());

  ThetaMonomial odd_degree;
  odd_degree.exps[0] = 2;
  EXPECT_THROW(transform_monomial(SymplecticMatrix::J(), odd_degree), NonRealPhase);
}

TEST(Forms, SmallOrbitCounts) {
  EXPECT_EQ(form("chi18").terms.size(), 1U);
  EXPECT_EQ(form("chi28").terms.size(), 135U);
  EXPECT_EQ(form("alpha10").terms.size(), 30240U);
  EXPECT_EQ(form("chi28").content(), 10752U);
}

TEST(Forms, AllOrbitCounts) {
  for (const auto& r : seed_recipes()) {
    ExpandedForm f = expand_named(r.name);
    EXPECT_EQ(f.terms.size(), r.expected_terms) << r.name;
    EXPECT_EQ(1451520U % f.terms.size(), 0U) << r.name;
    ThetaMonomial seed = build_seed(r.name);
    auto it = std::lower_bound(f.terms.begin(), f.terms.end(), seed.exps,
                               [](const FormTerm& t, const Exponents& e) { return t.exps < e; });
    ASSERT_NE(it, f.terms.end());
    EXPECT_EQ(it->exps, seed.exps);
    EXPECT_EQ(it->coeff, seed.sign) << r.name;
    for (std::size_t i = 1; i < f.terms.size(); ++i) ASSERT_LT(f.terms[i - 1].exps, f.terms[i].exps);
  }
}

TEST(Forms, GeneratorSetIndependence) {
  auto gens = standard_generators();
  std::mt19937_64 rng(8);
  for (int k = 0; k < 4; ++k) gens.push_back(random_word(standard_generators(), 6, rng));
  for (const char* name : {"alpha10", "beta22p", "gamma24"}) {
    ExpandedForm base = form(name);
    const SeedRecipe& r = find_recipe(name);
    ExpandedForm wide = expand(build_seed(name), r.name, r.weight, gens);
    EXPECT_TRUE(base == wide) << name;
  }
}

TEST(Forms, EvalExamples) {
  TauSampler s(21);
  SiegelPoint tau = s.next(128);
  // single-term form against the direct product
  ThetaMonomial a6 = build_seed("alpha6");
  ExpandedForm single{"seed", 6, {{a6.exps, static_cast<std::int8_t>(a6.sign)}}};
  auto th = even_thetas(tau, 160);
  mp::Complex direct(1.0, 0.0, 160);
  for (int k = 0; k < 36; ++k) direct *= mp::pow(th[k], a6.exps[k]);
  direct *= static_cast<long>(a6.sign);
  mp::Complex v = eval_form(single, tau, 128);
  EXPECT_LT(mp::abs(v - direct).to_double(), 1e-30 * mp::abs(direct).to_double());

  // period-2 translation invariance
  IntMat3 b{};
  b[0][0] = 2;
  SiegelPoint shifted = act_on_tau(SymplecticMatrix::translation(b), tau);
  mp::Complex x = eval_form(form("alpha4"), tau, 128);
  mp::Complex y = eval_form(form("alpha4"), shifted, 128);
  EXPECT_LT(mp::log2(mp::abs(x - y) / mp::abs(x)).to_double(), -64);

  // chi18 vanishes where a theta constant does: at i I3 the thetas with
  // eps2 = 0 and eps1 != 0 stay nonzero, so use a sum of terms instead.
  std::array<mp::Complex, 36> vals;
  for (int k = 0; k < 36; ++k) vals[k] = mp::Complex(1.0 + k, 0.5, 128);
  vals[7] = mp::Complex(128);
  mp::Complex z = eval_terms(form("chi18"), vals, 128);
  EXPECT_TRUE(z.re.is_zero() && z.im.is_zero());
}

TEST(Forms, ModularityOfGenerators) {
  constexpr mp::Bits p = 128;
  auto gens = standard_generators();
  std::mt19937_64 rng(2024);
  TauSampler s(2025);
  int done = 0;
  while (done < 20) {
    SymplecticMatrix m = random_word(gens, 5, rng);
    SiegelPoint tau = s.next(p + 32);
    SiegelPoint mt = act_on_tau(m, tau);
    if (mt.min_imag_eigenvalue() < 0.05) continue;
    auto th_t = even_thetas(tau, p + 16);
    auto th_m = even_thetas(mt, p + 16);
    mp::Complex det = cocycle(m, tau);
    for (const auto& name : kGenerators) {
      const ExpandedForm& f = form(name);
      mp::Complex a = eval_terms(f, th_m, p + 16);
      mp::Complex b = eval_terms(f, th_t, p + 16) * mp::pow(det, f.weight);
      mp::Real den = mp::max(mp::abs(b), mp::Real::pow2(-64, p));
      EXPECT_LT(mp::log2(mp::abs(a - b) / den).to_double(), -64.0) << name << " sample " << done;
    }
    ++done;
  }
}

TEST(Forms, ModularityResidualApi) {
  TauSampler s(31);
  SiegelPoint tau = s.next(128);
  EXPECT_LT(modularity_residual(form("chi18"), SymplecticMatrix::J(), tau, 128).to_double(), std::ldexp(1.0, -64));
  EXPECT_LT(modularity_residual(form("alpha4"), SymplecticMatrix::identity(), tau, 128).to_double(), 1e-35);
  std::mt19937_64 rng(3);
  auto gens = standard_generators();
  SymplecticMatrix w = random_word(gens, 5, rng);
  EXPECT_LT(modularity_residual(form("alpha4"), w, tau, 128).to_double(), std::ldexp(1.0, -64));
}

TEST(Forms, SerializationRoundTrip) {
  auto path = tmp_path("chi28.form");
  save_form(form("chi28"), path);
  ExpandedForm back = load_form(path);
  EXPECT_TRUE(back == form("chi28"));
  std::filesystem::remove(path);
}

TEST(Forms, SerializationErrors) {
  std::string text = serialize_form(form("chi28"));
  EXPECT_THROW(parse_form(text.substr(0, text.size() / 2)), ParseError);

  std::string tampered = text;
  tampered[tampered.find('\n') + 1] = tampered[tampered.find('\n') + 1] == '+' ? '-' : '+';
  EXPECT_THROW(parse_form(tampered), ChecksumMismatch);

  ExpandedForm dup = form("alpha20");
  dup.terms[1] = dup.terms[0];
  EXPECT_THROW(parse_form(serialize_form(dup)), ValidationError);

  try {
    parse_form("SIEGEL3FORM x 4 1\n* 0:8\nSHA256 00\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:1"), std::string::npos);
  }
}
