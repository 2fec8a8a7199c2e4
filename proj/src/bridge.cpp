#include "siegel3/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "siegel3/error.hpp"

namespace siegel3 {

namespace {

mp::Complex from_q(const mpq_class& q, mp::Bits prec) {
  mp::Real r(prec);
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return mp::Complex(r, mp::Real(prec));
}

ComplexMat3 block(const PeriodFixture& fx, int top, mp::Bits prec) {
  ComplexMat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      m[3 * i + j] = fx.omega[top + i][j];
      m[3 * i + j].set_precision(prec);
    }
  return m;
}

double fixture_bits(const PeriodFixture& fx) { return fx.digits * std::log2(10.0); }

}  // namespace

PeriodFixture fixture_from_json_text(const std::string& text, mp::Bits prec, const std::string& label) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(label + ": " + e.what());
  }
  PeriodFixture fx;
  fx.label = label;
  try {
    fx.quartic = quartic_from_json_text(j.at("quartic").dump());
    fx.digits = j.at("digits").get<int>();
    fx.source = j.value("source", "");
    const auto& om = j.at("omega");
    if (!om.is_array() || om.size() != 6) throw ValidationError(label + ": omega must have 6 rows");
    for (int r = 0; r < 6; ++r) {
      if (!om[r].is_array() || om[r].size() != 3) throw ValidationError(label + ": omega rows must have 3 entries");
      for (int c = 0; c < 3; ++c) {
        const auto& z = om[r][c];
        fx.omega[r][c] = mp::Complex(mp::Real::parse(z.at(0).get<std::string>(), prec),
                                     mp::Real::parse(z.at(1).get<std::string>(), prec));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(label + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(label + ": " + e.what());
  }
  if (fx.digits <= 0) throw ValidationError(label + ": digits must be positive");
  return fx;
}

PeriodFixture read_fixture(const std::filesystem::path& path, mp::Bits prec) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return fixture_from_json_text(ss.str(), prec, path.stem().string());
}

std::vector<PeriodFixture> read_fixture_dir(const std::filesystem::path& dir, mp::Bits prec) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<PeriodFixture> out;
  for (const auto& f : files) out.push_back(read_fixture(f, prec));
  return out;
}

PeriodFixture change_basis(const SymplecticMatrix& m, const PeriodFixture& fx) {
  PeriodFixture out = fx;
  const mp::Bits prec = fx.omega[0][0].precision();
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 3; ++c) {
      mp::Complex acc(prec);
      for (int k = 0; k < 6; ++k)
        if (m(r, k)) acc += fx.omega[k][c] * from_q(mpq_class(static_cast<long>(m(r, k))), prec);
      out.omega[r][c] = acc;
    }
  return out;
}

TauReport tau_from_periods(const PeriodFixture& fx, mp::Bits prec) {
  const mp::Bits work = prec + 32;
  ComplexMat3 o1 = block(fx, 0, work);
  ComplexMat3 o2 = block(fx, 3, work);
  if (mp::abs(mat3::det(o2)).is_zero()) throw RiemannRelationViolation(fx.label + ": Omega_2 is singular");
  ComplexMat3 t = mat3::mul(o1, mat3::inverse(o2));
  mp::Real scale(1.0, work);
  mp::Real asym(0.0, work);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      scale = mp::max(scale, mp::abs(t[3 * i + j]));
      if (i < j) asym = mp::max(asym, mp::abs(t[3 * i + j] - t[3 * j + i]));
    }
  const double bits = std::min<double>(static_cast<double>(prec), fixture_bits(fx));
  const double defect = asym.is_zero() ? -1e9 : mp::log2(asym / scale).to_double();
  if (defect > -bits / 2)
    throw RiemannRelationViolation(fx.label + ": tau asymmetric, relative defect 2^" + std::to_string(defect));
  try {
    return TauReport{SiegelPoint::from_matrix(t, prec), defect};
  } catch (const NotPositiveDefinite& e) {
    throw RiemannRelationViolation(fx.label + ": Im(tau) not positive definite");
  }
}

Phi3Evaluator::Phi3Evaluator(const PeriodFixture& fx, mp::Bits prec,
                             const std::optional<std::filesystem::path>& forms_cache)
    : fx_(fx), prec_(prec), cache_(forms_cache) {
  tau_ = tau_from_periods(fx, prec);
  const mp::Bits work = prec + 32;
  mp::Complex two_pi_i(mp::Real(work), mp::Real::pi(work) * mp::Real(2.0, work));
  mu_ = mp::pow(two_pi_i, 3) / mat3::det(block(fx, 3, work));
  thetas_ = even_thetas(tau_->tau.with_precision(work), work);
  invariants_ = dixmier_ohno(fx.quartic);
  if (invariants_.get("I27") == 0) throw ValidationError(fx.label + ": quartic is singular (I27 = 0)");
}

const ExpandedForm& Phi3Evaluator::form(std::string_view name) const {
  std::string key = generator_names()[generator_index(name)];
  auto it = forms_.find(key);
  if (it == forms_.end()) it = forms_.emplace(key, cached_form(key, cache_)).first;
  return it->second;
}

mp::Complex Phi3Evaluator::phi3(const ExpandedForm& f) const {
  const mp::Bits work = prec_ + 32;
  return mp::pow(mu_, f.weight) * eval_terms(f, thetas_, work);
}

mp::Complex Phi3Evaluator::phi3(std::string_view name) const { return phi3(form(name)); }

const std::array<mp::Complex, kGeneratorCount>& Phi3Evaluator::generator_values() const {
  if (!gen_values_) {
    std::array<mp::Complex, kGeneratorCount> v;
    for (int i = 0; i < kGeneratorCount; ++i) v[i] = eval_terms(form(generator_names()[i]), thetas_, prec_ + 32);
    gen_values_ = std::move(v);
  }
  return *gen_values_;
}

mp::Complex phi3_eval(const ExpandedForm& form, const PeriodFixture& fx, mp::Bits prec) {
  return Phi3Evaluator(fx, prec).phi3(form);
}

double relative_residual(const mp::Complex& a, const mp::Complex& b) {
  mp::Real den = mp::max(mp::abs(a), mp::abs(b));
  if (den.is_zero()) return 0.0;
  return (mp::abs(a - b) / den).to_double();
}

double dictionary_check(const Phi3Evaluator& ev, std::string_view name) {
  DictionaryPolynomial p = pf_polynomial(name);
  mpq_class rhs = p.scale * eval_dictionary_terms(p, std::span<const mpq_class>(ev.invariants().v));
  if (rhs == 0) throw ZeroDenominator("printed polynomial for " + p.name + " vanishes on this quartic");
  return relative_residual(ev.phi3(p.name), from_q(rhs, ev.precision() + 32));
}

double dictionary_check(const PeriodFixture& fx, std::string_view name, mp::Bits prec) {
  return dictionary_check(Phi3Evaluator(fx, prec), name);
}

double inverse_dictionary_check(const Phi3Evaluator& ev, std::string_view name) {
  DictionaryPolynomial p = pI_polynomial(name);
  const mp::Bits work = ev.precision() + 32;
  mpq_class lhs = p.scale * ev.invariants().get(name);
  mpq_class i27 = ev.invariants().get("I27");
  for (int k = 0; k < p.i27_power; ++k) lhs *= i27;
  if (lhs == 0) throw ZeroDenominator("invariant " + p.name + " vanishes on this quartic");
  int weight = 0;
  for (int i = 0; i < kGeneratorCount; ++i) weight += p.terms.front().exps[i] * generator_weights()[i];
  mp::Complex rhs = mp::pow(ev.mu(), weight) * eval_dictionary_terms(p, ev.generator_values(), work);
  return relative_residual(from_q(lhs, work), rhs);
}

double inverse_dictionary_check(const PeriodFixture& fx, std::string_view name, mp::Bits prec) {
  return inverse_dictionary_check(Phi3Evaluator(fx, prec), name);
}

}  // namespace siegel3
