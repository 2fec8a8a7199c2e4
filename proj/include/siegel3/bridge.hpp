// The bridge between modular forms and quartic invariants: a period matrix
// of a smooth quartic gives tau and the factor mu, and
// Phi3(f) = mu^h f(tau) is an invariant of degree 3h.
#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "siegel3/forms.hpp"
#include "siegel3/mp.hpp"
#include "siegel3/quartics.hpp"
#include "siegel3/symplectic.hpp"

namespace siegel3 {

/// A smooth quartic with a 6x3 big period matrix.  Row r holds the periods
/// of the three differentials (x, y, z) dx / Q_y over the r-th cycle of a
/// symplectic basis (b_1, b_2, b_3, a_1, a_2, a_3): Omega_1 on top,
/// Omega_2 below.
struct PeriodFixture {
  RationalQuartic quartic;
  std::array<std::array<mp::Complex, 3>, 6> omega;
  int digits = 0;
  std::string source;
  std::string label;
};

/// Throws ParseError or ValidationError.
PeriodFixture fixture_from_json_text(const std::string& text, mp::Bits prec, const std::string& label = "<memory>");
PeriodFixture read_fixture(const std::filesystem::path& path, mp::Bits prec);
/// Every *.json under dir, sorted by file name.
std::vector<PeriodFixture> read_fixture_dir(const std::filesystem::path& dir, mp::Bits prec);

/// Omega -> M Omega (a change of symplectic homology basis).
PeriodFixture change_basis(const SymplecticMatrix& m, const PeriodFixture& fx);

struct TauReport {
  SiegelPoint tau;
  double asymmetry_log2;  // log2 of the largest |tau_ij - tau_ji|
};

/// tau = Omega_1 Omega_2^-1, symmetrized.  Throws RiemannRelationViolation
/// when the asymmetry exceeds 2^(-b/2), b = min(prec, fixture bits), or
/// Im(tau) is not positive definite.
TauReport tau_from_periods(const PeriodFixture& fx, mp::Bits prec);

/// Caches tau, mu and the theta constants of one fixture.
class Phi3Evaluator {
 public:
  Phi3Evaluator(const PeriodFixture& fx, mp::Bits prec,
                const std::optional<std::filesystem::path>& forms_cache = std::nullopt);

  mp::Bits precision() const { return prec_; }
  const SiegelPoint& tau() const { return tau_->tau; }
  const mp::Complex& mu() const { return mu_; }

  /// mu^h f(tau).
  mp::Complex phi3(const ExpandedForm& f) const;
  /// By generator name.
  mp::Complex phi3(std::string_view name) const;
  /// f(tau) for the 19 generators, in generator order.
  const std::array<mp::Complex, kGeneratorCount>& generator_values() const;
  const DixmierOhnoVector<mpq_class>& invariants() const { return invariants_; }

 private:
  const ExpandedForm& form(std::string_view name) const;

  PeriodFixture fx_;
  mp::Bits prec_;
  std::optional<std::filesystem::path> cache_;
  std::optional<TauReport> tau_;
  mp::Complex mu_;
  std::array<mp::Complex, 36> thetas_;
  DixmierOhnoVector<mpq_class> invariants_;
  mutable std::map<std::string, ExpandedForm, std::less<>> forms_;
  mutable std::optional<std::array<mp::Complex, kGeneratorCount>> gen_values_;
};

mp::Complex phi3_eval(const ExpandedForm& form, const PeriodFixture& fx, mp::Bits prec);

/// |a - b| / max(|a|, |b|).
double relative_residual(const mp::Complex& a, const mp::Complex& b);

/// |Phi3(f) - c_f P_f(DO(Q))| / |c_f P_f(DO(Q))| for a printed entry
/// (chi18 is Klein's formula).  Throws ZeroDenominator.
double dictionary_check(const Phi3Evaluator& ev, std::string_view name);
double dictionary_check(const PeriodFixture& fx, std::string_view name, mp::Bits prec);

/// Residual of c_I I27^(3k) I = Phi3(P_I(generators)).  Throws ZeroDenominator.
double inverse_dictionary_check(const Phi3Evaluator& ev, std::string_view name);
double inverse_dictionary_check(const PeriodFixture& fx, std::string_view name, mp::Bits prec);

inline constexpr double kDictionaryTolerance = 1e-10;

}  // namespace siegel3
